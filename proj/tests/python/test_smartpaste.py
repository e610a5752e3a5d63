import json

import pytest

import smartpaste as sp


def snapshot(jid, content, ts=0):
    return {"kind": "snapshot", "journey_id": jid, "file_path": jid + ".py", "language": "python",
            "timestamp": ts, "content": content, "provenance": "Internal"}


def delta(jid, ts, start, deleted, inserted):
    return {"kind": "delta", "journey_id": jid, "timestamp": ts, "start_offset": start,
            "deleted_length": deleted, "inserted_text": inserted}


def ndjson(records):
    return "".join(json.dumps(r) + "\n" for r in records)


def test_mine_labels_a_fixed_paste():
    journal = ndjson([
        snapshot("a", "x = 1\ny = 2\n"),
        delta("a", 5, 6, 0, "print(x + y)\n"),
        delta("a", 9, 17, 0, "!"),
    ])
    examples, stats = sp.mine(journal)
    assert len(examples) == 1
    assert examples[0]["label"] == "Edit"
    assert examples[0]["fixed_region_text"] == "print(x + y!)"
    assert stats["edit_examples"] == 1
    assert stats["malformed_lines"] == 0


def test_mine_empty_journal():
    examples, stats = sp.mine("")
    assert examples == []
    assert stats["journeys"] == 0


def test_context_always_holds_first_line_and_region():
    lines = [f"line {i}" for i in range(50)]
    sel = sp.build_context(lines, 20, 22, budget=40)
    assert 0 in sel and {20, 21, 22} <= set(sel)
    assert sum(sp.token_cost(lines[i]) for i in sel) <= 40
    assert sp.build_context(lines, 20, 22, budget=1) == []


def test_patch_round_trip_and_diff():
    hunks = [(0, ["a"], ["b"]), (2, [], ["c", "d"])]
    text = sp.render_patch(hunks)
    assert text == "@@ 0 @@\n-a\n+b\n@@ 2 @@\n+c\n+d\n"
    assert sp.parse_patch(text) == hunks
    before, after = ["a", "x", "y"], ["b", "x", "c", "d", "y"]
    assert sp.apply_patch(before, sp.diff_region(before, after)) == after
    with pytest.raises(sp.PatchError):
        sp.parse_patch("@@ x @@\n+a\n")
    with pytest.raises(sp.SmartPasteError):
        sp.apply_patch(["a"], "@@ 0 @@\n-b\n")


def example(jid, file_after_paste, region, fixed, label):
    lines = file_after_paste.split("\n")
    return {"kind": "example", "journey_id": jid, "language": "python", "file_path": jid + ".py",
            "file_after_paste": file_after_paste,
            "region": {"start_line": region[0], "end_line": region[1]},
            "pasted_text": "\n".join(lines[region[0]:region[1] + 1]) + "\n",
            "fixed_region_text": fixed, "label": label, "created_at": 0,
            "char_length": len(file_after_paste) + len(fixed), "provenance": "Internal"}


def test_suggest_and_evaluate_with_a_script():
    e = example("e1", "def f():\n    return vale\n", (1, 1), "    return value", "Edit")
    script = {sp.prompt_fingerprint(sp.encode_prompt(e)):
              "@@ 0 @@\n-    return vale\n+    return value\n"}
    s = sp.suggest("e1.py", e["file_after_paste"], 1, 1, "python", script)
    assert s["outcome"] == "Suggested"
    assert s["preview_region_lines"] == ["    return value"]
    assert sp.suggest("e1.py", e["file_after_paste"], 1, 1, "python")["outcome"] == "NoEdit"

    keep = example("n1", "a = 1\nb = 2\n", (1, 1), "b = 2", "NoEdit")
    records, report = sp.evaluate([e, keep], script)
    assert len(records) == 2
    assert report["overall"]["overall_exact_match"] == pytest.approx(100.0)
    assert report["overall"]["recall"] == pytest.approx(100.0)


def test_full_deletion_is_not_suggested():
    text = "head\na()\nb()\ntail"
    patch = sp.diff_region(["a()", "b()"], [])
    e = example("d", text, (1, 2), "", "Edit")
    e["file_path"] = "d.py"
    script = {sp.prompt_fingerprint(sp.encode_prompt(e)): patch}
    assert sp.suggest("d.py", text, 1, 2, "python", script)["outcome"] == "FullDeletion"


def test_curation_and_batches():
    ok = example("ok", "a\nb\n", (1, 1), "B", "Edit")
    assert sp.filter_example(ok, now=0) is None
    assert sp.filter_example(dict(ok, provenance="ThirdParty"), now=0) == "DisallowedProvenance"
    assert sp.no_edit_quota(32, 0.3) == 10
    assert sp.no_edit_quota(64, 0.3) == 19
    pool = [example(f"e{i}", "a\nb\n", (1, 1), "B", "NoEdit" if i % 3 == 0 else "Edit")
            for i in range(300)]
    batches = sp.build_batches(pool, 32, 0.3, {"python": 1.0}, seed=7)
    assert batches == sp.build_batches(pool, 32, 0.3, {"python": 1.0}, seed=7)
    assert sum(x["label"] == "NoEdit" for x in batches[0]) == 10


def test_metrics():
    assert sp.lcs_length("abcde", "ace") == 3
    assert sp.chars_modified("abc", "abd") == 2
    assert sp.chars_added("abc", "abxc") == 1
    assert sp.chrf("same", "same") == pytest.approx(100.0)
    assert sp.chrf("ab", "abc") == pytest.approx(1400 / 33)
    report = sp.online_report([
        {"event_id": "1", "request_id": "a", "kind": "Shown", "timestamp": 0,
         "region": {"start_line": 0, "end_line": 0}, "before_text": "x", "after_text": None,
         "latency_ms": 10},
        {"event_id": "2", "request_id": "a", "kind": "Accepted", "timestamp": 5,
         "region": {"start_line": 0, "end_line": 0}, "before_text": "x", "after_text": "xy",
         "latency_ms": 0},
    ])
    assert report["acceptance_rate"] == pytest.approx(1.0)
