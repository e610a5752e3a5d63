"""Python bindings for the smartpaste core.

Records are plain dicts with the same fields as the NDJSON files the CLI
reads and writes. Scripts map prompt fingerprints to patch text.
"""

import json

from . import _smartpaste
from ._smartpaste import (
    DelimiterCollision,
    PatchError,
    RangeOutOfBounds,
    SmartPasteError,
    apply_patch,
    build_context,
    chars_added,
    chars_modified,
    chrf,
    diff_region,
    lcs_length,
    no_edit_quota,
    parse_patch,
    prompt_fingerprint,
    render_patch,
    token_cost,
)

__all__ = [
    "DelimiterCollision",
    "PatchError",
    "RangeOutOfBounds",
    "SmartPasteError",
    "apply_patch",
    "build_batches",
    "build_context",
    "chars_added",
    "chars_modified",
    "chrf",
    "diff_region",
    "encode_prompt",
    "evaluate",
    "filter_example",
    "lcs_length",
    "mine",
    "no_edit_quota",
    "online_report",
    "parse_patch",
    "prompt_fingerprint",
    "render_patch",
    "suggest",
    "token_cost",
]


def mine(journal_ndjson, config=None, threads=1):
    """Mine a journal (NDJSON text). Returns (examples, stats)."""
    examples, stats = _smartpaste.mine(journal_ndjson, json.dumps(config or {}), threads)
    return json.loads(examples), json.loads(stats)


def filter_example(example, now, policy=None):
    """Rejection reason name for `example`, or None if it is kept."""
    return _smartpaste.filter_example(json.dumps(example), now, json.dumps(policy or {}))


def build_batches(examples, batch_size, no_edit_fraction, language_frequencies, seed):
    return json.loads(
        _smartpaste.build_batches(
            json.dumps(examples), batch_size, no_edit_fraction, language_frequencies, seed
        )
    )


def encode_prompt(example, budget=4096):
    return _smartpaste.encode_prompt(json.dumps(example), budget)


def suggest(file_path, file_after_paste, start_line, end_line, language, script=None,
            score_threshold=None):
    return _smartpaste.suggest(
        file_path, file_after_paste, start_line, end_line, language, script or {}, score_threshold
    )


def evaluate(examples, script=None):
    """Score examples against a scripted backend. Returns (records, report)."""
    records, report = _smartpaste.evaluate(json.dumps(examples), script or {})
    return json.loads(records), json.loads(report)


def online_report(events):
    text = "".join(json.dumps(e) + "\n" for e in events)
    return json.loads(_smartpaste.online_report(text))
