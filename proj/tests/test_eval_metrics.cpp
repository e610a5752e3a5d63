#include <doctest.h>

#include "oracles/oracles.hpp"
#include "smartpaste/eval_metrics.hpp"
#include "smartpaste/text.hpp"
#include "support/generators.hpp"

using namespace smartpaste;

namespace {

SuggestionEvent event(std::string id, EventKind kind, Timestamp ts) {
  SuggestionEvent e;
  e.event_id = id + "-" + to_string(kind);
  e.request_id = std::move(id);
  e.kind = kind;
  e.timestamp = ts;
  if (kind == EventKind::Accepted) e.after_text = "";
  return e;
}

SuggestionEvent accepted(std::string before, std::string after) {
  auto e = event("r", EventKind::Accepted, 0);
  e.before_text = std::move(before);
  e.after_text = std::move(after);
  return e;
}

EvalRecord record(std::string lang, Label label, std::vector<std::string> pred,
                  std::vector<std::string> truth, bool nonempty) {
  return EvalRecord{"id", std::move(lang), std::move(pred), std::move(truth), label, nonempty};
}

}  // namespace

TEST_CASE("lcs_length") {
  CHECK(lcs_length(std::string_view("abc"), std::string_view("abc")) == 3);
  CHECK(lcs_length(std::string_view("abc"), std::string_view("xyz")) == 0);
  CHECK(lcs_length(std::string_view("é中x"), std::string_view("中x")) == 2);
  CHECK_THROWS_AS(lcs_length(std::string_view("abcd"), std::string_view("abcd"), 10), InputTooLarge);
}

TEST_CASE("chars_modified and chars_added") {
  CHECK(chars_modified("abc", "abc") == 0);
  CHECK(chars_modified("", "xy") == 2);
  CHECK(chars_modified("abc", "abd") == 2);
  CHECK(chars_added("abc", "abc") == 0);
  CHECK(chars_added("", "xy") == 2);
}

TEST_CASE("metric properties on random strings") {
  gen::Rng rng(404);
  for (int t = 0; t < 1000; ++t) {
    const auto a = gen::random_text(rng, 20);
    const auto b = gen::random_text(rng, 20);
    const auto ua = text::decode(a), ub = text::decode(b);
    const auto l = oracle::lcs(ua, ub);
    REQUIRE(lcs_length(a, b) == l);
    CHECK(chars_modified(a, b) == chars_modified(b, a));
    CHECK(chars_modified(a, a) == 0);
    CHECK(chars_modified(a, b) <= ua.size() + ub.size());
    CHECK(chars_added(a, b) <= chars_modified(a, b));
    const auto added = added_characters(ua, ub);
    CHECK(added == oracle::added_chars(ua, ub));
    CHECK(added.size() == chars_added(a, b));
  }
}

TEST_CASE("survival") {
  const auto e = accepted("foo(x)", "foo(x, y=1)");
  CHECK(survival(e, "foo(x, y=1)") == 1.0);
  CHECK(survival(e, "foo(x)") == 0.0);
  // Added ", y=1"; the later text keeps ", y".
  CHECK(survival(e, "foo(x, y)") == doctest::Approx(3.0 / 5.0));
  // Half of the four added characters removed.
  const auto half = accepted("ab", "aXYZWb");
  CHECK(survival(half, "aXYb") == 0.5);
  CHECK(oracle::lcs(oracle::added_chars(U"ab", U"aXYZWb"), std::u32string(U"aXYb")) == 2);
  CHECK(survival(accepted("same", "same"), "") == 1.0);
}

TEST_CASE("survival stays within [0, 1]") {
  gen::Rng rng(8);
  for (int t = 0; t < 500; ++t) {
    const auto s = survival(accepted(gen::random_text(rng, 15), gen::random_text(rng, 15)),
                            gen::random_text(rng, 15));
    CHECK(s >= 0.0);
    CHECK(s <= 1.0);
  }
}

TEST_CASE("acceptance rate") {
  CHECK(acceptance_rate({}) == 0.0);
  CHECK(acceptance_rate({event("a", EventKind::Shown, 1), event("b", EventKind::Shown, 2),
                         event("a", EventKind::Accepted, 3)}) == 0.5);

  gen::Rng rng(45);
  std::vector<SuggestionEvent> stream;
  for (int i = 0; i < 1000; ++i) {
    const auto id = "r" + std::to_string(i);
    stream.push_back(event(id, EventKind::Shown, i));
    if (i % 20 < 9) {
      stream.push_back(event(id, EventKind::Accepted, i));
    } else if (gen::coin(rng)) {
      stream.push_back(event(id, EventKind::Dismissed, i));
    }
  }
  CHECK(acceptance_rate(stream) == 0.45);
}

TEST_CASE("online report") {
  std::vector<SuggestionEvent> ev{event("a", EventKind::Shown, 0), event("b", EventKind::Shown, 2000),
                                  event("c", EventKind::Shown, 4000)};
  ev[0].latency_ms = 30;
  ev[1].latency_ms = 10;
  ev[2].latency_ms = 20;
  auto acc = accepted("ab", "abcd");
  acc.request_id = "a";
  acc.later_text = "abc";
  ev.push_back(acc);
  ev.push_back(event("b", EventKind::Dismissed, 2500));
  const auto r = online_report(ev);
  CHECK(r.shown == 3);
  CHECK(r.accepted == 1);
  CHECK(r.dismissed == 1);
  CHECK(r.acceptance_rate == doctest::Approx(1.0 / 3.0));
  CHECK(r.avg_chars_modified == 2.0);
  CHECK(r.avg_chars_added == 2.0);
  CHECK(r.mean_survival == 0.5);
  CHECK(r.median_latency_ms == 20.0);
  CHECK(r.throughput_qps == doctest::Approx(0.75));
  const auto none = online_report({});
  CHECK_FALSE(none.avg_chars_modified);
  CHECK_FALSE(none.throughput_qps);
}

TEST_CASE("exact match is byte exact") {
  CHECK(exact_match(record("py", Label::Edit, {"a", "b"}, {"a", "b"}, true)));
  CHECK_FALSE(exact_match(record("py", Label::Edit, {"a "}, {"a"}, true)));
  CHECK(exact_match(record("py", Label::NoEdit, {"pasted"}, {"pasted"}, false)));
}

TEST_CASE("chrf") {
  CHECK(chrf("abcdef", "abcdef") == 100.0);
  CHECK(chrf("aaaa", "bbbb") == 0.0);
  CHECK(chrf("", "") == 100.0);
  CHECK(chrf("", "x") == 0.0);
  CHECK(chrf("x", "") == 0.0);
  CHECK(chrf("the cat", "the hat") ==
        doctest::Approx(oracle::chrf(U"the cat", U"the hat", 6, 2.0)).epsilon(1e-12));
  gen::Rng rng(9);
  for (int t = 0; t < 1000; ++t) {
    const auto h = gen::random_text(rng, 14);
    const auto r = gen::random_text(rng, 14);
    const auto got = chrf(h, r);
    const auto want = oracle::chrf(text::decode(h), text::decode(r), 6, 2.0);
    REQUIRE(std::abs(got - want) <= 1e-9);
  }
}

TEST_CASE("offline report") {
  SUBCASE("all exact") {
    const auto rep = offline_report({record("py", Label::Edit, {"a"}, {"a"}, true),
                                     record("py", Label::NoEdit, {"b"}, {"b"}, false)});
    CHECK(rep.overall.edit_exact_match == 100.0);
    CHECK(rep.overall.no_edit_exact_match == 100.0);
    CHECK(rep.overall.overall_exact_match == 100.0);
    CHECK_FALSE(rep.overall.median_chrf);
  }
  SUBCASE("all Edit with empty predictions") {
    const auto rep = offline_report({record("py", Label::Edit, {"a"}, {"b"}, false),
                                     record("py", Label::Edit, {"c"}, {"d"}, false)});
    CHECK(rep.overall.recall == 0.0);
    CHECK_FALSE(rep.overall.no_edit_exact_match);
  }
  SUBCASE("planted per-language accuracies") {
    gen::Rng rng(3);
    const std::map<std::string, std::pair<int, int>> planted{{"go", {3, 7}}, {"py", {5, 2}}, {"ts", {1, 1}}};
    std::vector<EvalRecord> records;
    for (const auto& [lang, counts] : planted) {
      const auto [edit_hits, edit_misses] = counts;
      for (int i = 0; i < edit_hits; ++i) records.push_back(record(lang, Label::Edit, {"x"}, {"x"}, true));
      for (int i = 0; i < edit_misses; ++i) records.push_back(record(lang, Label::Edit, {"x"}, {"y"}, i % 2 == 0));
      records.push_back(record(lang, Label::NoEdit, {"n"}, {"n"}, false));
    }
    std::shuffle(records.begin(), records.end(), rng);
    const auto rep = offline_report(records);
    for (const auto& [lang, counts] : planted) {
      const auto [hits, misses] = counts;
      const auto& row = rep.per_language.at(lang);
      CHECK(row.edit_exact_match == doctest::Approx(100.0 * hits / (hits + misses)));
      CHECK(row.no_edit_exact_match == 100.0);
      CHECK(row.overall_exact_match == doctest::Approx(100.0 * (hits + 1) / (hits + misses + 1)));
      CHECK(row.recall == doctest::Approx(100.0 * (hits + (misses + 1) / 2) / (hits + misses)));
      CHECK(row.median_chrf == 0.0);
    }
    CHECK(rep.overall.records == records.size());
  }
  CHECK_THROWS_AS(offline_report({}), EmptyInput);
}

TEST_CASE("median") {
  CHECK_FALSE(median({}));
  CHECK(median({3.0}) == 3.0);
  CHECK(median({4.0, 1.0, 2.0}) == 2.0);
  CHECK(median({4.0, 1.0, 2.0, 3.0}) == 2.5);
}
