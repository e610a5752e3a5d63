#include <doctest.h>

#include <sstream>

#include "smartpaste/offline_eval.hpp"
#include "smartpaste/records.hpp"

using namespace smartpaste;

TEST_CASE("example records round trip") {
  PasteFixExample e;
  e.journey_id = "j";
  e.language = "go";
  e.file_path = "a/b.go";
  e.file_after_paste = "package a\nfunc F() {}\n";
  e.region = {1, 1};
  e.pasted_text = "func F() {}\n";
  e.fixed_region_text = "func F() int { return 0 }";
  e.label = Label::Edit;
  e.created_at = 42;
  e.char_length = 47;
  e.provenance = Provenance::ThirdParty;
  const json j = e;
  CHECK(j["kind"] == "example");
  const auto back = j.get<PasteFixExample>();
  CHECK(json(back) == j);
  CHECK(example_id(e) == "j:1-1@42");
}

TEST_CASE("read_examples separates other record kinds and counts bad lines") {
  PasteFixExample e;
  e.journey_id = "x";
  std::stringstream in;
  in << json(e).dump() << "\n"
     << R"({"kind":"mining_stats","journeys":1})" << "\n"
     << "{broken\n"
     << R"({"kind":"example","journey_id":"y"})" << "\n"
     << "\n";
  const auto r = read_examples(in);
  CHECK(r.records.size() == 1);
  CHECK(r.other.size() == 1);
  CHECK(r.malformed_lines == 2);
}

TEST_CASE("event records enforce after_text for Accepted only") {
  SuggestionEvent e;
  e.event_id = "1";
  e.request_id = "r";
  e.kind = EventKind::Accepted;
  e.after_text = "x";
  e.later_text = "x";
  const json j = e;
  CHECK(j.get<SuggestionEvent>().later_text == "x");
  auto bad = j;
  bad["after_text"] = nullptr;
  CHECK_THROWS(bad.get<SuggestionEvent>());
  auto shown = j;
  shown["kind"] = "Shown";
  CHECK_THROWS(shown.get<SuggestionEvent>());
}

TEST_CASE("label and provenance parsing") {
  CHECK(parse_label("NoEdit") == Label::NoEdit);
  CHECK(parse_provenance("Internal") == Provenance::Internal);
  CHECK_THROWS(parse_label("Maybe"));
}

TEST_CASE("miner config from JSON") {
  const auto c = json::parse(R"({"min_candidate_chars": 5, "max_candidate_lines": 3,
                                 "idle_cutoff": 60000,
                                 "import_patterns": {"python": ["^import "]}})")
                     .get<MinerConfig>();
  CHECK(c.min_candidate_chars == 5);
  CHECK(c.max_candidate_lines == 3);
  CHECK(c.idle_cutoff == 60000);
  CHECK(c.import_patterns.at("python") == std::vector<std::string>{"^import "});
}

TEST_CASE("offline table lists every language") {
  OfflineReport rep;
  rep.per_language["python"].records = 2;
  rep.per_language["python"].edit_exact_match = 50.0;
  rep.overall.records = 2;
  const auto table = format_offline_table(rep);
  CHECK(table.find("python") != std::string::npos);
  CHECK(table.find("50.0") != std::string::npos);
}

TEST_CASE("evaluate_example without a suggestion predicts the pasted region") {
  PasteFixExample e;
  e.journey_id = "j";
  e.language = "python";
  e.file_path = "m.py";
  e.file_after_paste = "a = 1\nb = a +\n";
  e.region = {1, 1};
  e.fixed_region_text = "b = a + 1";
  e.label = Label::Edit;
  SuggestionEngine engine(std::make_shared<ScriptedBackend>(), {});
  const auto r = evaluate_example(e, engine);
  CHECK(r.predicted_region == std::vector<std::string>{"b = a +"});
  CHECK(r.ground_truth_region == std::vector<std::string>{"b = a + 1"});
  CHECK_FALSE(r.predicted_nonempty);
  CHECK(r.example_id == example_id(e));
}
