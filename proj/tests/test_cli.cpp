#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "oracles/oracles.hpp"
#include "smartpaste/records.hpp"
#include "smartpaste/text.hpp"

#ifndef SMARTPASTE_CLI
#error "SMARTPASTE_CLI must name the smartpaste executable"
#endif

using namespace smartpaste;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("smartpaste_cli_" + std::to_string(::getpid()) + "_" +
                                        std::to_string(std::rand()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  fs::path operator/(const std::string& name) const { return path / name; }
};

int run(const std::string& args) {
  const auto status = std::system((std::string(SMARTPASTE_CLI) + " " + args).c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write(const fs::path& p, const std::string& s) { std::ofstream(p) << s; }

std::vector<json> ndjson(const fs::path& p) {
  std::vector<json> v;
  std::ifstream in(p);
  for (std::string line; std::getline(in, line);) {
    if (!line.empty()) v.push_back(json::parse(line));
  }
  return v;
}

PasteFixExample example(std::string id, std::string after_paste, PasteRegion region, std::string fixed,
                        Label label) {
  PasteFixExample e;
  e.journey_id = std::move(id);
  e.language = "python";
  e.file_path = "pkg/" + e.journey_id + ".py";
  e.file_after_paste = std::move(after_paste);
  e.region = region;
  e.pasted_text = region_text(e.file_after_paste, region) + "\n";
  e.fixed_region_text = std::move(fixed);
  e.label = label;
  e.created_at = 1'000;
  e.char_length = text::length(e.file_after_paste) + text::length(e.fixed_region_text);
  e.provenance = Provenance::Internal;
  return e;
}

}  // namespace

TEST_CASE("mine on empty input writes nothing and succeeds") {
  TempDir dir;
  write(dir / "in.ndjson", "");
  CHECK(run("mine -i " + (dir / "in.ndjson").string() + " -o " + (dir / "out.ndjson").string() +
            " 2>/dev/null") == 0);
  CHECK(slurp(dir / "out.ndjson").empty());
}

TEST_CASE("mine emits examples and a trailing stats record") {
  TempDir dir;
  write(dir / "in.ndjson",
        R"({"kind":"snapshot","journey_id":"a","file_path":"a.py","language":"python","timestamp":0,"content":"x = 1\ny = 2\n","provenance":"Internal"})"
        "\n"
        R"({"kind":"delta","journey_id":"a","timestamp":5,"start_offset":6,"deleted_length":0,"inserted_text":"print(x + y)\n"})"
        "\n"
        R"({"kind":"delta","journey_id":"a","timestamp":9,"start_offset":17,"deleted_length":0,"inserted_text":"!"})"
        "\n"
        "garbage\n");
  REQUIRE(run("mine -i " + (dir / "in.ndjson").string() + " -o " + (dir / "out.ndjson").string() +
              " 2>/dev/null") == 0);
  const auto recs = ndjson(dir / "out.ndjson");
  REQUIRE(recs.size() == 2);
  CHECK(recs[0]["label"] == "Edit");
  CHECK(recs[0]["fixed_region_text"] == "print(x + y!)");
  CHECK(recs[1]["kind"] == "mining_stats");
  CHECK(recs[1]["edit_examples"] == 1);
  CHECK(recs[1]["malformed_lines"] == 1);
}

TEST_CASE("curate counts a 21-line paste as rejected") {
  TempDir dir;
  std::string big;
  for (int i = 0; i < 21; ++i) big += "line" + std::to_string(i) + "\n";
  auto ok = example("ok", "a\nb\nc", {1, 1}, "B", Label::Edit);
  auto tall = example("tall", big, {0, 20}, "x", Label::Edit);
  tall.pasted_text = big;
  {
    std::ofstream out(dir / "ex.ndjson");
    out << json(ok).dump() << "\n" << json(tall).dump() << "\n";
  }
  REQUIRE(run("curate -i " + (dir / "ex.ndjson").string() + " -o " + (dir / "out.ndjson").string() +
              " --now 2000 --batch-size 4 2>/dev/null") == 0);
  const auto recs = ndjson(dir / "out.ndjson");
  REQUIRE(recs.size() == 2);
  CHECK(recs[0]["journey_id"] == "ok");
  CHECK(recs[0]["batch"] == 0);
  CHECK(recs[1]["kind"] == "curation_summary");
  CHECK(recs[1]["rejected"] == 1);
  CHECK(recs[1]["rejections"]["TooManyPasteLines"] == 1);
}

TEST_CASE("eval with a scripted backend on three examples") {
  TempDir dir;
  // 1: Edit, fixed by the script. 2: Edit, no script entry. 3: NoEdit.
  const auto e1 = example("e1", "import os\nprint(os.getcwd(\n", {1, 1}, "print(os.getcwd())", Label::Edit);
  const auto e2 = example("e2", "def f():\n    return vale\n", {1, 1}, "    return value", Label::Edit);
  const auto e3 = example("e3", "x = 1\ny = x + 1\n", {1, 1}, "y = x + 1", Label::NoEdit);
  {
    std::ofstream out(dir / "ex.ndjson");
    for (const auto& e : {e1, e2, e3}) out << json(e).dump() << "\n";
  }
  write(dir / "empty.json", "{}");
  REQUIRE(run("prompt -i " + (dir / "ex.ndjson").string() + " -o " + (dir / "prompts.ndjson").string()) == 0);
  const auto prompts = ndjson(dir / "prompts.ndjson");
  REQUIRE(prompts.size() == 3);
  const json config{{"backend",
                     {{"kind", "scripted"},
                      {"script",
                       json::array({{{"fingerprint", prompts[0]["fingerprint"]},
                                     {"patch_text", "@@ 0 @@\n-print(os.getcwd(\n+print(os.getcwd())\n"}}})}}}};
  write(dir / "cfg.json", config.dump());
  REQUIRE(run("eval -i " + (dir / "ex.ndjson").string() + " -c " + (dir / "cfg.json").string() + " -o " +
              (dir / "report.json").string() + " --records " + (dir / "records.ndjson").string() +
              " 2>/dev/null") == 0);
  const auto report = json::parse(slurp(dir / "report.json"));
  const auto& overall = report["overall"];
  CHECK(overall["records"] == 3);
  CHECK(overall["edit_exact_match"].get<double>() == doctest::Approx(50.0));
  CHECK(overall["no_edit_exact_match"].get<double>() == doctest::Approx(100.0));
  CHECK(overall["overall_exact_match"].get<double>() == doctest::Approx(200.0 / 3.0));
  CHECK(overall["recall"].get<double>() == doctest::Approx(50.0));
  const double expected_chrf = oracle::chrf(U"    return vale", U"    return value", 6, 2.0);
  CHECK(overall["median_chrf"].get<double>() == doctest::Approx(expected_chrf).epsilon(1e-12));
  CHECK(ndjson(dir / "records.ndjson").size() == 3);
}

TEST_CASE("replay summarizes a telemetry log") {
  TempDir dir;
  write(dir / "log.ndjson",
        R"({"event_id":"1","request_id":"a","kind":"Shown","timestamp":0,"region":{"start_line":0,"end_line":0},"before_text":"x","after_text":null,"latency_ms":12})"
        "\n"
        R"({"event_id":"2","request_id":"a","kind":"Accepted","timestamp":10,"region":{"start_line":0,"end_line":0},"before_text":"x","after_text":"xy","latency_ms":0})"
        "\n"
        R"({"event_id":"3","request_id":"b","kind":"Shown","timestamp":2000,"region":{"start_line":0,"end_line":0},"before_text":"x","after_text":null,"latency_ms":20})"
        "\n");
  REQUIRE(run("replay -i " + (dir / "log.ndjson").string() + " -o " + (dir / "r.json").string() +
              " 2>/dev/null") == 0);
  const auto r = json::parse(slurp(dir / "r.json"));
  CHECK(r["shown"] == 2);
  CHECK(r["accepted"] == 1);
  CHECK(r["acceptance_rate"].get<double>() == 0.5);
  CHECK(r["avg_chars_added"].get<double>() == 1.0);
}

TEST_CASE("errors give non-zero exit codes") {
  TempDir dir;
  CHECK(run("mine -i " + (dir / "missing.ndjson").string() + " 2>/dev/null >/dev/null") != 0);
  CHECK(run("frobnicate 2>/dev/null >/dev/null") != 0);
  write(dir / "bad.json", "{");
  CHECK(run("eval -c " + (dir / "bad.json").string() + " -i /dev/null 2>/dev/null >/dev/null") != 0);
}
