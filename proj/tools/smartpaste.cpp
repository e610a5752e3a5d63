// smartpaste: mine, curate, eval, serve, replay, prompt.
//
// Exit status: 0 on success, 1 on data errors, 2 on usage errors.

#include <CLI11.hpp>
#include <chrono>
#include <csignal>
#include <fstream>
#include <iostream>
#include <memory>

#include "smartpaste/context_builder.hpp"
#include "smartpaste/dataset_curator.hpp"
#include "smartpaste/edit_journal.hpp"
#include "smartpaste/offline_eval.hpp"
#include "smartpaste/paste_miner.hpp"
#include "smartpaste/records.hpp"
#include "smartpaste/service.hpp"
#include "smartpaste/text.hpp"

namespace sp = smartpaste;
using sp::json;

namespace {

class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// "-" means stdin/stdout.
class Input {
 public:
  explicit Input(const std::string& path) {
    if (path != "-") {
      file_.open(path);
      if (!file_) throw DataError("cannot open " + path);
    }
  }
  std::istream& get() { return file_.is_open() ? static_cast<std::istream&>(file_) : std::cin; }

 private:
  std::ifstream file_;
};

class Output {
 public:
  explicit Output(const std::string& path) {
    if (path != "-") {
      file_.open(path);
      if (!file_) throw DataError("cannot write " + path);
    }
  }
  std::ostream& get() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

 private:
  std::ofstream file_;
};

json read_json_file(const std::string& path) {
  if (path.empty()) return json::object();
  std::ifstream in(path);
  if (!in) throw DataError("cannot open config " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw DataError("config " + path + ": " + e.what());
  }
}

sp::Timestamp now_ms() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

std::vector<sp::PasteFixExample> load_examples(const std::string& path) {
  Input in(path);
  auto read = sp::read_examples(in.get());
  if (read.malformed_lines) {
    std::cerr << "skipped " << read.malformed_lines << " malformed example line(s)\n";
  }
  return std::move(read.records);
}

std::shared_ptr<const sp::SuggestionEngine> make_engine(const sp::ServiceConfig& config) {
  return std::make_shared<const sp::SuggestionEngine>(sp::make_backend(config.backend),
                                                      config.engine);
}

struct MineOptions {
  std::string input = "-";
  std::string output = "-";
  std::string config;
  unsigned threads = 1;
};

int run_mine(const MineOptions& o) {
  sp::MinerConfig config;
  const auto cj = read_json_file(o.config);
  if (!cj.empty()) config = cj.get<sp::MinerConfig>();

  Input in(o.input);
  auto ingest = sp::ingest_journeys(in.get());
  const auto result = sp::mine(ingest.journeys, config, o.threads);

  Output out(o.output);
  for (const auto& ex : result.examples) out.get() << json(ex).dump() << '\n';
  // Empty input gives empty output; the summary then only goes to stderr.
  if (!ingest.journeys.empty() || ingest.malformed_lines > 0) {
    json stats = result.stats;
    stats["malformed_lines"] = ingest.malformed_lines;
    out.get() << stats.dump() << '\n';
  }

  const auto& s = result.stats;
  std::cerr << "journeys " << s.journeys << " (failed " << s.failed_journeys << "), candidates "
            << s.candidates << ", edit " << s.edit_examples << ", no-edit " << s.no_edit_examples
            << ", discarded " << s.discarded << ", malformed lines " << ingest.malformed_lines
            << "\n";
  return 0;
}

struct CurateOptions {
  std::string input = "-";
  std::string output = "-";
  std::string config;
  std::optional<sp::Timestamp> now;
  std::optional<std::size_t> batch_size;
  std::optional<double> no_edit_fraction;
  std::optional<std::uint64_t> seed;
  double validation_fraction = 0.0;
  std::string validation_output;
};

int run_curate(const CurateOptions& o) {
  const auto cj = read_json_file(o.config);
  sp::CurationPolicy policy;
  if (cj.contains("policy")) policy = cj["policy"].get<sp::CurationPolicy>();
  const auto batch_size = o.batch_size.value_or(cj.value("batch_size", std::size_t{32}));
  const auto fraction = o.no_edit_fraction.value_or(cj.value("no_edit_fraction", 0.3));
  const auto seed = o.seed.value_or(cj.value("seed", std::uint64_t{0}));
  const auto now = o.now.value_or(cj.value("now", now_ms()));

  const auto examples = load_examples(o.input);
  std::vector<sp::PasteFixExample> kept;
  std::map<std::string, std::size_t> rejected;
  for (const auto& ex : examples) {
    if (const auto reason = sp::filter_example(ex, policy, now)) {
      ++rejected[sp::to_string(*reason)];
    } else {
      kept.push_back(ex);
    }
  }

  std::vector<sp::PasteFixExample> train = kept;
  if (o.validation_fraction > 0.0) {
    auto split = sp::split_by_file_path(kept, o.validation_fraction, seed);
    train = std::move(split.train);
    if (!o.validation_output.empty()) {
      Output val(o.validation_output);
      for (const auto& ex : split.validation) val.get() << json(ex).dump() << '\n';
    }
  }

  std::map<std::string, double> frequencies;
  if (cj.contains("language_frequencies")) {
    frequencies = cj["language_frequencies"].get<std::map<std::string, double>>();
  } else {
    for (const auto& ex : train) frequencies[ex.language] += 1.0;
  }

  Output out(o.output);
  std::size_t full = 0;
  std::size_t shortfall = 0;
  std::size_t batch_count = 0;
  if (!train.empty()) {
    const auto weights = sp::weight_languages(train, frequencies);
    const auto batches = sp::build_batches(train, batch_size, fraction, weights, seed);
    batch_count = batches.size();
    for (std::size_t b = 0; b < batches.size(); ++b) {
      full += batches[b].full();
      shortfall += batches[b].shortfall;
      for (const auto& ex : batches[b].examples) {
        json j = ex;
        j["batch"] = b;
        out.get() << j.dump() << '\n';
      }
    }
  }

  std::size_t rejected_total = 0;
  for (const auto& [_, n] : rejected) rejected_total += n;
  json summary{{"kind", "curation_summary"}, {"input", examples.size()},
               {"kept", kept.size()},        {"rejected", rejected_total},
               {"rejections", rejected},     {"batches", batch_count},
               {"full_batches", full},       {"shortfall", shortfall},
               {"no_edit_quota", sp::no_edit_quota(batch_size, fraction)}};
  out.get() << summary.dump() << '\n';
  std::cerr << "kept " << kept.size() << " of " << examples.size() << ", rejected "
            << rejected_total << ", batches " << batch_count << " (" << full << " full)\n";
  return 0;
}

struct EvalOptions {
  std::string input = "-";
  std::string output = "-";
  std::string config;
  std::string records;
};

int run_eval(const EvalOptions& o) {
  const auto config = sp::parse_service_config(read_json_file(o.config));
  const auto engine = make_engine(config);
  const auto examples = load_examples(o.input);
  const auto records = sp::evaluate_examples(examples, *engine);
  if (!o.records.empty()) {
    Output rec(o.records);
    for (const auto& r : records) rec.get() << json(r).dump() << '\n';
  }
  const auto report = sp::offline_report(records);
  Output out(o.output);
  out.get() << json(report).dump(2) << '\n';
  std::cerr << sp::format_offline_table(report);
  return 0;
}

struct PromptOptions {
  std::string input = "-";
  std::string output = "-";
  std::string config;
};

int run_prompt(const PromptOptions& o) {
  const auto config = sp::parse_service_config(read_json_file(o.config));
  const auto examples = load_examples(o.input);
  Output out(o.output);
  for (const auto& ex : examples) {
    const auto lines = sp::text::split_lines(ex.file_after_paste);
    const auto selection = sp::build_context(lines, ex.region, config.engine.token_budget);
    json j{{"example_id", sp::example_id(ex)}};
    if (selection.empty()) {
      j["prompt"] = nullptr;
      j["fingerprint"] = nullptr;
    } else {
      const auto prompt = sp::encode_prompt(ex, selection, config.engine.codec);
      j["prompt"] = prompt;
      j["fingerprint"] = sp::prompt_fingerprint(prompt);
    }
    out.get() << j.dump() << '\n';
  }
  return 0;
}

struct ServeOptions {
  std::string config;
  std::optional<std::string> host;
  std::optional<int> port;
};

sp::HttpService* g_service = nullptr;

void on_signal(int) {
  if (g_service) g_service->stop();
}

int run_serve(const ServeOptions& o) {
  auto config = sp::parse_service_config(read_json_file(o.config));
  if (o.host) config.host = *o.host;
  if (o.port) config.port = *o.port;
  auto sink = std::make_shared<sp::TelemetrySink>(config.telemetry_log);
  sp::HttpService service(make_engine(config), sink);
  g_service = &service;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  std::cerr << "serving on " << config.host << ":" << config.port << "\n";
  const bool ok = service.listen(config.host, config.port);
  g_service = nullptr;
  sink->flush();
  if (!ok) throw DataError("cannot bind " + config.host + ":" + std::to_string(config.port));
  return 0;
}

struct ReplayOptions {
  std::string input = "-";
  std::string output = "-";
};

int run_replay(const ReplayOptions& o) {
  Input in(o.input);
  const auto read = sp::read_events(in.get());
  if (read.malformed_lines) {
    std::cerr << "skipped " << read.malformed_lines << " malformed event line(s)\n";
  }
  const auto report = sp::online_report(read.records);
  Output out(o.output);
  out.get() << json(report).dump(2) << '\n';
  std::cerr << sp::format_online_report(report);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Smart paste engine: mining, curation, evaluation and serving"};
  app.require_subcommand(1);

  MineOptions mine;
  auto* mine_cmd = app.add_subcommand("mine", "Mine paste-and-fix examples from edit journeys");
  mine_cmd->add_option("-i,--input", mine.input, "Journey records (NDJSON), - for stdin");
  mine_cmd->add_option("-o,--output", mine.output, "Example records (NDJSON), - for stdout");
  mine_cmd->add_option("-c,--config", mine.config, "Miner config (JSON)");
  mine_cmd->add_option("-j,--threads", mine.threads, "Worker threads")->check(CLI::PositiveNumber);

  CurateOptions curate;
  auto* curate_cmd = app.add_subcommand("curate", "Filter examples and assemble training batches");
  curate_cmd->add_option("-i,--input", curate.input, "Example records (NDJSON)");
  curate_cmd->add_option("-o,--output", curate.output, "Batched example records (NDJSON)");
  curate_cmd->add_option("-c,--config", curate.config, "Curation config (JSON)");
  curate_cmd->add_option("--now", curate.now, "Reference time, ms since epoch");
  curate_cmd->add_option("--batch-size", curate.batch_size)->check(CLI::PositiveNumber);
  curate_cmd->add_option("--no-edit-fraction", curate.no_edit_fraction)->check(CLI::Range(0.0, 1.0));
  curate_cmd->add_option("--seed", curate.seed);
  curate_cmd->add_option("--validation-fraction", curate.validation_fraction)
      ->check(CLI::Range(0.0, 1.0));
  curate_cmd->add_option("--validation-output", curate.validation_output);

  EvalOptions eval;
  auto* eval_cmd = app.add_subcommand("eval", "Offline evaluation against a backend");
  eval_cmd->add_option("-i,--input", eval.input, "Example records (NDJSON)");
  eval_cmd->add_option("-o,--output", eval.output, "Report (JSON)");
  eval_cmd->add_option("-c,--config", eval.config, "Engine/backend config (JSON)");
  eval_cmd->add_option("--records", eval.records, "Write per-example eval records (NDJSON)");

  PromptOptions prompt;
  auto* prompt_cmd = app.add_subcommand("prompt", "Print model prompts and their fingerprints");
  prompt_cmd->add_option("-i,--input", prompt.input, "Example records (NDJSON)");
  prompt_cmd->add_option("-o,--output", prompt.output, "Prompt records (NDJSON)");
  prompt_cmd->add_option("-c,--config", prompt.config, "Engine config (JSON)");

  ServeOptions serve;
  auto* serve_cmd = app.add_subcommand("serve", "Start the suggestion API");
  serve_cmd->add_option("-c,--config", serve.config, "Service config (JSON)");
  serve_cmd->add_option("--host", serve.host);
  serve_cmd->add_option("--port", serve.port);

  ReplayOptions replay;
  auto* replay_cmd = app.add_subcommand("replay", "Online metrics from a telemetry log");
  replay_cmd->add_option("-i,--input", replay.input, "Telemetry log (NDJSON)");
  replay_cmd->add_option("-o,--output", replay.output, "Report (JSON)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*mine_cmd) return run_mine(mine);
    if (*curate_cmd) return run_curate(curate);
    if (*eval_cmd) return run_eval(eval);
    if (*prompt_cmd) return run_prompt(prompt);
    if (*serve_cmd) return run_serve(serve);
    if (*replay_cmd) return run_replay(replay);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
