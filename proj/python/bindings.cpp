// Records cross the boundary as JSON text; the Python package converts them
// to and from dicts.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "smartpaste/context_builder.hpp"
#include "smartpaste/dataset_curator.hpp"
#include "smartpaste/edit_journal.hpp"
#include "smartpaste/eval_metrics.hpp"
#include "smartpaste/offline_eval.hpp"
#include "smartpaste/paste_miner.hpp"
#include "smartpaste/records.hpp"
#include "smartpaste/suggestion_engine.hpp"
#include "smartpaste/task_codec.hpp"
#include "smartpaste/text.hpp"

namespace py = pybind11;
using namespace smartpaste;

namespace {

std::vector<PasteFixExample> parse_examples(const std::string& text) {
  std::vector<PasteFixExample> out;
  for (const auto& j : json::parse(text)) out.push_back(j.get<PasteFixExample>());
  return out;
}

// `script` maps prompt fingerprints to patch text.
std::shared_ptr<ScriptedBackend> make_scripted(const std::map<std::string, std::string>& script) {
  return std::make_shared<ScriptedBackend>(script);
}

py::list hunks_to_py(const EditPatch& p) {
  py::list out;
  for (const auto& h : p.hunks) out.append(py::make_tuple(h.start, h.removed, h.added));
  return out;
}

EditPatch hunks_from_py(const std::vector<std::tuple<std::size_t, std::vector<std::string>,
                                                     std::vector<std::string>>>& hunks) {
  EditPatch p;
  for (const auto& [start, removed, added] : hunks) p.hunks.push_back({start, removed, added});
  return p;
}

}  // namespace

PYBIND11_MODULE(_smartpaste, m) {
  auto base = py::register_exception<Error>(m, "SmartPasteError", PyExc_ValueError);
  py::register_exception<PatchError>(m, "PatchError", base.ptr());
  py::register_exception<DelimiterCollision>(m, "DelimiterCollision", base.ptr());
  py::register_exception<RangeOutOfBounds>(m, "RangeOutOfBounds", base.ptr());

  m.def("mine",
        [](const std::string& journal_ndjson, const std::string& config_json, unsigned threads) {
          std::istringstream in(journal_ndjson);
          const auto ingest = ingest_journeys(in);
          const auto config = json::parse(config_json).get<MinerConfig>();
          const auto result = mine(ingest.journeys, config, threads);
          json stats = result.stats;
          stats["malformed_lines"] = ingest.malformed_lines;
          return py::make_tuple(json(result.examples).dump(), stats.dump());
        },
        py::arg("journal_ndjson"), py::arg("config_json") = "{}", py::arg("threads") = 1);

  m.def("filter_example",
        [](const std::string& example_json, std::int64_t now, const std::string& policy_json)
            -> std::optional<std::string> {
          const auto policy = json::parse(policy_json).get<CurationPolicy>();
          const auto r = filter_example(json::parse(example_json).get<PasteFixExample>(), policy, now);
          if (!r) return std::nullopt;
          return std::string(to_string(*r));
        },
        py::arg("example_json"), py::arg("now"), py::arg("policy_json") = "{}");

  m.def("no_edit_quota", &no_edit_quota, py::arg("batch_size"), py::arg("no_edit_fraction"));

  m.def("build_batches",
        [](const std::string& examples_json, std::size_t batch_size, double no_edit_fraction,
           const std::map<std::string, double>& frequencies, std::uint64_t seed) {
          const auto examples = parse_examples(examples_json);
          const auto batches =
              build_batches(examples, batch_size, no_edit_fraction, weight_languages(examples, frequencies), seed);
          json out = json::array();
          for (const auto& b : batches) out.push_back(b.examples);
          return out.dump();
        },
        py::arg("examples_json"), py::arg("batch_size"), py::arg("no_edit_fraction"),
        py::arg("language_frequencies"), py::arg("seed"));

  m.def("build_context",
        [](const std::vector<std::string>& lines, std::size_t start, std::size_t end, std::size_t budget) {
          return build_context(lines, make_region(start, end), budget).lines;
        },
        py::arg("lines"), py::arg("start_line"), py::arg("end_line"), py::arg("budget") = kDefaultTokenBudget);

  m.def("token_cost", [](const std::string& line) { return approx_token_cost(line); });

  m.def("encode_prompt",
        [](const std::string& example_json, std::size_t budget) {
          const auto e = json::parse(example_json).get<PasteFixExample>();
          const auto sel = build_context(text::split_lines(e.file_after_paste), e.region, budget);
          return encode_prompt(e, sel);
        },
        py::arg("example_json"), py::arg("budget") = kDefaultTokenBudget);

  m.def("prompt_fingerprint", [](const std::string& p) { return prompt_fingerprint(p); });
  m.def("parse_patch", [](const std::string& t) { return hunks_to_py(parse_patch(t)); });
  m.def("render_patch", [](const std::vector<std::tuple<std::size_t, std::vector<std::string>,
                                                        std::vector<std::string>>>& hunks) {
    return render_patch(hunks_from_py(hunks));
  });
  m.def("apply_patch", [](const std::vector<std::string>& region, const std::string& patch_text) {
    return apply_patch(region, parse_patch(patch_text));
  });
  m.def("diff_region", [](const std::vector<std::string>& before, const std::vector<std::string>& after) {
    return render_patch(diff_region(before, after));
  });

  m.def("suggest",
        [](const std::string& file_path, const std::string& file_after_paste, std::size_t start,
           std::size_t end, const std::string& language, const std::map<std::string, std::string>& script,
           std::optional<double> score_threshold) -> py::object {
          EngineConfig config;
          config.score_threshold = score_threshold;
          SuggestionEngine engine(make_scripted(script), config);
          const auto r = engine.suggest(file_path, file_after_paste, make_region(start, end), language);
          py::dict out;
          out["outcome"] = to_string(r.outcome);
          if (r.suggestion) {
            out["patch_text"] = render_patch(r.suggestion->patch);
            out["preview_region_lines"] = r.suggestion->preview_region_lines;
          }
          return std::move(out);
        },
        py::arg("file_path"), py::arg("file_after_paste"), py::arg("start_line"), py::arg("end_line"),
        py::arg("language"), py::arg("script"), py::arg("score_threshold") = std::nullopt);

  m.def("evaluate",
        [](const std::string& examples_json, const std::map<std::string, std::string>& script) {
          SuggestionEngine engine(make_scripted(script), {});
          const auto records = evaluate_examples(parse_examples(examples_json), engine);
          return py::make_tuple(json(records).dump(), json(offline_report(records)).dump());
        },
        py::arg("examples_json"), py::arg("script"));

  m.def("online_report", [](const std::string& events_ndjson) {
    std::istringstream in(events_ndjson);
    return json(online_report(read_events(in).records)).dump();
  });

  m.def("chrf", [](const std::string& h, const std::string& r) { return chrf(h, r); });
  m.def("lcs_length", [](const std::string& a, const std::string& b) { return lcs_length(a, b); });
  m.def("chars_modified", [](const std::string& a, const std::string& b) { return chars_modified(a, b); });
  m.def("chars_added", [](const std::string& a, const std::string& b) { return chars_added(a, b); });
}
