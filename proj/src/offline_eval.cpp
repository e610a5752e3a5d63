#include "smartpaste/offline_eval.hpp"

#include "smartpaste/records.hpp"
#include "smartpaste/text.hpp"

namespace smartpaste {

EvalRecord evaluate_example(const PasteFixExample& example, const SuggestionEngine& engine) {
  EvalRecord r;
  r.example_id = example_id(example);
  r.language = example.language;
  r.ground_truth_label = example.label;
  r.ground_truth_region = text::split_lines(example.fixed_region_text);

  const auto result =
      engine.suggest(example.file_path, example.file_after_paste, example.region, example.language);
  if (result.suggestion) {
    r.predicted_region = result.suggestion->preview_region_lines;
    r.predicted_nonempty = true;
  } else {
    r.predicted_region = text::split_lines(region_text(example.file_after_paste, example.region));
  }
  return r;
}

std::vector<EvalRecord> evaluate_examples(const std::vector<PasteFixExample>& examples,
                                          const SuggestionEngine& engine) {
  std::vector<EvalRecord> out;
  out.reserve(examples.size());
  for (const auto& ex : examples) out.push_back(evaluate_example(ex, engine));
  return out;
}

}  // namespace smartpaste
