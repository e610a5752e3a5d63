#pragma once

#include <vector>

#include "smartpaste/eval_metrics.hpp"
#include "smartpaste/suggestion_engine.hpp"

namespace smartpaste {

// Runs the engine on each example. Without a suggestion the prediction is the
// pasted region unchanged; the ground truth is the example's fixed region.
EvalRecord evaluate_example(const PasteFixExample& example, const SuggestionEngine& engine);

std::vector<EvalRecord> evaluate_examples(const std::vector<PasteFixExample>& examples,
                                          const SuggestionEngine& engine);

}  // namespace smartpaste
