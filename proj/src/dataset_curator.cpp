#include "smartpaste/dataset_curator.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "smartpaste/text.hpp"

namespace smartpaste {

void CurationPolicy::validate() const {
  if (max_paste_lines == 0 || max_example_chars == 0 || max_age_days == 0) {
    throw InvalidArgument("curation bounds must be positive");
  }
}

const char* to_string(RejectReason reason) {
  switch (reason) {
    case RejectReason::DisallowedProvenance: return "DisallowedProvenance";
    case RejectReason::TooOld: return "TooOld";
    case RejectReason::TooManyPasteLines: return "TooManyPasteLines";
    case RejectReason::TooLarge: return "TooLarge";
  }
  return "Unknown";
}

std::size_t paste_line_count(std::string_view pasted_text) {
  if (pasted_text.empty()) return 0;
  auto n = text::count_newlines(pasted_text);
  return pasted_text.back() == '\n' ? n : n + 1;
}

std::optional<RejectReason> filter_example(const PasteFixExample& example,
                                           const CurationPolicy& policy, Timestamp now) {
  if (!policy.allowed_provenance.contains(example.provenance)) {
    return RejectReason::DisallowedProvenance;
  }
  const auto max_age = static_cast<Timestamp>(policy.max_age_days) * kMillisPerDay;
  if (now - example.created_at > max_age) return RejectReason::TooOld;
  if (paste_line_count(example.pasted_text) > policy.max_paste_lines) {
    return RejectReason::TooManyPasteLines;
  }
  if (example.char_length > policy.max_example_chars) return RejectReason::TooLarge;
  return std::nullopt;
}

LanguageWeights weight_languages(const std::vector<PasteFixExample>& examples,
                                 const std::map<std::string, double>& observed_frequencies) {
  if (observed_frequencies.empty()) throw InvalidArgument("no observed frequencies");
  double total = 0.0;
  for (const auto& [lang, f] : observed_frequencies) {
    if (!std::isfinite(f) || f < 0.0) {
      throw InvalidArgument("frequency for " + lang + " must be finite and non-negative");
    }
    total += f;
  }
  if (total <= 0.0) throw InvalidArgument("AllZeroFrequencies: every observed frequency is zero");

  LanguageWeights weights;
  for (const auto& ex : examples) weights.emplace(ex.language, 0.0);
  for (const auto& [lang, f] : observed_frequencies) weights[lang] = f / total;
  return weights;
}

std::size_t Batch::no_edit_count() const {
  return static_cast<std::size_t>(std::count_if(
      examples.begin(), examples.end(),
      [](const PasteFixExample& e) { return e.label == Label::NoEdit; }));
}

std::size_t no_edit_quota(std::size_t batch_size, double no_edit_fraction) {
  return static_cast<std::size_t>(std::floor(static_cast<double>(batch_size) * no_edit_fraction + 0.5));
}

namespace {

// Portable draws from mt19937_64; the standard distributions are
// implementation-defined.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  double uniform() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

  std::size_t index(std::size_t n) {
    return std::min(n - 1, static_cast<std::size_t>(uniform() * static_cast<double>(n)));
  }

 private:
  std::mt19937_64 rng_;
};

// Examples of one label, bucketed by language.
class Pool {
 public:
  void add(const std::string& language, std::size_t index) { buckets_[language].push_back(index); }

  std::size_t remaining() const {
    std::size_t n = 0;
    for (const auto& [_, b] : buckets_) n += b.size();
    return n;
  }

  std::size_t draw(const LanguageWeights& weights, Sampler& sampler) {
    double total = 0.0;
    for (const auto& [lang, b] : buckets_) {
      if (!b.empty()) total += weights.at(lang);
    }
    const double target = sampler.uniform() * total;
    double acc = 0.0;
    std::vector<std::size_t>* chosen = nullptr;
    for (auto& [lang, b] : buckets_) {
      if (b.empty()) continue;
      chosen = &b;
      acc += weights.at(lang);
      if (target < acc) break;
    }
    auto& bucket = *chosen;
    const auto k = sampler.index(bucket.size());
    const auto picked = bucket[k];
    bucket[k] = bucket.back();
    bucket.pop_back();
    return picked;
  }

 private:
  std::map<std::string, std::vector<std::size_t>> buckets_;
};

}  // namespace

std::vector<Batch> build_batches(const std::vector<PasteFixExample>& examples,
                                 std::size_t batch_size, double no_edit_fraction,
                                 const LanguageWeights& weights, std::uint64_t seed) {
  if (examples.empty()) throw EmptyInput("no examples to batch");
  if (batch_size == 0) throw InvalidArgument("batch_size must be positive");
  if (!(no_edit_fraction >= 0.0 && no_edit_fraction <= 1.0)) {
    throw InvalidArgument("no_edit_fraction must be in [0, 1]");
  }

  Pool no_edit;
  Pool edit;
  for (std::size_t i = 0; i < examples.size(); ++i) {
    const auto it = weights.find(examples[i].language);
    if (it == weights.end() || !(it->second > 0.0)) continue;
    (examples[i].label == Label::NoEdit ? no_edit : edit).add(examples[i].language, i);
  }

  Sampler sampler(seed);
  const auto quota = no_edit_quota(batch_size, no_edit_fraction);
  std::vector<Batch> batches;
  while (no_edit.remaining() + edit.remaining() > 0) {
    Batch b;
    b.size = batch_size;
    b.no_edit_quota = quota;

    const auto want_ne = quota;
    const auto want_e = batch_size - quota;
    const auto take_ne = std::min(want_ne, no_edit.remaining());
    const auto take_e = std::min(want_e, edit.remaining());
    const auto extra_e = std::min(want_ne - take_ne, edit.remaining() - take_e);
    const auto extra_ne = std::min(want_e - take_e, no_edit.remaining() - take_ne);
    b.shortfall = (want_ne - take_ne) + (want_e - take_e);

    std::vector<std::size_t> picked;
    for (std::size_t k = 0; k < take_ne + extra_ne; ++k) picked.push_back(no_edit.draw(weights, sampler));
    for (std::size_t k = 0; k < take_e + extra_e; ++k) picked.push_back(edit.draw(weights, sampler));
    for (std::size_t k = picked.size(); k > 1; --k) {
      std::swap(picked[k - 1], picked[sampler.index(k)]);
    }
    b.examples.reserve(picked.size());
    for (auto i : picked) b.examples.push_back(examples[i]);
    batches.push_back(std::move(b));
  }
  return batches;
}

DatasetSplit split_by_file_path(const std::vector<PasteFixExample>& examples,
                                double validation_fraction, std::uint64_t seed) {
  if (!(validation_fraction >= 0.0 && validation_fraction <= 1.0)) {
    throw InvalidArgument("validation_fraction must be in [0, 1]");
  }
  const auto salt = text::hex64(seed);
  DatasetSplit split;
  for (const auto& ex : examples) {
    const auto h = text::fnv1a(salt + ex.file_path);
    const double u = static_cast<double>(h >> 11) * 0x1.0p-53;
    (u < validation_fraction ? split.validation : split.train).push_back(ex);
  }
  return split;
}

}  // namespace smartpaste
