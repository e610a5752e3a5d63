#include "smartpaste/eval_metrics.hpp"

#include <algorithm>
#include <unordered_map>

#include "smartpaste/text.hpp"

namespace smartpaste {

namespace {

void check_work(std::size_t a, std::size_t b, std::size_t cap) {
  if (a != 0 && b > cap / a) {
    throw InputTooLarge("LCS of " + std::to_string(a) + " x " + std::to_string(b) +
                        " characters exceeds the work cap of " + std::to_string(cap));
  }
}

}  // namespace

std::size_t lcs_length(std::u32string_view a, std::u32string_view b, std::size_t work_cap) {
  check_work(a.size(), b.size(), work_cap);
  if (a.size() < b.size()) std::swap(a, b);
  // Rolling row over the shorter string.
  std::vector<std::size_t> row(b.size() + 1, 0);
  for (char32_t ca : a) {
    std::size_t diag = 0;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const auto up = row[j];
      row[j] = ca == b[j - 1] ? diag + 1 : std::max(row[j], row[j - 1]);
      diag = up;
    }
  }
  return row[b.size()];
}

std::size_t lcs_length(std::string_view a, std::string_view b, std::size_t work_cap) {
  return lcs_length(text::decode(a), text::decode(b), work_cap);
}

std::u32string added_characters(std::u32string_view before, std::u32string_view after,
                                std::size_t work_cap) {
  const auto n = before.size();
  const auto m = after.size();
  check_work(n + 1, m + 1, work_cap);
  std::vector<std::uint32_t> suffix((n + 1) * (m + 1), 0);
  const auto at = [m](std::size_t i, std::size_t j) { return i * (m + 1) + j; };
  for (auto i = n; i-- > 0;) {
    for (auto j = m; j-- > 0;) {
      suffix[at(i, j)] = before[i] == after[j]
                             ? suffix[at(i + 1, j + 1)] + 1
                             : std::max(suffix[at(i + 1, j)], suffix[at(i, j + 1)]);
    }
  }
  std::u32string added;
  std::size_t i = 0;
  std::size_t j = 0;
  while (j < m) {
    if (i < n && before[i] == after[j]) {
      ++i;
      ++j;
    } else if (i < n && suffix[at(i + 1, j)] >= suffix[at(i, j + 1)]) {
      ++i;
    } else {
      added.push_back(after[j++]);
    }
  }
  return added;
}

std::size_t chars_modified(std::string_view before, std::string_view after, std::size_t work_cap) {
  const auto a = text::decode(before);
  const auto b = text::decode(after);
  return a.size() + b.size() - 2 * lcs_length(a, b, work_cap);
}

std::size_t chars_added(std::string_view before, std::string_view after, std::size_t work_cap) {
  const auto a = text::decode(before);
  const auto b = text::decode(after);
  return b.size() - lcs_length(a, b, work_cap);
}

const char* to_string(EventKind kind) {
  switch (kind) {
    case EventKind::Shown: return "Shown";
    case EventKind::Accepted: return "Accepted";
    case EventKind::Dismissed: return "Dismissed";
  }
  return "Unknown";
}

double survival(const SuggestionEvent& accepted, std::string_view later_region_text) {
  if (accepted.kind != EventKind::Accepted || !accepted.after_text) {
    throw InvalidArgument("survival needs an Accepted event with after_text");
  }
  const auto added = added_characters(text::decode(accepted.before_text),
                                      text::decode(*accepted.after_text));
  if (added.empty()) return 1.0;
  const auto kept = lcs_length(std::u32string_view(added), text::decode(later_region_text));
  return static_cast<double>(kept) / static_cast<double>(added.size());
}

double acceptance_rate(const std::vector<SuggestionEvent>& events) {
  std::size_t shown = 0;
  std::size_t accepted = 0;
  for (const auto& e : events) {
    shown += e.kind == EventKind::Shown;
    accepted += e.kind == EventKind::Accepted;
  }
  return shown == 0 ? 0.0 : static_cast<double>(accepted) / static_cast<double>(shown);
}

std::optional<double> median(std::vector<double> values) {
  if (values.empty()) return std::nullopt;
  std::sort(values.begin(), values.end());
  const auto mid = values.size() / 2;
  return values.size() % 2 ? values[mid] : (values[mid - 1] + values[mid]) / 2.0;
}

namespace {

std::optional<double> mean(const std::vector<double>& v) {
  if (v.empty()) return std::nullopt;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

}  // namespace

OnlineReport online_report(const std::vector<SuggestionEvent>& events) {
  OnlineReport r;
  std::vector<double> modified;
  std::vector<double> added;
  std::vector<double> survived;
  std::vector<double> latencies;
  std::optional<Timestamp> first_shown;
  std::optional<Timestamp> last_shown;
  for (const auto& e : events) {
    switch (e.kind) {
      case EventKind::Shown:
        ++r.shown;
        latencies.push_back(e.latency_ms);
        first_shown = std::min(first_shown.value_or(e.timestamp), e.timestamp);
        last_shown = std::max(last_shown.value_or(e.timestamp), e.timestamp);
        break;
      case EventKind::Accepted:
        ++r.accepted;
        if (e.after_text) {
          modified.push_back(static_cast<double>(chars_modified(e.before_text, *e.after_text)));
          added.push_back(static_cast<double>(chars_added(e.before_text, *e.after_text)));
          if (e.later_text) survived.push_back(survival(e, *e.later_text));
        }
        break;
      case EventKind::Dismissed:
        ++r.dismissed;
        break;
    }
  }
  r.acceptance_rate = acceptance_rate(events);
  r.avg_chars_modified = mean(modified);
  r.avg_chars_added = mean(added);
  r.mean_survival = mean(survived);
  r.median_latency_ms = median(latencies);
  if (first_shown && *last_shown > *first_shown) {
    r.throughput_qps =
        static_cast<double>(r.shown) / (static_cast<double>(*last_shown - *first_shown) / 1000.0);
  }
  return r;
}

bool exact_match(const EvalRecord& record) {
  return record.predicted_region == record.ground_truth_region;
}

double chrf(std::string_view hypothesis, std::string_view reference, std::size_t max_n,
            double beta) {
  if (max_n < 1) throw InvalidArgument("max_n must be >= 1");
  const auto hyp = text::decode(hypothesis);
  const auto ref = text::decode(reference);
  if (hyp.empty() && ref.empty()) return 100.0;
  if (hyp.empty() || ref.empty()) return 0.0;

  using Counts = std::unordered_map<std::u32string_view, std::size_t>;
  const auto grams = [](std::u32string_view s, std::size_t n) {
    Counts c;
    for (std::size_t i = 0; i + n <= s.size(); ++i) ++c[s.substr(i, n)];
    return c;
  };

  double precision_sum = 0.0;
  double recall_sum = 0.0;
  std::size_t orders = 0;
  for (std::size_t n = 1; n <= max_n; ++n) {
    const std::size_t hyp_total = hyp.size() >= n ? hyp.size() - n + 1 : 0;
    const std::size_t ref_total = ref.size() >= n ? ref.size() - n + 1 : 0;
    if (hyp_total == 0 && ref_total == 0) continue;
    ++orders;
    if (hyp_total == 0 || ref_total == 0) continue;  // contributes 0 to both sums
    const auto hc = grams(hyp, n);
    const auto rc = grams(ref, n);
    std::size_t overlap = 0;
    for (const auto& [g, c] : hc) {
      if (const auto it = rc.find(g); it != rc.end()) overlap += std::min(c, it->second);
    }
    precision_sum += static_cast<double>(overlap) / static_cast<double>(hyp_total);
    recall_sum += static_cast<double>(overlap) / static_cast<double>(ref_total);
  }
  const double p = precision_sum / static_cast<double>(orders);
  const double r = recall_sum / static_cast<double>(orders);
  const double b2 = beta * beta;
  if (p <= 0.0 && r <= 0.0) return 0.0;
  return 100.0 * (1.0 + b2) * p * r / (b2 * p + r);
}

namespace {

struct RowAccumulator {
  std::size_t records = 0;
  std::size_t edit = 0;
  std::size_t no_edit = 0;
  std::size_t edit_exact = 0;
  std::size_t no_edit_exact = 0;
  std::size_t edit_predicted = 0;
  std::vector<double> chrf_misses;

  void add(const EvalRecord& r) {
    const bool em = exact_match(r);
    ++records;
    if (r.ground_truth_label == Label::Edit) {
      ++edit;
      edit_exact += em;
      edit_predicted += r.predicted_nonempty;
    } else {
      ++no_edit;
      no_edit_exact += em;
    }
    if (!em) {
      chrf_misses.push_back(
          chrf(text::join_lines(r.predicted_region), text::join_lines(r.ground_truth_region)));
    }
  }

  MetricRow finish() const {
    const auto pct = [](std::size_t num, std::size_t den) -> std::optional<double> {
      if (den == 0) return std::nullopt;
      return 100.0 * static_cast<double>(num) / static_cast<double>(den);
    };
    MetricRow row;
    row.records = records;
    row.edit_records = edit;
    row.no_edit_records = no_edit;
    row.edit_exact_match = pct(edit_exact, edit);
    row.no_edit_exact_match = pct(no_edit_exact, no_edit);
    row.overall_exact_match = pct(edit_exact + no_edit_exact, records);
    row.recall = pct(edit_predicted, edit);
    row.median_chrf = median(chrf_misses);
    return row;
  }
};

}  // namespace

OfflineReport offline_report(const std::vector<EvalRecord>& records) {
  if (records.empty()) throw EmptyInput("offline report needs at least one record");
  std::map<std::string, RowAccumulator> langs;
  RowAccumulator all;
  for (const auto& r : records) {
    langs[r.language].add(r);
    all.add(r);
  }
  OfflineReport report;
  for (const auto& [lang, acc] : langs) report.per_language[lang] = acc.finish();
  report.overall = all.finish();
  return report;
}

}  // namespace smartpaste
