#include "smartpaste/suggestion_engine.hpp"

#include <cmath>
#include <httplib.h>
#include <nlohmann/json.hpp>

#include "smartpaste/text.hpp"

namespace smartpaste {

using json = nlohmann::json;
using Clock = std::chrono::steady_clock;

namespace {

double ms_between(Clock::time_point a, Clock::time_point b) {
  return std::chrono::duration<double, std::milli>(b - a).count();
}

}  // namespace

std::string prompt_fingerprint(std::string_view prompt) { return text::hex64(text::fnv1a(prompt)); }

void ScriptedBackend::add_prompt(std::string_view prompt, std::string patch_text) {
  script_[prompt_fingerprint(prompt)] = std::move(patch_text);
}

BackendResponse ScriptedBackend::predict(const std::string& prompt) const {
  BackendResponse r;
  r.score = 0.0;
  if (const auto it = script_.find(prompt_fingerprint(prompt)); it != script_.end()) {
    r.patch_text = it->second;
  }
  return r;
}

std::unique_ptr<ModelBackend> scripted_backend(std::map<std::string, std::string> script) {
  return std::make_unique<ScriptedBackend>(std::move(script));
}

RemoteBackend::RemoteBackend(std::string endpoint, std::chrono::milliseconds timeout)
    : timeout_(timeout) {
  const auto scheme = endpoint.find("://");
  const auto path_at = endpoint.find('/', scheme == std::string::npos ? 0 : scheme + 3);
  if (path_at == std::string::npos) {
    base_ = endpoint;
    path_ = "/v1/predict";
  } else {
    base_ = endpoint.substr(0, path_at);
    path_ = endpoint.substr(path_at);
  }
  if (base_.empty()) throw InvalidArgument("empty backend endpoint");
}

BackendResponse RemoteBackend::predict(const std::string& prompt) const {
  httplib::Client client(base_);
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(timeout_);
  const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(timeout_ - secs);
  client.set_connection_timeout(secs.count(), usecs.count());
  client.set_read_timeout(secs.count(), usecs.count());
  client.set_write_timeout(secs.count(), usecs.count());

  const auto t0 = Clock::now();
  const auto res = client.Post(path_, json{{"prompt", prompt}}.dump(), "application/json");
  const auto t1 = Clock::now();
  if (!res) {
    throw BackendUnavailable("backend " + base_ + path_ + ": " + httplib::to_string(res.error()));
  }
  if (res->status != 200) {
    throw BackendUnavailable("backend " + base_ + path_ + " returned HTTP " +
                             std::to_string(res->status));
  }

  BackendResponse out;
  out.backend_latency_ms = ms_between(t0, t1);
  try {
    const auto body = json::parse(res->body);
    out.patch_text = body.at("patch_text").get<std::string>();
    if (body.contains("score") && !body["score"].is_null()) {
      if (!body["score"].is_number()) throw MalformedResponse("score is not a number");
      out.score = body["score"].get<double>();
    }
  } catch (const json::exception& e) {
    throw MalformedResponse(std::string("malformed backend response: ") + e.what());
  }
  return out;
}

std::unique_ptr<ModelBackend> remote_backend(std::string endpoint,
                                             std::chrono::milliseconds timeout) {
  return std::make_unique<RemoteBackend>(std::move(endpoint), timeout);
}

void EngineConfig::validate() const {
  if (score_threshold && !std::isfinite(*score_threshold)) {
    throw InvalidArgument("score_threshold must be finite");
  }
}

const char* to_string(Outcome outcome) {
  switch (outcome) {
    case Outcome::Suggested: return "Suggested";
    case Outcome::NoEdit: return "NoEdit";
    case Outcome::ContextOverBudget: return "ContextOverBudget";
    case Outcome::ParseFailure: return "ParseFailure";
    case Outcome::BelowThreshold: return "BelowThreshold";
    case Outcome::ValidationFailure: return "ValidationFailure";
    case Outcome::FullDeletion: return "FullDeletion";
  }
  return "Unknown";
}

void EngineCounters::record(Outcome outcome) {
  switch (outcome) {
    case Outcome::Suggested: ++suggested; break;
    case Outcome::NoEdit: ++no_edit; break;
    case Outcome::ContextOverBudget: ++context_over_budget; break;
    case Outcome::ParseFailure: ++parse_failures; break;
    case Outcome::BelowThreshold: ++below_threshold; break;
    case Outcome::ValidationFailure: ++validation_failures; break;
    case Outcome::FullDeletion: ++full_deletions; break;
  }
}

bool is_full_deletion(const std::vector<std::string>& region_lines,
                      const std::vector<std::string>& preview) {
  if (region_lines.empty()) return false;
  return std::all_of(preview.begin(), preview.end(),
                     [](const std::string& l) { return text::is_blank(l); });
}

SuggestionEngine::SuggestionEngine(std::shared_ptr<const ModelBackend> backend, EngineConfig config)
    : backend_(std::move(backend)), config_(std::move(config)) {
  if (!backend_) throw InvalidArgument("engine needs a backend");
  config_.validate();
}

SuggestResult SuggestionEngine::suggest(std::string_view file_path,
                                        std::string_view file_after_paste,
                                        const PasteRegion& region,
                                        std::string_view language) const {
  const auto t0 = Clock::now();
  ++counters_.requests;
  SuggestResult result;
  const auto finish = [&](Outcome outcome) {
    result.outcome = outcome;
    result.engine_latency_ms = ms_between(t0, Clock::now()) - result.model_latency_ms;
    if (result.suggestion) {
      result.suggestion->model_latency_ms = result.model_latency_ms;
      result.suggestion->engine_latency_ms = result.engine_latency_ms;
    }
    counters_.record(outcome);
    return result;
  };

  const auto lines = text::split_lines(file_after_paste);
  const auto selection = build_context(lines, region, config_.token_budget);
  if (selection.empty()) return finish(Outcome::ContextOverBudget);

  const auto name = file_path.empty() ? std::string("untitled.") + std::string(language)
                                      : std::string(file_path);
  PromptParts parts;
  try {
    parts = prompt_parts(name, lines, region, selection, config_.codec);
  } catch (const DelimiterCollision&) {
    return finish(Outcome::ValidationFailure);
  }
  const auto prompt = render_prompt(parts, config_.codec);

  BackendResponse response;
  const auto t1 = Clock::now();
  try {
    response = backend_->predict(prompt);
  } catch (const BackendUnavailable&) {
    ++counters_.backend_unavailable;
    throw;
  } catch (const MalformedResponse&) {
    result.model_latency_ms = ms_between(t1, Clock::now());
    return finish(Outcome::ParseFailure);
  }
  result.model_latency_ms = ms_between(t1, Clock::now());

  EditPatch patch;
  try {
    patch = parse_patch(response.patch_text);
  } catch (const PatchError&) {
    return finish(Outcome::ParseFailure);
  }
  if (patch.is_no_edit()) return finish(Outcome::NoEdit);

  if (config_.score_threshold && (!response.score || *response.score < *config_.score_threshold)) {
    return finish(Outcome::BelowThreshold);
  }

  std::vector<std::string> preview;
  try {
    preview = apply_patch(parts.pasted_lines, patch);
  } catch (const PatchError&) {
    return finish(Outcome::ValidationFailure);
  }
  if (config_.suppress_full_deletion && is_full_deletion(parts.pasted_lines, preview)) {
    return finish(Outcome::FullDeletion);
  }

  Suggestion s;
  s.patch = std::move(patch);
  s.preview_region_lines = std::move(preview);
  s.score = response.score;
  result.suggestion = std::move(s);
  return finish(Outcome::Suggested);
}

std::optional<Suggestion> suggest(std::string_view file_after_paste, const PasteRegion& region,
                                  std::string_view language, const ModelBackend& backend,
                                  const EngineConfig& config, std::string_view file_path) {
  // Non-owning handle; the caller keeps the backend alive for the call.
  std::shared_ptr<const ModelBackend> handle(&backend, [](const ModelBackend*) {});
  SuggestionEngine engine(std::move(handle), config);
  return engine.suggest(file_path, file_after_paste, region, language).suggestion;
}

}  // namespace smartpaste
