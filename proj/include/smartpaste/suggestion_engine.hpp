#pragma once

// Post-paste suggestions: context selection, prompt, backend call, patch
// parsing and post-processing.

#include <atomic>
#include <chrono>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "smartpaste/context_builder.hpp"
#include "smartpaste/task_codec.hpp"

namespace smartpaste {

struct BackendResponse {
  std::string patch_text;
  std::optional<double> score;  // log-probability
  double backend_latency_ms = 0.0;
};

class BackendUnavailable : public Error {
 public:
  using Error::Error;
};

class MalformedResponse : public Error {
 public:
  using Error::Error;
};

// Implementations must tolerate concurrent predict() calls.
class ModelBackend {
 public:
  virtual ~ModelBackend() = default;
  virtual BackendResponse predict(const std::string& prompt) const = 0;
};

std::string prompt_fingerprint(std::string_view prompt);

// Returns the scripted patch for a prompt whose fingerprint is in the script
// and the empty (no-edit) patch otherwise. Score is always 0.
class ScriptedBackend : public ModelBackend {
 public:
  explicit ScriptedBackend(std::map<std::string, std::string> script = {})
      : script_(std::move(script)) {}

  void add_prompt(std::string_view prompt, std::string patch_text);
  BackendResponse predict(const std::string& prompt) const override;

  const std::map<std::string, std::string>& script() const { return script_; }

 private:
  std::map<std::string, std::string> script_;
};

std::unique_ptr<ModelBackend> scripted_backend(std::map<std::string, std::string> script);

// HTTP/1.1 JSON backend: POST {"prompt"} to `endpoint`, expects
// {"patch_text", "score"} back. Endpoint form: http://host:port/path.
class RemoteBackend : public ModelBackend {
 public:
  RemoteBackend(std::string endpoint, std::chrono::milliseconds timeout);
  BackendResponse predict(const std::string& prompt) const override;

 private:
  std::string base_;
  std::string path_;
  std::chrono::milliseconds timeout_;
};

std::unique_ptr<ModelBackend> remote_backend(std::string endpoint, std::chrono::milliseconds timeout);

struct EngineConfig {
  std::optional<double> score_threshold;
  bool suppress_full_deletion = true;
  std::size_t token_budget = kDefaultTokenBudget;
  CodecConfig codec;

  void validate() const;
};

struct Suggestion {
  EditPatch patch;
  std::vector<std::string> preview_region_lines;
  std::optional<double> score;
  double model_latency_ms = 0.0;
  double engine_latency_ms = 0.0;
};

// Why a request produced no suggestion.
enum class Outcome {
  Suggested,
  NoEdit,
  ContextOverBudget,
  ParseFailure,
  BelowThreshold,
  ValidationFailure,
  FullDeletion,
};

const char* to_string(Outcome outcome);

struct SuggestResult {
  std::optional<Suggestion> suggestion;
  Outcome outcome = Outcome::NoEdit;
  double model_latency_ms = 0.0;
  double engine_latency_ms = 0.0;
};

struct EngineCounters {
  std::atomic<std::uint64_t> requests{0};
  std::atomic<std::uint64_t> suggested{0};
  std::atomic<std::uint64_t> no_edit{0};
  std::atomic<std::uint64_t> context_over_budget{0};
  std::atomic<std::uint64_t> parse_failures{0};
  std::atomic<std::uint64_t> below_threshold{0};
  std::atomic<std::uint64_t> validation_failures{0};
  std::atomic<std::uint64_t> full_deletions{0};
  std::atomic<std::uint64_t> backend_unavailable{0};

  void record(Outcome outcome);
};

// True when applying the patch leaves nothing but blank lines of a
// non-empty region.
bool is_full_deletion(const std::vector<std::string>& region_lines,
                      const std::vector<std::string>& preview);

class SuggestionEngine {
 public:
  SuggestionEngine(std::shared_ptr<const ModelBackend> backend, EngineConfig config);

  // Throws RegionOutOfBounds for a bad region and BackendUnavailable when the
  // backend cannot be reached; every other failure is a result without a
  // suggestion.
  SuggestResult suggest(std::string_view file_path, std::string_view file_after_paste,
                        const PasteRegion& region, std::string_view language) const;

  const EngineConfig& config() const { return config_; }
  const EngineCounters& counters() const { return counters_; }

 private:
  std::shared_ptr<const ModelBackend> backend_;
  EngineConfig config_;
  mutable EngineCounters counters_;
};

// Single-shot form of SuggestionEngine::suggest.
std::optional<Suggestion> suggest(std::string_view file_after_paste, const PasteRegion& region,
                                  std::string_view language, const ModelBackend& backend,
                                  const EngineConfig& config, std::string_view file_path = "");

}  // namespace smartpaste
