#pragma once

// Request handling, telemetry sink and the HTTP front end.
//
// Endpoints:
//   POST /v1/suggest    SuggestRequest  -> SuggestResponse
//   POST /v1/telemetry  SuggestionEvent -> {"ack": true}
//   GET  /v1/healthz    -> {"status": "ok", "counters": {...}}
// Errors come back as {"error": <kind>, "message": <text>}.

#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "smartpaste/eval_metrics.hpp"
#include "smartpaste/records.hpp"
#include "smartpaste/suggestion_engine.hpp"

namespace httplib {
class Server;
}

namespace smartpaste {

class BadRequest : public Error {
 public:
  using Error::Error;
};

class UnknownRequest : public Error {
 public:
  using Error::Error;
};

class DuplicateTerminalEvent : public Error {
 public:
  using Error::Error;
};

struct SuggestRequest {
  std::string file_path;
  std::string language;
  std::string content_after_paste;
  PasteRegion region;
  std::string request_id;
};

struct SuggestionPayload {
  std::string patch_text;
  std::vector<std::string> preview_region_lines;
  std::optional<double> score;
};

struct SuggestResponse {
  std::optional<SuggestionPayload> suggestion;
  double engine_latency_ms = 0.0;
  double model_latency_ms = 0.0;
  std::string request_id;
};

// Throws BadRequest on missing or ill-typed fields.
SuggestRequest parse_suggest_request(const json& j);
json to_json(const SuggestResponse& r);

// Append-only telemetry log with serialized writes. Accepted and Dismissed
// events must follow a Shown event for the same request, and a request gets
// at most one of them.
class TelemetrySink {
 public:
  TelemetrySink() = default;
  explicit TelemetrySink(const std::string& log_path);

  // Marks a request id as having produced a suggestion.
  void register_candidate(const std::string& request_id);
  bool is_candidate(const std::string& request_id) const;

  // Throws UnknownRequest or DuplicateTerminalEvent.
  void append(const SuggestionEvent& event);
  void flush();

  std::vector<SuggestionEvent> events() const;
  std::size_t size() const;

 private:
  struct RequestState {
    bool candidate = false;
    bool shown = false;
    bool terminal = false;
  };

  mutable std::mutex mu_;
  std::vector<SuggestionEvent> log_;
  std::map<std::string, RequestState> requests_;
  std::ofstream file_;
};

SuggestResponse handle_suggest(const SuggestRequest& request, const SuggestionEngine& engine,
                               TelemetrySink& sink);

void handle_telemetry(const SuggestionEvent& event, TelemetrySink& sink);

struct BackendSpec {
  std::string kind = "scripted";  // scripted | remote
  std::map<std::string, std::string> script;  // fingerprint -> patch text
  std::string endpoint;
  std::chrono::milliseconds timeout{1000};
};

struct ServiceConfig {
  BackendSpec backend;
  EngineConfig engine;
  std::string telemetry_log;
  std::string host = "127.0.0.1";
  int port = 8080;
};

// Parses the service/engine config file. Script entries may be given as a
// fingerprint map, or as a list of {"prompt" | "fingerprint", "patch_text"}.
ServiceConfig parse_service_config(const json& j);
std::shared_ptr<const ModelBackend> make_backend(const BackendSpec& spec);

class HttpService {
 public:
  HttpService(std::shared_ptr<const SuggestionEngine> engine, std::shared_ptr<TelemetrySink> sink);
  ~HttpService();
  HttpService(const HttpService&) = delete;
  HttpService& operator=(const HttpService&) = delete;

  // Binds and serves until stop(); returns false when binding fails.
  bool listen(const std::string& host, int port);
  // Binds an ephemeral port and returns it, or -1. Serve with listen_after_bind().
  int bind_any_port(const std::string& host);
  bool listen_after_bind();
  void wait_until_ready() const;
  void stop();

 private:
  void install_routes();

  std::shared_ptr<const SuggestionEngine> engine_;
  std::shared_ptr<TelemetrySink> sink_;
  std::unique_ptr<httplib::Server> server_;
};

}  // namespace smartpaste
