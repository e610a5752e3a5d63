#include "smartpaste/service.hpp"

#include <httplib.h>

#include "smartpaste/text.hpp"

namespace smartpaste {

SuggestRequest parse_suggest_request(const json& j) {
  try {
    SuggestRequest r;
    r.file_path = j.at("file_path").get<std::string>();
    r.language = j.at("language").get<std::string>();
    r.content_after_paste = j.at("content_after_paste").get<std::string>();
    r.region = j.at("region").get<PasteRegion>();
    r.request_id = j.at("request_id").get<std::string>();
    if (!text::is_valid_utf8(r.content_after_paste)) throw BadRequest("content is not valid UTF-8");
    r.content_after_paste = text::normalize_newlines(r.content_after_paste);
    return r;
  } catch (const BadRequest&) {
    throw;
  } catch (const std::exception& e) {
    throw BadRequest(std::string("malformed suggest request: ") + e.what());
  }
}

json to_json(const SuggestResponse& r) {
  json s = nullptr;
  if (r.suggestion) {
    s = json{{"patch_text", r.suggestion->patch_text},
             {"preview_region_lines", r.suggestion->preview_region_lines},
             {"score", r.suggestion->score ? json(*r.suggestion->score) : json(nullptr)}};
  }
  return json{{"suggestion", s},
              {"engine_latency_ms", r.engine_latency_ms},
              {"model_latency_ms", r.model_latency_ms},
              {"request_id", r.request_id}};
}

TelemetrySink::TelemetrySink(const std::string& log_path) {
  if (!log_path.empty()) {
    file_.open(log_path, std::ios::app);
    if (!file_) throw InvalidArgument("cannot open telemetry log " + log_path);
  }
}

void TelemetrySink::register_candidate(const std::string& request_id) {
  std::lock_guard lock(mu_);
  requests_[request_id].candidate = true;
}

bool TelemetrySink::is_candidate(const std::string& request_id) const {
  std::lock_guard lock(mu_);
  const auto it = requests_.find(request_id);
  return it != requests_.end() && it->second.candidate;
}

void TelemetrySink::append(const SuggestionEvent& event) {
  std::lock_guard lock(mu_);
  if (event.kind == EventKind::Shown) {
    requests_[event.request_id].shown = true;
  } else {
    const auto it = requests_.find(event.request_id);
    if (it == requests_.end() || !it->second.shown) {
      throw UnknownRequest("no Shown event for request " + event.request_id);
    }
    if (it->second.terminal) {
      throw DuplicateTerminalEvent("request " + event.request_id + " already has a terminal event");
    }
    it->second.terminal = true;
  }
  log_.push_back(event);
  if (file_.is_open()) {
    file_ << json(event).dump() << '\n';
    file_.flush();
  }
}

void TelemetrySink::flush() {
  std::lock_guard lock(mu_);
  if (file_.is_open()) file_.flush();
}

std::vector<SuggestionEvent> TelemetrySink::events() const {
  std::lock_guard lock(mu_);
  return log_;
}

std::size_t TelemetrySink::size() const {
  std::lock_guard lock(mu_);
  return log_.size();
}

SuggestResponse handle_suggest(const SuggestRequest& request, const SuggestionEngine& engine,
                               TelemetrySink& sink) {
  if (request.request_id.empty()) throw BadRequest("request_id must not be empty");
  const auto line_count = text::count_newlines(request.content_after_paste) + 1;
  if (request.region.start_line > request.region.end_line || request.region.end_line >= line_count) {
    throw BadRequest("region [" + std::to_string(request.region.start_line) + ", " +
                     std::to_string(request.region.end_line) + "] outside a " +
                     std::to_string(line_count) + "-line file");
  }

  const auto result = engine.suggest(request.file_path, request.content_after_paste,
                                     request.region, request.language);
  SuggestResponse response;
  response.request_id = request.request_id;
  response.engine_latency_ms = result.engine_latency_ms;
  response.model_latency_ms = result.model_latency_ms;
  if (result.suggestion) {
    response.suggestion = SuggestionPayload{render_patch(result.suggestion->patch),
                                            result.suggestion->preview_region_lines,
                                            result.suggestion->score};
    sink.register_candidate(request.request_id);
  }
  return response;
}

void handle_telemetry(const SuggestionEvent& event, TelemetrySink& sink) { sink.append(event); }

ServiceConfig parse_service_config(const json& j) {
  ServiceConfig c;
  if (j.contains("backend")) {
    const auto& b = j["backend"];
    c.backend.kind = b.value("kind", c.backend.kind);
    if (b.contains("script")) {
      const auto& s = b["script"];
      if (s.is_object()) {
        for (const auto& [fp, patch] : s.items()) c.backend.script[fp] = patch.get<std::string>();
      } else {
        for (const auto& entry : s) {
          const auto patch = entry.at("patch_text").get<std::string>();
          const auto fp = entry.contains("fingerprint")
                              ? entry["fingerprint"].get<std::string>()
                              : prompt_fingerprint(entry.at("prompt").get<std::string>());
          c.backend.script[fp] = patch;
        }
      }
    }
    c.backend.endpoint = b.value("endpoint", c.backend.endpoint);
    c.backend.timeout = std::chrono::milliseconds(b.value("timeout_ms", 1000));
    if (c.backend.kind != "scripted" && c.backend.kind != "remote") {
      throw InvalidArgument("unknown backend kind " + c.backend.kind);
    }
  }
  c.engine.token_budget = j.value("token_budget", c.engine.token_budget);
  if (j.contains("score_threshold") && !j["score_threshold"].is_null()) {
    c.engine.score_threshold = j["score_threshold"].get<double>();
  }
  c.engine.suppress_full_deletion = j.value("suppress_full_deletion", true);
  if (j.contains("delimiters")) {
    const auto& d = j["delimiters"];
    auto& codec = c.engine.codec;
    codec.open_delimiter = d.value("open", codec.open_delimiter);
    codec.close_delimiter = d.value("close", codec.close_delimiter);
    codec.fix_marker = d.value("fix_marker", codec.fix_marker);
    codec.gap_marker = d.value("gap_marker", codec.gap_marker);
  }
  c.telemetry_log = j.value("telemetry_log", c.telemetry_log);
  c.host = j.value("host", c.host);
  c.port = j.value("port", c.port);
  c.engine.validate();
  return c;
}

std::shared_ptr<const ModelBackend> make_backend(const BackendSpec& spec) {
  if (spec.kind == "remote") return remote_backend(spec.endpoint, spec.timeout);
  return scripted_backend(spec.script);
}

HttpService::HttpService(std::shared_ptr<const SuggestionEngine> engine,
                         std::shared_ptr<TelemetrySink> sink)
    : engine_(std::move(engine)), sink_(std::move(sink)), server_(std::make_unique<httplib::Server>()) {
  install_routes();
}

HttpService::~HttpService() { stop(); }

namespace {

void send_error(httplib::Response& res, int status, const char* kind, const std::string& message) {
  res.status = status;
  res.set_content(json{{"error", kind}, {"message", message}}.dump(), "application/json");
}

}  // namespace

void HttpService::install_routes() {
  server_->Post("/v1/suggest", [this](const httplib::Request& req, httplib::Response& res) {
    try {
      json body;
      try {
        body = json::parse(req.body);
      } catch (const json::exception& e) {
        throw BadRequest(e.what());
      }
      const auto response = handle_suggest(parse_suggest_request(body), *engine_, *sink_);
      res.set_content(to_json(response).dump(), "application/json");
    } catch (const BadRequest& e) {
      send_error(res, 400, "BadRequest", e.what());
    } catch (const RangeOutOfBounds& e) {
      send_error(res, 400, "BadRequest", e.what());
    } catch (const BackendUnavailable& e) {
      send_error(res, 503, "BackendUnavailable", e.what());
    } catch (const std::exception& e) {
      send_error(res, 500, "InternalError", e.what());
    }
  });

  server_->Post("/v1/telemetry", [this](const httplib::Request& req, httplib::Response& res) {
    try {
      SuggestionEvent event;
      try {
        event = json::parse(req.body).get<SuggestionEvent>();
      } catch (const std::exception& e) {
        throw BadRequest(e.what());
      }
      handle_telemetry(event, *sink_);
      res.set_content(json{{"ack", true}, {"event_id", event.event_id}}.dump(), "application/json");
    } catch (const BadRequest& e) {
      send_error(res, 400, "BadRequest", e.what());
    } catch (const UnknownRequest& e) {
      send_error(res, 404, "UnknownRequest", e.what());
    } catch (const DuplicateTerminalEvent& e) {
      send_error(res, 409, "DuplicateTerminalEvent", e.what());
    } catch (const std::exception& e) {
      send_error(res, 500, "InternalError", e.what());
    }
  });

  server_->Get("/v1/healthz", [this](const httplib::Request&, httplib::Response& res) {
    const auto& c = engine_->counters();
    json counters{{"requests", c.requests.load()},
                  {"suggested", c.suggested.load()},
                  {"no_edit", c.no_edit.load()},
                  {"context_over_budget", c.context_over_budget.load()},
                  {"parse_failures", c.parse_failures.load()},
                  {"below_threshold", c.below_threshold.load()},
                  {"validation_failures", c.validation_failures.load()},
                  {"full_deletions", c.full_deletions.load()},
                  {"backend_unavailable", c.backend_unavailable.load()},
                  {"telemetry_events", sink_->size()}};
    res.set_content(json{{"status", "ok"}, {"counters", counters}}.dump(), "application/json");
  });
}

bool HttpService::listen(const std::string& host, int port) { return server_->listen(host, port); }

int HttpService::bind_any_port(const std::string& host) { return server_->bind_to_any_port(host); }

bool HttpService::listen_after_bind() { return server_->listen_after_bind(); }

void HttpService::wait_until_ready() const { server_->wait_until_ready(); }

void HttpService::stop() {
  if (server_) server_->stop();
}

}  // namespace smartpaste
