#include "govpav/service.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "govpav/ballot_io.hpp"
#include "govpav/error.hpp"
#include "httplib.h"
#include "json.hpp"

namespace govpav::service {

using nlohmann::json;

namespace {

std::string random_token() {
  std::random_device rd;
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(32);
  for (int word = 0; word < 4; ++word) {
    std::uint32_t bits = rd();
    for (int nibble = 0; nibble < 8; ++nibble) {
      out.push_back(kHex[bits & 0xf]);
      bits >>= 4;
    }
  }
  return out;
}

std::string error_body(const Error& e) {
  return json{{"schema_version", kSchemaVersion},
              {"error", {{"kind", to_string(e.kind())}, {"message", e.detail()}, {"location", e.location()}}}}
             .dump();
}

Response error_response(int status, const Error& e) { return Response{status, error_body(e)}; }

int status_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::UnknownSession: return 404;
    case ErrorKind::VoterLimitReached:
    case ErrorKind::NoBallots: return 409;
    case ErrorKind::PayloadTooLarge: return 413;
    default: return 400;
  }
}

std::optional<Response> check_size(const Config& config, std::string_view body) {
  if (body.size() <= config.max_body_bytes) return std::nullopt;
  return error_response(413, Error(ErrorKind::PayloadTooLarge,
                                   "body exceeds " + std::to_string(config.max_body_bytes) + " bytes"));
}

json ballot_json(const RawBallot& ballot) {
  json approvals = json::object();
  for (const auto& [office, candidates] : ballot.approvals) {
    json& slot = approvals[office];
    if (slot.is_null()) slot = json::array();
    for (const std::string& c : candidates) slot.push_back(c);
  }
  return json{{"voter_id", ballot.voter_id}, {"approvals", std::move(approvals)}};
}

std::size_t env_size(const char* name, std::size_t fallback) {
  const char* v = std::getenv(name);
  if (v == nullptr || *v == '\0') return fallback;
  std::size_t used = 0;
  const unsigned long long parsed = std::stoull(v, &used);
  if (used != std::string_view(v).size()) throw std::invalid_argument(std::string(name) + " is not an integer");
  return static_cast<std::size_t>(parsed);
}

}  // namespace

Config Config::from_env() {
  Config c;
  if (const char* v = std::getenv("BIND_ADDR"); v != nullptr && *v != '\0') c.bind_addr = v;
  c.voter_cap = env_size("VOTER_CAP", c.voter_cap);
  c.session_ttl = std::chrono::seconds(env_size("SESSION_TTL_SECONDS", static_cast<std::size_t>(c.session_ttl.count())));
  c.max_body_bytes = env_size("MAX_BODY_BYTES", c.max_body_bytes);
  if (const char* v = std::getenv("SNAPSHOT_PATH"); v != nullptr && *v != '\0') c.snapshot_path = v;
  if (const char* v = std::getenv("STATIC_DIR"); v != nullptr && *v != '\0') c.static_dir = v;
  return c;
}

// ---- SessionStore ------------------------------------------------------------

std::string SessionStore::create(Election election) {
  expire();
  auto session = std::make_shared<Session>();
  session->election = std::move(election);
  session->created_at = Clock::now();
  std::unique_lock lock(mutex_);
  std::string id;
  do {
    id = random_token();
  } while (sessions_.count(id) != 0);
  sessions_.emplace(id, std::move(session));
  return id;
}

std::shared_ptr<SessionStore::Session> SessionStore::find(std::string_view id) {
  std::shared_lock lock(mutex_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) return nullptr;
  if (Clock::now() - it->second->created_at > ttl_) return nullptr;
  return it->second;
}

std::size_t SessionStore::size() const {
  std::shared_lock lock(mutex_);
  return sessions_.size();
}

void SessionStore::expire(Clock::time_point now) {
  std::unique_lock lock(mutex_);
  std::erase_if(sessions_, [&](const auto& entry) { return now - entry.second->created_at > ttl_; });
}

void SessionStore::save(const std::filesystem::path& path) const {
  json sessions = json::array();
  {
    std::shared_lock lock(mutex_);
    for (const auto& [id, session] : sessions_) {
      std::lock_guard guard(session->mutex);
      json ballots = json::array();
      for (const RawBallot& b : session->ballots) ballots.push_back(ballot_json(b));
      const auto created =
          std::chrono::duration_cast<std::chrono::seconds>(session->created_at.time_since_epoch()).count();
      sessions.push_back(json{{"id", id},
                              {"created_at", created},
                              {"election", json::parse(write_election(session->election))},
                              {"ballots", std::move(ballots)}});
    }
  }
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write snapshot " + tmp.string());
    out << json{{"schema_version", kSchemaVersion}, {"sessions", std::move(sessions)}}.dump() << "\n";
  }
  std::filesystem::rename(tmp, path);
}

void SessionStore::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return;
  std::stringstream buf;
  buf << in.rdbuf();
  const json doc = json::parse(buf.str());
  std::unique_lock lock(mutex_);
  for (const json& js : doc.at("sessions")) {
    auto session = std::make_shared<Session>();
    session->election = parse_election(js.at("election").dump());
    session->created_at = Clock::time_point(std::chrono::seconds(js.at("created_at").get<std::int64_t>()));
    for (const json& b : js.at("ballots")) session->ballots.push_back(parse_ballot_document(b.dump()));
    validate_profile(session->election, session->ballots);
    sessions_[js.at("id").get<std::string>()] = std::move(session);
  }
}

// ---- Service -----------------------------------------------------------------

Service::Service(Config config) : config_(std::move(config)), sessions_(config_.session_ttl) {}

Response Service::create_election(std::string_view body) {
  if (auto too_big = check_size(config_, body)) return *too_big;
  try {
    const std::string id = sessions_.create(parse_election(body));
    return Response{201, json{{"schema_version", kSchemaVersion}, {"session_id", id}}.dump()};
  } catch (const Error& e) {
    return error_response(status_for(e.kind()), e);
  }
}

Response Service::get_election(std::string_view session_id) {
  auto session = sessions_.find(session_id);
  if (!session) return error_response(404, Error(ErrorKind::UnknownSession, "no such session", std::string(session_id)));
  std::lock_guard guard(session->mutex);
  json ballots = json::array();
  for (const RawBallot& b : session->ballots) ballots.push_back(ballot_json(b));
  return Response{200, json{{"schema_version", kSchemaVersion},
                            {"session_id", session_id},
                            {"election", json::parse(write_election(session->election))},
                            {"ballots", std::move(ballots)},
                            {"n", session->ballots.size()},
                            {"voter_cap", config_.voter_cap}}
                           .dump()};
}

Response Service::submit_ballot(std::string_view session_id, std::string_view body) {
  if (auto too_big = check_size(config_, body)) return *too_big;
  auto session = sessions_.find(session_id);
  if (!session) return error_response(404, Error(ErrorKind::UnknownSession, "no such session", std::string(session_id)));
  try {
    RawBallot ballot = parse_ballot_document(body);
    std::lock_guard guard(session->mutex);
    try {
      validate_profile(session->election, RawProfile{ballot});
    } catch (const Error& e) {
      // single-ballot validation reports "$.voters[0]..."; the body's root is the ballot itself
      std::string loc = e.location();
      if (loc.rfind("$.voters[0]", 0) == 0) loc = "$" + loc.substr(11);
      throw Error(e.kind(), e.detail(), loc);
    }
    auto it = std::find_if(session->ballots.begin(), session->ballots.end(),
                           [&](const RawBallot& b) { return b.voter_id == ballot.voter_id; });
    if (it != session->ballots.end()) {
      *it = std::move(ballot);
    } else {
      if (session->ballots.size() >= config_.voter_cap)
        throw Error(ErrorKind::VoterLimitReached,
                    "demo sessions accept at most " + std::to_string(config_.voter_cap) + " voters");
      session->ballots.push_back(std::move(ballot));
    }
    session->cached_results.reset();
    return Response{200, json{{"schema_version", kSchemaVersion}, {"n", session->ballots.size()}}.dump()};
  } catch (const Error& e) {
    return error_response(status_for(e.kind()), e);
  }
}

Response Service::tally(std::string_view session_id) {
  auto session = sessions_.find(session_id);
  if (!session) return error_response(404, Error(ErrorKind::UnknownSession, "no such session", std::string(session_id)));
  try {
    std::lock_guard guard(session->mutex);
    if (session->ballots.empty()) throw Error(ErrorKind::NoBallots, "submit at least one ballot before tallying");
    if (!session->cached_results) {
      const ApprovalProfile profile = validate_profile(session->election, session->ballots);
      session->cached_results = tally_results_document(session->election, profile);
    }
    return Response{200, *session->cached_results};
  } catch (const Error& e) {
    return error_response(status_for(e.kind()), e);
  }
}

Response Service::tally_file(std::string_view body) {
  if (auto too_big = check_size(config_, body)) return *too_big;
  try {
    const Upload upload = parse_upload(body);
    return Response{200, tally_results_document(upload.election, upload.profile)};
  } catch (const Error& e) {
    return error_response(status_for(e.kind()), e);
  }
}

void Service::mount(httplib::Server& server) {
  constexpr const char* kJson = "application/json";
  auto reply = [](httplib::Response& res, const Response& r) {
    res.status = r.status;
    res.set_content(r.body, kJson);
  };

  server.set_payload_max_length(config_.max_body_bytes);
  server.Post("/api/elections", [this, reply](const httplib::Request& req, httplib::Response& res) {
    reply(res, create_election(req.body));
  });
  server.Get(R"(/api/elections/([A-Za-z0-9_-]+))", [this, reply](const httplib::Request& req, httplib::Response& res) {
    reply(res, get_election(req.matches[1].str()));
  });
  server.Post(R"(/api/elections/([A-Za-z0-9_-]+)/ballots)",
              [this, reply](const httplib::Request& req, httplib::Response& res) {
                reply(res, submit_ballot(req.matches[1].str(), req.body));
              });
  server.Post(R"(/api/elections/([A-Za-z0-9_-]+)/tally)",
              [this, reply](const httplib::Request& req, httplib::Response& res) {
                reply(res, tally(req.matches[1].str()));
              });
  server.Post("/api/tally-file", [this, reply](const httplib::Request& req, httplib::Response& res) {
    reply(res, tally_file(req.body));
  });
  server.set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (!res.body.empty()) return;
    const ErrorKind kind = res.status == 413 ? ErrorKind::PayloadTooLarge : ErrorKind::MalformedDocument;
    res.set_content(error_body(Error(kind, httplib::status_message(res.status))), kJson);
  });
  if (config_.static_dir) server.set_mount_point("/", config_.static_dir->string());
}

std::pair<std::string, int> split_bind_addr(std::string_view addr) {
  const auto colon = addr.rfind(':');
  if (colon == std::string_view::npos) throw std::invalid_argument("bind address must be host:port");
  std::string host(addr.substr(0, colon));
  if (host.size() >= 2 && host.front() == '[' && host.back() == ']') host = host.substr(1, host.size() - 2);
  const std::string port(addr.substr(colon + 1));
  std::size_t used = 0;
  int value = 0;
  try {
    value = std::stoi(port, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != port.size() || value < 0 || value > 65535)
    throw std::invalid_argument("invalid port in bind address '" + std::string(addr) + "'");
  return {host.empty() ? std::string("0.0.0.0") : host, value};
}

bool serve(Service& service, httplib::Server& server) {
  const auto [host, port] = split_bind_addr(service.config().bind_addr);
  service.mount(server);
  if (!server.bind_to_port(host, port)) return false;
  return server.listen_after_bind();
}

}  // namespace govpav::service
