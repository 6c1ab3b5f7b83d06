#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include "govpav/model.hpp"

namespace httplib {
class Server;
}

namespace govpav::service {

struct Config {
  std::string bind_addr = "127.0.0.1:8080";
  std::size_t voter_cap = 200;
  std::chrono::seconds session_ttl{24 * 60 * 60};
  std::size_t max_body_bytes = 16 * 1024 * 1024;
  std::optional<std::filesystem::path> snapshot_path;
  std::optional<std::filesystem::path> static_dir;

  /// BIND_ADDR, VOTER_CAP, SESSION_TTL_SECONDS, MAX_BODY_BYTES, plus the
  /// optional SNAPSHOT_PATH and STATIC_DIR. Unset variables keep defaults.
  static Config from_env();
};

struct Response {
  int status = 200;
  std::string body;
};

/// Demo sessions: an election plus ballots keyed by voter id. Each session
/// has its own lock; the map lock is held only to find or insert sessions.
class SessionStore {
 public:
  using Clock = std::chrono::system_clock;

  struct Session {
    std::mutex mutex;
    Election election;
    std::vector<RawBallot> ballots;  // submission order, upserted by voter id
    std::optional<std::string> cached_results;
    Clock::time_point created_at;
  };

  explicit SessionStore(std::chrono::seconds ttl) : ttl_(ttl) {}

  std::string create(Election election);
  std::shared_ptr<Session> find(std::string_view id);
  std::size_t size() const;
  /// Drops sessions older than the TTL.
  void expire(Clock::time_point now = Clock::now());

  void save(const std::filesystem::path& path) const;
  void load(const std::filesystem::path& path);

 private:
  std::chrono::seconds ttl_;
  mutable std::shared_mutex mutex_;
  std::map<std::string, std::shared_ptr<Session>, std::less<>> sessions_;
};

/// HTTP-independent handlers for the JSON API. Every body carries
/// "schema_version"; errors are {"error": {"kind", "message", "location"}}.
class Service {
 public:
  explicit Service(Config config);

  const Config& config() const noexcept { return config_; }
  SessionStore& sessions() noexcept { return sessions_; }

  Response create_election(std::string_view body);                            // POST /api/elections
  Response get_election(std::string_view session);                            // GET  /api/elections/{s}
  Response submit_ballot(std::string_view session, std::string_view body);    // POST /api/elections/{s}/ballots
  Response tally(std::string_view session);                                   // POST /api/elections/{s}/tally
  Response tally_file(std::string_view body);                                 // POST /api/tally-file

  /// Registers the routes on an httplib server.
  void mount(httplib::Server& server);

 private:
  Config config_;
  SessionStore sessions_;
};

/// Parses "host:port"; throws std::invalid_argument.
std::pair<std::string, int> split_bind_addr(std::string_view addr);

/// Binds and serves until stopped. Returns false when the address cannot be bound.
bool serve(Service& service, httplib::Server& server);

}  // namespace govpav::service
