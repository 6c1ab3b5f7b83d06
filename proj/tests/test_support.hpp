#pragma once

// Builders and random instance generators shared by the unit and acceptance
// suites.

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "govpav/model.hpp"

namespace govpav::testing {

using OfficeSpec = std::pair<std::string, std::vector<std::string>>;
using BallotSpec = std::pair<std::string, std::vector<std::string>>;  // voter -> approved candidate ids

inline Election make_election(const std::vector<OfficeSpec>& offices, std::string name = "test") {
  RawElection raw{std::move(name), {}};
  for (const auto& [id, candidates] : offices) {
    RawOffice office{id, id, {}};
    for (const std::string& c : candidates) office.candidates.push_back(RawCandidate{c, c});
    raw.offices.push_back(std::move(office));
  }
  return validate_election(raw);
}

inline ApprovalProfile make_ballots(const Election& election, const std::vector<BallotSpec>& ballots) {
  std::vector<Voter> voters;
  for (const auto& [id, approved] : ballots) {
    Voter v{id, {}};
    for (const std::string& c : approved) v.approvals.push_back(*election.find_candidate(c));
    voters.push_back(std::move(v));
  }
  return make_profile(election, std::move(voters));
}

// o1:{A1,B1}, o2:{A2,B2}; v1,v2 approve {A1,A2}; v3,v4 approve {B1,B2}.
inline Election four_voter_election() { return make_election({{"o1", {"A1", "B1"}}, {"o2", {"A2", "B2"}}}); }

inline ApprovalProfile four_voter_profile(const Election& e) {
  return make_ballots(e, {{"v1", {"A1", "A2"}}, {"v2", {"A1", "A2"}}, {"v3", {"B1", "B2"}}, {"v4", {"B1", "B2"}}});
}

struct Instance {
  Election election;
  ApprovalProfile profile;
};

// Random instance with 1..max_offices offices of 1..max_candidates candidates
// and 1..max_voters voters. Each voter skips an office with probability 1/4;
// otherwise each candidate is approved with probability 1/2.
inline Instance random_instance(std::mt19937_64& rng, std::size_t max_voters, std::size_t max_offices,
                                std::size_t max_candidates) {
  auto pick = [&](std::size_t lo, std::size_t hi) { return lo + static_cast<std::size_t>(rng() % (hi - lo + 1)); };
  std::vector<OfficeSpec> offices;
  const std::size_t k = pick(1, max_offices);
  for (std::size_t o = 0; o < k; ++o) {
    OfficeSpec spec{"o" + std::to_string(o + 1), {}};
    const std::size_t m = pick(1, max_candidates);
    for (std::size_t c = 0; c < m; ++c) spec.second.push_back("c" + std::to_string(o + 1) + "_" + std::to_string(c + 1));
    offices.push_back(std::move(spec));
  }
  Election election = make_election(offices);

  std::vector<Voter> voters;
  const std::size_t n = pick(1, max_voters);
  for (std::size_t v = 0; v < n; ++v) {
    Voter voter{"v" + std::to_string(v + 1), {}};
    for (const Office& office : election.offices()) {
      if (rng() % 4 == 0) continue;
      for (CandidateIndex c = office.first; c < office.last; ++c)
        if (rng() % 2 == 0) voter.approvals.push_back(c);
    }
    voters.push_back(std::move(voter));
  }
  ApprovalProfile profile = make_profile(election, std::move(voters));
  return Instance{std::move(election), std::move(profile)};
}

inline std::filesystem::path fixture_path(const std::string& relative) {
  return std::filesystem::path(GOVPAV_FIXTURE_DIR) / relative;
}

inline std::string read_fixture(const std::string& relative) {
  std::ifstream in(fixture_path(relative), std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace govpav::testing
