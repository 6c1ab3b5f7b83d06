#include <omp.h>

#include "doctest.h"
#include "govpav/error.hpp"
#include "govpav/greedy.hpp"
#include "govpav/oracle.hpp"
#include "govpav/reference.hpp"
#include "test_support.hpp"

using namespace govpav;
using namespace govpav::testing;

TEST_CASE("marginal_score on a fresh state counts approvers") {
  const Election e = make_election({{"o1", {"c", "d"}}});
  const ApprovalProfile p = make_ballots(e, {{"v1", {"c"}}, {"v2", {"c"}}, {"v3", {"c"}}, {"v4", {}}});
  const TallyState state(e, p);
  CHECK(marginal_score(e, p, state, "o1", "c") == Score(3));
  CHECK(marginal_score(e, p, state, "o1", "d").to_string() == "0/1");
}

TEST_CASE("marginal_score halves the weight of once-satisfied voters") {
  const Election e = make_election({{"o1", {"x"}}, {"o2", {"c", "d"}}});
  const ApprovalProfile p =
      make_ballots(e, {{"v1", {"x", "c"}}, {"v2", {"x", "c"}}, {"v3", {"x", "c"}}});
  TallyState state(e, p);
  state.elect(e, p, *e.find_candidate("x"));
  const Score s = marginal_score(e, p, state, "o2", "c");
  CHECK(s == Score(3, 2));
  // oracle: the same quantity as a difference of PAV objectives, with d
  // approved by nobody standing in for "c not elected"
  const Score delta = pav_score(e, p, make_committee(e, {{"o1", "x"}, {"o2", "c"}})) -
                      pav_score(e, p, make_committee(e, {{"o1", "x"}, {"o2", "d"}}));
  CHECK(s == delta);
}

TEST_CASE("marginal_score precondition errors") {
  const Election e = four_voter_election();
  const ApprovalProfile p = four_voter_profile(e);
  TallyState state(e, p);
  state.elect(e, p, *e.find_candidate("A1"));
  CHECK_THROWS_WITH_AS(marginal_score(e, p, state, "o1", "B1"), doctest::Contains("OfficeAlreadyFilled"), Error);
  CHECK_THROWS_WITH_AS(marginal_score(e, p, state, "o2", "B1"), doctest::Contains("UnknownCandidate"), Error);
  CHECK_THROWS_AS(state.elect(e, p, *e.find_candidate("B1")), Error);
}

TEST_CASE("greedy_pav with one office and a unanimous pair") {
  const Election e = make_election({{"o1", {"a", "b"}}});
  const ApprovalProfile p = make_ballots(e, {{"v1", {"a"}}, {"v2", {"a"}}});
  const TallyResult r = greedy_pav(e, p);
  CHECK(r.committee.winner(0) == *e.find_candidate("a"));
  REQUIRE(r.trail.rounds.size() == 1);
  CHECK(r.trail.rounds[0].candidate_scores[0].score == Score(2));
  CHECK(r.trail.rounds[0].candidate_scores[1].score == Score(0));
}

TEST_CASE("greedy_pav on the four-voter example follows the hand trace") {
  const Election e = four_voter_election();
  const ApprovalProfile p = four_voter_profile(e);
  const TallyResult r = greedy_pav(e, p);
  REQUIRE(r.trail.rounds.size() == 2);

  const RoundRecord& r1 = r.trail.rounds[0];
  CHECK(r1.round_index == 1);
  REQUIRE(r1.candidate_scores.size() == 4);
  for (const ScoredCandidate& sc : r1.candidate_scores) CHECK(sc.score == Score(2));
  CHECK(e.candidate(r1.winner_candidate).id == "A1");
  CHECK(e.office(r1.winner_office).id == "o1");
  CHECK(r1.tied_with == std::vector<CandidateIndex>{1, 2, 3});
  CHECK(r1.satisfied_voters == std::vector<VoterIndex>{0, 1});

  const RoundRecord& r2 = r.trail.rounds[1];
  REQUIRE(r2.candidate_scores.size() == 2);
  CHECK(r2.candidate_scores[0].score == Score(1));  // A2 = 2 x 1/2
  CHECK(r2.candidate_scores[1].score == Score(2));  // B2
  CHECK(e.candidate(r2.winner_candidate).id == "B2");
  CHECK(r2.tied_with.empty());

  CHECK(r.committee == make_committee(e, {{"o1", "A1"}, {"o2", "B2"}}));
}

TEST_CASE("greedy_pav at survey shape returns a full committee") {
  std::vector<OfficeSpec> offices;
  for (int o = 0; o < 12; ++o) {
    OfficeSpec spec{"m" + std::to_string(o), {}};
    for (int c = 0; c < 4; ++c) spec.second.push_back("m" + std::to_string(o) + "c" + std::to_string(c));
    offices.push_back(spec);
  }
  const Election e = make_election(offices);
  std::mt19937_64 rng(500);
  std::vector<Voter> voters;
  for (int v = 0; v < 500; ++v) {
    Voter voter{"v" + std::to_string(v), {}};
    for (const Office& off : e.offices()) voter.approvals.push_back(off.first + rng() % 4);
    voters.push_back(std::move(voter));
  }
  const ApprovalProfile p = make_profile(e, std::move(voters));
  const TallyResult r = greedy_pav(e, p);
  CHECK(r.committee.size() == 12);
  CHECK(r.trail.rounds.size() == 12);
  check_committee(e, r.committee);
}

TEST_CASE("zero-approval offices are still filled and flagged") {
  const Election e = make_election({{"o1", {"a"}}, {"o2", {"x", "y"}}});
  const ApprovalProfile p = make_ballots(e, {{"v1", {"a"}}, {"v2", {}}});
  const TallyResult r = greedy_pav(e, p);
  CHECK(r.committee.winner(1) == *e.find_candidate("x"));
  CHECK_FALSE(r.trail.rounds[0].zero_support);
  CHECK(r.trail.rounds[1].zero_support);
  CHECK(r.trail.rounds[1].tied_with == std::vector<CandidateIndex>{*e.find_candidate("y")});
}

TEST_CASE("unanimity: everyone approving c_j in each office elects exactly those") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const Instance shape = random_instance(rng, 1, 5, 4);
    const Election& e = shape.election;
    std::vector<CandidateIndex> chosen;
    for (const Office& off : e.offices()) chosen.push_back(off.first + static_cast<CandidateIndex>(rng() % off.size()));
    std::vector<Voter> voters;
    for (int v = 0; v < 1 + static_cast<int>(rng() % 6); ++v) voters.push_back(Voter{"v" + std::to_string(v), chosen});
    const ApprovalProfile p = make_profile(e, std::move(voters));
    CHECK(greedy_pav(e, p).committee == Committee(chosen));
  }
}

TEST_CASE("property: trail invariants on random instances") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 300; ++trial) {
    const Instance inst = random_instance(rng, 10, 4, 4);
    const Election& e = inst.election;
    const ApprovalProfile& p = inst.profile;
    const TallyResult r = greedy_pav(e, p);

    REQUIRE(r.trail.rounds.size() == e.num_offices());
    std::vector<int> seen(e.num_offices(), 0);
    std::vector<std::uint32_t> satisfaction(p.size(), 0);
    for (const RoundRecord& rec : r.trail.rounds) {
      ++seen[rec.winner_office];
      CHECK(rec.winner_score <= Score(static_cast<std::int64_t>(p.size())));
      for (const ScoredCandidate& sc : rec.candidate_scores) CHECK(sc.score <= rec.winner_score);
      for (VoterIndex v : rec.satisfied_voters) ++satisfaction[v];
    }
    for (int count : seen) CHECK(count == 1);
    check_committee(e, r.committee);
    // s_v ends at the number of committee members v approves
    for (VoterIndex v = 0; v < p.size(); ++v) {
      std::uint32_t t = 0;
      for (CandidateIndex c : p.voter(v).approvals)
        for (CandidateIndex w : r.committee.winners()) t += (c == w);
      CHECK(satisfaction[v] == t);
    }
  }
}

TEST_CASE("property: each round's winner maximises the PAV objective delta") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 200; ++trial) {
    const Instance inst = random_instance(rng, 8, 3, 3);
    const Election& e = inst.election;
    const ApprovalProfile& p = inst.profile;
    const TallyResult r = greedy_pav(e, p);

    // PAV objective of the partial committee, from per-voter approval counts
    std::vector<std::uint32_t> t(p.size(), 0);
    auto objective = [&](const std::vector<std::uint32_t>& counts) {
      Score total;
      for (std::uint32_t k : counts) total += Score::harmonic_number(k);
      return total;
    };
    for (const RoundRecord& rec : r.trail.rounds) {
      const Score base = objective(t);
      Score best_delta;
      CandidateIndex best = 0;
      bool have = false;
      for (const ScoredCandidate& sc : rec.candidate_scores) {
        std::vector<std::uint32_t> next = t;
        for (VoterIndex v : p.approvers(sc.candidate)) ++next[v];
        const Score delta = objective(next) - base;
        CHECK(delta == sc.score);
        if (!have || delta > best_delta) {
          best_delta = delta;
          best = sc.candidate;
          have = true;
        }
      }
      CHECK(best == rec.winner_candidate);
      for (VoterIndex v : p.approvers(rec.winner_candidate)) ++t[v];
    }
  }
}

TEST_CASE("parallel greedy_pav matches the serial reference exactly") {
  const int saved = omp_get_max_threads();
  omp_set_num_threads(4);
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    const Instance inst = random_instance(rng, 40, 6, 5);
    CHECK(greedy_pav(inst.election, inst.profile) == reference::greedy_pav(inst.election, inst.profile));
  }
  omp_set_num_threads(saved);
}

TEST_CASE("greedy_pav rejects a profile built for another election") {
  const Election e = four_voter_election();
  const Election other = make_election({{"o1", {"a"}}});
  const ApprovalProfile p = four_voter_profile(e);
  CHECK_THROWS_WITH_AS(greedy_pav(other, p), doctest::Contains("InconsistentInput"), Error);
}
