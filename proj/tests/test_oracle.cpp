#include <omp.h>

#include <algorithm>

#include "doctest.h"
#include "govpav/error.hpp"
#include "govpav/greedy.hpp"
#include "govpav/oracle.hpp"
#include "govpav/reference.hpp"
#include "test_support.hpp"

using namespace govpav;
using namespace govpav::testing;

namespace {

// Independent brute force: recursion over offices, PAV computed from its own
// harmonic sums. Shares nothing with the library beyond the data types.
void brute_force(const Election& e, const ApprovalProfile& p, std::vector<CandidateIndex>& partial,
                 Score& best, std::vector<Committee>& optima) {
  if (partial.size() == e.num_offices()) {
    Score total;
    for (const Voter& v : p.voters()) {
      int t = 0;
      for (CandidateIndex c : v.approvals) t += static_cast<int>(std::count(partial.begin(), partial.end(), c));
      for (int i = 1; i <= t; ++i) total += Score(1, i);
    }
    if (optima.empty() || total > best) {
      best = total;
      optima.assign(1, Committee(partial));
    } else if (total == best) {
      optima.push_back(Committee(partial));
    }
    return;
  }
  const Office& off = e.office(static_cast<OfficeIndex>(partial.size()));
  for (CandidateIndex c = off.first; c < off.last; ++c) {
    partial.push_back(c);
    brute_force(e, p, partial, best, optima);
    partial.pop_back();
  }
}

std::vector<std::string> violating_candidates(const Election& e, const std::vector<GjrViolation>& vs) {
  std::vector<std::string> out;
  for (const GjrViolation& v : vs) out.push_back(e.candidate(v.candidate).id);
  return out;
}

}  // namespace

TEST_CASE("pav_score on the four-voter example") {
  const Election e = four_voter_election();
  const ApprovalProfile p = four_voter_profile(e);
  CHECK(pav_score(e, p, make_committee(e, {{"o1", "A1"}, {"o2", "A2"}})) == Score(3));
  CHECK(pav_score(e, p, make_committee(e, {{"o1", "A1"}, {"o2", "B2"}})) == Score(4));

  const ApprovalProfile nobody = make_ballots(e, {{"v1", {}}, {"v2", {"B1"}}});
  CHECK(pav_score(e, nobody, make_committee(e, {{"o1", "A1"}, {"o2", "A2"}})).to_string() == "0/1");
}

TEST_CASE("exact_pav small cases") {
  SUBCASE("single office") {
    const Election e = make_election({{"o1", {"a", "b"}}});
    const ApprovalProfile p = make_ballots(e, {{"v1", {"a"}}, {"v2", {"a"}}});
    const PavOptimum opt = exact_pav(e, p);
    CHECK(opt.optimal_score == Score(2));
    CHECK(opt.optima == std::vector<Committee>{Committee({0})});
  }
  SUBCASE("four-voter example has two optima") {
    const Election e = four_voter_election();
    const ApprovalProfile p = four_voter_profile(e);
    const PavOptimum opt = exact_pav(e, p);
    CHECK(opt.optimal_score == Score(4));
    CHECK(opt.optima == std::vector<Committee>{make_committee(e, {{"o1", "A1"}, {"o2", "B2"}}),
                                               make_committee(e, {{"o1", "B1"}, {"o2", "A2"}})});
  }
  SUBCASE("no approvals: every committee is optimal") {
    const Election e = make_election({{"o1", {"a", "b"}}, {"o2", {"c", "d", "f"}}});
    const ApprovalProfile p = make_ballots(e, {{"v1", {}}});
    const PavOptimum opt = exact_pav(e, p);
    CHECK(opt.optimal_score == Score(0));
    CHECK(opt.optima.size() == 6);
  }
  SUBCASE("budget guard") {
    const Election e = four_voter_election();
    const ApprovalProfile p = four_voter_profile(e);
    CHECK_THROWS_WITH_AS(exact_pav(e, p, 3), doctest::Contains("SearchBudgetExceeded"), Error);
    CHECK_THROWS_AS(reference::exact_pav(e, p, 3), Error);
    CHECK_NOTHROW(exact_pav(e, p, 4));
  }
}

TEST_CASE("exact_pav agrees with the serial reference and an independent brute force") {
  const int saved = omp_get_max_threads();
  omp_set_num_threads(3);
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 150; ++trial) {
    const Instance inst = random_instance(rng, 8, 4, 3);
    const PavOptimum parallel = exact_pav(inst.election, inst.profile);
    const PavOptimum serial = reference::exact_pav(inst.election, inst.profile);
    Score best;
    std::vector<Committee> optima;
    std::vector<CandidateIndex> partial;
    brute_force(inst.election, inst.profile, partial, best, optima);

    CHECK(parallel.optimal_score == best);
    CHECK(parallel.optima == optima);
    CHECK(serial.optimal_score == best);
    CHECK(serial.optima == optima);

    const TallyResult g = greedy_pav(inst.election, inst.profile);
    const Score greedy_score = pav_score(inst.election, inst.profile, g.committee);
    CHECK(greedy_score <= best);
    const bool in_optima = std::find(optima.begin(), optima.end(), g.committee) != optima.end();
    CHECK((greedy_score == best) == in_optima);
  }
  omp_set_num_threads(saved);
}

TEST_CASE("check_gjr on the four-voter example") {
  const Election e = four_voter_election();
  const ApprovalProfile p = four_voter_profile(e);
  CHECK(check_gjr(e, p, make_committee(e, {{"o1", "A1"}, {"o2", "B2"}})).empty());

  const auto vs = check_gjr(e, p, make_committee(e, {{"o1", "A1"}, {"o2", "A2"}}));
  REQUIRE(vs.size() == 2);
  CHECK(violating_candidates(e, vs) == std::vector<std::string>{"B1", "B2"});
  for (const GjrViolation& v : vs) {
    CHECK(v.deserted_group == std::vector<VoterIndex>{2, 3});
    CHECK(v.group_size == 2);
    CHECK(v.threshold == Score(2));
  }
  CHECK(e.office(vs[0].office).id == "o1");
  CHECK(e.office(vs[1].office).id == "o2");
}

TEST_CASE("check_gjr with a single represented voter") {
  const Election e = make_election({{"o1", {"a", "b"}}, {"o2", {"c"}}});
  const ApprovalProfile p = make_ballots(e, {{"v1", {"a", "b", "c"}}});
  CHECK(check_gjr(e, p, make_committee(e, {{"o1", "a"}, {"o2", "c"}})).empty());
  CHECK(check_gjr(e, p, make_committee(e, {{"o1", "b"}, {"o2", "c"}})).empty());
}

TEST_CASE("check_gjr uses the non-strict quota") {
  // n = 4, K = 2: a deserted group of exactly 2 is a violation, 1 is not
  const Election e = make_election({{"o1", {"a", "b"}}, {"o2", {"c"}}});
  const ApprovalProfile exact = make_ballots(e, {{"v1", {"a"}}, {"v2", {"a"}}, {"v3", {"b"}}, {"v4", {"b"}}});
  CHECK(check_gjr(e, exact, make_committee(e, {{"o1", "a"}, {"o2", "c"}})).size() == 1);
  const ApprovalProfile below = make_ballots(e, {{"v1", {"a"}}, {"v2", {"a"}}, {"v3", {"a"}}, {"v4", {"b"}}});
  CHECK(check_gjr(e, below, make_committee(e, {{"o1", "a"}, {"o2", "c"}})).empty());
}

TEST_CASE("a larger bloc can take the only office a cohesive group cares about") {
  // Three voters approve one candidate in every office; two voters approve
  // only c in o1. Greedy elects a in round 1 (3 > 2), after which nothing can
  // represent the pair, and 2 * K = 6 >= n = 5 flags c. The PAV optimum
  // elects c instead.
  const Election e = make_election({{"o1", {"a", "c"}}, {"o2", {"b"}}, {"o3", {"d"}}});
  const ApprovalProfile p = make_ballots(e, {{"x1", {"a", "b", "d"}},
                                             {"x2", {"a", "b", "d"}},
                                             {"x3", {"a", "b", "d"}},
                                             {"g1", {"c"}},
                                             {"g2", {"c"}}});
  const TallyResult g = greedy_pav(e, p);
  CHECK(g.committee == make_committee(e, {{"o1", "a"}, {"o2", "b"}, {"o3", "d"}}));
  const auto vs = check_gjr(e, p, g.committee);
  REQUIRE(vs.size() == 1);
  CHECK(e.candidate(vs[0].candidate).id == "c");
  CHECK(vs[0].group_size == 2);
  CHECK(vs[0].threshold == Score(5, 3));

  const PavOptimum opt = exact_pav(e, p);
  CHECK(opt.optimal_score == Score(13, 2));
  CHECK(opt.optima == std::vector<Committee>{make_committee(e, {{"o1", "c"}, {"o2", "b"}, {"o3", "d"}})});
  CHECK(check_gjr(e, p, opt.optima[0]).empty());
}

TEST_CASE("property: adding approvals of committee members never creates a GJR violation") {
  std::mt19937_64 rng(404);
  for (int trial = 0; trial < 300; ++trial) {
    const Instance inst = random_instance(rng, 8, 3, 3);
    const Election& e = inst.election;
    std::vector<CandidateIndex> winners;
    for (const Office& off : e.offices()) winners.push_back(off.first + static_cast<CandidateIndex>(rng() % off.size()));
    const Committee committee(winners);
    const auto before = violating_candidates(e, check_gjr(e, inst.profile, committee));

    std::vector<Voter> voters(inst.profile.voters().begin(), inst.profile.voters().end());
    Voter& lucky = voters[rng() % voters.size()];
    lucky.approvals.push_back(winners[rng() % winners.size()]);
    const ApprovalProfile enlarged = make_profile(e, std::move(voters));
    const auto after = violating_candidates(e, check_gjr(e, enlarged, committee));

    for (const std::string& c : after) CHECK(std::find(before.begin(), before.end(), c) != before.end());
  }
}

TEST_CASE("plurality_baseline") {
  SUBCASE("four-voter ties go to the first-listed candidates") {
    const Election e = four_voter_election();
    CHECK(plurality_baseline(e, four_voter_profile(e)) == make_committee(e, {{"o1", "A1"}, {"o2", "A2"}}));
  }
  SUBCASE("strict majority") {
    const Election e = make_election({{"o1", {"a", "b"}}});
    const ApprovalProfile p = make_ballots(e, {{"v1", {"a"}}, {"v2", {"a"}}, {"v3", {"a"}}, {"v4", {"b"}}});
    CHECK(plurality_baseline(e, p) == Committee({0}));
  }
  SUBCASE("later candidate wins with more approvals") {
    const Election e = make_election({{"o1", {"a", "b"}}});
    const ApprovalProfile p = make_ballots(e, {{"v1", {"b"}}});
    CHECK(plurality_baseline(e, p) == Committee({1}));
  }
  SUBCASE("property: winner count dominates its office") {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 200; ++trial) {
      const Instance inst = random_instance(rng, 10, 4, 4);
      const Committee c = plurality_baseline(inst.election, inst.profile);
      for (const Office& off : inst.election.offices()) {
        const auto o = inst.election.candidate(off.first).office;
        for (CandidateIndex x = off.first; x < off.last; ++x)
          CHECK(inst.profile.approvers(c.winner(o)).size() >= inst.profile.approvers(x).size());
      }
    }
  }
}

TEST_CASE("approximation_ratio") {
  const Election e = four_voter_election();
  CHECK(approximation_ratio(e, four_voter_profile(e)) == Score(1));

  const ApprovalProfile unanimous = make_ballots(e, {{"v1", {"B1", "A2"}}, {"v2", {"B1", "A2"}}});
  CHECK(approximation_ratio(e, unanimous) == Score(1));

  const ApprovalProfile empty = make_ballots(e, {{"v1", {}}});
  CHECK_THROWS_WITH_AS(approximation_ratio(e, empty), doctest::Contains("DegenerateInstance"), Error);
  CHECK_THROWS_WITH_AS(approximation_ratio(e, unanimous, 2), doctest::Contains("SearchBudgetExceeded"), Error);

  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    const Instance inst = random_instance(rng, 8, 3, 3);
    if (exact_pav(inst.election, inst.profile).optimal_score.is_zero()) continue;
    const Score ratio = approximation_ratio(inst.election, inst.profile);
    CHECK(ratio >= Score(1, 2));
    CHECK(ratio <= Score(1));
  }
}
