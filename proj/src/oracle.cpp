#include "govpav/oracle.hpp"

#include <omp.h>

#include <algorithm>

#include "govpav/error.hpp"

namespace govpav {

namespace {

std::vector<char> elected_mask(const Election& election, const Committee& committee) {
  std::vector<char> elected(election.num_candidates(), 0);
  for (CandidateIndex c : committee.winners()) elected[c] = 1;
  return elected;
}

std::vector<Score> harmonic_table(std::size_t max_t) {
  std::vector<Score> h(max_t + 1);
  for (std::size_t t = 1; t <= max_t; ++t) h[t] = h[t - 1] + Score::harmonic_weight(t - 1);
  return h;
}

Committee decode(const Election& election, std::uint64_t index) {
  // office 0 is the most significant digit, so increasing index walks
  // committees in the same order as a depth-first search over offices
  std::vector<CandidateIndex> winners(election.num_offices());
  for (std::size_t o = election.num_offices(); o-- > 0;) {
    const Office& off = election.office(static_cast<OfficeIndex>(o));
    winners[o] = off.first + static_cast<CandidateIndex>(index % off.size());
    index /= off.size();
  }
  return Committee(std::move(winners));
}

void check_budget(const Election& election, std::uint64_t budget) {
  const std::uint64_t total = election.committee_count();
  if (total > budget)
    throw Error(ErrorKind::SearchBudgetExceeded,
                std::to_string(total) + " committees exceed the budget of " + std::to_string(budget));
}

}  // namespace

Score pav_score(const Election& election, const ApprovalProfile& profile, const Committee& committee) {
  check_profile(election, profile);
  check_committee(election, committee);
  const std::vector<char> elected = elected_mask(election, committee);
  Score total;
  for (const Voter& voter : profile.voters()) {
    std::uint64_t t = 0;
    for (CandidateIndex c : voter.approvals) t += elected[c] ? 1 : 0;
    total += Score::harmonic_number(t);
  }
  return total;
}

PavOptimum exact_pav(const Election& election, const ApprovalProfile& profile, std::uint64_t budget) {
  check_profile(election, profile);
  check_budget(election, budget);

  const std::uint64_t total = election.committee_count();
  const std::size_t k = election.num_offices();
  const std::vector<Score> harmonic = harmonic_table(k);

  Score best_score;
  std::vector<std::uint64_t> best_indices;
  bool have_best = false;

#pragma omp parallel
  {
    Score local_score;
    std::vector<std::uint64_t> local_indices;
    bool local_have = false;
    std::vector<char> elected(election.num_candidates(), 0);
    std::vector<std::uint64_t> level_count(k + 1);

#pragma omp for schedule(static)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(total); ++i) {
      const Committee committee = decode(election, static_cast<std::uint64_t>(i));
      for (CandidateIndex c : committee.winners()) elected[c] = 1;
      std::fill(level_count.begin(), level_count.end(), 0);
      for (const Voter& voter : profile.voters()) {
        std::size_t t = 0;
        for (CandidateIndex c : voter.approvals) t += elected[c] ? 1 : 0;
        ++level_count[t];
      }
      for (CandidateIndex c : committee.winners()) elected[c] = 0;

      Score score;
      for (std::size_t t = 1; t <= k; ++t)
        if (level_count[t] != 0) score += Score(static_cast<std::int64_t>(level_count[t])) * harmonic[t];

      if (!local_have || score > local_score) {
        local_score = std::move(score);
        local_indices.assign(1, static_cast<std::uint64_t>(i));
        local_have = true;
      } else if (score == local_score) {
        local_indices.push_back(static_cast<std::uint64_t>(i));
      }
    }

#pragma omp critical(govpav_exact_pav_merge)
    if (local_have) {
      if (!have_best || local_score > best_score) {
        best_score = local_score;
        best_indices = local_indices;
        have_best = true;
      } else if (local_score == best_score) {
        best_indices.insert(best_indices.end(), local_indices.begin(), local_indices.end());
      }
    }
  }

  std::sort(best_indices.begin(), best_indices.end());
  PavOptimum result{best_score, {}};
  result.optima.reserve(best_indices.size());
  for (std::uint64_t i : best_indices) result.optima.push_back(decode(election, i));
  return result;
}

std::vector<GjrViolation> check_gjr(const Election& election, const ApprovalProfile& profile,
                                    const Committee& committee) {
  check_profile(election, profile);
  check_committee(election, committee);
  const std::vector<char> elected = elected_mask(election, committee);

  std::vector<char> represented(profile.size(), 0);
  for (VoterIndex v = 0; v < profile.size(); ++v)
    for (CandidateIndex c : profile.voter(v).approvals)
      if (elected[c]) represented[v] = 1;

  const std::uint64_t n = profile.size();
  const std::uint64_t k = election.num_offices();
  const Score threshold(static_cast<std::int64_t>(n), static_cast<std::int64_t>(k));

  std::vector<GjrViolation> violations;
  for (CandidateIndex c = 0; c < election.num_candidates(); ++c) {
    if (elected[c]) continue;
    std::vector<VoterIndex> deserted;
    for (VoterIndex v : profile.approvers(c))
      if (!represented[v]) deserted.push_back(v);
    const std::uint64_t size = deserted.size();
    if (size == 0 || size * k < n) continue;
    violations.push_back(GjrViolation{c, election.candidate(c).office, std::move(deserted), size, threshold});
  }
  return violations;
}

Committee plurality_baseline(const Election& election, const ApprovalProfile& profile) {
  check_profile(election, profile);
  std::vector<CandidateIndex> winners;
  winners.reserve(election.num_offices());
  for (const Office& office : election.offices()) {
    CandidateIndex best = office.first;
    for (CandidateIndex c = office.first + 1; c < office.last; ++c)
      if (profile.approvers(c).size() > profile.approvers(best).size()) best = c;
    winners.push_back(best);
  }
  return Committee(std::move(winners));
}

Score approximation_ratio(const Election& election, const ApprovalProfile& profile, std::uint64_t budget) {
  const PavOptimum optimum = exact_pav(election, profile, budget);
  if (optimum.optimal_score.is_zero())
    throw Error(ErrorKind::DegenerateInstance, "optimal PAV score is 0; ratio undefined");
  const TallyResult greedy = greedy_pav(election, profile);
  return pav_score(election, profile, greedy.committee) / optimum.optimal_score;
}

}  // namespace govpav
