#pragma once

#include <cstdint>
#include <vector>

#include "govpav/greedy.hpp"
#include "govpav/model.hpp"
#include "govpav/score.hpp"

namespace govpav {

inline constexpr std::uint64_t kDefaultSearchBudget = 1'000'000;

/// Witness that a committee leaves a large enough group unrepresented: every
/// voter in `deserted_group` approves `candidate` and no committee member.
struct GjrViolation {
  CandidateIndex candidate = 0;
  OfficeIndex office = 0;
  std::vector<VoterIndex> deserted_group;  // profile order
  std::uint64_t group_size = 0;
  Score threshold;  // n/K

  friend bool operator==(const GjrViolation&, const GjrViolation&) = default;
};

struct PavOptimum {
  Score optimal_score;
  std::vector<Committee> optima;  // lexicographic in election order
};

/// Sum over voters of H(t_v), t_v = number of committee members v approves.
Score pav_score(const Election& election, const ApprovalProfile& profile, const Committee& committee);

/// Exhaustive maximisation of pav_score. Enumeration is split across OpenMP
/// threads; reference::exact_pav is the serial depth-first version.
PavOptimum exact_pav(const Election& election, const ApprovalProfile& profile,
                     std::uint64_t budget = kDefaultSearchBudget);

/// One violation per non-elected candidate c whose deserted group G(c)
/// satisfies |G(c)| * K >= n. Empty result means the committee provides GJR.
std::vector<GjrViolation> check_gjr(const Election& election, const ApprovalProfile& profile,
                                    const Committee& committee);

/// Most approvals per office, independently; ties go to the earlier candidate.
Committee plurality_baseline(const Election& election, const ApprovalProfile& profile);

/// pav_score(greedy committee) / optimal score.
Score approximation_ratio(const Election& election, const ApprovalProfile& profile,
                          std::uint64_t budget = kDefaultSearchBudget);

}  // namespace govpav
