#pragma once

// Serial reference implementations of the parallel kernels. They follow the
// textbook definition as literally as possible and are used by the tests and
// the benchmark to check and measure greedy_pav / exact_pav.

#include "govpav/greedy.hpp"
#include "govpav/oracle.hpp"

namespace govpav::reference {

/// Voter-major greedy: every round walks all voters and adds 1/(1+s_v) to
/// each approved candidate of an unfilled office.
TallyResult greedy_pav(const Election& election, const ApprovalProfile& profile);

/// Depth-first enumeration over offices in election order, scoring each
/// complete committee with pav_score. No pruning.
PavOptimum exact_pav(const Election& election, const ApprovalProfile& profile,
                     std::uint64_t budget = kDefaultSearchBudget);

}  // namespace govpav::reference
