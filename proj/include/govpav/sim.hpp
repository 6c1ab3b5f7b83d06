#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "govpav/model.hpp"
#include "govpav/oracle.hpp"
#include "govpav/score.hpp"

namespace govpav::sim {

struct Bloc {
  std::string label;
  std::uint64_t voter_count = 0;
  // office id -> approved candidate ids
  std::vector<std::pair<std::string, std::vector<std::string>>> approved;
};

/// A synthetic electorate made of blocs with identical approvals.
///
/// With `noise` > 0 each member, independently per office, has probability
/// `noise` of replacing the bloc's approvals in that office by one candidate
/// drawn uniformly from the office. Draws come from a mt19937_64 seeded with
/// `seed`, consumed voter by voter in bloc order, so the same spec always
/// yields the same profile on every platform.
struct BlocSpec {
  std::string name;
  std::vector<Bloc> blocs;
  std::uint64_t seed = 0;
  double noise = 0.0;
};

/// Members of bloc "label" are named "label-1", "label-2", ...
ApprovalProfile generate_profile(const Election& election, const BlocSpec& spec);

struct BlocShare {
  std::string label;
  Score share;
};

/// Per bloc, the fraction of offices whose winner the bloc approves.
std::vector<BlocShare> representation_share(const Election& election, const ApprovalProfile& profile,
                                            const Committee& committee, const BlocSpec& spec);

struct ReportRow {
  std::string spec;
  std::string rule;  // "greedy_pav" or "plurality"
  std::string bloc;
  Score share;
  std::uint64_t gjr_violations = 0;
  std::optional<Score> approximation_ratio;  // absent when over budget or degenerate
};

/// Both rules over every spec. Rows are ordered by spec index, then rule
/// name, then bloc order. Specs are evaluated on OpenMP threads.
std::vector<ReportRow> run_experiment(const Election& election, const std::vector<BlocSpec>& specs,
                                      std::uint64_t budget = kDefaultSearchBudget);

/// Columns: spec,rule,bloc,share_num,share_den,gjr_violations
std::string write_report_csv(const std::vector<ReportRow>& rows);
std::string write_report_text(const std::vector<ReportRow>& rows);

/// {"specs": [{"name", "seed", "noise", "blocs": [{"label", "voters", "approvals": {office: [ids]}}]}]}
/// A bare array of spec objects is accepted too.
std::vector<BlocSpec> parse_specs(std::string_view bytes);

}  // namespace govpav::sim
