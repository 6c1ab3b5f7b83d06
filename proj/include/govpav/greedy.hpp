#pragma once

#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

#include "govpav/model.hpp"
#include "govpav/score.hpp"

namespace govpav {

/// Per-voter satisfaction during the greedy rounds. A voter's weight is
/// derived as 1/(1+s_v) and never stored.
class TallyState {
 public:
  TallyState(const Election& election, const ApprovalProfile& profile);

  std::uint32_t satisfaction(VoterIndex v) const { return satisfaction_.at(v); }
  std::span<const std::uint32_t> satisfaction() const noexcept { return satisfaction_; }
  Score weight(VoterIndex v) const { return Score::harmonic_weight(satisfaction(v)); }

  bool filled(OfficeIndex o) const { return filled_.at(o) != 0; }
  std::size_t filled_count() const noexcept { return filled_count_; }

  /// Marks the winner's office filled and bumps s_v for its approvers.
  /// Returns the voters whose satisfaction increased, in profile order.
  std::vector<VoterIndex> elect(const Election& election, const ApprovalProfile& profile,
                                CandidateIndex winner);

 private:
  std::vector<std::uint32_t> satisfaction_;
  std::vector<char> filled_;
  std::size_t filled_count_ = 0;
};

struct ScoredCandidate {
  CandidateIndex candidate;
  Score score;

  friend bool operator==(const ScoredCandidate&, const ScoredCandidate&) = default;
};

struct RoundRecord {
  std::uint32_t round_index = 0;  // 1-based
  // every candidate of every office still unfilled at the start of the round,
  // in election order
  std::vector<ScoredCandidate> candidate_scores;
  OfficeIndex winner_office = 0;
  CandidateIndex winner_candidate = 0;
  Score winner_score;
  // other candidates reaching the winning score, in election order
  std::vector<CandidateIndex> tied_with;
  std::vector<VoterIndex> satisfied_voters;
  // the office was decided with a winning score of 0 (nobody left to please)
  bool zero_support = false;

  friend bool operator==(const RoundRecord&, const RoundRecord&) = default;
};

struct AuditTrail {
  std::vector<RoundRecord> rounds;

  friend bool operator==(const AuditTrail&, const AuditTrail&) = default;
};

struct TallyResult {
  Committee committee;
  AuditTrail trail;

  friend bool operator==(const TallyResult&, const TallyResult&) = default;
};

/// Sum over approvers v of `candidate` of 1/(1+s_v). Throws
/// OfficeAlreadyFilled or UnknownCandidate.
Score marginal_score(const Election& election, const ApprovalProfile& profile,
                     const TallyState& state, std::string_view office_id,
                     std::string_view candidate_id);

/// Index form of marginal_score without the precondition checks.
Score marginal_score(const ApprovalProfile& profile, const TallyState& state,
                     CandidateIndex candidate);

/// GreedyPAV over the partition "one winner per office". Each of the K rounds
/// scores every candidate of every unfilled office, elects the maximum (ties
/// go to the earliest office, then the earliest candidate) and reweights.
/// The per-round candidate scan runs on OpenMP threads; the result is
/// identical to reference::greedy_pav.
TallyResult greedy_pav(const Election& election, const ApprovalProfile& profile);

}  // namespace govpav
