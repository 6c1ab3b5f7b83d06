#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace govpav {

// Candidates are numbered globally in election order: all candidates of the
// first office, then the second, and so on. That order is the tie-break order.
using OfficeIndex = std::uint32_t;
using CandidateIndex = std::uint32_t;
using VoterIndex = std::uint32_t;

struct Candidate {
  std::string id;
  std::string display_name;
  OfficeIndex office = 0;

  friend bool operator==(const Candidate&, const Candidate&) = default;
};

struct Office {
  std::string id;
  std::string display_name;
  CandidateIndex first = 0;  // [first, last) in the global candidate numbering
  CandidateIndex last = 0;

  std::size_t size() const { return last - first; }
  bool contains(CandidateIndex c) const { return c >= first && c < last; }

  friend bool operator==(const Office&, const Office&) = default;
};

// Unvalidated, document-shaped input.
struct RawCandidate {
  std::string id;
  std::string name;
};

struct RawOffice {
  std::string id;
  std::string name;
  std::vector<RawCandidate> candidates;
};

struct RawElection {
  std::string name;
  std::vector<RawOffice> offices;
};

struct RawBallot {
  std::string voter_id;
  // office id -> approved candidate ids; an office may be absent or empty
  std::vector<std::pair<std::string, std::vector<std::string>>> approvals;
};

using RawProfile = std::vector<RawBallot>;

/// K offices with pairwise disjoint candidate sets. Immutable once validated.
class Election {
 public:
  const std::string& name() const noexcept { return name_; }
  std::span<const Office> offices() const noexcept { return offices_; }
  std::span<const Candidate> candidates() const noexcept { return candidates_; }
  std::size_t num_offices() const noexcept { return offices_.size(); }
  std::size_t num_candidates() const noexcept { return candidates_.size(); }

  const Office& office(OfficeIndex o) const { return offices_.at(o); }
  const Candidate& candidate(CandidateIndex c) const { return candidates_.at(c); }
  std::span<const Candidate> candidates_of(OfficeIndex o) const;

  std::optional<OfficeIndex> find_office(std::string_view id) const;
  std::optional<CandidateIndex> find_candidate(std::string_view id) const;

  /// Number of complete committees, saturating at UINT64_MAX.
  std::uint64_t committee_count() const;

  friend bool operator==(const Election& a, const Election& b) {
    return a.name_ == b.name_ && a.offices_ == b.offices_ && a.candidates_ == b.candidates_;
  }

 private:
  friend Election validate_election(const RawElection& raw);

  std::string name_;
  std::vector<Office> offices_;
  std::vector<Candidate> candidates_;
  std::map<std::string, OfficeIndex, std::less<>> office_lookup_;
  std::map<std::string, CandidateIndex, std::less<>> candidate_lookup_;
};

struct Voter {
  std::string id;
  std::vector<CandidateIndex> approvals;  // sorted, unique

  friend bool operator==(const Voter&, const Voter&) = default;
};

/// Per-voter approval sets, plus an inverted index (candidate -> approving
/// voters) that the tally kernels scan.
class ApprovalProfile {
 public:
  std::span<const Voter> voters() const noexcept { return voters_; }
  const Voter& voter(VoterIndex v) const { return voters_.at(v); }
  std::size_t size() const noexcept { return voters_.size(); }
  bool empty() const noexcept { return voters_.empty(); }

  std::span<const VoterIndex> approvers(CandidateIndex c) const;
  std::optional<VoterIndex> find_voter(std::string_view id) const;

  /// True when this profile was built against an election of the same shape.
  bool consistent_with(const Election& e) const noexcept;

  friend bool operator==(const ApprovalProfile& a, const ApprovalProfile& b) {
    return a.voters_ == b.voters_ && a.num_offices_ == b.num_offices_ &&
           a.num_candidates_ == b.num_candidates_;
  }

 private:
  friend ApprovalProfile make_profile(const Election& election, std::vector<Voter> voters);

  std::vector<Voter> voters_;
  std::size_t num_offices_ = 0;
  std::size_t num_candidates_ = 0;
  std::vector<std::size_t> approver_offsets_;  // CSR over candidates
  std::vector<VoterIndex> approver_ids_;
  std::map<std::string, VoterIndex, std::less<>> voter_lookup_;
};

/// Exactly one winner per office, indexed by office position.
class Committee {
 public:
  Committee() = default;
  explicit Committee(std::vector<CandidateIndex> winners) : winners_(std::move(winners)) {}

  std::span<const CandidateIndex> winners() const noexcept { return winners_; }
  CandidateIndex winner(OfficeIndex o) const { return winners_.at(o); }
  std::size_t size() const noexcept { return winners_.size(); }

  friend bool operator==(const Committee&, const Committee&) = default;
  friend auto operator<=>(const Committee&, const Committee&) = default;

 private:
  std::vector<CandidateIndex> winners_;
};

Election validate_election(const RawElection& raw);

/// Validates approvals against `election`. An empty profile is accepted here;
/// callers that need n >= 1 check it themselves.
ApprovalProfile validate_profile(const Election& election, const RawProfile& raw);

/// Builds a profile from index-form voters. Sorts and deduplicates approvals.
ApprovalProfile make_profile(const Election& election, std::vector<Voter> voters);

/// Builds a committee from an office id -> candidate id assignment.
Committee make_committee(const Election& election,
                         const std::vector<std::pair<std::string, std::string>>& assignment);

/// Throws InconsistentInput unless `committee` is a complete assignment for `election`.
void check_committee(const Election& election, const Committee& committee);

/// Throws InconsistentInput unless the profile was built against this election shape.
void check_profile(const Election& election, const ApprovalProfile& profile);

RawElection to_raw(const Election& election);
RawProfile to_raw(const Election& election, const ApprovalProfile& profile);

}  // namespace govpav
