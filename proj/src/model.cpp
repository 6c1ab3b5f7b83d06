#include "govpav/model.hpp"

#include <algorithm>
#include <limits>

#include "govpav/error.hpp"

namespace govpav {

namespace {

bool valid_token(std::string_view s) {
  if (s.empty()) return false;
  return std::none_of(s.begin(), s.end(), [](char ch) {
    auto u = static_cast<unsigned char>(ch);
    return u < 0x20 || u == 0x7f;
  });
}

std::string office_path(std::size_t o) { return "$.offices[" + std::to_string(o) + "]"; }

std::string candidate_path(std::size_t o, std::size_t c) {
  return office_path(o) + ".candidates[" + std::to_string(c) + "]";
}

std::string voter_path(std::size_t v) { return "$.voters[" + std::to_string(v) + "]"; }

}  // namespace

std::span<const Candidate> Election::candidates_of(OfficeIndex o) const {
  const Office& off = offices_.at(o);
  return std::span<const Candidate>(candidates_).subspan(off.first, off.size());
}

std::optional<OfficeIndex> Election::find_office(std::string_view id) const {
  auto it = office_lookup_.find(id);
  if (it == office_lookup_.end()) return std::nullopt;
  return it->second;
}

std::optional<CandidateIndex> Election::find_candidate(std::string_view id) const {
  auto it = candidate_lookup_.find(id);
  if (it == candidate_lookup_.end()) return std::nullopt;
  return it->second;
}

std::uint64_t Election::committee_count() const {
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t total = 1;
  for (const Office& o : offices_) {
    if (total > kMax / o.size()) return kMax;
    total *= o.size();
  }
  return total;
}

Election validate_election(const RawElection& raw) {
  if (raw.offices.empty()) throw Error(ErrorKind::EmptyElection, "election has no offices", "$.offices");

  Election e;
  e.name_ = raw.name;
  for (std::size_t o = 0; o < raw.offices.size(); ++o) {
    const RawOffice& ro = raw.offices[o];
    if (!valid_token(ro.id))
      throw Error(ErrorKind::InvalidIdentifier, "office id must be a non-empty token", office_path(o) + ".id");
    const auto office_index = static_cast<OfficeIndex>(o);
    if (!e.office_lookup_.emplace(ro.id, office_index).second)
      throw Error(ErrorKind::DuplicateOfficeId, "office id '" + ro.id + "' repeats", office_path(o) + ".id");
    if (ro.candidates.empty())
      throw Error(ErrorKind::EmptyOffice, "office '" + ro.id + "' has no candidates", office_path(o) + ".candidates");

    Office office{ro.id, ro.name, static_cast<CandidateIndex>(e.candidates_.size()), 0};
    for (std::size_t c = 0; c < ro.candidates.size(); ++c) {
      const RawCandidate& rc = ro.candidates[c];
      if (!valid_token(rc.id))
        throw Error(ErrorKind::InvalidIdentifier, "candidate id must be a non-empty token",
                    candidate_path(o, c) + ".id");
      const auto index = static_cast<CandidateIndex>(e.candidates_.size());
      if (!e.candidate_lookup_.emplace(rc.id, index).second)
        throw Error(ErrorKind::DuplicateCandidateId, "candidate id '" + rc.id + "' already used",
                    candidate_path(o, c) + ".id");
      e.candidates_.push_back(Candidate{rc.id, rc.name, office_index});
    }
    office.last = static_cast<CandidateIndex>(e.candidates_.size());
    e.offices_.push_back(std::move(office));
  }
  return e;
}

ApprovalProfile make_profile(const Election& election, std::vector<Voter> voters) {
  ApprovalProfile p;
  p.num_offices_ = election.num_offices();
  p.num_candidates_ = election.num_candidates();

  for (std::size_t v = 0; v < voters.size(); ++v) {
    Voter& voter = voters[v];
    if (!valid_token(voter.id))
      throw Error(ErrorKind::InvalidIdentifier, "voter id must be a non-empty token", voter_path(v) + ".voter_id");
    if (!p.voter_lookup_.emplace(voter.id, static_cast<VoterIndex>(v)).second)
      throw Error(ErrorKind::DuplicateVoterId, "voter id '" + voter.id + "' repeats", voter_path(v) + ".voter_id");
    std::sort(voter.approvals.begin(), voter.approvals.end());
    voter.approvals.erase(std::unique(voter.approvals.begin(), voter.approvals.end()), voter.approvals.end());
    if (!voter.approvals.empty() && voter.approvals.back() >= p.num_candidates_)
      throw Error(ErrorKind::InconsistentInput, "approval index out of range", voter_path(v));
  }

  std::vector<std::size_t> counts(p.num_candidates_ + 1, 0);
  for (const Voter& voter : voters)
    for (CandidateIndex c : voter.approvals) ++counts[c + 1];
  for (std::size_t c = 1; c < counts.size(); ++c) counts[c] += counts[c - 1];
  p.approver_offsets_ = counts;
  p.approver_ids_.resize(counts.back());
  for (std::size_t v = 0; v < voters.size(); ++v)
    for (CandidateIndex c : voters[v].approvals) p.approver_ids_[counts[c]++] = static_cast<VoterIndex>(v);

  p.voters_ = std::move(voters);
  return p;
}

ApprovalProfile validate_profile(const Election& election, const RawProfile& raw) {
  std::vector<Voter> voters;
  voters.reserve(raw.size());
  for (std::size_t v = 0; v < raw.size(); ++v) {
    const RawBallot& ballot = raw[v];
    Voter voter{ballot.voter_id, {}};
    for (const auto& [office_id, candidate_ids] : ballot.approvals) {
      const std::string where = voter_path(v) + ".approvals." + office_id;
      auto office = election.find_office(office_id);
      if (!office) throw Error(ErrorKind::UnknownOfficeId, "unknown office '" + office_id + "'", where);
      for (std::size_t i = 0; i < candidate_ids.size(); ++i) {
        const std::string& cid = candidate_ids[i];
        auto candidate = election.find_candidate(cid);
        const std::string at = where + "[" + std::to_string(i) + "]";
        if (!candidate) throw Error(ErrorKind::UnknownCandidateId, "unknown candidate '" + cid + "'", at);
        if (election.candidate(*candidate).office != *office)
          throw Error(ErrorKind::CandidateOfficeMismatch,
                      "candidate '" + cid + "' does not run for office '" + office_id + "'", at);
        voter.approvals.push_back(*candidate);
      }
    }
    voters.push_back(std::move(voter));
  }
  return make_profile(election, std::move(voters));
}

std::span<const VoterIndex> ApprovalProfile::approvers(CandidateIndex c) const {
  if (c >= num_candidates_) throw Error(ErrorKind::UnknownCandidate, "candidate index out of range");
  return std::span<const VoterIndex>(approver_ids_)
      .subspan(approver_offsets_[c], approver_offsets_[c + 1] - approver_offsets_[c]);
}

std::optional<VoterIndex> ApprovalProfile::find_voter(std::string_view id) const {
  auto it = voter_lookup_.find(id);
  if (it == voter_lookup_.end()) return std::nullopt;
  return it->second;
}

bool ApprovalProfile::consistent_with(const Election& e) const noexcept {
  return num_offices_ == e.num_offices() && num_candidates_ == e.num_candidates();
}

Committee make_committee(const Election& election,
                         const std::vector<std::pair<std::string, std::string>>& assignment) {
  constexpr auto kUnset = std::numeric_limits<CandidateIndex>::max();
  std::vector<CandidateIndex> winners(election.num_offices(), kUnset);
  for (const auto& [office_id, candidate_id] : assignment) {
    const std::string where = "$." + office_id;
    auto office = election.find_office(office_id);
    if (!office) throw Error(ErrorKind::UnknownOfficeId, "unknown office '" + office_id + "'", where);
    auto candidate = election.find_candidate(candidate_id);
    if (!candidate) throw Error(ErrorKind::UnknownCandidateId, "unknown candidate '" + candidate_id + "'", where);
    if (election.candidate(*candidate).office != *office)
      throw Error(ErrorKind::CandidateOfficeMismatch,
                  "candidate '" + candidate_id + "' does not run for office '" + office_id + "'", where);
    if (winners[*office] != kUnset && winners[*office] != *candidate)
      throw Error(ErrorKind::InconsistentInput, "office '" + office_id + "' assigned twice", where);
    winners[*office] = *candidate;
  }
  for (std::size_t o = 0; o < winners.size(); ++o)
    if (winners[o] == kUnset)
      throw Error(ErrorKind::IncompleteCommittee, "no winner for office '" + election.office(o).id + "'", "$");
  return Committee(std::move(winners));
}

void check_committee(const Election& election, const Committee& committee) {
  if (committee.size() != election.num_offices())
    throw Error(ErrorKind::InconsistentInput, "committee does not fill every office");
  for (std::size_t o = 0; o < committee.size(); ++o)
    if (!election.office(static_cast<OfficeIndex>(o)).contains(committee.winner(static_cast<OfficeIndex>(o))))
      throw Error(ErrorKind::InconsistentInput, "committee member does not run for its office");
}

void check_profile(const Election& election, const ApprovalProfile& profile) {
  if (!profile.consistent_with(election))
    throw Error(ErrorKind::InconsistentInput, "profile was built for a different election");
}

RawElection to_raw(const Election& election) {
  RawElection raw{election.name(), {}};
  for (std::size_t o = 0; o < election.num_offices(); ++o) {
    const Office& office = election.office(static_cast<OfficeIndex>(o));
    RawOffice ro{office.id, office.display_name, {}};
    for (const Candidate& c : election.candidates_of(static_cast<OfficeIndex>(o)))
      ro.candidates.push_back(RawCandidate{c.id, c.display_name});
    raw.offices.push_back(std::move(ro));
  }
  return raw;
}

RawProfile to_raw(const Election& election, const ApprovalProfile& profile) {
  RawProfile raw;
  raw.reserve(profile.size());
  for (const Voter& voter : profile.voters()) {
    RawBallot ballot{voter.id, {}};
    for (CandidateIndex c : voter.approvals) {
      const Candidate& cand = election.candidate(c);
      const std::string& office_id = election.office(cand.office).id;
      if (ballot.approvals.empty() || ballot.approvals.back().first != office_id)
        ballot.approvals.emplace_back(office_id, std::vector<std::string>{});
      ballot.approvals.back().second.push_back(cand.id);
    }
    raw.push_back(std::move(ballot));
  }
  return raw;
}

}  // namespace govpav
