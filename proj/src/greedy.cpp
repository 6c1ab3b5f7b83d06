#include "govpav/greedy.hpp"

#include <omp.h>

#include <algorithm>

#include "govpav/error.hpp"

namespace govpav {

namespace {

// Sum of count[s] / (s + 1) over satisfaction levels s, over one common
// denominator lcm(1..levels).
Score sum_level_weights(std::span<const std::uint64_t> count) {
  using Integer = Score::Integer;
  Integer common = 1;
  for (std::size_t s = 1; s <= count.size(); ++s) common = boost::multiprecision::lcm(common, Integer(s));
  Integer numerator = 0;
  for (std::size_t s = 0; s < count.size(); ++s)
    if (count[s] != 0) numerator += Integer(count[s]) * (common / (s + 1));
  return Score(Score::Rational(numerator, common));
}

std::vector<CandidateIndex> open_candidates(const Election& election, const TallyState& state) {
  std::vector<CandidateIndex> pool;
  for (std::size_t o = 0; o < election.num_offices(); ++o) {
    const auto office = static_cast<OfficeIndex>(o);
    if (state.filled(office)) continue;
    const Office& off = election.office(office);
    for (CandidateIndex c = off.first; c < off.last; ++c) pool.push_back(c);
  }
  return pool;
}

}  // namespace

TallyState::TallyState(const Election& election, const ApprovalProfile& profile)
    : satisfaction_(profile.size(), 0), filled_(election.num_offices(), 0) {
  check_profile(election, profile);
}

std::vector<VoterIndex> TallyState::elect(const Election& election, const ApprovalProfile& profile,
                                          CandidateIndex winner) {
  const OfficeIndex office = election.candidate(winner).office;
  if (filled(office))
    throw Error(ErrorKind::OfficeAlreadyFilled, "office '" + election.office(office).id + "' is already filled");
  filled_[office] = 1;
  ++filled_count_;
  std::vector<VoterIndex> satisfied;
  for (VoterIndex v : profile.approvers(winner)) {
    ++satisfaction_[v];
    satisfied.push_back(v);
  }
  return satisfied;
}

Score marginal_score(const ApprovalProfile& profile, const TallyState& state, CandidateIndex candidate) {
  std::vector<std::uint64_t> count(state.filled_count() + 1, 0);
  for (VoterIndex v : profile.approvers(candidate)) ++count[state.satisfaction(v)];
  return sum_level_weights(count);
}

Score marginal_score(const Election& election, const ApprovalProfile& profile, const TallyState& state,
                     std::string_view office_id, std::string_view candidate_id) {
  check_profile(election, profile);
  auto office = election.find_office(office_id);
  if (!office) throw Error(ErrorKind::UnknownOfficeId, "unknown office '" + std::string(office_id) + "'");
  auto candidate = election.find_candidate(candidate_id);
  if (!candidate || election.candidate(*candidate).office != *office)
    throw Error(ErrorKind::UnknownCandidate,
                "'" + std::string(candidate_id) + "' is not a candidate for '" + std::string(office_id) + "'");
  if (state.filled(*office))
    throw Error(ErrorKind::OfficeAlreadyFilled, "office '" + std::string(office_id) + "' is already filled");
  return marginal_score(profile, state, *candidate);
}

TallyResult greedy_pav(const Election& election, const ApprovalProfile& profile) {
  TallyState state(election, profile);
  std::vector<CandidateIndex> winners(election.num_offices(), 0);
  AuditTrail trail;

  for (std::uint32_t round = 1; round <= election.num_offices(); ++round) {
    const std::vector<CandidateIndex> pool = open_candidates(election, state);
    std::vector<Score> scores(pool.size());

    const auto pool_size = static_cast<std::ptrdiff_t>(pool.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t i = 0; i < pool_size; ++i) scores[i] = marginal_score(profile, state, pool[i]);

    // first maximum in election order is the tie-break winner
    std::size_t best = 0;
    for (std::size_t i = 1; i < pool.size(); ++i)
      if (scores[i] > scores[best]) best = i;

    RoundRecord rec;
    rec.round_index = round;
    rec.winner_candidate = pool[best];
    rec.winner_office = election.candidate(pool[best]).office;
    rec.winner_score = scores[best];
    rec.zero_support = scores[best].is_zero();
    rec.candidate_scores.reserve(pool.size());
    for (std::size_t i = 0; i < pool.size(); ++i) {
      if (i != best && scores[i] == rec.winner_score) rec.tied_with.push_back(pool[i]);
      rec.candidate_scores.push_back(ScoredCandidate{pool[i], std::move(scores[i])});
    }
    rec.satisfied_voters = state.elect(election, profile, rec.winner_candidate);
    winners[rec.winner_office] = rec.winner_candidate;
    trail.rounds.push_back(std::move(rec));
  }
  return TallyResult{Committee(std::move(winners)), std::move(trail)};
}

}  // namespace govpav
