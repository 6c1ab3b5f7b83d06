#include "govpav/reference.hpp"

#include "govpav/error.hpp"

namespace govpav::reference {

TallyResult greedy_pav(const Election& election, const ApprovalProfile& profile) {
  check_profile(election, profile);
  const std::size_t k = election.num_offices();
  std::vector<std::uint32_t> satisfaction(profile.size(), 0);
  std::vector<char> filled(k, 0);
  std::vector<CandidateIndex> winners(k, 0);
  AuditTrail trail;

  for (std::uint32_t round = 1; round <= k; ++round) {
    std::vector<Score> acc(election.num_candidates());
    for (VoterIndex v = 0; v < profile.size(); ++v) {
      const Score w = Score::harmonic_weight(satisfaction[v]);
      for (CandidateIndex c : profile.voter(v).approvals)
        if (!filled[election.candidate(c).office]) acc[c] += w;
    }

    RoundRecord rec;
    rec.round_index = round;
    bool have = false;
    for (OfficeIndex o = 0; o < k; ++o) {
      if (filled[o]) continue;
      const Office& office = election.office(o);
      for (CandidateIndex c = office.first; c < office.last; ++c) {
        rec.candidate_scores.push_back(ScoredCandidate{c, acc[c]});
        if (!have || acc[c] > rec.winner_score) {
          rec.winner_candidate = c;
          rec.winner_office = o;
          rec.winner_score = acc[c];
          have = true;
        }
      }
    }
    for (const ScoredCandidate& sc : rec.candidate_scores)
      if (sc.candidate != rec.winner_candidate && sc.score == rec.winner_score) rec.tied_with.push_back(sc.candidate);
    rec.zero_support = rec.winner_score.is_zero();

    filled[rec.winner_office] = 1;
    winners[rec.winner_office] = rec.winner_candidate;
    for (VoterIndex v = 0; v < profile.size(); ++v) {
      for (CandidateIndex c : profile.voter(v).approvals) {
        if (c == rec.winner_candidate) {
          ++satisfaction[v];
          rec.satisfied_voters.push_back(v);
        }
      }
    }
    trail.rounds.push_back(std::move(rec));
  }
  return TallyResult{Committee(std::move(winners)), std::move(trail)};
}

namespace {

void search(const Election& election, const ApprovalProfile& profile, std::vector<CandidateIndex>& partial,
            PavOptimum& best, bool& have) {
  const std::size_t depth = partial.size();
  if (depth == election.num_offices()) {
    Committee committee(partial);
    Score score = pav_score(election, profile, committee);
    if (!have || score > best.optimal_score) {
      best.optimal_score = std::move(score);
      best.optima.assign(1, std::move(committee));
      have = true;
    } else if (score == best.optimal_score) {
      best.optima.push_back(std::move(committee));
    }
    return;
  }
  const Office& office = election.office(static_cast<OfficeIndex>(depth));
  for (CandidateIndex c = office.first; c < office.last; ++c) {
    partial.push_back(c);
    search(election, profile, partial, best, have);
    partial.pop_back();
  }
}

}  // namespace

PavOptimum exact_pav(const Election& election, const ApprovalProfile& profile, std::uint64_t budget) {
  check_profile(election, profile);
  const std::uint64_t total = election.committee_count();
  if (total > budget)
    throw Error(ErrorKind::SearchBudgetExceeded,
                std::to_string(total) + " committees exceed the budget of " + std::to_string(budget));
  PavOptimum best;
  bool have = false;
  std::vector<CandidateIndex> partial;
  search(election, profile, partial, best, have);
  return best;
}

}  // namespace govpav::reference
