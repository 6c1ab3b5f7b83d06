#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "govpav/greedy.hpp"
#include "govpav/model.hpp"
#include "govpav/oracle.hpp"

namespace govpav {

inline constexpr int kSchemaVersion = 1;
inline constexpr std::string_view kBallotHeader = "voter_id,office_id,candidate_id";

/// ElectionFile: {"name", "offices": [{"id", "name", "candidates": [{"id", "name"}]}]}.
/// Errors carry a JSON path ("$.offices[1].candidates[0].id") or a byte
/// position for syntax errors.
Election parse_election(std::string_view bytes);
std::string write_election(const Election& election);

/// BallotFile: CSV with header voter_id,office_id,candidate_id and one row per
/// approval. A row with empty office_id and candidate_id registers a voter
/// who approves nothing. Identical rows collapse. Voters are kept in order of
/// first appearance. Errors carry "row N" with the header as row 1.
ApprovalProfile parse_ballots(std::string_view bytes, const Election& election);
std::string write_ballots(const Election& election, const ApprovalProfile& profile);

/// One voter's ballot as posted to the demo service:
/// {"voter_id": "...", "approvals": {"office id": ["candidate id", ...]}}.
RawBallot parse_ballot_document(std::string_view bytes);

struct Upload {
  Election election;
  ApprovalProfile profile;
};

/// Combined single-file upload: {"election": ElectionFile, "ballots_csv": "..."}.
Upload parse_upload(std::string_view bytes);

/// Committee given as {"office id": "candidate id", ...} or as a ResultsFile
/// whose "committee" member has that shape.
Committee parse_committee(std::string_view bytes, const Election& election);

/// ResultsFile. Keys are sorted, scores are {"num", "den"} integer pairs and
/// the output is byte-stable for equal inputs.
std::string write_results(const Election& election, const ApprovalProfile& profile,
                          const TallyResult& tally, const std::vector<GjrViolation>& violations);

/// greedy_pav + check_gjr + write_results; the one path shared by the CLI
/// and the service.
std::string tally_results_document(const Election& election, const ApprovalProfile& profile);

/// Human-readable round-by-round explanation of a tally.
std::string write_explanation(const Election& election, const ApprovalProfile& profile,
                              const TallyResult& tally, const std::vector<GjrViolation>& violations);

}  // namespace govpav
