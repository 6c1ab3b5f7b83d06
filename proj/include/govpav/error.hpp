#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace govpav {

enum class ErrorKind {
  // structural validation
  EmptyElection,
  EmptyOffice,
  DuplicateOfficeId,
  DuplicateCandidateId,
  InvalidIdentifier,
  UnknownOfficeId,
  UnknownCandidateId,
  CandidateOfficeMismatch,
  DuplicateVoterId,
  EmptyProfile,
  IncompleteCommittee,
  // tally / oracle
  OfficeAlreadyFilled,
  UnknownCandidate,
  InconsistentInput,
  SearchBudgetExceeded,
  DegenerateInstance,
  // formats
  MalformedDocument,
  MalformedCsv,
  MissingHeader,
  SpecInconsistent,
  // service
  UnknownSession,
  VoterLimitReached,
  NoBallots,
  PayloadTooLarge,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure in the library is reported as an Error carrying a machine
/// readable kind and, where one exists, the location of the offending input
/// ("$.offices[1].candidates[0].id", "row 7", "byte 12 (line 1, column 13)").
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string message, std::string location = {});

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& location() const noexcept { return location_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorKind kind_;
  std::string location_;
  std::string detail_;
};

}  // namespace govpav
