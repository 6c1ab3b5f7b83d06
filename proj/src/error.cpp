#include "govpav/error.hpp"

namespace govpav {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::EmptyElection: return "EmptyElection";
    case ErrorKind::EmptyOffice: return "EmptyOffice";
    case ErrorKind::DuplicateOfficeId: return "DuplicateOfficeId";
    case ErrorKind::DuplicateCandidateId: return "DuplicateCandidateId";
    case ErrorKind::InvalidIdentifier: return "InvalidIdentifier";
    case ErrorKind::UnknownOfficeId: return "UnknownOfficeId";
    case ErrorKind::UnknownCandidateId: return "UnknownCandidateId";
    case ErrorKind::CandidateOfficeMismatch: return "CandidateOfficeMismatch";
    case ErrorKind::DuplicateVoterId: return "DuplicateVoterId";
    case ErrorKind::EmptyProfile: return "EmptyProfile";
    case ErrorKind::IncompleteCommittee: return "IncompleteCommittee";
    case ErrorKind::OfficeAlreadyFilled: return "OfficeAlreadyFilled";
    case ErrorKind::UnknownCandidate: return "UnknownCandidate";
    case ErrorKind::InconsistentInput: return "InconsistentInput";
    case ErrorKind::SearchBudgetExceeded: return "SearchBudgetExceeded";
    case ErrorKind::DegenerateInstance: return "DegenerateInstance";
    case ErrorKind::MalformedDocument: return "MalformedDocument";
    case ErrorKind::MalformedCsv: return "MalformedCsv";
    case ErrorKind::MissingHeader: return "MissingHeader";
    case ErrorKind::SpecInconsistent: return "SpecInconsistent";
    case ErrorKind::UnknownSession: return "UnknownSession";
    case ErrorKind::VoterLimitReached: return "VoterLimitReached";
    case ErrorKind::NoBallots: return "NoBallots";
    case ErrorKind::PayloadTooLarge: return "PayloadTooLarge";
  }
  return "Unknown";
}

namespace {

std::string compose(ErrorKind kind, const std::string& message, const std::string& location) {
  std::string out(to_string(kind));
  if (!location.empty()) out += " at " + location;
  if (!message.empty()) out += ": " + message;
  return out;
}

}  // namespace

Error::Error(ErrorKind kind, std::string message, std::string location)
    : std::runtime_error(compose(kind, message, location)),
      kind_(kind),
      location_(std::move(location)),
      detail_(std::move(message)) {}

}  // namespace govpav
