#include "govpav/ballot_io.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <sstream>

#include "govpav/error.hpp"
#include "json.hpp"

namespace govpav {

using nlohmann::json;

namespace {

bool valid_utf8(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size()) {
    const auto c = static_cast<unsigned char>(s[i]);
    std::size_t extra = 0;
    std::uint32_t cp = 0;
    if (c < 0x80) {
      ++i;
      continue;
    } else if ((c & 0xe0) == 0xc0) {
      extra = 1;
      cp = c & 0x1f;
    } else if ((c & 0xf0) == 0xe0) {
      extra = 2;
      cp = c & 0x0f;
    } else if ((c & 0xf8) == 0xf0) {
      extra = 3;
      cp = c & 0x07;
    } else {
      return false;
    }
    if (i + extra >= s.size()) return false;
    for (std::size_t k = 1; k <= extra; ++k) {
      const auto cc = static_cast<unsigned char>(s[i + k]);
      if ((cc & 0xc0) != 0x80) return false;
      cp = (cp << 6) | (cc & 0x3f);
    }
    if ((extra == 1 && cp < 0x80) || (extra == 2 && cp < 0x800) || (extra == 3 && cp < 0x10000)) return false;
    if (cp > 0x10ffff || (cp >= 0xd800 && cp <= 0xdfff)) return false;
    i += extra + 1;
  }
  return true;
}

std::string byte_location(std::string_view bytes, std::size_t pos) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i + 1 < pos && i < bytes.size(); ++i) {
    if (bytes[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "byte " + std::to_string(pos) + " (line " + std::to_string(line) + ", column " + std::to_string(col) + ")";
}

json parse_json(std::string_view bytes) {
  try {
    return json::parse(bytes.begin(), bytes.end());
  } catch (const json::parse_error& e) {
    std::string what = e.what();
    // "[json.exception.parse_error.101] parse error at line 1, column 2: ..."
    if (auto colon = what.find(": "); colon != std::string::npos) what = what.substr(colon + 2);
    throw Error(ErrorKind::MalformedDocument, what, byte_location(bytes, e.byte));
  }
}

const json& member(const json& obj, const char* key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end())
    throw Error(ErrorKind::MalformedDocument, std::string("missing member '") + key + "'", path);
  return *it;
}

std::string string_at(const json& v, const std::string& path) {
  if (!v.is_string()) throw Error(ErrorKind::MalformedDocument, "expected a string", path);
  return v.get<std::string>();
}

std::string optional_string(const json& obj, const char* key, const std::string& path, std::string fallback) {
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  return string_at(*it, path + "." + key);
}

void expect_object(const json& v, const std::string& path) {
  if (!v.is_object()) throw Error(ErrorKind::MalformedDocument, "expected an object", path);
}

void expect_array(const json& v, const std::string& path) {
  if (!v.is_array()) throw Error(ErrorKind::MalformedDocument, "expected an array", path);
}

// Errors raised against "$..." paths are re-rooted under `root`.
[[noreturn]] void rethrow_under(const Error& e, const std::string& root) {
  std::string loc = e.location();
  if (loc.rfind("$", 0) == 0) loc = root + loc.substr(1);
  throw Error(e.kind(), e.detail(), loc);
}

RawElection election_from_json(const json& doc) {
  expect_object(doc, "$");
  RawElection raw;
  raw.name = optional_string(doc, "name", "$", "");
  const json& offices = member(doc, "offices", "$");
  expect_array(offices, "$.offices");
  for (std::size_t o = 0; o < offices.size(); ++o) {
    const std::string opath = "$.offices[" + std::to_string(o) + "]";
    const json& office = offices[o];
    expect_object(office, opath);
    RawOffice ro;
    ro.id = string_at(member(office, "id", opath), opath + ".id");
    ro.name = optional_string(office, "name", opath, ro.id);
    const json& candidates = member(office, "candidates", opath);
    expect_array(candidates, opath + ".candidates");
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      const std::string cpath = opath + ".candidates[" + std::to_string(c) + "]";
      const json& cand = candidates[c];
      expect_object(cand, cpath);
      RawCandidate rc;
      rc.id = string_at(member(cand, "id", cpath), cpath + ".id");
      rc.name = optional_string(cand, "name", cpath, rc.id);
      ro.candidates.push_back(std::move(rc));
    }
    raw.offices.push_back(std::move(ro));
  }
  return raw;
}

Election election_from_document(const json& doc) { return validate_election(election_from_json(doc)); }

// ---- CSV -------------------------------------------------------------------

struct CsvRecord {
  std::size_t row = 0;
  std::vector<std::string> fields;
};

class CsvReader {
 public:
  explicit CsvReader(std::string_view text) : text_(text) {
    if (text_.substr(0, 3) == "\xEF\xBB\xBF") text_.remove_prefix(3);
  }

  // Returns false at end of input.
  bool next(CsvRecord& rec) {
    if (pos_ >= text_.size()) return false;
    rec.row = ++row_;
    rec.fields.clear();
    std::string field;
    bool quoted_field = false;
    while (true) {
      if (pos_ >= text_.size()) {
        rec.fields.push_back(std::move(field));
        return true;
      }
      char ch = text_[pos_];
      if (ch == '"' && field.empty() && !quoted_field) {
        read_quoted(field);
        quoted_field = true;
        if (pos_ < text_.size() && text_[pos_] != ',' && text_[pos_] != '\n' && text_[pos_] != '\r')
          throw Error(ErrorKind::MalformedCsv, "unexpected character after closing quote", where());
        continue;
      }
      if (ch == '"') throw Error(ErrorKind::MalformedCsv, "stray quote inside unquoted field", where());
      if (ch == ',') {
        rec.fields.push_back(std::move(field));
        field.clear();
        quoted_field = false;
        ++pos_;
        continue;
      }
      if (ch == '\r' || ch == '\n') {
        ++pos_;
        if (ch == '\r' && pos_ < text_.size() && text_[pos_] == '\n') ++pos_;
        rec.fields.push_back(std::move(field));
        return true;
      }
      field.push_back(ch);
      ++pos_;
    }
  }

  std::string where() const { return "row " + std::to_string(row_); }

 private:
  void read_quoted(std::string& field) {
    const std::string start = where();
    ++pos_;  // opening quote
    while (true) {
      if (pos_ >= text_.size()) throw Error(ErrorKind::MalformedCsv, "unterminated quoted field", start);
      char ch = text_[pos_++];
      if (ch == '"') {
        if (pos_ < text_.size() && text_[pos_] == '"') {
          field.push_back('"');
          ++pos_;
          continue;
        }
        return;
      }
      field.push_back(ch);
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t row_ = 0;
};

bool is_blank(const CsvRecord& rec) { return rec.fields.size() == 1 && rec.fields[0].empty(); }

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out.push_back('"');
    out.push_back(ch);
  }
  out.push_back('"');
  return out;
}

// ---- results -----------------------------------------------------------------

json integer_json(const Score::Integer& v) {
  if (auto small = to_int64(v)) return *small;
  return v.str();
}

json score_json(const Score& s) { return json{{"num", integer_json(s.numerator())}, {"den", integer_json(s.denominator())}}; }

json sorted_voter_ids(const ApprovalProfile& profile, std::span<const VoterIndex> voters) {
  std::vector<std::string> ids;
  ids.reserve(voters.size());
  for (VoterIndex v : voters) ids.push_back(profile.voter(v).id);
  std::sort(ids.begin(), ids.end());
  return ids;
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

std::string fixed3(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

}  // namespace

Election parse_election(std::string_view bytes) { return election_from_document(parse_json(bytes)); }

std::string write_election(const Election& election) {
  json offices = json::array();
  for (const Office& office : election.offices()) {
    json candidates = json::array();
    for (CandidateIndex c = office.first; c < office.last; ++c) {
      const Candidate& cand = election.candidate(c);
      candidates.push_back(json{{"id", cand.id}, {"name", cand.display_name}});
    }
    offices.push_back(json{{"id", office.id}, {"name", office.display_name}, {"candidates", std::move(candidates)}});
  }
  return json{{"name", election.name()}, {"offices", std::move(offices)}}.dump(2) + "\n";
}

ApprovalProfile parse_ballots(std::string_view bytes, const Election& election) {
  CsvReader reader(bytes);
  CsvRecord rec;
  if (!reader.next(rec)) throw Error(ErrorKind::MissingHeader, "empty ballot file", "row 1");
  if (rec.fields.size() != 3 || rec.fields[0] != "voter_id" || rec.fields[1] != "office_id" ||
      rec.fields[2] != "candidate_id")
    throw Error(ErrorKind::MissingHeader, "expected header '" + std::string(kBallotHeader) + "'", "row 1");

  std::vector<Voter> voters;
  std::map<std::string, std::size_t, std::less<>> index;
  while (reader.next(rec)) {
    if (is_blank(rec)) continue;
    const std::string where = "row " + std::to_string(rec.row);
    if (rec.fields.size() != 3)
      throw Error(ErrorKind::MalformedCsv, "expected 3 fields, found " + std::to_string(rec.fields.size()), where);
    const std::string& voter_id = rec.fields[0];
    const std::string& office_id = rec.fields[1];
    const std::string& candidate_id = rec.fields[2];
    if (voter_id.empty()) throw Error(ErrorKind::MalformedCsv, "empty voter_id", where);
    if (!valid_utf8(voter_id) ||
        std::any_of(voter_id.begin(), voter_id.end(), [](char c) { return static_cast<unsigned char>(c) < 0x20; }))
      throw Error(ErrorKind::MalformedCsv, "voter_id is not a valid token", where);

    std::optional<CandidateIndex> candidate;
    if (!office_id.empty() || !candidate_id.empty()) {
      if (office_id.empty() || candidate_id.empty())
        throw Error(ErrorKind::MalformedCsv, "office_id and candidate_id must both be set or both be empty", where);
      auto office = election.find_office(office_id);
      if (!office) throw Error(ErrorKind::UnknownOfficeId, "unknown office '" + office_id + "'", where);
      candidate = election.find_candidate(candidate_id);
      if (!candidate) throw Error(ErrorKind::UnknownCandidateId, "unknown candidate '" + candidate_id + "'", where);
      if (election.candidate(*candidate).office != *office)
        throw Error(ErrorKind::CandidateOfficeMismatch,
                    "candidate '" + candidate_id + "' does not run for office '" + office_id + "'", where);
    }

    auto [it, inserted] = index.try_emplace(voter_id, voters.size());
    if (inserted) voters.push_back(Voter{voter_id, {}});
    if (candidate) voters[it->second].approvals.push_back(*candidate);
  }
  if (voters.empty()) throw Error(ErrorKind::EmptyProfile, "ballot file has no voters", reader.where());
  return make_profile(election, std::move(voters));
}

std::string write_ballots(const Election& election, const ApprovalProfile& profile) {
  std::string out(kBallotHeader);
  out += "\n";
  for (const Voter& voter : profile.voters()) {
    if (voter.approvals.empty()) {
      out += csv_field(voter.id) + ",,\n";
      continue;
    }
    for (CandidateIndex c : voter.approvals) {
      const Candidate& cand = election.candidate(c);
      out += csv_field(voter.id) + "," + csv_field(election.office(cand.office).id) + "," + csv_field(cand.id) + "\n";
    }
  }
  return out;
}

RawBallot parse_ballot_document(std::string_view bytes) {
  const json doc = parse_json(bytes);
  expect_object(doc, "$");
  RawBallot ballot;
  ballot.voter_id = string_at(member(doc, "voter_id", "$"), "$.voter_id");
  auto it = doc.find("approvals");
  if (it == doc.end()) return ballot;
  expect_object(*it, "$.approvals");
  for (const auto& [office_id, ids] : it->items()) {
    const std::string path = "$.approvals." + office_id;
    expect_array(ids, path);
    std::vector<std::string> candidates;
    for (std::size_t i = 0; i < ids.size(); ++i)
      candidates.push_back(string_at(ids[i], path + "[" + std::to_string(i) + "]"));
    ballot.approvals.emplace_back(office_id, std::move(candidates));
  }
  return ballot;
}

Upload parse_upload(std::string_view bytes) {
  const json doc = parse_json(bytes);
  expect_object(doc, "$");
  const json& election_doc = member(doc, "election", "$");
  const json& csv = member(doc, "ballots_csv", "$");
  if (!csv.is_string()) throw Error(ErrorKind::MalformedDocument, "expected a string", "$.ballots_csv");

  std::optional<Election> election;
  try {
    election = election_from_document(election_doc);
  } catch (const Error& e) {
    rethrow_under(e, "$.election");
  }
  try {
    ApprovalProfile profile = parse_ballots(csv.get_ref<const std::string&>(), *election);
    return Upload{std::move(*election), std::move(profile)};
  } catch (const Error& e) {
    throw Error(e.kind(), e.detail(), "$.ballots_csv " + e.location());
  }
}

Committee parse_committee(std::string_view bytes, const Election& election) {
  const json doc = parse_json(bytes);
  expect_object(doc, "$");
  const json* assignment = &doc;
  std::string root = "$";
  if (auto it = doc.find("committee"); it != doc.end() && it->is_object()) {
    assignment = &*it;
    root = "$.committee";
  }
  std::vector<std::pair<std::string, std::string>> pairs;
  for (const auto& [office_id, candidate] : assignment->items())
    pairs.emplace_back(office_id, string_at(candidate, root + "." + office_id));
  try {
    return make_committee(election, pairs);
  } catch (const Error& e) {
    rethrow_under(e, root);
  }
}

std::string write_results(const Election& election, const ApprovalProfile& profile, const TallyResult& tally,
                          const std::vector<GjrViolation>& violations) {
  json committee = json::object();
  for (std::size_t o = 0; o < tally.committee.size(); ++o)
    committee[election.office(static_cast<OfficeIndex>(o)).id] =
        election.candidate(tally.committee.winner(static_cast<OfficeIndex>(o))).id;

  json rounds = json::array();
  for (const RoundRecord& r : tally.trail.rounds) {
    json scores = json::object();
    for (const ScoredCandidate& sc : r.candidate_scores) scores[election.candidate(sc.candidate).id] = score_json(sc.score);
    json tied = json::array();
    for (CandidateIndex c : r.tied_with)
      tied.push_back(json{{"office", election.office(election.candidate(c).office).id},
                          {"candidate", election.candidate(c).id}});
    rounds.push_back(json{
        {"round_index", r.round_index},
        {"candidate_scores", std::move(scores)},
        {"winner_office", election.office(r.winner_office).id},
        {"winner_candidate", election.candidate(r.winner_candidate).id},
        {"winner_score", score_json(r.winner_score)},
        {"tied_with", std::move(tied)},
        {"satisfied_voters", sorted_voter_ids(profile, r.satisfied_voters)},
        {"zero_support", r.zero_support},
    });
  }

  json gjr = json::array();
  for (const GjrViolation& v : violations)
    gjr.push_back(json{
        {"candidate", election.candidate(v.candidate).id},
        {"office", election.office(v.office).id},
        {"deserted_group", sorted_voter_ids(profile, v.deserted_group)},
        {"group_size", v.group_size},
        {"threshold", score_json(v.threshold)},
    });

  json doc{{"schema_version", kSchemaVersion},
           {"committee", std::move(committee)},
           {"rounds", std::move(rounds)},
           {"gjr", json{{"violations", std::move(gjr)}}}};
  return doc.dump(2) + "\n";
}

std::string tally_results_document(const Election& election, const ApprovalProfile& profile) {
  const TallyResult tally = greedy_pav(election, profile);
  return write_results(election, profile, tally, check_gjr(election, profile, tally.committee));
}

std::string write_explanation(const Election& election, const ApprovalProfile& profile, const TallyResult& tally,
                              const std::vector<GjrViolation>& violations) {
  std::ostringstream out;
  const std::size_t k = election.num_offices();
  out << "Election: " << (election.name().empty() ? "(unnamed)" : election.name()) << "\n";
  out << "Voters: " << profile.size() << "  Offices: " << k << "\n";
  out << "Each round scores every candidate of every open office by summing 1/(1+s) over its\n"
         "approvers, where s counts winners the voter already approves.\n";

  for (const RoundRecord& r : tally.trail.rounds) {
    out << "\nRound " << r.round_index << "\n";
    out << "  " << pad("office", 16) << pad("candidate", 16) << pad("score", 14) << "approx\n";
    for (const ScoredCandidate& sc : r.candidate_scores) {
      const Candidate& cand = election.candidate(sc.candidate);
      out << "  " << pad(election.office(cand.office).id, 16) << pad(cand.id, 16) << pad(sc.score.to_string(), 14)
          << fixed3(sc.score.approx());
      if (sc.candidate == r.winner_candidate) out << "  <- elected";
      out << "\n";
    }
    if (!r.tied_with.empty()) {
      out << "  tie at " << r.winner_score.to_string() << " with";
      for (CandidateIndex c : r.tied_with) out << " " << election.candidate(c).id;
      out << "; resolved by office order, then candidate order\n";
    }
    if (r.zero_support) out << "  no remaining support for any open office; filled by tie-break\n";
    out << "  voters newly satisfied: " << r.satisfied_voters.size() << "\n";
  }

  out << "\nCommittee\n";
  for (std::size_t o = 0; o < k; ++o) {
    const Office& office = election.office(static_cast<OfficeIndex>(o));
    const Candidate& cand = election.candidate(tally.committee.winner(static_cast<OfficeIndex>(o)));
    out << "  " << pad(office.display_name + " (" + office.id + ")", 32) << cand.display_name << " (" << cand.id
        << ")\n";
  }

  const Score threshold(static_cast<std::int64_t>(profile.size()), static_cast<std::int64_t>(k));
  out << "\n";
  if (violations.empty()) {
    out << "GJR: ok (no unrepresented group of at least n/K = " << threshold.to_string()
        << " voters agrees on a candidate)\n";
  } else {
    out << "GJR: " << violations.size() << " violation(s), threshold n/K = " << threshold.to_string() << "\n";
    for (const GjrViolation& v : violations) {
      out << "  " << election.candidate(v.candidate).id << " (" << election.office(v.office).id << "): "
          << v.group_size << " unrepresented approvers:";
      for (VoterIndex voter : v.deserted_group) out << " " << profile.voter(voter).id;
      out << "\n";
    }
  }
  return out.str();
}

}  // namespace govpav
