#include "govpav/sim.hpp"

#include <omp.h>

#include <algorithm>
#include <exception>
#include <random>
#include <set>
#include <sstream>

#include "govpav/error.hpp"
#include "govpav/greedy.hpp"
#include "json.hpp"

namespace govpav::sim {

using nlohmann::json;

namespace {

// Per-office approval sets of each bloc, resolved to candidate indices.
using ResolvedBloc = std::vector<std::vector<CandidateIndex>>;

std::vector<ResolvedBloc> resolve(const Election& election, const BlocSpec& spec) {
  std::set<std::string, std::less<>> labels;
  std::vector<ResolvedBloc> out;
  for (std::size_t b = 0; b < spec.blocs.size(); ++b) {
    const Bloc& bloc = spec.blocs[b];
    const std::string where = "$.blocs[" + std::to_string(b) + "]";
    if (bloc.label.empty()) throw Error(ErrorKind::SpecInconsistent, "bloc label is empty", where);
    if (!labels.insert(bloc.label).second)
      throw Error(ErrorKind::SpecInconsistent, "bloc label '" + bloc.label + "' repeats", where);
    ResolvedBloc resolved(election.num_offices());
    for (const auto& [office_id, candidate_ids] : bloc.approved) {
      auto office = election.find_office(office_id);
      if (!office) throw Error(ErrorKind::SpecInconsistent, "unknown office '" + office_id + "'", where);
      for (const std::string& cid : candidate_ids) {
        auto c = election.find_candidate(cid);
        if (!c || election.candidate(*c).office != *office)
          throw Error(ErrorKind::SpecInconsistent, "'" + cid + "' is not a candidate for '" + office_id + "'", where);
        resolved[*office].push_back(*c);
      }
    }
    out.push_back(std::move(resolved));
  }
  return out;
}

double unit_draw(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

ApprovalProfile generate_profile(const Election& election, const BlocSpec& spec) {
  if (!(spec.noise >= 0.0 && spec.noise <= 1.0))
    throw Error(ErrorKind::SpecInconsistent, "noise must lie in [0, 1]", "$.noise");
  const std::vector<ResolvedBloc> blocs = resolve(election, spec);

  std::uint64_t n = 0;
  for (const Bloc& bloc : spec.blocs) n += bloc.voter_count;
  if (n == 0) throw Error(ErrorKind::SpecInconsistent, "spec has no voters", "$.blocs");

  std::mt19937_64 rng(spec.seed);
  std::vector<Voter> voters;
  voters.reserve(n);
  for (std::size_t b = 0; b < spec.blocs.size(); ++b) {
    for (std::uint64_t i = 1; i <= spec.blocs[b].voter_count; ++i) {
      Voter voter{spec.blocs[b].label + "-" + std::to_string(i), {}};
      for (std::size_t o = 0; o < election.num_offices(); ++o) {
        if (spec.noise > 0.0 && unit_draw(rng) < spec.noise) {
          const Office& office = election.office(static_cast<OfficeIndex>(o));
          voter.approvals.push_back(office.first + static_cast<CandidateIndex>(rng() % office.size()));
        } else {
          voter.approvals.insert(voter.approvals.end(), blocs[b][o].begin(), blocs[b][o].end());
        }
      }
      voters.push_back(std::move(voter));
    }
  }
  return make_profile(election, std::move(voters));
}

std::vector<BlocShare> representation_share(const Election& election, const ApprovalProfile& profile,
                                            const Committee& committee, const BlocSpec& spec) {
  check_profile(election, profile);
  check_committee(election, committee);
  const std::vector<ResolvedBloc> blocs = resolve(election, spec);
  const auto k = static_cast<std::int64_t>(election.num_offices());

  std::vector<BlocShare> shares;
  for (std::size_t b = 0; b < blocs.size(); ++b) {
    std::int64_t won = 0;
    for (std::size_t o = 0; o < election.num_offices(); ++o) {
      const auto& approved = blocs[b][o];
      if (std::find(approved.begin(), approved.end(), committee.winner(static_cast<OfficeIndex>(o))) != approved.end())
        ++won;
    }
    shares.push_back(BlocShare{spec.blocs[b].label, Score(won, k)});
  }
  return shares;
}

std::vector<ReportRow> run_experiment(const Election& election, const std::vector<BlocSpec>& specs,
                                      std::uint64_t budget) {
  std::vector<std::vector<ReportRow>> per_spec(specs.size());
  std::vector<std::exception_ptr> failures(specs.size());

  const auto count = static_cast<std::ptrdiff_t>(specs.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    try {
      const BlocSpec& spec = specs[i];
      const std::string name = spec.name.empty() ? "spec" + std::to_string(i) : spec.name;
      const ApprovalProfile profile = generate_profile(election, spec);

      std::optional<Score> optimum;
      if (election.committee_count() <= budget) {
        Score best = exact_pav(election, profile, budget).optimal_score;
        if (!best.is_zero()) optimum = std::move(best);
      }

      // rule names in sorted order
      const std::pair<std::string, Committee> rules[] = {
          {"greedy_pav", greedy_pav(election, profile).committee},
          {"plurality", plurality_baseline(election, profile)},
      };
      for (const auto& [rule, committee] : rules) {
        const std::uint64_t violations = check_gjr(election, profile, committee).size();
        std::optional<Score> ratio;
        if (optimum) ratio = pav_score(election, profile, committee) / *optimum;
        for (BlocShare& share : representation_share(election, profile, committee, spec))
          per_spec[i].push_back(ReportRow{name, rule, std::move(share.label), std::move(share.share), violations, ratio});
      }
    } catch (...) {
      failures[i] = std::current_exception();
    }
  }

  for (const auto& failure : failures)
    if (failure) std::rethrow_exception(failure);

  std::vector<ReportRow> rows;
  for (auto& block : per_spec)
    for (ReportRow& row : block) rows.push_back(std::move(row));
  return rows;
}

std::string write_report_csv(const std::vector<ReportRow>& rows) {
  auto field = [](const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
      if (ch == '"') out.push_back('"');
      out.push_back(ch);
    }
    return out + "\"";
  };
  std::string out = "spec,rule,bloc,share_num,share_den,gjr_violations\n";
  for (const ReportRow& r : rows)
    out += field(r.spec) + "," + r.rule + "," + field(r.bloc) + "," + r.share.numerator().str() + "," +
           r.share.denominator().str() + "," + std::to_string(r.gjr_violations) + "\n";
  return out;
}

std::string write_report_text(const std::vector<ReportRow>& rows) {
  std::ostringstream out;
  if (rows.empty()) return "no experiments\n";
  std::string current;
  for (const ReportRow& r : rows) {
    if (r.spec != current) {
      current = r.spec;
      out << "\n" << r.spec << "\n";
    }
    out << "  " << r.rule << std::string(r.rule.size() < 12 ? 12 - r.rule.size() : 1, ' ') << r.bloc << ": "
        << r.share.to_string() << " of offices";
    out << ", GJR violations " << r.gjr_violations;
    out << ", PAV ratio " << (r.approximation_ratio ? r.approximation_ratio->to_string() : std::string("skipped"));
    out << "\n";
  }
  return out.str();
}

std::vector<BlocSpec> parse_specs(std::string_view bytes) {
  json doc;
  try {
    doc = json::parse(bytes.begin(), bytes.end());
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::MalformedDocument, e.what(), "byte " + std::to_string(e.byte));
  }
  const json* list = &doc;
  std::string root = "$";
  if (doc.is_object()) {
    auto it = doc.find("specs");
    if (it == doc.end()) throw Error(ErrorKind::MalformedDocument, "missing member 'specs'", "$");
    list = &*it;
    root = "$.specs";
  }
  if (!list->is_array()) throw Error(ErrorKind::MalformedDocument, "expected an array", root);

  auto fail = [](const std::string& path, const std::string& what) -> Error {
    return Error(ErrorKind::MalformedDocument, what, path);
  };

  std::vector<BlocSpec> specs;
  for (std::size_t s = 0; s < list->size(); ++s) {
    const std::string spath = root + "[" + std::to_string(s) + "]";
    const json& js = (*list)[s];
    if (!js.is_object()) throw fail(spath, "expected an object");
    BlocSpec spec;
    if (auto it = js.find("name"); it != js.end()) {
      if (!it->is_string()) throw fail(spath + ".name", "expected a string");
      spec.name = it->get<std::string>();
    }
    if (auto it = js.find("seed"); it != js.end()) {
      if (!it->is_number_unsigned()) throw fail(spath + ".seed", "expected a non-negative integer");
      spec.seed = it->get<std::uint64_t>();
    }
    if (auto it = js.find("noise"); it != js.end()) {
      if (!it->is_number()) throw fail(spath + ".noise", "expected a number");
      spec.noise = it->get<double>();
    }
    auto blocs = js.find("blocs");
    if (blocs == js.end() || !blocs->is_array()) throw fail(spath + ".blocs", "expected an array");
    for (std::size_t b = 0; b < blocs->size(); ++b) {
      const std::string bpath = spath + ".blocs[" + std::to_string(b) + "]";
      const json& jb = (*blocs)[b];
      if (!jb.is_object()) throw fail(bpath, "expected an object");
      Bloc bloc;
      auto label = jb.find("label");
      if (label == jb.end() || !label->is_string()) throw fail(bpath + ".label", "expected a string");
      bloc.label = label->get<std::string>();
      auto voters = jb.find("voters");
      if (voters == jb.end() || !voters->is_number_unsigned())
        throw fail(bpath + ".voters", "expected a non-negative integer");
      bloc.voter_count = voters->get<std::uint64_t>();
      if (auto approvals = jb.find("approvals"); approvals != jb.end()) {
        if (!approvals->is_object()) throw fail(bpath + ".approvals", "expected an object");
        for (const auto& [office_id, ids] : approvals->items()) {
          const std::string apath = bpath + ".approvals." + office_id;
          if (!ids.is_array()) throw fail(apath, "expected an array");
          std::vector<std::string> candidates;
          for (const json& id : ids) {
            if (!id.is_string()) throw fail(apath, "expected candidate id strings");
            candidates.push_back(id.get<std::string>());
          }
          bloc.approved.emplace_back(office_id, std::move(candidates));
        }
      }
      spec.blocs.push_back(std::move(bloc));
    }
    specs.push_back(std::move(spec));
  }
  return specs;
}

}  // namespace govpav::sim
