// govpav: command-line front end for batch tallies, verification runs,
// bloc simulations and the demo HTTP service.
//
// Exit codes: 0 success, 1 runtime failure (I/O, bind), 2 invalid input,
// 3 the checked committee violates GJR.

#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "govpav/ballot_io.hpp"
#include "govpav/error.hpp"
#include "govpav/greedy.hpp"
#include "govpav/oracle.hpp"
#include "govpav/service.hpp"
#include "govpav/sim.hpp"
#include "httplib.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitGjr = 3;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_output(const std::string& path, const std::string& bytes) {
  if (path.empty() || path == "-") {
    std::cout << bytes;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << bytes;
}

std::string ratio_text(const govpav::Score& r) {
  return r.denominator() == 1 ? r.numerator().str() : r.to_string();
}

struct TallyArgs {
  std::string election;
  std::string ballots;
  std::string out;
  std::string format = "json";
};

int run_tally(const TallyArgs& args) {
  using namespace govpav;
  const Election election = parse_election(read_file(args.election));
  const ApprovalProfile profile = parse_ballots(read_file(args.ballots), election);
  if (args.format == "json") {
    write_output(args.out, tally_results_document(election, profile));
  } else {
    const TallyResult tally = greedy_pav(election, profile);
    write_output(args.out, write_explanation(election, profile, tally, check_gjr(election, profile, tally.committee)));
  }
  return kExitOk;
}

struct VerifyArgs {
  std::string election;
  std::string ballots;
  std::string committee;
  std::uint64_t budget = govpav::kDefaultSearchBudget;
};

int run_verify(const VerifyArgs& args) {
  using namespace govpav;
  const Election election = parse_election(read_file(args.election));
  const ApprovalProfile profile = parse_ballots(read_file(args.ballots), election);
  const Committee committee = args.committee.empty() ? greedy_pav(election, profile).committee
                                                     : parse_committee(read_file(args.committee), election);

  std::cout << "committee (" << (args.committee.empty() ? "greedy_pav" : "override") << "):";
  for (std::size_t o = 0; o < committee.size(); ++o)
    std::cout << " " << election.office(static_cast<OfficeIndex>(o)).id << "="
              << election.candidate(committee.winner(static_cast<OfficeIndex>(o))).id;
  std::cout << "\n";

  const auto violations = check_gjr(election, profile, committee);
  const Score threshold(static_cast<std::int64_t>(profile.size()), static_cast<std::int64_t>(election.num_offices()));
  std::cout << "n: " << profile.size() << ", K: " << election.num_offices() << ", threshold n/K: "
            << threshold.to_string() << " (group_size*K >= n; abstaining voters count toward n)\n";
  if (violations.empty()) {
    std::cout << "GJR: ok\n";
  } else {
    std::cout << "GJR: violated (" << violations.size() << " witness" << (violations.size() == 1 ? "" : "es")
              << ")\n";
    for (const GjrViolation& v : violations) {
      std::cout << "  candidate " << election.candidate(v.candidate).id << " (office "
                << election.office(v.office).id << "), deserted group of " << v.group_size << ":";
      for (VoterIndex voter : v.deserted_group) std::cout << " " << profile.voter(voter).id;
      std::cout << "\n";
    }
  }

  try {
    const PavOptimum optimum = exact_pav(election, profile, args.budget);
    if (optimum.optimal_score.is_zero()) {
      std::cout << "ratio: skipped (optimal PAV score is 0)\n";
    } else {
      const Score ratio = pav_score(election, profile, committee) / optimum.optimal_score;
      std::cout << "ratio: " << ratio_text(ratio) << "\n";
    }
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::SearchBudgetExceeded) throw;
    std::cout << "ratio: skipped (" << e.detail() << ")\n";
  }
  return violations.empty() ? kExitOk : kExitGjr;
}

struct SimulateArgs {
  std::string election;
  std::string spec;
  std::string out;
  std::uint64_t budget = govpav::kDefaultSearchBudget;
};

int run_simulate(const SimulateArgs& args) {
  using namespace govpav;
  const Election election = parse_election(read_file(args.election));
  const std::vector<sim::BlocSpec> specs = sim::parse_specs(read_file(args.spec));
  const std::vector<sim::ReportRow> rows = sim::run_experiment(election, specs, args.budget);
  write_output(args.out, sim::write_report_csv(rows));
  std::cerr << sim::write_report_text(rows);
  return kExitOk;
}

int run_serve(const std::string& bind) {
  using namespace govpav::service;
  Config config = Config::from_env();
  if (!bind.empty()) config.bind_addr = bind;

  // Handle SIGINT/SIGTERM on a dedicated thread so shutdown can save a snapshot.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  Service service(config);
  if (config.snapshot_path) service.sessions().load(*config.snapshot_path);
  httplib::Server server;

  std::thread waiter([&] {
    int sig = 0;
    sigwait(&signals, &sig);
    server.stop();
  });

  std::cerr << "govpav: serving on " << config.bind_addr << "\n";
  const bool ok = serve(service, server);
  if (!ok) {
    std::cerr << "govpav: cannot bind " << config.bind_addr << "\n";
    pthread_kill(waiter.native_handle(), SIGTERM);
    waiter.join();
    return kExitRuntime;
  }
  waiter.join();
  if (config.snapshot_path) service.sessions().save(*config.snapshot_path);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Proportional multi-office elections with GreedyPAV"};
  app.require_subcommand(1);

  TallyArgs tally;
  auto* tally_cmd = app.add_subcommand("tally", "Tally an election and write the results");
  tally_cmd->add_option("--election", tally.election, "ElectionFile (JSON)")->required();
  tally_cmd->add_option("--ballots", tally.ballots, "BallotFile (CSV)")->required();
  tally_cmd->add_option("--out", tally.out, "Output path (default: stdout)");
  tally_cmd->add_option("--format", tally.format, "json or text")->check(CLI::IsMember({"json", "text"}));

  VerifyArgs verify;
  auto* verify_cmd = app.add_subcommand("verify", "Check GJR and the PAV approximation ratio");
  verify_cmd->add_option("--election", verify.election, "ElectionFile (JSON)")->required();
  verify_cmd->add_option("--ballots", verify.ballots, "BallotFile (CSV)")->required();
  verify_cmd->add_option("--budget", verify.budget, "Maximum committees for the exhaustive search");
  verify_cmd->add_option("--committee", verify.committee, "Check this committee instead of the greedy one (JSON)");

  SimulateArgs simulate;
  auto* simulate_cmd = app.add_subcommand("simulate", "Run bloc electorate experiments");
  simulate_cmd->add_option("--election", simulate.election, "ElectionFile (JSON)")->required();
  simulate_cmd->add_option("--spec", simulate.spec, "Bloc specs (JSON)")->required();
  simulate_cmd->add_option("--out", simulate.out, "CSV report path (default: stdout)");
  simulate_cmd->add_option("--budget", simulate.budget, "Maximum committees for approximation ratios");

  std::string bind;
  auto* serve_cmd = app.add_subcommand("serve", "Run the demo HTTP service");
  serve_cmd->add_option("--bind", bind, "host:port (default: BIND_ADDR or 127.0.0.1:8080)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (*tally_cmd) return run_tally(tally);
    if (*verify_cmd) return run_verify(verify);
    if (*simulate_cmd) return run_simulate(simulate);
    if (*serve_cmd) return run_serve(bind);
  } catch (const govpav::Error& e) {
    std::cerr << "govpav: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const InputError& e) {
    std::cerr << "govpav: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "govpav: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitOk;
}
