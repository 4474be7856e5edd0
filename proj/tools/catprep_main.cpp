#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "catprep/circuits.hpp"
#include "catprep/faults.hpp"
#include "catprep/ftcheck.hpp"
#include "catprep/reporting.hpp"
#include "catprep/search.hpp"
#include "catprep/sim.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitViolation = 1;
constexpr int kExitExhausted = 2;
constexpr int kExitResource = 3;
constexpr int kExitBadFile = 64;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << content;
}

catprep::Solution load_solution(const std::string& path) {
  return catprep::parse_solution_text(read_file(path));
}

catprep::VerifiedPrepCircuit circuit_for(const catprep::Solution& s) {
  return catprep::assemble(catprep::build_balanced_tree(s.w),
                           catprep::build_balanced_tree(s.w_prime), s.wiring);
}

long env_long(const char* name, long fallback) {
  const char* v = std::getenv(name);
  if (v == nullptr) return fallback;
  try {
    return std::stol(v);
  } catch (const std::exception&) {
    return fallback;
  }
}

struct SynthesizeArgs {
  int w = 0;
  int t = 1;
  int w_prime = 0;
  std::uint64_t seed = 1;
  std::string engine = "auto";
  long budget_s = 0;
  std::string out;
  std::string circuit_out;
};

catprep::SearchConfig config_from(const SynthesizeArgs& args) {
  catprep::SearchConfig cfg;
  cfg.width = args.w;
  cfg.target = args.t;
  cfg.seed = args.seed;
  if (args.w_prime > 0) {
    cfg.w_prime_min = args.w_prime;
    cfg.w_prime_max = args.w_prime;
  }
  // Environment overrides, documented in --help and the README.
  const long budget_s =
      args.budget_s > 0 ? args.budget_s : env_long("CATPREP_ENGINE_TIMEOUT_S", 300);
  cfg.cegar_budget.time_limit = std::chrono::seconds(budget_s);
  cfg.cegar_budget.max_refinements = env_long("CATPREP_CEGAR_CLAUSE_CAP", 50'000);
  cfg.fixed_budget.time_limit = std::chrono::seconds(std::max(1L, budget_s / 30));
  cfg.element_limit =
      static_cast<std::size_t>(env_long("CATPREP_FAULTSET_LIMIT", 100'000'000));
  // Engine restriction: zeroing an engine's budget makes the sweep skip it.
  if (args.engine == "fixed" || args.engine == "local") {
    cfg.cegar_budget.time_limit = std::chrono::milliseconds(0);
  }
  if (args.engine == "local") cfg.fixed_budget.time_limit = std::chrono::milliseconds(0);
  if (args.engine == "fixed") cfg.local_iters = 1;
  return cfg;
}

int run_synthesize(const SynthesizeArgs& args) {
  catprep::SearchConfig cfg = config_from(args);

  catprep::SynthesisReport report;
  if (args.engine == "cegar") {
    // CEGAR only: run the joint engine over the sweep without fallbacks.
    const catprep::PrepCircuit data = catprep::build_balanced_tree(cfg.width);
    const catprep::AncillaBound bound =
        catprep::ancilla_lower_bound(data, cfg.target);
    int lo = cfg.w_prime_min > 0 ? cfg.w_prime_min : bound.w_min;
    int hi = cfg.w_prime_max > 0 ? cfg.w_prime_max : cfg.width;
    for (int wp = std::max(2, lo); wp <= hi && !report.success; ++wp) {
      const catprep::PrepCircuit ancilla = catprep::build_balanced_tree(wp);
      catprep::TableCache cache(data, ancilla, cfg.target, cfg.element_limit);
      const auto r = catprep::solve_cegar(data, ancilla, cfg.target,
                                          cfg.cegar_budget, cache);
      report.attempts.push_back({wp, "cegar", catprep::to_string(r.status)});
      if (r.status == catprep::SolveStatus::Sat &&
          !catprep::oracle_check(data, ancilla, r.wiring, cfg.target,
                                 cfg.element_limit)) {
        report.success = true;
        report.solution.w = cfg.width;
        report.solution.w_prime = wp;
        report.solution.target = cfg.target;
        report.solution.wiring = r.wiring;
        report.solution.engine = "cegar";
        report.solution.seed = cfg.seed;
        report.solution.certified = true;
      }
    }
  } else {
    report = catprep::synthesize(cfg);
  }

  for (const auto& a : report.attempts) {
    std::cerr << "  w_prime=" << a.w_prime << " engine=" << a.engine
              << " outcome=" << a.outcome << "\n";
  }
  if (!report.success) {
    std::cout << "search exhausted: no certified wiring found\n";
    return kExitExhausted;
  }
  write_file(args.out, catprep::to_text(report.solution));
  if (!args.circuit_out.empty()) {
    write_file(args.circuit_out,
               catprep::to_text(catprep::flatten(circuit_for(report.solution))));
  }
  std::cout << "solution: w=" << report.solution.w
            << " w_prime=" << report.solution.w_prime
            << " t=" << report.solution.target
            << " engine=" << report.solution.engine << "\n";
  return kExitPass;
}

int run_verify(const std::string& solution_path, int t_override) {
  const catprep::Solution sol = load_solution(solution_path);
  const int target = t_override > 0 ? t_override : sol.target;
  const auto data = catprep::build_balanced_tree(sol.w);
  const auto ancilla = catprep::build_balanced_tree(sol.w_prime);
  const auto v = catprep::oracle_check(data, ancilla, sol.wiring, target);
  if (v) {
    std::cout << "VIOLATION at t=" << target << ": " << catprep::to_text(*v) << "\n";
    return kExitViolation;
  }
  std::cout << "PASS: wiring is fault-tolerant to order " << target << "\n";
  return kExitPass;
}

int run_simulate(const std::string& solution_path, double p, long shots,
                 std::uint64_t seed, int threads, bool observable_init_noise,
                 const std::string& out, const std::string& profile_out) {
  const catprep::Solution sol = load_solution(solution_path);
  const auto circuit = circuit_for(sol);
  catprep::NoiseModel nm;
  nm.p = p;
  nm.observable_init_flips = observable_init_noise;
  const catprep::SimReport report =
      catprep::estimate(circuit, nm, shots, seed, threads);
  write_file(out, report.to_csv(sol.target));
  if (!profile_out.empty()) {
    // Long-format bitflip histogram, one row per k, ready for plotting.
    std::ostringstream plot;
    plot << "k,P_k\n";
    char buf[32];
    for (std::size_t k = 0; k < report.p_k.size(); ++k) {
      std::snprintf(buf, sizeof buf, "%.8e", report.p_k[k]);
      plot << k << "," << buf << "\n";
    }
    write_file(profile_out, plot.str());
  }
  std::cout << "R_acc=" << report.r_acc << " accepted=" << report.accepted
            << "/" << report.shots << "\n";
  return kExitPass;
}

int run_report(const std::string& fixtures_dir, const std::string& solutions_dir,
               const std::string& sim_dir, const std::string& out) {
  namespace fs = std::filesystem;
  const auto fixtures = catprep::load_fixtures(fixtures_dir);

  std::vector<catprep::Solution> solutions;
  if (fs::exists(solutions_dir)) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(solutions_dir)) {
      if (entry.is_regular_file()) files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& path : files) {
      try {
        solutions.push_back(catprep::parse_solution_text(read_file(path.string())));
      } catch (const std::invalid_argument& e) {
        std::cerr << "skipping " << path.string() << ": " << e.what() << "\n";
      }
    }
  }

  // Optional simulation CSVs from earlier `simulate` runs supply R_acc.
  std::map<std::pair<int, int>, double> sim_racc;
  if (!sim_dir.empty() && fs::exists(sim_dir)) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(sim_dir)) {
      if (entry.path().extension() == ".csv") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& path : files) {
      std::ifstream in(path);
      std::string header, row;
      if (!std::getline(in, header) || !std::getline(in, row)) continue;
      std::istringstream rs(row);
      std::string field;
      std::vector<std::string> fields;
      while (std::getline(rs, field, ',')) fields.push_back(field);
      if (fields.size() < 7) continue;
      try {
        const int w = std::stoi(fields[0]);
        const int t = std::stoi(fields[2]);
        const double r = std::stod(fields[6]);
        sim_racc[{t, w}] = 100.0 * r;
      } catch (const std::exception&) {
        continue;
      }
    }
  }

  const catprep::ComparisonReport report =
      catprep::build_report(solutions, fixtures, sim_racc);
  for (const auto& warning : report.warnings) std::cerr << warning << "\n";
  write_file(out, report.to_csv());
  std::cout << "rows=" << report.rows.size()
            << " metric_mismatches=" << report.mismatch_count() << "\n";
  return kExitPass;
}

int run_emit_circuit(const std::string& solution_path, const std::string& out) {
  const catprep::Solution sol = load_solution(solution_path);
  write_file(out, catprep::to_text(catprep::flatten(circuit_for(sol))));
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "catprep: synthesis, verification and simulation of fault-tolerant "
      "cat-state preparation circuits.\n"
      "Exit codes: 0 success/pass, 1 verification violation, 2 search "
      "exhausted, 3 resource limit, 64 malformed input file.\n"
      "Environment overrides: CATPREP_ENGINE_TIMEOUT_S, "
      "CATPREP_CEGAR_CLAUSE_CAP, CATPREP_FAULTSET_LIMIT."};
  app.require_subcommand(1);

  SynthesizeArgs syn;
  auto* cmd_syn = app.add_subcommand(
      "synthesize", "Search for a fault-tolerant partial transversal CNOT");
  cmd_syn->add_option("--w", syn.w, "cat state size")->required();
  cmd_syn->add_option("--t", syn.t, "fault-tolerance order")->required();
  cmd_syn->add_option("--w-prime", syn.w_prime, "pin the ancilla size");
  cmd_syn->add_option("--seed", syn.seed, "RNG seed (default 1)");
  cmd_syn->add_option("--engine", syn.engine, "auto|cegar|fixed|local")
      ->check(CLI::IsMember({"auto", "cegar", "fixed", "local"}));
  cmd_syn->add_option("--budget", syn.budget_s, "per-engine time budget, seconds");
  cmd_syn->add_option("--out", syn.out, "solution file to write")->required();
  cmd_syn->add_option("--circuit-out", syn.circuit_out,
                      "also write the assembled circuit text");

  std::string verify_solution;
  int verify_t = 0;
  auto* cmd_verify = app.add_subcommand(
      "verify", "Exhaustively check a solution file's fault tolerance");
  cmd_verify->add_option("--solution", verify_solution, "solution file")->required();
  cmd_verify->add_option("--t", verify_t, "override the order to check");

  std::string sim_solution, sim_out, sim_profile_out;
  double sim_p = 0.001;
  long sim_shots = 1'000'000;
  std::uint64_t sim_seed = 1;
  int sim_threads = 1;
  bool sim_init_noise = false;
  auto* cmd_sim = app.add_subcommand(
      "simulate", "Monte Carlo noise simulation of a solution's circuit");
  cmd_sim->add_option("--solution", sim_solution, "solution file")->required();
  cmd_sim->add_option("--p", sim_p, "physical error rate")->required();
  cmd_sim->add_option("--shots", sim_shots, "number of shots")->required();
  cmd_sim->add_option("--seed", sim_seed, "RNG seed");
  cmd_sim->add_option("--threads", sim_threads, "worker threads (result invariant)");
  cmd_sim->add_flag("--observable-init-noise", sim_init_noise,
                    "apply X-type init flips instead of phase-type");
  cmd_sim->add_option("--out", sim_out, "report CSV to write")->required();
  cmd_sim->add_option("--profile-out", sim_profile_out,
                      "also write the bitflip histogram as k,P_k rows");

  std::string rep_fixtures, rep_solutions, rep_sim, rep_out;
  auto* cmd_report = app.add_subcommand(
      "report", "Join synthesized circuits against the comparison fixtures");
  cmd_report->add_option("--fixtures", rep_fixtures, "fixtures directory")->required();
  cmd_report->add_option("--solutions", rep_solutions, "solutions directory")->required();
  cmd_report->add_option("--sim", rep_sim, "directory of simulate CSVs (optional)");
  cmd_report->add_option("--out", rep_out, "report CSV to write")->required();

  std::string emit_solution, emit_out;
  auto* cmd_emit = app.add_subcommand(
      "emit-circuit", "Write a solution's assembled circuit as text");
  cmd_emit->add_option("--solution", emit_solution, "solution file")->required();
  cmd_emit->add_option("--out", emit_out, "circuit text file to write")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (cmd_syn->parsed()) return run_synthesize(syn);
    if (cmd_verify->parsed()) return run_verify(verify_solution, verify_t);
    if (cmd_sim->parsed()) {
      return run_simulate(sim_solution, sim_p, sim_shots, sim_seed, sim_threads,
                          sim_init_noise, sim_out, sim_profile_out);
    }
    if (cmd_report->parsed()) {
      return run_report(rep_fixtures, rep_solutions, rep_sim, rep_out);
    }
    if (cmd_emit->parsed()) return run_emit_circuit(emit_solution, emit_out);
  } catch (const catprep::ResourceLimitError& e) {
    std::cerr << "resource limit: " << e.what() << "\n";
    return kExitResource;
  } catch (const std::invalid_argument& e) {
    std::cerr << "bad input: " << e.what() << "\n";
    return kExitBadFile;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitResource;
  }
  return kExitPass;
}
