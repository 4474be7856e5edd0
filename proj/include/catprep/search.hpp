#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "catprep/circuits.hpp"
#include "catprep/faults.hpp"
#include "catprep/ftcheck.hpp"

namespace catprep {

// One counting constraint derived from the fault structure: at least
// min_controls of the qubits in `subtree` must be wired to the ancilla.
struct SubtreeConstraint {
  ErrorMask subtree = 0;
  int min_controls = 0;
};

struct AncillaBound {
  int w_min = 0;
  std::vector<SubtreeConstraint> constraints;
};

// Necessary conditions on the ancilla size and control placement: every
// single-fault support larger than t needs at least t connected qubits,
// and t >= 2 additionally forces w' >= ceil(w/2).
AncillaBound ancilla_lower_bound(const PrepCircuit& data, int target);

enum class SolveStatus { Sat, Unsat, Timeout, Fail };

std::string to_string(SolveStatus s);

struct EngineBudget {
  std::chrono::milliseconds time_limit{300'000};
  long max_refinements = 50'000;
};

struct FixedControlsResult {
  SolveStatus status = SolveStatus::Fail;
  std::vector<int> sigma;
  long nodes = 0;
};

// Complete backtracking search over target permutations for a fixed control
// choice. Unsat answers are exhaustive; running out of budget is reported
// as Timeout, never as Unsat.
FixedControlsResult solve_fixed_controls(const FaultTables& tables,
                                         const EngineBudget& budget);

struct LocalSearchResult {
  SolveStatus status = SolveStatus::Fail;  // Sat or Fail
  std::vector<int> sigma;
  long iterations = 0;
};

// Randomized local repair: start from a random permutation and swap a
// support index of a violated projection with an outside index until the
// violation clears. If one conflict resists more than 4*w' swaps the
// permutation is resampled uniformly; that restart is charged against
// n_iter. Incomplete: Fail does not mean Unsat.
LocalSearchResult local_search(const FaultTables& tables, long n_iter,
                               std::uint64_t seed);

// Shared fault-level cache so the joint search can reuse data/ancilla
// enumerations and per-control-set tables across candidates.
class TableCache {
 public:
  TableCache(const PrepCircuit& data, const PrepCircuit& ancilla, int target,
             std::size_t element_limit = kDefaultFaultSetLimit);

  const FaultTables& tables_for(const std::vector<int>& controls);
  const FaultLevels& data_levels() const { return data_levels_; }
  const FaultLevels& ancilla_levels() const { return ancilla_levels_; }

 private:
  int target_;
  FaultLevels data_levels_;
  FaultLevels ancilla_levels_;
  std::map<std::vector<int>, std::unique_ptr<FaultTables>> cache_;
};

struct CegarResult {
  SolveStatus status = SolveStatus::Fail;
  PartialTransversalCx wiring;
  long refinements = 0;
};

// Joint solve-check-refine search over control selection and wiring. The
// abstraction keeps only the structural constraints (w' controls, distinct
// targets); every counterexample adds a blocking clause forbidding the data
// error's current measured image. Unsat means the clause set admits no
// assignment, i.e. no FT wiring of this shape exists.
CegarResult solve_cegar(const PrepCircuit& data, const PrepCircuit& ancilla,
                        int target, const EngineBudget& budget,
                        TableCache& cache);

struct SearchConfig {
  int width = 0;
  int target = 1;
  int w_prime_min = 0;  // 0: start at ancilla_lower_bound
  int w_prime_max = 0;  // 0: up to width
  std::uint64_t seed = 1;
  EngineBudget cegar_budget;
  EngineBudget fixed_budget{std::chrono::milliseconds{10'000}, 50'000};
  long local_iters = 0;  // 0: default 10 * w' * t
  std::size_t element_limit = kDefaultFaultSetLimit;
};

struct Solution {
  int w = 0;
  int w_prime = 0;
  int target = 0;
  PartialTransversalCx wiring;
  std::string engine;
  std::uint64_t seed = 0;
  double wall_seconds = 0.0;
  long refinements = 0;
  long iterations = 0;
  bool certified = false;
};

struct EngineOutcome {
  int w_prime = 0;
  std::string engine;
  std::string outcome;
};

struct SynthesisReport {
  bool success = false;
  Solution solution;
  std::vector<EngineOutcome> attempts;
};

// Layered orchestration: sweep w' upward from the lower bound; per size run
// the joint CEGAR first, and on timeout fall back to enumerating control
// selections, filtering each with the complete fixed-controls engine before
// trying local repair. Every emitted solution is oracle-certified.
SynthesisReport synthesize(const SearchConfig& config);

std::string to_text(const Solution& s);
Solution parse_solution_text(const std::string& text);

}  // namespace catprep
