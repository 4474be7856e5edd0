#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "catprep/circuits.hpp"
#include "catprep/rng.hpp"

namespace catprep {

// Circuit-level noise parameterized by a single strength p: two-qubit
// depolarizing noise after every CNOT (transversal layer included),
// initialization flips with probability 2/3 p, and classical flips with
// probability 2/3 p on the ancilla measurements. The data qubits are
// measured out fault-free.
//
// Initialization flips are phase-type by default, which leaves them
// unobservable in this scheme; this is the convention the published
// acceptance-rate tables follow. Setting observable_init_flips applies
// X flips to the |0>-initialized qubits instead (Z stays on the |+>
// roots), a strictly more pessimistic variant.
struct NoiseModel {
  double p = 0.0;
  bool observable_init_flips = false;

  double cx_depolarize() const { return p; }
  double init_flip() const { return 2.0 / 3.0 * p; }
  double measure_flip() const { return 2.0 / 3.0 * p; }
};

// Accumulated Pauli error, tracked separately over the data and ancilla
// registers. CNOTs copy X control->target and Z target->control.
struct PauliFrame {
  ErrorMask x_data = 0;
  ErrorMask z_data = 0;
  ErrorMask x_anc = 0;
  ErrorMask z_anc = 0;
};

struct ShotResult {
  bool accepted = false;
  int flips = 0;  // min(sum of data bits, w - sum), valid when accepted
};

struct SimReport {
  int w = 0;
  int w_prime = 0;
  double p = 0.0;
  long shots = 0;
  long accepted = 0;
  double r_acc = 0.0;
  double std_err = 0.0;
  std::uint64_t seed = 0;
  std::vector<long> flip_counts;  // accepted shots by flips, size w/2 + 1
  std::vector<double> p_k;        // flip_counts normalized by accepted

  std::string to_csv(int target) const;
};

ShotResult sample_shot(const VerifiedPrepCircuit& c, const NoiseModel& nm,
                       SplitMix64& rng);

// Monte Carlo estimate of the acceptance rate and the post-selected bitflip
// histogram. Per-shot RNG streams are derived from (seed, shot index), so
// the report is bit-identical for any thread count.
SimReport estimate(const VerifiedPrepCircuit& c, const NoiseModel& nm,
                   long shots, std::uint64_t seed, int threads = 1);

std::vector<double> error_profile(const VerifiedPrepCircuit& c,
                                  const NoiseModel& nm, long shots,
                                  std::uint64_t seed, int threads = 1);

// --- Deterministic fault injection (noise off) ---

// An X inserted on one wire of a preparation subcircuit at a layer
// boundary: time = k means after that subcircuit's k-th layer (0 = at
// initialization).
struct FaultSite {
  bool on_ancilla = false;
  int time = 0;
  int qubit = 0;
};

ShotResult run_with_faults(const VerifiedPrepCircuit& c,
                           std::span<const FaultSite> faults);

// Every distinct injection point within the two preparation subcircuits.
std::vector<FaultSite> prep_fault_sites(const VerifiedPrepCircuit& c);

// --- Low-order analytic expansion ---

// Exact sum of the acceptance probability over all worlds with at most two
// faulted locations. The truncation error is bounded by the probability
// mass of the remaining worlds: r_low <= R_acc <= r_low + (1 - covered).
struct ExpansionEstimate {
  double r_low = 0.0;
  double covered = 0.0;

  double upper() const { return r_low + (1.0 - covered); }
};

ExpansionEstimate acceptance_expansion(const VerifiedPrepCircuit& c,
                                       const NoiseModel& nm);

}  // namespace catprep
