#pragma once

#include <optional>
#include <span>
#include <string>

#include "catprep/circuits.hpp"
#include "catprep/faults.hpp"

namespace catprep {

// A witness that some t data faults and t' ancilla faults leave an
// undetected residual error heavier than t + t'.
struct Violation {
  ErrorMask data_error = 0;
  int data_order = 0;
  ErrorMask ancilla_error = 0;
  int ancilla_order = 0;
  int residual_weight = 0;

  friend bool operator==(const Violation&, const Violation&) = default;
};

std::string to_text(const Violation& v);

// Table-driven check of one ancilla permutation against precomputed
// representatives. Returns the first violation in deterministic order
// (invalid-controls witness first, then ascending (k, representative)),
// or nullopt when the permutation is fault-tolerant for tables.target.
std::optional<Violation> check_permutation(std::span<const int> sigma,
                                           const FaultTables& tables);

// Exhaustive ground truth: enumerates both fault sets up to `target` and
// rejects iff some t + t' <= target faults combine to an undetected data
// error of weight > t + t'. The reported witness is the minimum under
// (data order, data error, ancilla order, ancilla error).
std::optional<Violation> oracle_check(const PrepCircuit& data,
                                      const PrepCircuit& ancilla,
                                      const PartialTransversalCx& wiring,
                                      int target,
                                      std::size_t element_limit = kDefaultFaultSetLimit);

// Largest T <= t_max for which oracle_check passes. Orders beyond
// floor(w/2) are indistinguishable (no residual error can exceed that
// weight), so the scan saturates there. Returns 0 if not even FT1.
int max_ft_order(const PrepCircuit& data, const PrepCircuit& ancilla,
                 const PartialTransversalCx& wiring, int t_max,
                 std::size_t element_limit = kDefaultFaultSetLimit);

}  // namespace catprep
