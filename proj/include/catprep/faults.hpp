#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "catprep/circuits.hpp"
#include "catprep/error_vector.hpp"

namespace catprep {

inline constexpr std::size_t kDefaultFaultSetLimit = 100'000'000;

// The set of end-of-circuit error patterns producible by at most `order`
// X faults. Elements are stored raw (no stabilizer canonicalization),
// sorted ascending, with the zero vector included.
struct FaultSet {
  int width = 0;
  int order = 0;
  std::vector<ErrorMask> elems;

  bool contains(ErrorMask e) const;
};

// All patterns reachable by one X fault at any circuit location, i.e. the
// forward cone of every (wire, layer boundary) point. An X on the |+> root
// before the first layer stabilizes the state and causes no error, so it
// contributes nothing; the zero vector is included by convention.
FaultSet single_fault_set(const PrepCircuit& c);

// Fault patterns bucketed by the minimum number of faults that produce
// them. Level k holds the patterns first reachable with exactly k faults;
// E_t is the union of levels 0..t.
class FaultLevels {
 public:
  static FaultLevels build(const PrepCircuit& c, int max_order,
                           std::size_t element_limit = kDefaultFaultSetLimit);
  // Builds from an explicit single-fault generator list (width w). Used by
  // tests to drive the machinery with hand-made fault structures.
  static FaultLevels from_generators(int width,
                                     const std::vector<ErrorMask>& singles,
                                     int max_order,
                                     std::size_t element_limit = kDefaultFaultSetLimit);

  int width() const { return width_; }
  int max_order() const { return max_order_; }
  const std::vector<ErrorMask>& level(int k) const { return levels_[k]; }
  // Minimum fault count producing e, or -1 if unreachable within max_order.
  int order_of(ErrorMask e) const;
  std::size_t total_size() const;

  FaultSet fault_set(int order) const;

 private:
  int width_ = 0;
  int max_order_ = 0;
  std::vector<std::vector<ErrorMask>> levels_;
  std::unordered_map<ErrorMask, int> order_;
};

FaultSet fault_set(const PrepCircuit& c, int order,
                   std::size_t element_limit = kDefaultFaultSetLimit);

// Sorted hex-encoded bitmasks, one per line, for test fixtures.
std::string to_hex_lines(const FaultSet& s);

struct BadImage {
  ErrorMask error = 0;  // the ancilla-side error pattern itself
  int order = 0;        // its fault order on the ancilla circuit
};

// Worst-case pre-image of one projection class: among all data errors of
// order <= k sharing this projection (modulo the stabilizer complement),
// the maximal-weight one is retained together with the ancilla images that
// could cancel it within the remaining fault budget.
struct Representative {
  ErrorMask error = 0;
  int k = 0;               // data-side fault order this entry guards
  ErrorMask projection = 0;
  int budget = 0;          // h_k(e) = min(t - k, wt(e) - k - 1)
  // Keyed by forbidden measured image; covers both the image itself and its
  // ancilla-stabilizer complement.
  std::unordered_map<ErrorMask, BadImage> bad;
};

// Precomputed tables for deciding fault tolerance of any target permutation
// over a fixed control choice.
struct FaultTables {
  int width = 0;
  int ancilla_width = 0;
  int target = 0;
  std::vector<int> controls;
  std::vector<Representative> reps;  // ordered by (k, error)

  // Set when some data error of order a <= target projects to the all-zero
  // or all-one pattern on the controls while exceeding weight a. No
  // permutation can fix such a control choice.
  bool controls_invalid = false;
  ErrorMask invalid_error = 0;
  int invalid_order = 0;
};

FaultTables build_fault_tables(const FaultLevels& data,
                               const FaultLevels& ancilla,
                               std::vector<int> controls, int target);

// Convenience wrapper: enumerates both circuits' fault levels and builds
// the tables for `target`.
FaultTables build_fault_tables(const PrepCircuit& data,
                               const PrepCircuit& ancilla,
                               std::vector<int> controls, int target,
                               std::size_t element_limit = kDefaultFaultSetLimit);

}  // namespace catprep
