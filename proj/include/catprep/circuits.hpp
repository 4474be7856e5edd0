#pragma once

#include <string>
#include <utility>
#include <vector>

#include "catprep/error_vector.hpp"

namespace catprep {

struct CxGate {
  int control = 0;
  int target = 0;
  friend bool operator==(const CxGate&, const CxGate&) = default;
};

// A CNOT circuit preparing a w-qubit cat state: one qubit starts in |+>,
// the rest in |0>, and the (control -> target) edges form a spanning tree
// rooted at the |+> qubit. Gates are grouped into layers of disjoint CNOTs.
struct PrepCircuit {
  int width = 0;
  int root = 0;
  std::vector<std::vector<CxGate>> layers;
  std::vector<int> parent;  // parent[q] = control that entangles q, -1 for root

  int depth() const { return static_cast<int>(layers.size()); }
  int cx_count() const;
};

// Balanced-tree preparation: the entangled set doubles each layer and the
// single-fault supports are contiguous intervals. Depth is ceil(log2 w).
PrepCircuit build_balanced_tree(int w);

// Turns an arbitrary spanning tree into a preparation circuit, assigning
// each CNOT the earliest layer after its control is entangled. Children of
// a node are scheduled largest-subtree-first, which minimizes depth and
// reproduces build_balanced_tree when given its parent map. If max_children
// is positive, nodes with more children are rejected.
PrepCircuit build_from_tree(const std::vector<int>& parent, int root,
                            int max_children = 0);

// An injective wiring of w' data controls onto the w' ancilla targets.
struct PartialTransversalCx {
  std::vector<std::pair<int, int>> pairs;  // (data control, ancilla target)

  PartialTransversalCx() = default;
  explicit PartialTransversalCx(std::vector<std::pair<int, int>> p);

  static PartialTransversalCx from_controls_and_permutation(
      const std::vector<int>& controls, const std::vector<int>& sigma);

  int size() const { return static_cast<int>(pairs.size()); }
  // Throws std::invalid_argument unless the wiring is a bijection from w'
  // distinct data indices in [w] onto all of [w'].
  void validate(int w, int w_prime) const;

  std::vector<int> controls() const;  // data indices, in stored pair order
  std::vector<int> targets() const;   // ancilla indices, aligned with controls

  // The induced error mapping: copies the bits of a data-side error that
  // sit on wired controls over to their ancilla targets.
  ErrorMask map_error(ErrorMask data_error) const;
};

// Data and ancilla preparations joined by a verified transversal CNOT layer
// and a Z-measurement of every ancilla qubit. In the flat qubit layout the
// ancilla qubits are offset by data.width.
struct VerifiedPrepCircuit {
  PrepCircuit data;
  PrepCircuit ancilla;
  PartialTransversalCx wiring;

  int width() const { return data.width; }
  int ancilla_width() const { return ancilla.width; }
  int qubit_count() const { return data.width + ancilla.width; }
  int cx_count() const;
  // Preparation layers of the two subcircuits run in parallel, aligned to
  // finish together at the transversal layer.
  int prep_depth() const;
};

VerifiedPrepCircuit assemble(PrepCircuit data, PrepCircuit ancilla,
                             PartialTransversalCx wiring);

struct CircuitMetrics {
  int depth_report = 0;  // prep depth + transversal layer + measurement layer
  int cnot_depth = 0;    // prep depth + transversal layer
  int cx_count = 0;
  int qubit_count = 0;
  friend bool operator==(const CircuitMetrics&, const CircuitMetrics&) = default;
};

CircuitMetrics metrics(const VerifiedPrepCircuit& c);

// Line-oriented circuit text: QUBITS/PLUS/ZERO/CX/MZ records with layers
// separated by TICK lines. Indices are 0-based.
struct FlatCircuit {
  int qubits = 0;
  std::vector<int> plus;
  std::vector<int> zero;
  std::vector<std::vector<CxGate>> layers;
  std::vector<int> measure_z;

  friend bool operator==(const FlatCircuit&, const FlatCircuit&) = default;
};

FlatCircuit flatten(const VerifiedPrepCircuit& c);
FlatCircuit flatten(const PrepCircuit& c);
std::string to_text(const FlatCircuit& c);
FlatCircuit parse_circuit_text(const std::string& text);

}  // namespace catprep
