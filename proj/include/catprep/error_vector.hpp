#pragma once

#include <bit>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace catprep {

// An X-error pattern on up to 64 qubits, stored as a bitmask: bit i is set
// iff qubit i carries an X. Qubit indices are 0-based throughout.
using ErrorMask = std::uint64_t;

inline constexpr int kMaxQubits = 64;

constexpr ErrorMask full_mask(int n) {
  return n >= 64 ? ~ErrorMask{0} : ((ErrorMask{1} << n) - 1);
}

constexpr ErrorMask complement(ErrorMask e, int n) { return ~e & full_mask(n); }

inline int popcount(ErrorMask e) { return std::popcount(e); }

// Weight modulo the cat-state stabilizer X^n: an error and its bitwise
// complement act identically on the state, so the weight is the smaller
// of the two support sizes.
inline int weight(ErrorMask e, int n) {
  const int c = std::popcount(e);
  return c <= n - c ? c : n - c;
}

// Canonical form modulo the stabilizer: the representative with smaller
// support, ties broken toward the smaller mask value.
inline ErrorMask canonical(ErrorMask e, int n) {
  const ErrorMask f = complement(e, n);
  const int ce = std::popcount(e);
  const int cf = std::popcount(f);
  if (ce != cf) return ce < cf ? e : f;
  return e < f ? e : f;
}

// Restriction of an error to the chosen control qubits: output bit j is
// the input bit at controls[j].
inline ErrorMask project_mask(ErrorMask e, std::span<const int> controls) {
  ErrorMask out = 0;
  for (std::size_t j = 0; j < controls.size(); ++j) {
    out |= ((e >> controls[j]) & 1U) << j;
  }
  return out;
}

// Relabels the support of m through a permutation: bit i moves to sigma[i].
inline ErrorMask apply_permutation(std::span<const int> sigma, ErrorMask m) {
  ErrorMask out = 0;
  while (m != 0) {
    const int i = std::countr_zero(m);
    out |= ErrorMask{1} << sigma[i];
    m &= m - 1;
  }
  return out;
}

inline bool is_permutation(std::span<const int> sigma) {
  ErrorMask seen = 0;
  for (int v : sigma) {
    if (v < 0 || static_cast<std::size_t>(v) >= sigma.size()) return false;
    if ((seen >> v) & 1U) return false;
    seen |= ErrorMask{1} << v;
  }
  return true;
}

std::string to_hex(ErrorMask e);
ErrorMask mask_from_hex(const std::string& s);

// Renders e as the bit list "[1,0,1]" with qubit 0 first.
std::string to_bit_string(ErrorMask e, int n);

// Raised when an enumeration would exceed its configured element budget.
class ResourceLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace catprep
