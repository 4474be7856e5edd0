#include "catprep/ftcheck.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace catprep {

namespace {

struct ScanResult {
  bool found = false;
  Violation best;

  void offer(const Violation& v) {
    if (!found) {
      found = true;
      best = v;
      return;
    }
    const auto key = [](const Violation& x) {
      return std::tuple(x.data_order, x.data_error, x.ancilla_order, x.ancilla_error);
    };
    if (key(v) < key(best)) best = v;
  }
};

// Minimal violation with data_order + ancilla_order <= budget, or nothing.
ScanResult scan_violations(const FaultLevels& data, const FaultLevels& ancilla,
                           const PartialTransversalCx& wiring, int budget) {
  const int w = data.width();
  const int wp = static_cast<int>(wiring.pairs.size());
  ScanResult result;
  for (int a = 1; a <= budget; ++a) {
    for (ErrorMask e : data.level(a)) {
      const int wt = weight(e, w);
      if (wt <= a) continue;
      const ErrorMask fe = wiring.map_error(e);
      ScanResult local;
      for (ErrorMask cand : {fe, complement(fe, wp)}) {
        const int b = ancilla.order_of(cand);
        if (b < 0 || a + b > budget || wt <= a + b) continue;
        local.offer({e, a, cand, b, wt});
      }
      if (local.found) result.offer(local.best);
    }
    // Levels are scanned in ascending (a, e) order, so the first hit already
    // minimizes the leading key.
    if (result.found) break;
  }
  return result;
}

}  // namespace

std::string to_text(const Violation& v) {
  std::ostringstream out;
  out << "data_error=" << to_hex(v.data_error) << " data_order=" << v.data_order
      << " ancilla_error=" << to_hex(v.ancilla_error)
      << " ancilla_order=" << v.ancilla_order
      << " residual_weight=" << v.residual_weight;
  return out.str();
}

std::optional<Violation> check_permutation(std::span<const int> sigma,
                                           const FaultTables& tables) {
  if (static_cast<int>(sigma.size()) != tables.ancilla_width ||
      !is_permutation(sigma)) {
    throw std::invalid_argument("sigma is not a permutation of the ancilla");
  }
  if (tables.controls_invalid) {
    return Violation{tables.invalid_error, tables.invalid_order, 0, 0,
                     weight(tables.invalid_error, tables.width)};
  }
  for (const Representative& rep : tables.reps) {
    const ErrorMask image = apply_permutation(sigma, rep.projection);
    const auto it = rep.bad.find(image);
    if (it != rep.bad.end()) {
      return Violation{rep.error, rep.k, it->second.error, it->second.order,
                       weight(rep.error, tables.width)};
    }
  }
  return std::nullopt;
}

std::optional<Violation> oracle_check(const PrepCircuit& data,
                                      const PrepCircuit& ancilla,
                                      const PartialTransversalCx& wiring,
                                      int target, std::size_t element_limit) {
  if (target < 0) throw std::invalid_argument("negative fault-tolerance order");
  wiring.validate(data.width, ancilla.width);
  if (target == 0) return std::nullopt;
  const FaultLevels dl = FaultLevels::build(data, target, element_limit);
  const FaultLevels al = FaultLevels::build(ancilla, target - 1, element_limit);
  ScanResult r = scan_violations(dl, al, wiring, target);
  if (r.found) return r.best;
  return std::nullopt;
}

int max_ft_order(const PrepCircuit& data, const PrepCircuit& ancilla,
                 const PartialTransversalCx& wiring, int t_max,
                 std::size_t element_limit) {
  wiring.validate(data.width, ancilla.width);
  // No residual error can weigh more than floor(w/2), so fault-tolerance
  // orders saturate there.
  const int cap = std::min(t_max, data.width / 2);
  if (cap <= 0) return 0;
  const FaultLevels dl = FaultLevels::build(data, cap, element_limit);
  const FaultLevels al = FaultLevels::build(ancilla, cap - 1, element_limit);

  int best = cap;
  for (int a = 1; a <= cap; ++a) {
    for (ErrorMask e : dl.level(a)) {
      const int wt = weight(e, data.width);
      if (wt <= a) continue;
      const ErrorMask fe = wiring.map_error(e);
      for (ErrorMask cand : {fe, complement(fe, ancilla.width)}) {
        const int b = al.order_of(cand);
        if (b < 0) continue;
        // Faulty at every order >= a + b where the weight still exceeds it.
        if (wt > a + b) best = std::min(best, a + b - 1);
      }
    }
  }
  return std::max(best, 0);
}

}  // namespace catprep
