#include "catprep/faults.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

namespace catprep {

namespace {

// Propagates an X pattern through layers [from, depth): X on a control
// copies onto its target.
ErrorMask propagate(const PrepCircuit& c, ErrorMask e, int from) {
  for (int l = from; l < c.depth(); ++l) {
    for (const CxGate& g : c.layers[l]) {
      e ^= ((e >> g.control) & 1U) << g.target;
    }
  }
  return e;
}

void check_controls(const std::vector<int>& controls, int w) {
  ErrorMask seen = 0;
  for (int q : controls) {
    if (q < 0 || q >= w) throw std::invalid_argument("control index out of range");
    if ((seen >> q) & 1U) throw std::invalid_argument("duplicate control index");
    seen |= ErrorMask{1} << q;
  }
  if (controls.empty()) throw std::invalid_argument("empty control list");
}

}  // namespace

bool FaultSet::contains(ErrorMask e) const {
  return std::binary_search(elems.begin(), elems.end(), e);
}

FaultSet single_fault_set(const PrepCircuit& c) {
  std::vector<ErrorMask> out{0};
  // One X at any (wire, layer boundary) point; positions between gates of
  // one layer coincide with a boundary because layers touch each qubit at
  // most once. The root before layer 1 is skipped: X fixes |+>.
  for (int q = 0; q < c.width; ++q) {
    for (int t = 0; t <= c.depth(); ++t) {
      if (q == c.root && t == 0) continue;
      out.push_back(propagate(c, ErrorMask{1} << q, t));
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  FaultSet s;
  s.width = c.width;
  s.order = 1;
  s.elems = std::move(out);
  return s;
}

FaultLevels FaultLevels::from_generators(int width,
                                         const std::vector<ErrorMask>& singles,
                                         int max_order,
                                         std::size_t element_limit) {
  if (max_order < 0) throw std::invalid_argument("negative fault order");
  FaultLevels fl;
  fl.width_ = width;
  fl.max_order_ = max_order;
  fl.levels_.resize(max_order + 1);
  fl.levels_[0] = {0};
  fl.order_[0] = 0;

  std::vector<ErrorMask> gens;
  for (ErrorMask g : singles) {
    if (g != 0) gens.push_back(g);
  }
  std::sort(gens.begin(), gens.end());
  gens.erase(std::unique(gens.begin(), gens.end()), gens.end());

  for (int k = 1; k <= max_order; ++k) {
    std::vector<ErrorMask> fresh;
    for (ErrorMask base : fl.levels_[k - 1]) {
      for (ErrorMask g : gens) {
        const ErrorMask e = base ^ g;
        if (fl.order_.emplace(e, k).second) {
          fresh.push_back(e);
          if (fl.order_.size() > element_limit) {
            throw ResourceLimitError("fault set exceeds element budget of " +
                                     std::to_string(element_limit));
          }
        }
      }
    }
    std::sort(fresh.begin(), fresh.end());
    fl.levels_[k] = std::move(fresh);
  }
  return fl;
}

FaultLevels FaultLevels::build(const PrepCircuit& c, int max_order,
                               std::size_t element_limit) {
  return from_generators(c.width, single_fault_set(c).elems, max_order,
                         element_limit);
}

int FaultLevels::order_of(ErrorMask e) const {
  const auto it = order_.find(e);
  return it == order_.end() ? -1 : it->second;
}

std::size_t FaultLevels::total_size() const { return order_.size(); }

FaultSet FaultLevels::fault_set(int order) const {
  if (order < 0 || order > max_order_) {
    throw std::invalid_argument("order outside enumerated range");
  }
  FaultSet s;
  s.width = width_;
  s.order = order;
  for (int k = 0; k <= order; ++k) {
    s.elems.insert(s.elems.end(), levels_[k].begin(), levels_[k].end());
  }
  std::sort(s.elems.begin(), s.elems.end());
  return s;
}

FaultSet fault_set(const PrepCircuit& c, int order, std::size_t element_limit) {
  if (order < 1) throw std::invalid_argument("fault order must be >= 1");
  return FaultLevels::build(c, order, element_limit).fault_set(order);
}

std::string to_hex_lines(const FaultSet& s) {
  std::ostringstream out;
  for (ErrorMask e : s.elems) out << to_hex(e) << "\n";
  return out.str();
}

FaultTables build_fault_tables(const FaultLevels& data,
                               const FaultLevels& ancilla,
                               std::vector<int> controls, int target) {
  const int w = data.width();
  const int wp = static_cast<int>(controls.size());
  check_controls(controls, w);
  if (wp > ancilla.width()) {
    throw std::invalid_argument("more controls than ancilla qubits");
  }
  if (target < 1) throw std::invalid_argument("target order must be >= 1");
  if (data.max_order() < target || ancilla.max_order() < target - 1) {
    throw std::invalid_argument("fault levels too shallow for target");
  }

  FaultTables t;
  t.width = w;
  t.ancilla_width = wp;
  t.target = target;
  t.controls = std::move(controls);

  const ErrorMask proj_full = full_mask(wp);

  // A data error that avoids the controls entirely (or covers all of them)
  // has a fixed measured image no permutation can move; if it is heavier
  // than its fault order the control choice itself is broken.
  for (int a = 1; a <= target && !t.controls_invalid; ++a) {
    for (ErrorMask e : data.level(a)) {
      if (weight(e, w) <= a) continue;
      const ErrorMask pe = project_mask(e, t.controls);
      if (pe == 0 || pe == proj_full) {
        t.controls_invalid = true;
        t.invalid_error = e;
        t.invalid_order = a;
        break;
      }
    }
  }
  if (t.controls_invalid) return t;

  for (int k = 1; k < target; ++k) {
    struct Candidate {
      ErrorMask e;
      int wt;
    };
    std::map<ErrorMask, Candidate> groups;  // keyed by projection mod complement
    for (int a = 0; a <= k; ++a) {
      for (ErrorMask e : data.level(a)) {
        const ErrorMask pe = project_mask(e, t.controls);
        const ErrorMask key = canonical(pe, wp);
        const int wt = weight(e, w);
        auto [it, inserted] = groups.try_emplace(key, Candidate{e, wt});
        if (!inserted) {
          Candidate& best = it->second;
          if (wt > best.wt || (wt == best.wt && e < best.e)) best = {e, wt};
        }
      }
    }
    for (const auto& [key, cand] : groups) {
      const int budget = std::min(target - k, cand.wt - k - 1);
      if (budget < 1) continue;
      Representative rep;
      rep.error = cand.e;
      rep.k = k;
      rep.projection = project_mask(cand.e, t.controls);
      rep.budget = budget;
      const int pw = popcount(rep.projection);
      for (int kp = 1; kp <= budget; ++kp) {
        for (ErrorMask ep : ancilla.level(kp)) {
          const int c = popcount(ep);
          if (c != pw && c != wp - pw) continue;
          rep.bad.try_emplace(ep, BadImage{ep, kp});
          rep.bad.try_emplace(complement(ep, wp), BadImage{ep, kp});
        }
      }
      if (!rep.bad.empty()) t.reps.push_back(std::move(rep));
    }
  }
  std::sort(t.reps.begin(), t.reps.end(),
            [](const Representative& a, const Representative& b) {
              if (a.k != b.k) return a.k < b.k;
              return a.error < b.error;
            });
  return t;
}

FaultTables build_fault_tables(const PrepCircuit& data,
                               const PrepCircuit& ancilla,
                               std::vector<int> controls, int target,
                               std::size_t element_limit) {
  const FaultLevels dl = FaultLevels::build(data, target, element_limit);
  const FaultLevels al =
      FaultLevels::build(ancilla, std::max(0, target - 1), element_limit);
  return build_fault_tables(dl, al, std::move(controls), target);
}

}  // namespace catprep
