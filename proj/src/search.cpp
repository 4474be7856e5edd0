#include "catprep/search.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "catprep/rng.hpp"

namespace catprep {

namespace {

using Clock = std::chrono::steady_clock;

struct Deadline {
  Clock::time_point end;
  explicit Deadline(std::chrono::milliseconds budget) : end(Clock::now() + budget) {}
  bool expired() const { return Clock::now() >= end; }
};

}  // namespace

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Sat: return "sat";
    case SolveStatus::Unsat: return "unsat";
    case SolveStatus::Timeout: return "timeout";
    case SolveStatus::Fail: return "fail";
  }
  return "unknown";
}

AncillaBound ancilla_lower_bound(const PrepCircuit& data, int target) {
  if (target < 1) throw std::invalid_argument("target order must be >= 1");
  const int w = data.width;
  AncillaBound bound;

  // Single-fault supports form a laminar family on a tree circuit. If a
  // support S keeps only c wired qubits, one fault creating S plus c single
  // ancilla faults cancel the copied image, spending 1 + c faults on a
  // residual of weight wt(S). That breaks order 1 + c whenever
  // wt(S) > 1 + c, so S needs at least min(t, wt(S) - 1) controls.
  std::vector<ErrorMask> cones;
  for (ErrorMask e : single_fault_set(data).elems) {
    if (e != 0 && popcount(e) > 1) cones.push_back(e);
  }
  std::sort(cones.begin(), cones.end(), [](ErrorMask a, ErrorMask b) {
    if (popcount(a) != popcount(b)) return popcount(a) > popcount(b);
    return a < b;
  });

  for (ErrorMask s : cones) {
    const int need = std::min(target, weight(s, w) - 1);
    if (need >= 1) bound.constraints.push_back({s, need});
  }

  // Counting bound over the laminar forest: disjoint constrained supports
  // add up, and nested ones take the max of their own demand and their
  // children's total.
  std::vector<int> parent(cones.size(), -1);
  for (std::size_t i = 0; i < cones.size(); ++i) {
    // Cones are sorted by descending size, so the nearest enclosing cone of
    // i is the last j < i containing it.
    for (std::size_t j = i; j-- > 0;) {
      if ((cones[j] & cones[i]) == cones[i] && cones[j] != cones[i]) {
        parent[i] = static_cast<int>(j);
        break;
      }
    }
  }
  int total = 0;
  std::vector<int> child_sum(cones.size(), 0);
  for (std::size_t i = cones.size(); i-- > 0;) {
    const int own = std::max(0, std::min(target, weight(cones[i], w) - 1));
    const int need = std::max(own, child_sum[i]);
    if (parent[i] >= 0) {
      child_sum[parent[i]] += need;
    } else {
      total += need;
    }
  }

  bound.w_min = total;
  if (target >= 2) bound.w_min = std::max(bound.w_min, (w + 1) / 2);
  bound.w_min = std::max(bound.w_min, 2);
  bound.w_min = std::min(bound.w_min, w);
  return bound;
}

// --- Complete backtracking over target permutations ---

namespace {

struct PermConstraint {
  std::vector<int> positions;  // projected indices whose images matter
  const std::unordered_map<ErrorMask, BadImage>* bad = nullptr;
};

struct PermSearcher {
  int wp;
  std::vector<PermConstraint> constraints;
  std::vector<std::vector<int>> by_position;  // constraint ids completed per position
  std::vector<int> sigma;
  std::vector<bool> used;
  std::vector<ErrorMask> image;     // partial image per constraint
  std::vector<int> remaining;      // unassigned positions per constraint
  long nodes = 0;
  const Deadline* deadline = nullptr;
  bool timed_out = false;

  bool conflict(int cid) const {
    const PermConstraint& c = constraints[cid];
    return remaining[cid] == 0 && c.bad->count(image[cid]) > 0;
  }

  bool assign(int pos, int v) {
    sigma[pos] = v;
    used[v] = true;
    bool ok = true;
    for (int cid : by_position[pos]) {
      image[cid] |= ErrorMask{1} << v;
      --remaining[cid];
      if (conflict(cid)) ok = false;
    }
    return ok;
  }

  void unassign(int pos, int v) {
    sigma[pos] = -1;
    used[v] = false;
    for (int cid : by_position[pos]) {
      image[cid] &= ~(ErrorMask{1} << v);
      ++remaining[cid];
    }
  }

  bool dfs(int pos) {
    if (pos == wp) return true;
    if ((++nodes & 0xFFF) == 0 && deadline && deadline->expired()) {
      timed_out = true;
      return false;
    }
    for (int v = 0; v < wp; ++v) {
      if (used[v]) continue;
      const bool ok = assign(pos, v);
      if (ok && dfs(pos + 1)) return true;
      unassign(pos, v);
      if (timed_out) return false;
    }
    return false;
  }
};

}  // namespace

FixedControlsResult solve_fixed_controls(const FaultTables& tables,
                                         const EngineBudget& budget) {
  FixedControlsResult result;
  if (budget.time_limit <= std::chrono::milliseconds(0)) {
    result.status = SolveStatus::Timeout;
    return result;
  }
  if (tables.controls_invalid) {
    result.status = SolveStatus::Unsat;
    return result;
  }
  const int wp = tables.ancilla_width;
  PermSearcher s;
  s.wp = wp;
  s.sigma.assign(wp, -1);
  s.used.assign(wp, false);
  s.by_position.resize(wp);
  for (const Representative& rep : tables.reps) {
    PermConstraint c;
    ErrorMask m = rep.projection;
    while (m != 0) {
      const int i = std::countr_zero(m);
      c.positions.push_back(i);
      m &= m - 1;
    }
    c.bad = &rep.bad;
    const int cid = static_cast<int>(s.constraints.size());
    for (int p : c.positions) s.by_position[p].push_back(cid);
    s.constraints.push_back(std::move(c));
  }
  s.image.assign(s.constraints.size(), 0);
  s.remaining.resize(s.constraints.size());
  for (std::size_t i = 0; i < s.constraints.size(); ++i) {
    s.remaining[i] = static_cast<int>(s.constraints[i].positions.size());
  }
  const Deadline deadline(budget.time_limit);
  s.deadline = &deadline;

  const bool sat = s.dfs(0);
  result.nodes = s.nodes;
  if (sat) {
    result.sigma = s.sigma;
    result.status = SolveStatus::Sat;
    if (check_permutation(result.sigma, tables)) {
      throw std::logic_error("backtracking produced a violating permutation");
    }
  } else if (s.timed_out) {
    result.status = SolveStatus::Timeout;
  } else {
    result.status = SolveStatus::Unsat;
  }
  return result;
}

// --- Randomized local repair ---

namespace {

std::vector<int> random_permutation(int n, SplitMix64& rng) {
  std::vector<int> sigma(n);
  std::iota(sigma.begin(), sigma.end(), 0);
  for (int i = n - 1; i > 0; --i) {
    const int j = static_cast<int>(rng.next_below(i + 1));
    std::swap(sigma[i], sigma[j]);
  }
  return sigma;
}

const Representative* first_violated(const FaultTables& tables,
                                     const std::vector<int>& sigma) {
  for (const Representative& rep : tables.reps) {
    const ErrorMask image = apply_permutation(sigma, rep.projection);
    if (rep.bad.count(image)) return &rep;
  }
  return nullptr;
}

}  // namespace

LocalSearchResult local_search(const FaultTables& tables, long n_iter,
                               std::uint64_t seed) {
  LocalSearchResult result;
  if (n_iter < 1) throw std::invalid_argument("n_iter must be >= 1");
  if (tables.controls_invalid) return result;  // no permutation can work

  const int wp = tables.ancilla_width;
  SplitMix64 rng = stream_rng(seed, 0x10ca1);
  std::vector<int> sigma = random_permutation(wp, rng);
  const long swap_cap = 4L * wp;

  for (long iter = 1; iter <= n_iter; ++iter) {
    result.iterations = iter;
    const Representative* rep = first_violated(tables, sigma);
    if (rep == nullptr) {
      result.sigma = sigma;
      result.status = SolveStatus::Sat;
      return result;
    }
    std::vector<int> ones, zeros;
    for (int i = 0; i < wp; ++i) {
      if ((rep->projection >> i) & 1U) {
        ones.push_back(i);
      } else {
        zeros.push_back(i);
      }
    }
    long swaps = 0;
    while (rep->bad.count(apply_permutation(sigma, rep->projection))) {
      if (++swaps > swap_cap) {
        // Stuck on this conflict; resample uniformly and charge the restart
        // against the iteration budget.
        sigma = random_permutation(wp, rng);
        break;
      }
      const int i = ones[rng.next_below(ones.size())];
      const int j = zeros[rng.next_below(zeros.size())];
      std::swap(sigma[i], sigma[j]);
    }
  }
  return result;
}

// --- Shared enumeration cache ---

TableCache::TableCache(const PrepCircuit& data, const PrepCircuit& ancilla,
                       int target, std::size_t element_limit)
    : target_(target),
      data_levels_(FaultLevels::build(data, target, element_limit)),
      ancilla_levels_(
          FaultLevels::build(ancilla, std::max(0, target - 1), element_limit)) {}

const FaultTables& TableCache::tables_for(const std::vector<int>& controls) {
  auto it = cache_.find(controls);
  if (it == cache_.end()) {
    auto tables = std::make_unique<FaultTables>(
        build_fault_tables(data_levels_, ancilla_levels_, controls, target_));
    it = cache_.emplace(controls, std::move(tables)).first;
  }
  return *it->second;
}

// --- CEGAR over control selection and wiring ---

namespace {

struct Clause {
  ErrorMask data_error = 0;
  ErrorMask forbidden_image = 0;
  std::vector<int> support;  // set bits of data_error
};

// Two-phase search over the structural abstraction: control flags are
// decided for all data qubits first, then targets are assigned to the
// selected controls. Splitting the phases lets a learned clause whose
// image is empty prune whole regions of the selection tree, and lets the
// target phase deactivate every clause whose image size cannot match the
// number of selected support qubits (targets are pairwise distinct).
struct CegarSearcher {
  int w;
  int wp;
  TableCache* cache;
  const Deadline* deadline;
  long max_refinements;

  enum Flag : signed char { kUndecided = -1, kNo = 0, kYes = 1 };
  std::vector<signed char> flag;
  std::vector<int> target_of;  // assigned in the target phase
  std::vector<int> selected_list;
  std::vector<bool> target_used;
  int selected = 0;

  std::vector<Clause> clauses;
  std::set<std::pair<ErrorMask, ErrorMask>> clause_keys;
  std::vector<std::vector<int>> clauses_by_qubit;  // empty-image clauses per qubit

  long refinements = 0;
  long nodes = 0;
  bool timed_out = false;
  std::optional<PartialTransversalCx> solution;

  bool out_of_budget() {
    if (timed_out || refinements > max_refinements) {
      timed_out = true;
      return true;
    }
    if ((++nodes & 0x3FFF) == 0 && deadline->expired()) {
      timed_out = true;
      return true;
    }
    return false;
  }

  void learn(ErrorMask data_error, ErrorMask image) {
    if (!clause_keys.emplace(data_error, image).second) {
      throw std::logic_error("duplicate CEGAR blocking clause");
    }
    Clause c;
    c.data_error = data_error;
    c.forbidden_image = image;
    ErrorMask m = data_error;
    while (m != 0) {
      const int q = std::countr_zero(m);
      c.support.push_back(q);
      if (image == 0) {
        clauses_by_qubit[q].push_back(static_cast<int>(clauses.size()));
      }
      m &= m - 1;
    }
    clauses.push_back(std::move(c));
    ++refinements;
  }

  ErrorMask image_of(ErrorMask data_error) const {
    ErrorMask image = 0;
    for (int q : selected_list) {
      if ((data_error >> q) & 1U) image |= ErrorMask{1} << target_of[q];
    }
    return image;
  }

  // Violated empty-image clause: every support qubit deselected.
  bool empty_clause_violated(const Clause& c) const {
    for (int q : c.support) {
      if (flag[q] != kNo) return false;
    }
    return true;
  }

  bool empty_clauses_ok_at(int q) const {
    for (int cid : clauses_by_qubit[q]) {
      if (empty_clause_violated(clauses[cid])) return false;
    }
    return true;
  }

  // Clause replay against a complete assignment.
  bool clause_violated_full(const Clause& c) const {
    ErrorMask image = 0;
    for (int q : c.support) {
      if (flag[q] == kYes) {
        const int tv = target_of[q];
        if (((c.forbidden_image >> tv) & 1U) == 0) return false;
        image |= ErrorMask{1} << tv;
      }
    }
    return image == c.forbidden_image;
  }

  bool abort_selection = false;

  // Returns true when the clause database plus the fault-tolerance check
  // accept the complete assignment; otherwise a new clause was learned (or
  // an existing one rejects it). A counterexample whose image cannot be
  // moved byretargeting — it avoids the controls entirely or covers all of
  // them — dooms the whole selection, which abort_selection signals.
  bool accept_candidate() {
    for (const Clause& c : clauses) {
      if (clause_violated_full(c)) return false;
    }
    std::vector<int> sigma;
    for (int q : selected_list) sigma.push_back(target_of[q]);
    const FaultTables& tables = cache->tables_for(selected_list);
    if (tables.controls_invalid) {
      learn(tables.invalid_error, image_of(tables.invalid_error));
      abort_selection = true;  // the image is empty or full for any targets
      return false;
    }
    if (const auto v = check_permutation(sigma, tables)) {
      const ErrorMask image = image_of(v->data_error);
      learn(v->data_error, image);
      if (image == 0 || image == full_mask(wp)) abort_selection = true;
      return false;
    }
    solution =
        PartialTransversalCx::from_controls_and_permutation(selected_list, sigma);
    return true;
  }

  // --- Target phase: permutation search under one control selection ---

  struct ActiveClause {
    const Clause* clause = nullptr;
    std::vector<int> positions;  // indices into selected_list
  };
  std::vector<ActiveClause> active;
  std::vector<ErrorMask> active_image;
  std::vector<int> active_remaining;
  std::vector<std::vector<int>> active_by_position;

  // Filters the clause set down to the ones this selection can violate:
  // distinct targets force the image size to equal the selected support
  // size. Returns false if some clause is violated with no targets at all.
  bool activate_clauses() {
    active.clear();
    active_by_position.assign(wp, {});
    for (const Clause& c : clauses) {
      ActiveClause ac;
      ac.clause = &c;
      for (std::size_t j = 0; j < selected_list.size(); ++j) {
        if ((c.data_error >> selected_list[j]) & 1U) {
          ac.positions.push_back(static_cast<int>(j));
        }
      }
      if (static_cast<int>(ac.positions.size()) != popcount(c.forbidden_image)) {
        continue;  // image size cannot match
      }
      if (ac.positions.empty()) return false;  // violated by the selection
      const int cid = static_cast<int>(active.size());
      for (int p : ac.positions) active_by_position[p].push_back(cid);
      active.push_back(std::move(ac));
    }
    active_image.assign(active.size(), 0);
    active_remaining.resize(active.size());
    for (std::size_t i = 0; i < active.size(); ++i) {
      active_remaining[i] = static_cast<int>(active[i].positions.size());
    }
    return true;
  }

  bool assign_target(int pos, int v) {
    target_of[selected_list[pos]] = v;
    target_used[v] = true;
    bool ok = true;
    for (int cid : active_by_position[pos]) {
      active_image[cid] |= ErrorMask{1} << v;
      if (--active_remaining[cid] == 0 &&
          active_image[cid] == active[cid].clause->forbidden_image) {
        ok = false;
      }
    }
    return ok;
  }

  void unassign_target(int pos, int v) {
    target_of[selected_list[pos]] = -1;
    target_used[v] = false;
    for (int cid : active_by_position[pos]) {
      active_image[cid] &= ~(ErrorMask{1} << v);
      ++active_remaining[cid];
    }
  }

  // Clauses learned at leaves below are not propagated within the current
  // selection (the full replay in accept_candidate still rejects their
  // assignments); they join the active set of every later selection.
  bool dfs_targets(int pos) {
    if (out_of_budget()) return false;
    if (pos == wp) return accept_candidate();
    for (int v = 0; v < wp; ++v) {
      if (target_used[v]) continue;
      const bool ok = assign_target(pos, v);
      if (ok && dfs_targets(pos + 1)) return true;
      unassign_target(pos, v);
      if (timed_out || abort_selection) return false;
    }
    return false;
  }

  bool solve_targets() {
    if (!activate_clauses()) return false;
    abort_selection = false;
    const bool sat = dfs_targets(0);
    abort_selection = false;
    return sat;
  }

  // --- Selection phase ---

  bool dfs_flags(int q) {
    if (out_of_budget()) return false;
    if (q == w) {
      return selected == wp && solve_targets();
    }
    if (selected + (w - q) < wp) return false;
    if (selected < wp) {
      flag[q] = kYes;
      selected_list.push_back(q);
      ++selected;
      if (dfs_flags(q + 1)) return true;
      --selected;
      selected_list.pop_back();
      if (timed_out) return false;
    }
    flag[q] = kNo;
    if (empty_clauses_ok_at(q) && dfs_flags(q + 1)) return true;
    flag[q] = kUndecided;
    return false;
  }
};

}  // namespace

CegarResult solve_cegar(const PrepCircuit& data, const PrepCircuit& ancilla,
                        int target, const EngineBudget& budget,
                        TableCache& cache) {
  if (target < 1) throw std::invalid_argument("target order must be >= 1");
  CegarResult result;
  const Deadline deadline(budget.time_limit);

  CegarSearcher s;
  s.w = data.width;
  s.wp = ancilla.width;
  s.cache = &cache;
  s.deadline = &deadline;
  s.max_refinements = budget.max_refinements;
  s.flag.assign(s.w, CegarSearcher::kUndecided);
  s.target_of.assign(s.w, -1);
  s.target_used.assign(s.wp, false);
  s.clauses_by_qubit.resize(s.w);

  const bool sat = s.dfs_flags(0);
  result.refinements = s.refinements;
  if (sat) {
    result.status = SolveStatus::Sat;
    result.wiring = *s.solution;
  } else if (s.timed_out) {
    result.status = SolveStatus::Timeout;
  } else {
    result.status = SolveStatus::Unsat;
  }
  return result;
}

// --- Orchestration ---

namespace {

// Deterministic control enumeration: selections satisfying the per-subtree
// minimums, ordered by how evenly they spread over the constrained
// subtrees (integer score), then lexicographically.
std::vector<std::vector<int>> enumerate_controls(
    int w, int wp, const std::vector<SubtreeConstraint>& constraints,
    std::size_t cap) {
  std::vector<std::vector<int>> out;
  std::vector<int> current;

  auto feasible_completion = [&](int next) {
    // Remaining qubits [next, w) must still be able to satisfy every
    // constraint's minimum.
    for (const SubtreeConstraint& c : constraints) {
      int have = 0;
      for (int q : current) have += (c.subtree >> q) & 1U;
      const ErrorMask remaining = next >= 64 ? 0 : (c.subtree & ~full_mask(next));
      if (have + popcount(remaining) < c.min_controls) return false;
    }
    return true;
  };

  std::function<void(int)> rec = [&](int next) {
    if (out.size() >= cap) return;
    if (static_cast<int>(current.size()) == wp) {
      for (const SubtreeConstraint& c : constraints) {
        int have = 0;
        for (int q : current) have += (c.subtree >> q) & 1U;
        if (have < c.min_controls) return;
      }
      out.push_back(current);
      return;
    }
    if (w - next < wp - static_cast<int>(current.size())) return;
    if (!feasible_completion(next)) return;
    for (int q = next; q < w; ++q) {
      current.push_back(q);
      rec(q + 1);
      current.pop_back();
      if (out.size() >= cap) return;
    }
  };
  rec(0);

  std::vector<ErrorMask> trees;
  for (const SubtreeConstraint& c : constraints) trees.push_back(c.subtree);
  auto score = [&](const std::vector<int>& ctrl) {
    long s = 0;
    ErrorMask mask = 0;
    for (int q : ctrl) mask |= ErrorMask{1} << q;
    for (ErrorMask tr : trees) {
      const long have = popcount(mask & tr);
      const long want_num = static_cast<long>(popcount(tr)) * wp;  // / w
      const long diff = have * w - want_num;
      s += diff * diff;
    }
    return s;
  };
  std::stable_sort(out.begin(), out.end(),
                   [&](const std::vector<int>& a, const std::vector<int>& b) {
                     return score(a) < score(b);
                   });
  return out;
}

}  // namespace

SynthesisReport synthesize(const SearchConfig& config) {
  if (config.width < 2) throw std::invalid_argument("width must be >= 2");
  if (config.target < 1) throw std::invalid_argument("target must be >= 1");
  SynthesisReport report;
  const auto t_start = Clock::now();

  const PrepCircuit data = build_balanced_tree(config.width);
  const AncillaBound bound = ancilla_lower_bound(data, config.target);
  int lo = config.w_prime_min > 0 ? config.w_prime_min : bound.w_min;
  int hi = config.w_prime_max > 0 ? config.w_prime_max : config.width;
  lo = std::max(lo, 2);
  hi = std::min(hi, config.width);

  auto certify = [&](int wp, const PartialTransversalCx& wiring,
                     const std::string& engine, long refinements,
                     long iterations) -> bool {
    const PrepCircuit ancilla = build_balanced_tree(wp);
    if (oracle_check(data, ancilla, wiring, config.target,
                     config.element_limit)) {
      report.attempts.push_back({wp, engine, "uncertified-candidate"});
      return false;
    }
    report.success = true;
    report.solution.w = config.width;
    report.solution.w_prime = wp;
    report.solution.target = config.target;
    report.solution.wiring = wiring;
    report.solution.engine = engine;
    report.solution.seed = config.seed;
    report.solution.refinements = refinements;
    report.solution.iterations = iterations;
    report.solution.certified = true;
    report.solution.wall_seconds =
        std::chrono::duration<double>(Clock::now() - t_start).count();
    return true;
  };

  for (int wp = lo; wp <= hi; ++wp) {
    const PrepCircuit ancilla = build_balanced_tree(wp);
    TableCache cache(data, ancilla, config.target, config.element_limit);

    CegarResult cegar =
        solve_cegar(data, ancilla, config.target, config.cegar_budget, cache);
    report.attempts.push_back({wp, "cegar", to_string(cegar.status)});
    if (cegar.status == SolveStatus::Sat) {
      if (certify(wp, cegar.wiring, "cegar", cegar.refinements, 0)) return report;
    }
    if (cegar.status == SolveStatus::Unsat) continue;
    if (cegar.status == SolveStatus::Sat) continue;  // certification failed

    // CEGAR ran out of budget: filter control selections with the complete
    // fixed-controls engine, then attempt local repair.
    const long n_iter = config.local_iters > 0
                            ? config.local_iters
                            : 10L * wp * config.target;
    const auto selections =
        enumerate_controls(config.width, wp, bound.constraints, 200'000);
    for (const std::vector<int>& controls : selections) {
      const FaultTables& tables = cache.tables_for(controls);
      const FixedControlsResult fixed =
          solve_fixed_controls(tables, config.fixed_budget);
      if (fixed.status == SolveStatus::Unsat) continue;
      if (fixed.status == SolveStatus::Sat) {
        const auto wiring = PartialTransversalCx::from_controls_and_permutation(
            controls, fixed.sigma);
        if (certify(wp, wiring, "fixed", 0, fixed.nodes)) return report;
        continue;
      }
      const LocalSearchResult ls = local_search(tables, n_iter, config.seed);
      if (ls.status == SolveStatus::Sat) {
        const auto wiring = PartialTransversalCx::from_controls_and_permutation(
            controls, ls.sigma);
        if (certify(wp, wiring, "local", 0, ls.iterations)) return report;
      }
    }
    report.attempts.push_back({wp, "fallback", "exhausted"});
  }
  return report;
}

// --- Solution file format ---

namespace {

std::string join_ints(const std::vector<int>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(v[i]);
  }
  return out;
}

std::vector<int> split_ints(const std::string& s) {
  std::vector<int> out;
  std::istringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::size_t pos = 0;
    const int v = std::stoi(item, &pos);
    if (pos != item.size()) throw std::invalid_argument("bad integer list");
    out.push_back(v);
  }
  return out;
}

}  // namespace

std::string to_text(const Solution& s) {
  std::ostringstream out;
  out << "w: " << s.w << "\n";
  out << "w_prime: " << s.w_prime << "\n";
  out << "t: " << s.target << "\n";
  out << "controls: " << join_ints(s.wiring.controls()) << "\n";
  out << "targets: " << join_ints(s.wiring.targets()) << "\n";
  out << "engine: " << s.engine << "\n";
  out << "seed: " << s.seed << "\n";
  out << "certified: " << (s.certified ? "true" : "false") << "\n";
  return out.str();
}

Solution parse_solution_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::map<std::string, std::string> kv;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto colon = line.find(": ");
    if (colon == std::string::npos) {
      throw std::invalid_argument("malformed solution line: " + line);
    }
    kv[line.substr(0, colon)] = line.substr(colon + 2);
  }
  for (const char* key :
       {"w", "w_prime", "t", "controls", "targets", "engine", "seed", "certified"}) {
    if (!kv.count(key)) {
      throw std::invalid_argument(std::string("solution file missing key: ") + key);
    }
  }
  Solution s;
  try {
    s.w = std::stoi(kv["w"]);
    s.w_prime = std::stoi(kv["w_prime"]);
    s.target = std::stoi(kv["t"]);
    s.seed = std::stoull(kv["seed"]);
    const auto controls = split_ints(kv["controls"]);
    const auto targets = split_ints(kv["targets"]);
    s.wiring = PartialTransversalCx::from_controls_and_permutation(controls, targets);
  } catch (const std::invalid_argument&) {
    throw;
  } catch (const std::exception& e) {
    throw std::invalid_argument(std::string("malformed solution value: ") + e.what());
  }
  s.engine = kv["engine"];
  if (kv["certified"] != "true" && kv["certified"] != "false") {
    throw std::invalid_argument("certified must be true or false");
  }
  s.certified = kv["certified"] == "true";
  if (s.w < 2 || s.w_prime < 1 || s.w_prime > s.w || s.target < 1) {
    throw std::invalid_argument("solution parameters out of range");
  }
  s.wiring.validate(s.w, s.w_prime);
  return s;
}

}  // namespace catprep
