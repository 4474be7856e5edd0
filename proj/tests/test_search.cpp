#include "catprep/search.hpp"

#include "catprep/reporting.hpp"

#include <map>
#include <numeric>
#include <set>

#include "gtest/gtest.h"

namespace catprep {
namespace {

ErrorMask bits(std::initializer_list<int> qubits) {
  ErrorMask m = 0;
  for (int q : qubits) m |= ErrorMask{1} << q;
  return m;
}

TEST(LowerBound, BalancedTreeValues) {
  EXPECT_EQ(ancilla_lower_bound(build_balanced_tree(8), 2).w_min, 4);
  EXPECT_EQ(ancilla_lower_bound(build_balanced_tree(8), 3).w_min, 6);
  // The half-size subtrees pin the published minimum for order 4 directly.
  EXPECT_EQ(ancilla_lower_bound(build_balanced_tree(8), 4).w_min, 6);
  EXPECT_EQ(ancilla_lower_bound(build_balanced_tree(16), 3).w_min, 12);
  EXPECT_EQ(ancilla_lower_bound(build_balanced_tree(16), 7).w_min, 14);
  EXPECT_EQ(ancilla_lower_bound(build_balanced_tree(2), 1).w_min, 2);
}

TEST(LowerBound, SubtreeConstraints) {
  const AncillaBound bound = ancilla_lower_bound(build_balanced_tree(8), 2);
  std::map<ErrorMask, int> constrained;
  for (const SubtreeConstraint& c : bound.constraints) {
    constrained[c.subtree] = c.min_controls;
  }
  // Quads demand t controls, pairs one (a bare pair error has weight 2).
  EXPECT_EQ(constrained[bits({0, 1, 2, 3})], 2);
  EXPECT_EQ(constrained[bits({4, 5, 6, 7})], 2);
  EXPECT_EQ(constrained[bits({0, 1})], 1);
  EXPECT_EQ(constrained[bits({6, 7})], 1);
  EXPECT_EQ(constrained.size(), 6u);
}

TEST(LowerBound, FixtureRowsMostlyRespectTheBound) {
  // The published tables' ancilla sizes satisfy our bound on every row
  // except a handful of order-4/5 widths, where the published circuits
  // must have used a doubling tree with a different final-layer placement
  // (the bound is a proven necessity for the tree shape built here; the
  // complete engines confirm, e.g., (w=10, w'=7, t=4) unsat).
  const auto fixtures = load_fixtures(CATPREP_FIXTURES_DIR);
  ASSERT_FALSE(fixtures.empty());
  std::set<std::pair<int, int>> exceptions;
  for (const auto& table : fixtures) {
    for (const auto& row : table.rows) {
      const int wp = row.q_tw - row.w;
      const AncillaBound bound =
          ancilla_lower_bound(build_balanced_tree(row.w), table.target);
      if (wp < bound.w_min) {
        exceptions.emplace(table.target, row.w);
        EXPECT_GE(wp, bound.w_min - 2) << "t=" << table.target << " w=" << row.w;
      }
    }
  }
  const std::set<std::pair<int, int>> expected{
      {4, 10}, {4, 17}, {4, 18}, {4, 19}, {4, 20}, {4, 36},
      {4, 37}, {4, 38}, {4, 39}, {4, 40}, {4, 41}, {5, 10}};
  EXPECT_EQ(exceptions, expected);
}

FaultTables worked_example_tables() {
  return build_fault_tables(build_balanced_tree(6), build_balanced_tree(4),
                            {0, 2, 3, 4}, 2);
}

TEST(FixedControls, SatOnWorkedExample) {
  const FaultTables tables = worked_example_tables();
  const auto r = solve_fixed_controls(tables, EngineBudget{});
  ASSERT_EQ(r.status, SolveStatus::Sat);
  EXPECT_FALSE(check_permutation(r.sigma, tables).has_value());
  // The published working permutation is also a valid witness.
  const std::vector<int> known_sigma{0, 2, 1, 3};
  EXPECT_FALSE(check_permutation(known_sigma, tables).has_value());
}

TEST(FixedControls, IdentityFirstWhenUnconstrained) {
  // t=1 leaves no representatives; the first bijection in search order is
  // the identity.
  const FaultTables tables =
      build_fault_tables(build_balanced_tree(4), build_balanced_tree(2), {0, 2}, 1);
  ASSERT_FALSE(tables.controls_invalid);
  EXPECT_TRUE(tables.reps.empty());
  const auto r = solve_fixed_controls(tables, EngineBudget{});
  ASSERT_EQ(r.status, SolveStatus::Sat);
  EXPECT_EQ(r.sigma, (std::vector<int>{0, 1}));
}

TEST(FixedControls, UnsatForFiveQubitAncillaAtOrderFour) {
  const PrepCircuit b8 = build_balanced_tree(8);
  const PrepCircuit b5 = build_balanced_tree(5);
  const FaultLevels dl = FaultLevels::build(b8, 4);
  const FaultLevels al = FaultLevels::build(b5, 3);
  // Every control selection is unsatisfiable.
  std::vector<int> controls;
  int sat_count = 0;
  for (int mask = 0; mask < 256; ++mask) {
    if (popcount(static_cast<ErrorMask>(mask)) != 5) continue;
    controls.clear();
    for (int q = 0; q < 8; ++q) {
      if ((mask >> q) & 1) controls.push_back(q);
    }
    const FaultTables tables = build_fault_tables(dl, al, controls, 4);
    const auto r = solve_fixed_controls(tables, EngineBudget{});
    ASSERT_NE(r.status, SolveStatus::Timeout);
    sat_count += r.status == SolveStatus::Sat ? 1 : 0;
  }
  EXPECT_EQ(sat_count, 0);
}

TEST(FixedControls, ZeroBudgetIsTimeoutNotUnsat) {
  const FaultTables tables = worked_example_tables();
  EngineBudget budget;
  budget.time_limit = std::chrono::milliseconds(0);
  EXPECT_EQ(solve_fixed_controls(tables, budget).status, SolveStatus::Timeout);
}

TEST(LocalSearch, SolvesWorkedExampleForManySeeds) {
  const FaultTables tables = worked_example_tables();
  const long n_iter = 10L * 4 * 2;  // default budget for w'=4, t=2
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const auto r = local_search(tables, n_iter, seed);
    ASSERT_EQ(r.status, SolveStatus::Sat) << "seed=" << seed;
    EXPECT_FALSE(check_permutation(r.sigma, tables).has_value());
  }
}

TEST(LocalSearch, FailsOnUnsatInstance) {
  const PrepCircuit b8 = build_balanced_tree(8);
  const PrepCircuit b5 = build_balanced_tree(5);
  for (const std::vector<int>& controls :
       {std::vector<int>{0, 1, 2, 4, 5}, std::vector<int>{1, 2, 3, 5, 7},
        std::vector<int>{0, 2, 4, 5, 6}}) {
    const FaultTables tables = build_fault_tables(b8, b5, controls, 4);
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      EXPECT_EQ(local_search(tables, 400, seed).status, SolveStatus::Fail);
    }
  }
}

TEST(LocalSearch, ImmediateSatWithoutRepresentatives) {
  const FaultTables tables =
      build_fault_tables(build_balanced_tree(4), build_balanced_tree(2), {0, 2}, 1);
  const auto r = local_search(tables, 5, 9);
  ASSERT_EQ(r.status, SolveStatus::Sat);
  EXPECT_EQ(r.iterations, 1);
}

TEST(Cegar, FindsSixQubitAncillaAtOrderFour) {
  const PrepCircuit b8 = build_balanced_tree(8);
  const PrepCircuit b6 = build_balanced_tree(6);
  TableCache cache(b8, b6, 4);
  const auto r = solve_cegar(b8, b6, 4, EngineBudget{}, cache);
  ASSERT_EQ(r.status, SolveStatus::Sat);
  EXPECT_FALSE(oracle_check(b8, b6, r.wiring, 4).has_value());
}

TEST(Cegar, UnsatForFiveQubitAncilla) {
  // Blocking-clause soundness is enforced inside the solver: every leaf
  // replays the full clause set, and re-learning an already-present clause
  // (i.e. re-proposing an excluded wiring) aborts with logic_error. An
  // exhaustive unsat run exercises that replay on every explored leaf.
  const PrepCircuit b8 = build_balanced_tree(8);
  const PrepCircuit b5 = build_balanced_tree(5);
  TableCache cache(b8, b5, 4);
  const auto r = solve_cegar(b8, b5, 4, EngineBudget{}, cache);
  EXPECT_EQ(r.status, SolveStatus::Unsat);
  EXPECT_GT(r.refinements, 0);
}

TEST(Cegar, RefinementCapReportsTimeout) {
  const PrepCircuit b8 = build_balanced_tree(8);
  const PrepCircuit b5 = build_balanced_tree(5);
  TableCache cache(b8, b5, 4);
  EngineBudget budget;
  budget.max_refinements = 0;
  const auto r = solve_cegar(b8, b5, 4, budget, cache);
  EXPECT_EQ(r.status, SolveStatus::Timeout);
  EXPECT_GE(r.refinements, 1);
}

TEST(Cegar, TrivialOrderOneIsImmediatelySat) {
  // Single faults copy intact, so the first structurally valid assignment
  // already passes; no refinements are needed.
  const PrepCircuit b8 = build_balanced_tree(8);
  TableCache cache(b8, b8, 1);
  const auto r = solve_cegar(b8, b8, 1, EngineBudget{}, cache);
  ASSERT_EQ(r.status, SolveStatus::Sat);
  EXPECT_EQ(r.refinements, 0);
}

TEST(Cegar, AgreesWithFixedControlsSweep) {
  // Engine agreement on small instances: the joint search is satisfiable
  // iff some control selection admits a permutation.
  for (const auto& [w, wp, t] : {std::tuple{6, 4, 2}, std::tuple{6, 3, 2},
                                 std::tuple{8, 4, 2}, std::tuple{8, 3, 2},
                                 std::tuple{6, 5, 3}}) {
    const PrepCircuit data = build_balanced_tree(w);
    const PrepCircuit anc = build_balanced_tree(wp);
    TableCache cache(data, anc, t);
    const auto cegar = solve_cegar(data, anc, t, EngineBudget{}, cache);
    ASSERT_NE(cegar.status, SolveStatus::Timeout);

    bool any_sat = false;
    std::vector<int> controls;
    for (int mask = 0; mask < (1 << w) && !any_sat; ++mask) {
      if (popcount(static_cast<ErrorMask>(mask)) != wp) continue;
      controls.clear();
      for (int q = 0; q < w; ++q) {
        if ((mask >> q) & 1) controls.push_back(q);
      }
      const auto r = solve_fixed_controls(cache.tables_for(controls), EngineBudget{});
      ASSERT_NE(r.status, SolveStatus::Timeout);
      any_sat = r.status == SolveStatus::Sat;
    }
    EXPECT_EQ(cegar.status == SolveStatus::Sat, any_sat)
        << "w=" << w << " wp=" << wp << " t=" << t;
  }
}

TEST(Synthesize, EightAtOrderFour) {
  SearchConfig cfg;
  cfg.width = 8;
  cfg.target = 4;
  cfg.seed = 11;
  const SynthesisReport r = synthesize(cfg);
  ASSERT_TRUE(r.success);
  EXPECT_EQ(r.solution.w_prime, 6);
  EXPECT_TRUE(r.solution.certified);
  const auto m = metrics(assemble(build_balanced_tree(8), build_balanced_tree(6),
                                  r.solution.wiring));
  EXPECT_EQ(m.depth_report, 5);
  EXPECT_EQ(m.cx_count, 18);
  EXPECT_EQ(m.qubit_count, 14);
}

TEST(Synthesize, TrivialTwoQubitInstance) {
  SearchConfig cfg;
  cfg.width = 2;
  cfg.target = 1;
  const SynthesisReport r = synthesize(cfg);
  ASSERT_TRUE(r.success);
  EXPECT_EQ(r.solution.w_prime, 2);
  EXPECT_TRUE(r.solution.certified);
}

TEST(Synthesize, ExhaustedRangeYieldsFailureReport) {
  SearchConfig cfg;
  cfg.width = 8;
  cfg.target = 4;
  cfg.w_prime_min = 5;
  cfg.w_prime_max = 5;
  const SynthesisReport r = synthesize(cfg);
  EXPECT_FALSE(r.success);
  ASSERT_FALSE(r.attempts.empty());
  EXPECT_EQ(r.attempts[0].engine, "cegar");
  EXPECT_EQ(r.attempts[0].outcome, "unsat");
}

TEST(Synthesize, DeterministicUnderFixedSeed) {
  SearchConfig cfg;
  cfg.width = 8;
  cfg.target = 3;
  cfg.seed = 21;
  const SynthesisReport a = synthesize(cfg);
  const SynthesisReport b = synthesize(cfg);
  ASSERT_TRUE(a.success);
  ASSERT_TRUE(b.success);
  EXPECT_EQ(a.solution.wiring.pairs, b.solution.wiring.pairs);
  EXPECT_EQ(a.solution.engine, b.solution.engine);
  EXPECT_EQ(a.solution.w_prime, b.solution.w_prime);
}

TEST(SolutionText, RoundTrip) {
  Solution s;
  s.w = 8;
  s.w_prime = 6;
  s.target = 4;
  s.wiring = PartialTransversalCx({{1, 2}, {2, 5}, {3, 0}, {5, 4}, {6, 3}, {7, 1}});
  s.engine = "cegar";
  s.seed = 1;
  s.certified = true;
  const Solution parsed = parse_solution_text(to_text(s));
  EXPECT_EQ(parsed.w, s.w);
  EXPECT_EQ(parsed.w_prime, s.w_prime);
  EXPECT_EQ(parsed.target, s.target);
  EXPECT_EQ(parsed.wiring.pairs, s.wiring.pairs);
  EXPECT_EQ(parsed.engine, s.engine);
  EXPECT_EQ(parsed.seed, s.seed);
  EXPECT_TRUE(parsed.certified);
}

TEST(SolutionText, FuzzedInputNeverCrashes) {
  SplitMix64 rng(2024);
  Solution seed;
  seed.w = 8;
  seed.w_prime = 6;
  seed.target = 4;
  seed.wiring = PartialTransversalCx({{1, 2}, {2, 5}, {3, 0}, {5, 4}, {6, 3}, {7, 1}});
  seed.engine = "cegar";
  seed.certified = true;
  const std::string good = to_text(seed);
  for (int iter = 0; iter < 400; ++iter) {
    std::string mutated = good;
    const int edits = 1 + static_cast<int>(rng.next_below(4));
    for (int e = 0; e < edits; ++e) {
      const std::size_t pos = rng.next_below(mutated.size());
      switch (rng.next_below(3)) {
        case 0: mutated[pos] = static_cast<char>(rng.next_below(128)); break;
        case 1: mutated.erase(pos, 1); break;
        default: mutated.insert(pos, 1, static_cast<char>('0' + rng.next_below(10)));
      }
    }
    try {
      const Solution parsed = parse_solution_text(mutated);
      parsed.wiring.validate(parsed.w, parsed.w_prime);
    } catch (const std::invalid_argument&) {
      // Rejection is the expected outcome for most mutations.
    }
  }
}

TEST(SolutionText, RejectsMalformedInput) {
  EXPECT_THROW(parse_solution_text(""), std::invalid_argument);
  EXPECT_THROW(parse_solution_text("w: 8\nw_prime: 6\n"), std::invalid_argument);
  EXPECT_THROW(parse_solution_text("w: 8\nw_prime: 6\nt: 4\ncontrols: 1,2\n"
                                   "targets: 0,1,2\nengine: x\nseed: 1\n"
                                   "certified: true\n"),
               std::invalid_argument);
  EXPECT_THROW(parse_solution_text("w: abc\nw_prime: 6\nt: 4\ncontrols: 1,2\n"
                                   "targets: 0,1\nengine: x\nseed: 1\n"
                                   "certified: true\n"),
               std::invalid_argument);
}

}  // namespace
}  // namespace catprep
