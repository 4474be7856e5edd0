#include "catprep/sim.hpp"

#include <cmath>

#include "catprep/ftcheck.hpp"
#include "catprep/search.hpp"
#include "gtest/gtest.h"

namespace catprep {
namespace {

PartialTransversalCx published_partial_wiring() {
  return PartialTransversalCx({{1, 2}, {2, 5}, {3, 0}, {5, 4}, {6, 3}, {7, 1}});
}

VerifiedPrepCircuit eight_six() {
  return assemble(build_balanced_tree(8), build_balanced_tree(6),
                  published_partial_wiring());
}

TEST(SampleShot, NoiselessAlwaysAcceptsClean) {
  const auto c = eight_six();
  const NoiseModel nm{0.0};
  for (std::uint64_t shot = 0; shot < 200; ++shot) {
    SplitMix64 rng = stream_rng(7, shot);
    const ShotResult r = sample_shot(c, nm, rng);
    EXPECT_TRUE(r.accepted);
    EXPECT_EQ(r.flips, 0);
  }
}

TEST(Injection, PostLayerOneControlFaultIsRejected) {
  // X sitting on the first layer's control after the gate spreads over half
  // the tree; its copy lands on a proper subset of the ancilla.
  const auto c = eight_six();
  const FaultSite site{false, 1, 0};
  const ShotResult r = run_with_faults(c, {&site, 1});
  EXPECT_FALSE(r.accepted);
}

TEST(Injection, RootInitFaultIsStabilizer) {
  // X on the |+> root at time zero propagates to the full pattern on both
  // registers: all-ones measurement, zero residual weight.
  const auto c = eight_six();
  const FaultSite site{false, 0, 0};
  const ShotResult r = run_with_faults(c, {&site, 1});
  EXPECT_TRUE(r.accepted);
  EXPECT_EQ(r.flips, 0);
}

TEST(Injection, LateUnwiredFaultAcceptedWithOneFlip) {
  // Qubit 0 is not a control in the published wiring; an X right before
  // its measurement is invisible to the ancilla.
  const auto c = eight_six();
  const FaultSite site{false, c.data.depth(), 0};
  const ShotResult r = run_with_faults(c, {&site, 1});
  EXPECT_TRUE(r.accepted);
  EXPECT_EQ(r.flips, 1);
}

TEST(Injection, MatchesFaultModulePropagation) {
  // Frame simulation is exact for this circuit class: spot-check injected
  // deterministic faults against an independent cone computation.
  const auto c = eight_six();
  SplitMix64 rng(404);
  const auto sites = prep_fault_sites(c);
  for (int iter = 0; iter < 150; ++iter) {
    const int n = 1 + static_cast<int>(rng.next_below(3));
    std::vector<FaultSite> chosen;
    for (int i = 0; i < n; ++i) chosen.push_back(sites[rng.next_below(sites.size())]);

    ErrorMask x_data = 0, x_anc = 0;
    for (const FaultSite& s : chosen) {
      const PrepCircuit& prep = s.on_ancilla ? c.ancilla : c.data;
      ErrorMask e = ErrorMask{1} << s.qubit;
      for (int l = s.time; l < prep.depth(); ++l) {
        for (const CxGate& g : prep.layers[l]) {
          e ^= ((e >> g.control) & 1U) << g.target;
        }
      }
      (s.on_ancilla ? x_anc : x_data) ^= e;
    }
    x_anc ^= c.wiring.map_error(x_data);
    const ErrorMask outcome = x_anc & full_mask(6);
    const bool expect_accept = outcome == 0 || outcome == full_mask(6);
    const int expect_flips = weight(x_data, 8);

    const ShotResult r = run_with_faults(c, chosen);
    EXPECT_EQ(r.accepted, expect_accept) << "iter=" << iter;
    if (expect_accept) EXPECT_EQ(r.flips, expect_flips) << "iter=" << iter;
  }
}

TEST(Injection, SiteEnumerationCoversBothPreparations) {
  const auto c = eight_six();
  const auto sites = prep_fault_sites(c);
  EXPECT_EQ(sites.size(), static_cast<std::size_t>(8 * 4 + 6 * 4));
  EXPECT_THROW(
      run_with_faults(c, std::vector<FaultSite>{FaultSite{false, 9, 0}}),
      std::invalid_argument);
}

TEST(Injection, ComplementFoldOfResidualWeight) {
  // A data error heavier than w/2 counts as its complement.
  const auto c = eight_six();
  // Root fault after layer 1 flips {0,1,2,3}; adding late singles on 4..7
  // is equivalent to a weight <= 4 pattern under the fold.
  std::vector<FaultSite> chosen{{false, 1, 0},
                                {false, 3, 4},
                                {false, 3, 5},
                                {false, 3, 6}};
  const ShotResult r = run_with_faults(c, chosen);
  // x_data = {0,1,2,3,4,5,6}: popcount 7, weight 1.
  if (r.accepted) EXPECT_EQ(r.flips, 1);
  EXPECT_EQ(weight(full_mask(8) ^ (ErrorMask{1} << 7), 8), 1);
}

TEST(Estimate, NoiselessReport) {
  const auto c = eight_six();
  const SimReport r = estimate(c, NoiseModel{0.0}, 5000, 9);
  EXPECT_EQ(r.accepted, 5000);
  EXPECT_DOUBLE_EQ(r.r_acc, 1.0);
  EXPECT_DOUBLE_EQ(r.p_k[0], 1.0);
  EXPECT_DOUBLE_EQ(r.std_err, 0.0);
}

TEST(Estimate, SeedAndThreadDeterminism) {
  const auto c = eight_six();
  const NoiseModel nm{0.01};
  const SimReport a = estimate(c, nm, 40'000, 1234, 1);
  const SimReport b = estimate(c, nm, 40'000, 1234, 2);
  const SimReport d = estimate(c, nm, 40'000, 1234, 3);
  EXPECT_EQ(a.accepted, b.accepted);
  EXPECT_EQ(a.flip_counts, b.flip_counts);
  EXPECT_EQ(a.accepted, d.accepted);
  EXPECT_EQ(a.flip_counts, d.flip_counts);
  const SimReport e = estimate(c, nm, 40'000, 1235, 1);
  EXPECT_NE(a.accepted, e.accepted);  // different seed, different stream
}

TEST(Estimate, AcceptanceDecreasesWithNoise) {
  const auto c = eight_six();
  const SimReport low = estimate(c, NoiseModel{0.001}, 100'000, 5, 2);
  const SimReport high = estimate(c, NoiseModel{0.01}, 100'000, 5, 2);
  const double sigma = std::sqrt(low.std_err * low.std_err +
                                 high.std_err * high.std_err);
  EXPECT_GT(low.r_acc - high.r_acc, 5.0 * sigma);
}

TEST(Estimate, ValidatesArguments) {
  const auto c = eight_six();
  EXPECT_THROW(estimate(c, NoiseModel{0.001}, 0, 1), std::invalid_argument);
  EXPECT_THROW(estimate(c, NoiseModel{-0.1}, 10, 1), std::invalid_argument);
  EXPECT_THROW(estimate(c, NoiseModel{1.5}, 10, 1), std::invalid_argument);
}

TEST(Estimate, CsvShape) {
  const auto c = eight_six();
  const SimReport r = estimate(c, NoiseModel{0.0}, 10, 3);
  const std::string csv = r.to_csv(4);
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "w,w_prime,t,p,shots,seed,R_acc,stderr,P_0,P_1,P_2,P_3,P_4");
  EXPECT_NE(csv.find("8,6,4,0,10,3,1.00000000,"), std::string::npos);
}

TEST(ErrorProfile, NoiselessIsDeltaAtZero) {
  const auto c = eight_six();
  const auto p_k = error_profile(c, NoiseModel{0.0}, 1000, 2);
  ASSERT_EQ(p_k.size(), 5u);
  EXPECT_DOUBLE_EQ(p_k[0], 1.0);
}

TEST(Expansion, NoiselessIsExact) {
  const auto c = eight_six();
  const ExpansionEstimate e = acceptance_expansion(c, NoiseModel{0.0});
  EXPECT_DOUBLE_EQ(e.r_low, 1.0);
  EXPECT_DOUBLE_EQ(e.covered, 1.0);
}

TEST(Expansion, BracketsMonteCarloEstimate) {
  const auto c = eight_six();
  for (double p : {0.001, 0.003}) {
    const NoiseModel nm{p};
    const ExpansionEstimate e = acceptance_expansion(c, nm);
    const SimReport mc = estimate(c, nm, 400'000, 77, 2);
    const double slack = (1.0 - e.covered) + 5.0 * mc.std_err;
    EXPECT_NEAR(mc.r_acc, e.r_low, slack) << "p=" << p;
    EXPECT_LE(e.r_low, 1.0);
    EXPECT_GT(e.covered, 0.99);
  }
}

TEST(Expansion, BracketsMonteCarloAcrossShapes) {
  // Same cross-check over different circuit shapes: full transversal,
  // equal-size partial, and a small odd-width instance.
  struct Case {
    int w, wp;
    std::vector<std::pair<int, int>> pairs;
  };
  const std::vector<Case> cases{
      {4, 4, {{0, 1}, {1, 0}, {2, 3}, {3, 2}}},
      {6, 4, {{0, 0}, {2, 2}, {3, 1}, {4, 3}}},
      {5, 3, {{0, 2}, {2, 0}, {3, 1}}},
  };
  for (const Case& tc : cases) {
    const auto c = assemble(build_balanced_tree(tc.w), build_balanced_tree(tc.wp),
                            PartialTransversalCx(tc.pairs));
    for (double p : {0.002, 0.01}) {
      const NoiseModel nm{p};
      const ExpansionEstimate e = acceptance_expansion(c, nm);
      const SimReport mc = estimate(c, nm, 150'000, 55, 2);
      const double slack = (1.0 - e.covered) + 5.0 * mc.std_err;
      EXPECT_NEAR(mc.r_acc, e.r_low, slack)
          << "w=" << tc.w << " wp=" << tc.wp << " p=" << p;
    }
  }
}

TEST(Estimate, MoreThreadsThanShots) {
  const auto c = eight_six();
  const SimReport a = estimate(c, NoiseModel{0.01}, 3, 7, 8);
  const SimReport b = estimate(c, NoiseModel{0.01}, 3, 7, 1);
  EXPECT_EQ(a.accepted, b.accepted);
  EXPECT_EQ(a.flip_counts, b.flip_counts);
}

TEST(Expansion, ObservableInitVariantIsMorePessimistic) {
  const auto c = eight_six();
  NoiseModel base{0.001};
  NoiseModel pessimistic{0.001};
  pessimistic.observable_init_flips = true;
  const double r_base = acceptance_expansion(c, base).r_low;
  const double r_pess = acceptance_expansion(c, pessimistic).r_low;
  EXPECT_LT(r_pess, r_base);
  // And the Monte Carlo path honors the same switch.
  const SimReport mc = estimate(c, pessimistic, 400'000, 31, 2);
  EXPECT_NEAR(mc.r_acc, r_pess, (1.0 - acceptance_expansion(c, pessimistic).covered) +
                                    5.0 * mc.std_err);
}

TEST(Injection, SingleFaultsOnOrderFourCircuitLeaveAtMostOneFlip) {
  // Exhaustive single-fault sweep over an order-4 certified circuit: any
  // accepted outcome carries at most one residual flip.
  SearchConfig cfg;
  cfg.width = 8;
  cfg.target = 4;
  cfg.seed = 6;
  const SynthesisReport rep = synthesize(cfg);
  ASSERT_TRUE(rep.success);
  const auto c = assemble(build_balanced_tree(8),
                          build_balanced_tree(rep.solution.w_prime),
                          rep.solution.wiring);
  for (const FaultSite& site : prep_fault_sites(c)) {
    const ShotResult r = run_with_faults(c, {&site, 1});
    if (r.accepted) {
      EXPECT_LE(r.flips, 1) << "site anc=" << site.on_ancilla
                            << " t=" << site.time << " q=" << site.qubit;
    }
  }
}

TEST(FtProperty, NoLowOrderFaultYieldsHeavyAcceptedError) {
  // Order-2 slice of the exhaustive suite: a certified FT2 solution admits
  // no accepted outcome with more than 2 flips from <= 2 prep faults.
  SearchConfig cfg;
  cfg.width = 6;
  cfg.target = 2;
  cfg.seed = 4;
  const SynthesisReport rep = synthesize(cfg);
  ASSERT_TRUE(rep.success);
  const auto c = assemble(build_balanced_tree(6),
                          build_balanced_tree(rep.solution.w_prime),
                          rep.solution.wiring);
  const auto sites = prep_fault_sites(c);
  for (std::size_t i = 0; i < sites.size(); ++i) {
    const ShotResult r1 = run_with_faults(c, {&sites[i], 1});
    if (r1.accepted) EXPECT_LE(r1.flips, 2);
    for (std::size_t j = i + 1; j < sites.size(); ++j) {
      std::vector<FaultSite> pair{sites[i], sites[j]};
      const ShotResult r2 = run_with_faults(c, pair);
      if (r2.accepted) EXPECT_LE(r2.flips, 2);
    }
  }
}

}  // namespace
}  // namespace catprep
