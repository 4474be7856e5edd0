#include "catprep/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace catprep {

namespace {

// Propagates an X pattern through a preparation circuit from layer `from`
// (0-based) to the end.
ErrorMask propagate_prep(const PrepCircuit& c, ErrorMask e, int from) {
  for (int l = from; l < c.depth(); ++l) {
    for (const CxGate& g : c.layers[l]) {
      e ^= ((e >> g.control) & 1U) << g.target;
    }
  }
  return e;
}

// One CNOT location in the compiled execution order.
struct CompiledCx {
  bool on_ancilla = false;     // prep gate side; ignored for transversal
  bool transversal = false;
  int control = 0;
  int target = 0;
};

struct Compiled {
  int w = 0;
  int wp = 0;
  int data_root = 0;
  int anc_root = 0;
  std::vector<CompiledCx> gates;  // prep layers (slot-aligned), then transversal
};

Compiled compile(const VerifiedPrepCircuit& c) {
  Compiled out;
  out.w = c.width();
  out.wp = c.ancilla_width();
  out.data_root = c.data.root;
  out.anc_root = c.ancilla.root;
  const int depth = c.prep_depth();
  const int data_off = depth - c.data.depth();
  const int anc_off = depth - c.ancilla.depth();
  for (int slot = 0; slot < depth; ++slot) {
    const int di = slot - data_off;
    if (di >= 0 && di < c.data.depth()) {
      for (const CxGate& g : c.data.layers[di]) {
        out.gates.push_back({false, false, g.control, g.target});
      }
    }
    const int ai = slot - anc_off;
    if (ai >= 0 && ai < c.ancilla.depth()) {
      for (const CxGate& g : c.ancilla.layers[ai]) {
        out.gates.push_back({true, false, g.control, g.target});
      }
    }
  }
  for (const auto& [d, a] : c.wiring.pairs) {
    out.gates.push_back({false, true, d, a});
  }
  return out;
}

struct Frame {
  ErrorMask x_data = 0, z_data = 0, x_anc = 0, z_anc = 0;
};

// Uniform two-qubit Pauli, index 1..15: high two bits pick the control
// Pauli, low two the target (0=I, 1=X, 2=Y, 3=Z).
void apply_depolarize(Frame& f, const CompiledCx& g, int pauli) {
  const int pc = pauli >> 2;
  const int pt = pauli & 3;
  const bool xc = pc == 1 || pc == 2;
  const bool zc = pc == 2 || pc == 3;
  const bool xt = pt == 1 || pt == 2;
  const bool zt = pt == 2 || pt == 3;
  ErrorMask& cx = g.transversal ? f.x_data : (g.on_ancilla ? f.x_anc : f.x_data);
  ErrorMask& cz = g.transversal ? f.z_data : (g.on_ancilla ? f.z_anc : f.z_data);
  ErrorMask& tx = g.transversal ? f.x_anc : (g.on_ancilla ? f.x_anc : f.x_data);
  ErrorMask& tz = g.transversal ? f.z_anc : (g.on_ancilla ? f.z_anc : f.z_data);
  if (xc) cx ^= ErrorMask{1} << g.control;
  if (zc) cz ^= ErrorMask{1} << g.control;
  if (xt) tx ^= ErrorMask{1} << g.target;
  if (zt) tz ^= ErrorMask{1} << g.target;
}

void propagate_gate(Frame& f, const CompiledCx& g) {
  if (g.transversal) {
    f.x_anc ^= ((f.x_data >> g.control) & 1U) << g.target;
    f.z_data ^= ((f.z_anc >> g.target) & 1U) << g.control;
  } else if (g.on_ancilla) {
    f.x_anc ^= ((f.x_anc >> g.control) & 1U) << g.target;
    f.z_anc ^= ((f.z_anc >> g.target) & 1U) << g.control;
  } else {
    f.x_data ^= ((f.x_data >> g.control) & 1U) << g.target;
    f.z_data ^= ((f.z_data >> g.target) & 1U) << g.control;
  }
}

ShotResult finish(const Compiled& c, const Frame& f, ErrorMask meas_flips) {
  const ErrorMask outcome = (f.x_anc ^ meas_flips) & full_mask(c.wp);
  ShotResult r;
  r.accepted = outcome == 0 || outcome == full_mask(c.wp);
  r.flips = r.accepted ? weight(f.x_data, c.w) : 0;
  return r;
}

ShotResult sample_shot_compiled(const Compiled& c, const NoiseModel& nm,
                                SplitMix64& rng) {
  Frame f;
  const double init_p = nm.init_flip();
  const bool x_inits = nm.observable_init_flips;
  // Data inits in qubit order, then ancilla. The |+> roots always take Z
  // flips (an X there fixes the state).
  for (int q = 0; q < c.w; ++q) {
    if (rng.bernoulli(init_p)) {
      if (x_inits && q != c.data_root) {
        f.x_data ^= ErrorMask{1} << q;
      } else {
        f.z_data ^= ErrorMask{1} << q;
      }
    }
  }
  for (int q = 0; q < c.wp; ++q) {
    if (rng.bernoulli(init_p)) {
      if (x_inits && q != c.anc_root) {
        f.x_anc ^= ErrorMask{1} << q;
      } else {
        f.z_anc ^= ErrorMask{1} << q;
      }
    }
  }
  for (const CompiledCx& g : c.gates) {
    propagate_gate(f, g);
    if (rng.bernoulli(nm.cx_depolarize())) {
      apply_depolarize(f, g, 1 + static_cast<int>(rng.next_below(15)));
    }
  }
  ErrorMask meas_flips = 0;
  const double meas_p = nm.measure_flip();
  for (int q = 0; q < c.wp; ++q) {
    if (rng.bernoulli(meas_p)) meas_flips |= ErrorMask{1} << q;
  }
  return finish(c, f, meas_flips);
}

}  // namespace

ShotResult sample_shot(const VerifiedPrepCircuit& c, const NoiseModel& nm,
                       SplitMix64& rng) {
  const Compiled compiled = compile(c);
  return sample_shot_compiled(compiled, nm, rng);
}

SimReport estimate(const VerifiedPrepCircuit& c, const NoiseModel& nm,
                   long shots, std::uint64_t seed, int threads) {
  if (shots < 1) throw std::invalid_argument("shots must be >= 1");
  if (nm.p < 0.0 || nm.p > 1.0) throw std::invalid_argument("p must be in [0, 1]");
  if (threads < 1) threads = 1;
  const Compiled compiled = compile(c);
  const int hist_size = c.width() / 2 + 1;

  struct Partial {
    long accepted = 0;
    std::vector<long> hist;
  };
  std::vector<Partial> partials(threads);
  for (auto& p : partials) p.hist.assign(hist_size, 0);

  auto worker = [&](int tid, long begin, long end) {
    Partial& p = partials[tid];
    for (long shot = begin; shot < end; ++shot) {
      SplitMix64 rng = stream_rng(seed, static_cast<std::uint64_t>(shot));
      const ShotResult r = sample_shot_compiled(compiled, nm, rng);
      if (r.accepted) {
        ++p.accepted;
        ++p.hist[r.flips];
      }
    }
  };

  if (threads == 1) {
    worker(0, 0, shots);
  } else {
    std::vector<std::thread> pool;
    const long chunk = (shots + threads - 1) / threads;
    for (int tid = 0; tid < threads; ++tid) {
      const long begin = tid * chunk;
      const long end = std::min(shots, begin + chunk);
      if (begin >= end) break;
      pool.emplace_back(worker, tid, begin, end);
    }
    for (auto& th : pool) th.join();
  }

  SimReport report;
  report.w = c.width();
  report.w_prime = c.ancilla_width();
  report.p = nm.p;
  report.shots = shots;
  report.seed = seed;
  report.flip_counts.assign(hist_size, 0);
  for (const Partial& p : partials) {
    report.accepted += p.accepted;
    for (int k = 0; k < hist_size; ++k) report.flip_counts[k] += p.hist[k];
  }
  report.r_acc = static_cast<double>(report.accepted) / static_cast<double>(shots);
  report.std_err =
      std::sqrt(report.r_acc * (1.0 - report.r_acc) / static_cast<double>(shots));
  report.p_k.assign(hist_size, 0.0);
  if (report.accepted > 0) {
    for (int k = 0; k < hist_size; ++k) {
      report.p_k[k] = static_cast<double>(report.flip_counts[k]) /
                      static_cast<double>(report.accepted);
    }
  }
  return report;
}

std::vector<double> error_profile(const VerifiedPrepCircuit& c,
                                  const NoiseModel& nm, long shots,
                                  std::uint64_t seed, int threads) {
  return estimate(c, nm, shots, seed, threads).p_k;
}

std::string SimReport::to_csv(int target) const {
  std::ostringstream out;
  out << "w,w_prime,t,p,shots,seed,R_acc,stderr";
  for (std::size_t k = 0; k < p_k.size(); ++k) out << ",P_" << k;
  out << "\n";
  char buf[64];
  out << w << "," << w_prime << "," << target << ",";
  std::snprintf(buf, sizeof buf, "%.8g", p);
  out << buf << "," << shots << "," << seed << ",";
  std::snprintf(buf, sizeof buf, "%.8f", r_acc);
  out << buf << ",";
  std::snprintf(buf, sizeof buf, "%.8e", std_err);
  out << buf;
  for (double v : p_k) {
    std::snprintf(buf, sizeof buf, "%.8e", v);
    out << "," << buf;
  }
  out << "\n";
  return out.str();
}

ShotResult run_with_faults(const VerifiedPrepCircuit& c,
                           std::span<const FaultSite> faults) {
  const Compiled compiled = compile(c);
  ErrorMask x_data = 0;
  ErrorMask x_anc = 0;
  for (const FaultSite& site : faults) {
    const PrepCircuit& prep = site.on_ancilla ? c.ancilla : c.data;
    if (site.qubit < 0 || site.qubit >= prep.width || site.time < 0 ||
        site.time > prep.depth()) {
      throw std::invalid_argument("fault site out of range");
    }
    const ErrorMask e =
        propagate_prep(prep, ErrorMask{1} << site.qubit, site.time);
    if (site.on_ancilla) {
      x_anc ^= e;
    } else {
      x_data ^= e;
    }
  }
  Frame f;
  f.x_data = x_data;
  f.x_anc = x_anc ^ c.wiring.map_error(x_data);
  return finish(compiled, f, 0);
}

std::vector<FaultSite> prep_fault_sites(const VerifiedPrepCircuit& c) {
  std::vector<FaultSite> sites;
  for (int side = 0; side < 2; ++side) {
    const bool on_anc = side == 1;
    const PrepCircuit& prep = on_anc ? c.ancilla : c.data;
    for (int t = 0; t <= prep.depth(); ++t) {
      for (int q = 0; q < prep.width; ++q) {
        sites.push_back({on_anc, t, q});
      }
    }
  }
  return sites;
}

ExpansionEstimate acceptance_expansion(const VerifiedPrepCircuit& c,
                                       const NoiseModel& nm) {
  const Compiled compiled = compile(c);
  const int w = compiled.w;
  const int wp = compiled.wp;

  // Frames are F2-linear, so the end-of-circuit effect of one fault outcome
  // can be precomputed and worlds evaluated by XOR.
  struct Outcome {
    double prob = 0.0;
    ErrorMask x_anc = 0;   // includes the transversal copy of its data part
    ErrorMask meas = 0;
  };
  struct Location {
    double p_any = 0.0;
    std::vector<Outcome> outcomes;
  };
  std::vector<Location> locations;

  auto effect_of_x = [&](bool on_anc, int qubit, std::size_t gate_index) {
    // X inserted right after gates[0..gate_index) and propagated to the end.
    Frame f;
    if (on_anc) {
      f.x_anc = ErrorMask{1} << qubit;
    } else {
      f.x_data = ErrorMask{1} << qubit;
    }
    for (std::size_t i = gate_index; i < compiled.gates.size(); ++i) {
      propagate_gate(f, compiled.gates[i]);
    }
    return f;
  };

  const double init_p = nm.init_flip();
  if (init_p > 0.0) {
    for (int q = 0; q < w; ++q) {
      Location loc;
      loc.p_any = init_p;
      if (nm.observable_init_flips && q != compiled.data_root) {
        const Frame f = effect_of_x(false, q, 0);
        loc.outcomes.push_back({init_p, f.x_anc, 0});
      } else {
        loc.outcomes.push_back({init_p, 0, 0});  // phase flip: unobservable
      }
      locations.push_back(std::move(loc));
    }
    for (int q = 0; q < wp; ++q) {
      Location loc;
      loc.p_any = init_p;
      if (nm.observable_init_flips && q != compiled.anc_root) {
        const Frame f = effect_of_x(true, q, 0);
        loc.outcomes.push_back({init_p, f.x_anc, 0});
      } else {
        loc.outcomes.push_back({init_p, 0, 0});
      }
      locations.push_back(std::move(loc));
    }
  }

  if (nm.p > 0.0) {
    const double each = nm.cx_depolarize() / 15.0;
    for (std::size_t gi = 0; gi < compiled.gates.size(); ++gi) {
      const CompiledCx& g = compiled.gates[gi];
      Location loc;
      loc.p_any = nm.cx_depolarize();
      for (int pauli = 1; pauli <= 15; ++pauli) {
        Frame f;
        apply_depolarize(f, g, pauli);
        for (std::size_t i = gi + 1; i < compiled.gates.size(); ++i) {
          propagate_gate(f, compiled.gates[i]);
        }
        // Residual data X flips matter for P_k but not for acceptance;
        // acceptance only sees the ancilla X frame.
        loc.outcomes.push_back({each, f.x_anc, 0});
      }
      locations.push_back(std::move(loc));
    }
  }

  const double meas_p = nm.measure_flip();
  if (meas_p > 0.0) {
    for (int q = 0; q < wp; ++q) {
      Location loc;
      loc.p_any = meas_p;
      loc.outcomes.push_back({meas_p, 0, ErrorMask{1} << q});
      locations.push_back(std::move(loc));
    }
  }

  const ErrorMask full = full_mask(wp);
  auto accepted = [&](ErrorMask x_anc, ErrorMask meas) {
    const ErrorMask outcome = (x_anc ^ meas) & full;
    return outcome == 0 || outcome == full;
  };

  double no_fault = 1.0;
  for (const Location& loc : locations) no_fault *= 1.0 - loc.p_any;

  double r = no_fault;          // zero-fault world always accepts
  double covered = no_fault;
  for (std::size_t i = 0; i < locations.size(); ++i) {
    const double scale_i = no_fault / (1.0 - locations[i].p_any);
    for (const Outcome& oi : locations[i].outcomes) {
      covered += scale_i * oi.prob;
      if (accepted(oi.x_anc, oi.meas)) r += scale_i * oi.prob;
      for (std::size_t j = i + 1; j < locations.size(); ++j) {
        const double scale_ij = scale_i / (1.0 - locations[j].p_any);
        for (const Outcome& oj : locations[j].outcomes) {
          covered += scale_ij * oi.prob * oj.prob;
          if (accepted(oi.x_anc ^ oj.x_anc, oi.meas ^ oj.meas)) {
            r += scale_ij * oi.prob * oj.prob;
          }
        }
      }
    }
  }
  return {r, covered};
}

}  // namespace catprep
