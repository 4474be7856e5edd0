#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "catprep/search.hpp"
#include "catprep/sim.hpp"

namespace catprep {

// One row of a comparison fixture: our circuit family next to the recursive
// construction, acceptance rates in percent, plus the printed differences.
struct FixtureRow {
  int w = 0;
  double ra_tw = 0.0;
  int d_tw = 0, cx_tw = 0, q_tw = 0;
  double ra_rec = 0.0;
  int d_rec = 0, cx_rec = 0, q_rec = 0;
  double d_ra = 0.0;
  int d_d = 0, d_cx = 0, d_q = 0;
};

struct FixtureTable {
  int target = 0;
  double p = 0.0;
  std::vector<FixtureRow> rows;
};

FixtureTable parse_fixture_csv(const std::string& text, int target, double p);

// Loads every fixtures/t<k>_p*.csv file in a directory.
std::vector<FixtureTable> load_fixtures(const std::string& dir);

struct ReportRow {
  int target = 0;
  int w = 0;
  int w_prime = 0;
  CircuitMetrics ours;
  std::optional<double> r_acc;  // percent, from a simulation CSV if present
  const FixtureRow* fixture = nullptr;
  bool metrics_mismatch = false;
};

struct ComparisonReport {
  std::vector<ReportRow> rows;
  std::vector<std::string> warnings;

  std::string to_csv() const;
  int mismatch_count() const;
};

// Joins synthesized solutions with fixture rows of the same (t, w) and
// recomputes the deltas; rows whose computed (d, CX, Q) disagree with the
// fixture's own columns are flagged.
ComparisonReport build_report(const std::vector<Solution>& solutions,
                              const std::vector<FixtureTable>& fixtures,
                              const std::map<std::pair<int, int>, double>& sim_racc);

}  // namespace catprep
