#include "catprep/reporting.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace catprep {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string field;
  while (std::getline(in, field, ',')) out.push_back(field);
  return out;
}

}  // namespace

FixtureTable parse_fixture_csv(const std::string& text, int target, double p) {
  FixtureTable table;
  table.target = target;
  table.p = p;
  std::istringstream in(text);
  std::string line;
  bool header = true;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    if (header) {
      header = false;
      continue;
    }
    const auto fields = split_csv_line(line);
    if (fields.size() != 13) {
      throw std::invalid_argument("fixture line " + std::to_string(line_no) +
                                  ": expected 13 fields");
    }
    FixtureRow row;
    try {
      row.w = std::stoi(fields[0]);
      row.ra_tw = std::stod(fields[1]);
      row.d_tw = std::stoi(fields[2]);
      row.cx_tw = std::stoi(fields[3]);
      row.q_tw = std::stoi(fields[4]);
      row.ra_rec = std::stod(fields[5]);
      row.d_rec = std::stoi(fields[6]);
      row.cx_rec = std::stoi(fields[7]);
      row.q_rec = std::stoi(fields[8]);
      row.d_ra = std::stod(fields[9]);
      row.d_d = std::stoi(fields[10]);
      row.d_cx = std::stoi(fields[11]);
      row.d_q = std::stoi(fields[12]);
    } catch (const std::exception&) {
      throw std::invalid_argument("fixture line " + std::to_string(line_no) +
                                  ": bad number");
    }
    table.rows.push_back(row);
  }
  return table;
}

std::vector<FixtureTable> load_fixtures(const std::string& dir) {
  namespace fs = std::filesystem;
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.path().extension() == ".csv") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());

  std::vector<FixtureTable> tables;
  for (const fs::path& path : files) {
    // Names follow t<order>_p<rate>.csv, e.g. t3_p1e-03.csv.
    const std::string stem = path.stem().string();
    if (stem.size() < 2 || stem[0] != 't') continue;
    const auto underscore = stem.find('_');
    if (underscore == std::string::npos) continue;
    int target = 0;
    double p = 0.0;
    try {
      target = std::stoi(stem.substr(1, underscore - 1));
      const std::string ptag = stem.substr(underscore + 1);
      if (ptag.size() < 2 || ptag[0] != 'p') continue;
      p = std::stod(ptag.substr(1));
    } catch (const std::exception&) {
      continue;
    }
    std::ifstream in(path);
    std::ostringstream buf;
    buf << in.rdbuf();
    tables.push_back(parse_fixture_csv(buf.str(), target, p));
  }
  return tables;
}

int ComparisonReport::mismatch_count() const {
  int n = 0;
  for (const ReportRow& row : rows) n += row.metrics_mismatch ? 1 : 0;
  return n;
}

std::string ComparisonReport::to_csv() const {
  std::ostringstream out;
  out << "t,w,w_prime,d,cx,q,fixture_d,fixture_cx,fixture_q,metrics_match,"
         "ra_sim,fixture_ra_tw,ra_rec,delta_d,delta_cx,delta_q,delta_ra\n";
  char buf[64];
  for (const ReportRow& row : rows) {
    out << row.target << "," << row.w << "," << row.w_prime << ","
        << row.ours.depth_report << "," << row.ours.cx_count << ","
        << row.ours.qubit_count << ",";
    if (row.fixture != nullptr) {
      out << row.fixture->d_tw << "," << row.fixture->cx_tw << ","
          << row.fixture->q_tw << "," << (row.metrics_mismatch ? "no" : "yes")
          << ",";
    } else {
      out << ",,,,";
    }
    if (row.r_acc.has_value()) {
      std::snprintf(buf, sizeof buf, "%.2f", *row.r_acc);
      out << buf;
    }
    out << ",";
    if (row.fixture != nullptr) {
      std::snprintf(buf, sizeof buf, "%.2f", row.fixture->ra_tw);
      out << buf << ",";
      std::snprintf(buf, sizeof buf, "%.2f", row.fixture->ra_rec);
      out << buf << ",";
      out << (row.ours.depth_report - row.fixture->d_rec) << ","
          << (row.ours.cx_count - row.fixture->cx_rec) << ","
          << (row.ours.qubit_count - row.fixture->q_rec) << ",";
      if (row.r_acc.has_value()) {
        std::snprintf(buf, sizeof buf, "%.2f", *row.r_acc - row.fixture->ra_rec);
        out << buf;
      }
    } else {
      out << ",,,,,";
    }
    out << "\n";
  }
  return out.str();
}

ComparisonReport build_report(
    const std::vector<Solution>& solutions,
    const std::vector<FixtureTable>& fixtures,
    const std::map<std::pair<int, int>, double>& sim_racc) {
  ComparisonReport report;
  std::vector<Solution> sorted = solutions;
  std::sort(sorted.begin(), sorted.end(), [](const Solution& a, const Solution& b) {
    if (a.target != b.target) return a.target < b.target;
    return a.w < b.w;
  });

  for (const Solution& s : sorted) {
    ReportRow row;
    row.target = s.target;
    row.w = s.w;
    row.w_prime = s.w_prime;
    row.ours = metrics(assemble(build_balanced_tree(s.w),
                                build_balanced_tree(s.w_prime), s.wiring));
    const auto it = sim_racc.find({s.target, s.w});
    if (it != sim_racc.end()) row.r_acc = it->second;

    for (const FixtureTable& table : fixtures) {
      if (table.target != s.target) continue;
      for (const FixtureRow& fr : table.rows) {
        if (fr.w == s.w) {
          row.fixture = &fr;
          break;
        }
      }
      if (row.fixture != nullptr) break;
    }
    if (row.fixture == nullptr) {
      report.warnings.push_back("no fixture row for t=" + std::to_string(s.target) +
                                " w=" + std::to_string(s.w));
    } else {
      row.metrics_mismatch = row.ours.depth_report != row.fixture->d_tw ||
                             row.ours.cx_count != row.fixture->cx_tw ||
                             row.ours.qubit_count != row.fixture->q_tw;
    }
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace catprep
