#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gcrelay/mcsim.hpp"
#include "gcrelay/scenario.hpp"

namespace gcrelay {

/// CSV table with a fixed column order; numbers are printed with 9
/// significant digits.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add(std::vector<std::string> row);
  std::string csv() const;
  void write(const std::string& path) const;
};

std::string num(double v);

struct RunOptions {
  bool mc = true;
  std::uint64_t trials = 1000000;
  std::uint64_t seed = 1;
  unsigned workers = 1;

  static RunOptions from(const Scenario& s, bool mc = true) {
    return RunOptions{mc, s.trials, s.seed, s.workers};
  }
  /// Independent stream for sweep point k.
  MCOptions point(std::uint64_t k) const;
};

/// Detection probability vs first-primary distance, per threshold and L.
Table figure3(const Scenario& s, const RunOptions& run);
/// Outage probability vs P_max/N0 (dB), per M and rho.
Table figure4(const Scenario& s, const RunOptions& run);
/// Frame energy at the nominal T_S vs first-primary distance, per L.
Table figure6(const Scenario& s, const RunOptions& run);
/// Frame energy (harvesting and not) vs T_S, per L.
Table figure7(const Scenario& s, const RunOptions& run);
/// Energy-consumption gain vs T_S, per L.
Table figure8(const Scenario& s, const RunOptions& run);
/// Optimal sensing time over the M x L grid.
Table table1(const Scenario& s);

Table run_figure(const std::string& name, const Scenario& s, const RunOptions& run);

/// Published optimal sensing times, row M, column L (1-based).
double table1_reference(std::size_t M, std::size_t L);

struct ValidationOptions {
  double z_limit = 4.0;
  /// Multiplies every distance of the simulated system; 1 leaves it intact.
  double corrupt_distance = 1.0;
};

/// Every analytic / Monte Carlo pair of one scenario.
Table validate(const Scenario& s, const RunOptions& run, const ValidationOptions& v = {},
               bool* all_pass = nullptr);

/// Single-point reports used by the CLI.
Table detect_report(const Scenario& s, const RunOptions& run);
Table outage_report(const Scenario& s, const RunOptions& run);
Table harvest_report_table(const Scenario& s, const RunOptions& run);
Table energy_report(const Scenario& s, const RunOptions& run);
Table optimize_report(const Scenario& s);

}  // namespace gcrelay
