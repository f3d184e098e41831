#include "gcrelay/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "gcrelay/harvest.hpp"

namespace gcrelay {

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

void Table::add(std::vector<std::string> row) {
  if (row.size() != header.size()) throw std::logic_error("Table::add: column count mismatch");
  rows.push_back(std::move(row));
}

std::string Table::csv() const {
  std::string out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t k = 0; k < cells.size(); ++k) {
      if (k) out += ',';
      out += cells[k];
    }
    out += '\n';
  };
  line(header);
  for (const auto& r : rows) line(r);
  return out;
}

void Table::write(const std::string& path) const {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
  f << csv();
}

MCOptions RunOptions::point(std::uint64_t k) const {
  MCOptions o;
  o.trials = trials;
  o.workers = workers;
  o.seed = seed * 0x9E3779B97F4A7C15ULL + k;
  return o;
}

namespace {

const std::string kNaN = "nan";

double detection_at(const SystemConfig& sys, double U) {
  const ReportingPhase phase(sys.links, sys.primary, sys.policy);
  return detection_probability_from_log_miss(phase.log_miss(sys.policy.lambda), U);
}

void mc_cells(std::vector<std::string>& row, const MCEstimate* e, double analytic, bool probability) {
  if (!e) {
    row.insert(row.end(), {kNaN, kNaN, kNaN});
    return;
  }
  row.push_back(num(e->mean));
  row.push_back(num(e->std_error));
  row.push_back(num(e->z_score(analytic, probability)));
}

}  // namespace

Table figure3(const Scenario& s, const RunOptions& run) {
  Table t{{"d_P1", "L", "lambda_dB", "P_d", "P_d_mc", "stderr", "z"}, {}};
  auto lambdas = s.series_lambda;
  if (lambdas.empty()) lambdas.push_back(s.lambda);
  std::uint64_t k = 0;
  for (const auto& lam : lambdas) {
    for (std::size_t L : s.series_L) {
      for (double d : s.sweep.points()) {
        Scenario p = s;
        p.lambda = lam;
        p.d_PS = p.d_PR = p.d_PD = d;
        const SystemConfig sys = p.system(p.M, L);
        const double pd = detection_at(sys, static_cast<double>(p.U));
        std::vector<std::string> row{num(d), std::to_string(L),
                                     num(10.0 * std::log10(sys.policy.lambda)), num(pd)};
        if (run.mc) {
          const MCEstimate e = mc_detection(sys, p.U, run.point(k));
          mc_cells(row, &e, pd, true);
        } else {
          mc_cells(row, nullptr, pd, true);
        }
        t.add(std::move(row));
        ++k;
      }
    }
  }
  return t;
}

Table figure4(const Scenario& s, const RunOptions& run) {
  Table t{{"P_max_dB", "M", "rho", "P_d", "P_out", "P_out_mc", "stderr", "z"}, {}};
  std::uint64_t k = 0;
  for (std::size_t M : s.series_M) {
    for (double rho : s.series_rho) {
      for (double pmax_db : s.sweep.points()) {
        Scenario p = s;
        p.P_max = {pmax_db, Quantity::Unit::dB};
        p.rho = rho;
        const SystemConfig sys = p.system(M, p.L);
        const double pd = detection_at(sys, static_cast<double>(p.U));
        const double gth = p.gamma_th.normalised(p.N0());
        const double pout = outage_probability(gth, sys.links, sys.primary, sys.policy, sys.csi, pd, sys.iid);
        std::vector<std::string> row{num(pmax_db), std::to_string(M), num(rho), num(pd), num(pout)};
        if (run.mc) {
          const MCEstimate e = mc_outage(sys, pd, gth, run.point(k));
          mc_cells(row, &e, pout, true);
        } else {
          mc_cells(row, nullptr, pout, true);
        }
        t.add(std::move(row));
        ++k;
      }
    }
  }
  return t;
}

namespace {

EnergyModel energy_model(const Scenario& p, const SystemConfig& sys) {
  return build_energy_model(p.relay, sys.links, sys.primary, sys.policy, sys.csi, p.timing, sys.iid);
}

}  // namespace

Table figure6(const Scenario& s, const RunOptions& run) {
  Table t{{"d_P1", "L", "P_d", "E_total", "E_total_nonharvesting", "E_mc", "stderr", "z"}, {}};
  std::uint64_t k = 0;
  for (std::size_t L : s.series_L) {
    for (double d : s.sweep.points()) {
      Scenario p = s;
      p.d_PS = p.d_PR = p.d_PD = d;
      const SystemConfig sys = p.system(p.M, L);
      const EnergyModel m = energy_model(p, sys);
      const double ts = p.timing.T_S;
      const double e = m.total(ts);
      std::vector<std::string> row{num(d), std::to_string(L), num(m.P_d(ts)), num(e),
                                   num(m.total_nonharvesting(ts))};
      if (run.mc) {
        const MCEstimate est = mc_frame_energy(sys, p.relay, m, ts, true, run.point(k));
        mc_cells(row, &est, e, false);
      } else {
        mc_cells(row, nullptr, e, false);
      }
      t.add(std::move(row));
      ++k;
    }
  }
  return t;
}

Table figure7(const Scenario& s, const RunOptions& run) {
  Table t{{"T_S", "L", "P_d", "E_total", "E_mc", "stderr", "z", "E_total_nonharvesting",
           "E_nh_mc", "stderr_nh", "z_nh"},
          {}};
  std::uint64_t k = 0;
  for (std::size_t L : s.series_L) {
    const SystemConfig sys = s.system(s.M, L);
    const EnergyModel m = energy_model(s, sys);
    for (double ts : s.sweep.points()) {
      const double e = m.total(ts);
      const double enh = m.total_nonharvesting(ts);
      std::vector<std::string> row{num(ts), std::to_string(L), num(m.P_d(ts)), num(e)};
      if (run.mc) {
        const MCEstimate a = mc_frame_energy(sys, s.relay, m, ts, true, run.point(2 * k));
        mc_cells(row, &a, e, false);
        row.push_back(num(enh));
        const MCEstimate b = mc_frame_energy(sys, s.relay, m, ts, false, run.point(2 * k + 1));
        mc_cells(row, &b, enh, false);
      } else {
        mc_cells(row, nullptr, e, false);
        row.push_back(num(enh));
        mc_cells(row, nullptr, enh, false);
      }
      t.add(std::move(row));
      ++k;
    }
  }
  return t;
}

Table figure8(const Scenario& s, const RunOptions& run) {
  Table t{{"T_S", "L", "P_d", "ECG", "ECG_mc", "stderr", "z"}, {}};
  std::uint64_t k = 0;
  for (std::size_t L : s.series_L) {
    const SystemConfig sys = s.system(s.M, L);
    const EnergyModel m = energy_model(s, sys);
    for (double ts : s.sweep.points()) {
      const double g = m.ecg(ts);
      std::vector<std::string> row{num(ts), std::to_string(L), num(m.P_d(ts)), num(g)};
      if (run.mc) {
        const MCEstimate e = mc_ecg(sys, s.relay, m, ts, run.point(k));
        mc_cells(row, &e, g, false);
      } else {
        mc_cells(row, nullptr, g, false);
      }
      t.add(std::move(row));
      ++k;
    }
  }
  return t;
}

double table1_reference(std::size_t M, std::size_t L) {
  static const double ref[4][4] = {{0.0873, 0.0815, 0.0658, 0.000115},
                                   {0.0873, 0.0815, 0.00372, 0.000115},
                                   {0.0873, 0.0815, 0.00372, 0.000115},
                                   {0.0873, 0.0815, 0.00370, 0.000106}};
  if (M < 1 || M > 4 || L < 1 || L > 4) return NAN;
  return ref[M - 1][L - 1];
}

Table table1(const Scenario& s) {
  Table t{{"M", "L", "T_S_star", "reference", "rel_dev", "mu", "E_min", "slope", "constraint_active",
           "at_lower_bound", "necessary_condition"},
          {}};
  for (std::size_t M : s.series_M) {
    for (std::size_t L : s.series_L) {
      const SystemConfig sys = s.system(M, L);
      const EnergyModel m = energy_model(s, sys);
      const Optimum o = optimize_sensing_time(m, s.D_star, s.rate);
      const double ref = table1_reference(M, L);
      t.add({std::to_string(M), std::to_string(L), num(o.T_S_star), num(ref),
             num((o.T_S_star - ref) / ref), num(o.mu), num(o.E_min), num(o.slope),
             o.constraint_active ? "1" : "0", o.at_lower_bound ? "1" : "0",
             o.necessary ? "1" : "0"});
    }
  }
  return t;
}

Table run_figure(const std::string& name, const Scenario& s, const RunOptions& run) {
  if (name == "fig3") return figure3(s, run);
  if (name == "fig4") return figure4(s, run);
  if (name == "fig6") return figure6(s, run);
  if (name == "fig7") return figure7(s, run);
  if (name == "fig8") return figure8(s, run);
  if (name == "table1") return table1(s);
  throw ConfigError("unknown figure '" + name + "'; valid: fig3 fig4 fig6 fig7 fig8 table1");
}

Table validate(const Scenario& s, const RunOptions& run, const ValidationOptions& v, bool* all_pass) {
  Table t{{"check", "point", "analytic", "mc", "stderr", "z", "pass"}, {}};
  const SystemConfig sys = s.system();
  SystemConfig sim = sys;
  if (v.corrupt_distance != 1.0) {
    Scenario c = s;
    for (double* d : {&c.d_SR, &c.d_RD, &c.d_PS, &c.d_PR, &c.d_PD}) *d *= v.corrupt_distance;
    sim = c.system();
  }
  bool ok = true;
  std::uint64_t k = 0;
  auto record = [&](const std::string& check, const std::string& point, double analytic,
                    const MCEstimate& e, bool probability) {
    const double z = e.z_score(analytic, probability);
    const bool pass = std::fabs(z) <= v.z_limit;
    ok = ok && pass;
    t.add({check, point, num(analytic), num(e.mean), num(e.std_error), num(z), pass ? "1" : "0"});
  };

  const ReportingPhase report(sys.links, sys.primary, sys.policy);
  const double U = static_cast<double>(s.U);
  const double pd = detection_probability_from_log_miss(report.log_miss(sys.policy.lambda), U);
  record("detection", "U=" + std::to_string(s.U), pd, mc_detection(sim, s.U, run.point(k++)), true);

  for (double f : {0.25, 0.5, 1.0, 2.0, 4.0}) {
    const double x = f * sys.policy.lambda;
    record("report_e2e_cdf", "x=" + num(x), report.e2e_cdf(0, x),
           mc_report_e2e_cdf(sim, 0, x, run.point(k++)), true);
  }

  const double gth = s.gamma_th.normalised(s.N0());
  const TransmissionPhase trans(sys.links, sys.primary, sys.policy, sys.csi, pd, sys.iid);
  record("outage", "gamma_th=" + num(gth), trans.outage(gth), mc_outage(sim, pd, gth, run.point(k++)), true);
  for (std::size_t l = 0; l < trans.relays(); ++l) {
    record("relay_selection", "relay=" + std::to_string(l + 1), trans.selection_prob(l),
           mc_relay_selection(sim, pd, l, run.point(k++)), true);
  }

  const HarvestEntry h = avg_harvested_power(s.relay, sys.links, sys.primary, sys.policy, pd);
  record("harvest", "U=" + std::to_string(s.U), h.E_bar, mc_harvest(sim, s.relay, s.U, run.point(k++)), false);

  const EnergyModel m = energy_model(s, sys);
  const double ts = s.timing.T_S;
  record("frame_energy", "T_S=" + num(ts), m.total(ts),
         mc_frame_energy(sim, s.relay, m, ts, true, run.point(k++)), false);
  record("frame_energy_nonharvesting", "T_S=" + num(ts), m.total_nonharvesting(ts),
         mc_frame_energy(sim, s.relay, m, ts, false, run.point(k++)), false);
  record("ecg", "T_S=" + num(ts), m.ecg(ts), mc_ecg(sim, s.relay, m, ts, run.point(k++)), false);

  const RelayReport& r = report.relay(s.relay);
  const SaturationGain g = solve_clipping_level(r.first_hop, r.U, sys.policy.N0);
  auto means = sim.links.primary_gains_to_relay(s.relay);
  for (double& x : means) x *= sim.primary.p_p / sim.policy.N0;
  record("modified_gain", "K/N0=" + num(g.K / sys.policy.N0), g.avg_modified_gain,
         mc_modified_gain(means, sim.primary.p_on, r.U, g.threshold, run.point(k++)), false);

  if (all_pass) *all_pass = ok;
  return t;
}

Table detect_report(const Scenario& s, const RunOptions& run) {
  Table t{{"M", "L", "lambda_over_N0", "U", "log_delta", "P_d", "P_d_mc", "stderr", "z"}, {}};
  const SystemConfig sys = s.system();
  const ReportingPhase report(sys.links, sys.primary, sys.policy);
  const double ld = report.log_miss(sys.policy.lambda);
  const double pd = detection_probability_from_log_miss(ld, static_cast<double>(s.U));
  std::vector<std::string> row{std::to_string(s.M), std::to_string(s.L), num(sys.policy.lambda),
                               std::to_string(s.U), num(ld), num(pd)};
  if (run.mc) {
    const MCEstimate e = mc_detection(sys, s.U, run.point(0));
    mc_cells(row, &e, pd, true);
  } else {
    mc_cells(row, nullptr, pd, true);
  }
  t.add(std::move(row));
  return t;
}

Table outage_report(const Scenario& s, const RunOptions& run) {
  Table t{{"M", "L", "rho", "gamma_th_over_N0", "P_d", "relay", "selection_prob", "P_out", "P_out_mc",
           "stderr", "z"},
          {}};
  const SystemConfig sys = s.system();
  const double pd = detection_at(sys, static_cast<double>(s.U));
  const double gth = s.gamma_th.normalised(s.N0());
  const TransmissionPhase trans(sys.links, sys.primary, sys.policy, sys.csi, pd, sys.iid);
  const double pout = trans.outage(gth);
  std::vector<std::string> row{std::to_string(s.M), std::to_string(s.L), num(sys.csi.rho), num(gth),
                               num(pd), "all", "1", num(pout)};
  if (run.mc) {
    const MCEstimate e = mc_outage(sys, pd, gth, run.point(0));
    mc_cells(row, &e, pout, true);
  } else {
    mc_cells(row, nullptr, pout, true);
  }
  t.add(std::move(row));
  for (std::size_t l = 0; l < trans.relays(); ++l) {
    t.add({std::to_string(s.M), std::to_string(s.L), num(sys.csi.rho), num(gth), num(pd),
           std::to_string(l + 1), num(trans.selection_prob(l)), num(trans.joint_cdf(l, gth)), kNaN,
           kNaN, kNaN});
  }
  return t;
}

Table harvest_report_table(const Scenario& s, const RunOptions& run) {
  Table t{{"relay", "P_d", "E_tilde", "E_bar", "E_bar_mc", "stderr", "z"}, {}};
  const SystemConfig sys = s.system();
  const double pd = detection_at(sys, static_cast<double>(s.U));
  for (std::size_t i = 0; i < sys.links.relays(); ++i) {
    const HarvestEntry h = avg_harvested_power(i, sys.links, sys.primary, sys.policy, pd);
    std::vector<std::string> row{std::to_string(i + 1), num(pd), num(h.E_tilde), num(h.E_bar)};
    if (run.mc) {
      const MCEstimate e = mc_harvest(sys, i, s.U, run.point(i));
      mc_cells(row, &e, h.E_bar, false);
    } else {
      mc_cells(row, nullptr, h.E_bar, false);
    }
    t.add(std::move(row));
  }
  return t;
}

Table energy_report(const Scenario& s, const RunOptions& run) {
  Table t{{"relay", "T_S", "P_d", "E_S", "E_R", "E_T", "E_H", "selection_prob", "E_total", "E_mc",
           "stderr", "z", "E_total_nonharvesting", "ECG"},
          {}};
  const SystemConfig sys = s.system();
  const EnergyModel m = energy_model(s, sys);
  const double ts = s.timing.T_S;
  const double e = m.total(ts);
  std::vector<std::string> row{std::to_string(s.relay + 1), num(ts), num(m.P_d(ts)), num(m.E_S),
                               num(m.E_R), num(m.E_T), num(m.E_H), num(m.Pr), num(e)};
  if (run.mc) {
    const MCEstimate est = mc_frame_energy(sys, s.relay, m, ts, true, run.point(0));
    mc_cells(row, &est, e, false);
  } else {
    mc_cells(row, nullptr, e, false);
  }
  row.push_back(num(m.total_nonharvesting(ts)));
  row.push_back(num(m.ecg(ts)));
  t.add(std::move(row));
  return t;
}

Table optimize_report(const Scenario& s) {
  Table t{{"relay", "D_star", "rate", "T_S_star", "mu", "E_min", "slope", "feasible_upper",
           "constraint_active", "at_lower_bound", "necessary_condition"},
          {}};
  const SystemConfig sys = s.system();
  const EnergyModel m = energy_model(s, sys);
  const Optimum o = optimize_sensing_time(m, s.D_star, s.rate);
  t.add({std::to_string(s.relay + 1), num(s.D_star), num(s.rate), num(o.T_S_star), num(o.mu),
         num(o.E_min), num(o.slope), num(o.upper), o.constraint_active ? "1" : "0",
         o.at_lower_bound ? "1" : "0", o.necessary ? "1" : "0"});
  return t;
}

}  // namespace gcrelay
