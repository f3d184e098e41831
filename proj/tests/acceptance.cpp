// Acceptance harness: one PASS/FAIL line per criterion.
// Usage: acceptance [criterion...]   (all criteria when none given)

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "gcrelay/experiments.hpp"
#include "gcrelay/mcsim.hpp"
#include "gcrelay/specfun.hpp"
#include "oracles.hpp"

using namespace gcrelay;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [fail: " << what << "]";
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::size_t column(const Table& t, const std::string& name) {
  for (std::size_t k = 0; k < t.header.size(); ++k) {
    if (t.header[k] == name) return k;
  }
  throw std::logic_error("no column " + name);
}

double cell(const Table& t, std::size_t row, const std::string& name) {
  return std::stod(t.rows.at(row).at(column(t, name)));
}

constexpr double kRuntimeLimit = 300.0;
constexpr double kZ = 3.0;

// ---------------------------------------------------------------------------

struct ZTally {
  std::size_t points = 0;
  std::size_t bad = 0;
  double worst = 0.0;
  void add(double z) {
    ++points;
    if (!(std::fabs(z) <= kZ)) ++bad;
    if (std::fabs(z) > worst || std::isnan(z)) worst = std::fabs(z);
  }
};

void tally_table(ZTally& z, const Table& t, const std::vector<std::string>& cols) {
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    for (const auto& c : cols) z.add(cell(t, r, c));
  }
}

void report_tally(Outcome& o, const std::string& name, const ZTally& z, double secs) {
  o.detail << " " << name << ": " << (z.points - z.bad) << "/" << z.points << " within " << kZ
           << " SE (max |z| " << num(z.worst) << ", " << static_cast<int>(secs) << " s);";
  o.require(z.bad == 0, name + " points outside " + std::to_string(kZ) + " SE");
  o.require(secs <= kRuntimeLimit, name + " runtime above 5 min");
}

Outcome criterion1() {
  Outcome o;
  {
    const Scenario s = default_scenario("fig3");
    const auto t0 = std::chrono::steady_clock::now();
    const Table t = figure3(s, RunOptions::from(s));
    ZTally z;
    tally_table(z, t, {"z"});
    report_tally(o, "fig3 detection", z, seconds_since(t0));
  }
  {
    const Scenario s = default_scenario("fig4");
    const auto t0 = std::chrono::steady_clock::now();
    const Table t = figure4(s, RunOptions::from(s));
    ZTally z;
    tally_table(z, t, {"z"});
    report_tally(o, "fig4 outage", z, seconds_since(t0));
  }
  {
    const auto t0 = std::chrono::steady_clock::now();
    ZTally z;
    for (const char* name : {"fig7", "fig3"}) {
      Scenario s = default_scenario(name);
      for (std::size_t L : {1u, 2u, 3u, 4u}) {
        s.L = L;
        if (std::string(name) == "fig3") s.d_PS = s.d_PR = s.d_PD = 0.5;
        RunOptions run = RunOptions::from(s);
        run.seed = s.seed + 1000 * L;
        tally_table(z, harvest_report_table(s, run), {"z"});
      }
    }
    report_tally(o, "harvested power", z, seconds_since(t0));
  }
  {
    const Scenario s = default_scenario("fig7");
    const auto t0 = std::chrono::steady_clock::now();
    const Table t = figure7(s, RunOptions::from(s));
    ZTally z;
    tally_table(z, t, {"z", "z_nh"});
    report_tally(o, "fig7 frame energy", z, seconds_since(t0));
  }
  return o;
}

// ---------------------------------------------------------------------------

Outcome criterion2() {
  Outcome o;
  const Scenario s = default_scenario("table1");
  const Table t = table1(s);
  std::size_t within = 0;
  std::size_t kkt = 0;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const double got = cell(t, r, "T_S_star");
    const double ref = cell(t, r, "reference");
    const bool close = std::fabs(got - ref) <= 0.1 * ref;
    within += close;
    const double slope = cell(t, r, "slope");
    const double mu = cell(t, r, "mu");
    const bool active = cell(t, r, "constraint_active") != 0.0;
    const bool lower = cell(t, r, "at_lower_bound") != 0.0;
    const bool stationary = (lower && slope >= 0.0) || std::fabs(slope) <= 1e-6 || (active && mu > 0.0);
    const bool ok = stationary && mu >= 0.0 && cell(t, r, "necessary_condition") != 0.0;
    kkt += ok;
    if (!close) {
      std::printf("  table1 M=%s L=%s: T_S* = %s s, reference %s s, relative deviation %s; KKT %s\n",
                  t.rows[r][0].c_str(), t.rows[r][1].c_str(), num(got).c_str(), num(ref).c_str(),
                  num((got - ref) / ref).c_str(), ok ? "holds" : "violated");
    }
  }
  o.detail << " " << within << "/16 cells within 10% of the reference grid; KKT suite holds in " << kkt
           << "/16 cells";
  if (within < 16) o.detail << " (fallback applied, deviations listed above)";
  o.require(within == 16 || kkt == 16, "KKT suite");
  return o;
}

// ---------------------------------------------------------------------------

Outcome criterion3() {
  Outcome o;
  Scenario s = default_scenario("fig3");
  const auto lambdas = std::vector<double>{26.0, 28.0, 30.0, 32.0, 34.0};
  const auto ds = s.sweep.points();
  auto pd = [&](std::size_t L, double lam_db, double d) {
    Scenario p = s;
    p.lambda = {lam_db, Quantity::Unit::dB};
    p.d_PS = p.d_PR = p.d_PD = d;
    const SystemConfig sys = p.system(p.M, L);
    return detection_probability(sys.policy.lambda, static_cast<double>(p.U), sys.links, sys.primary,
                                 sys.policy);
  };
  const double target = pd(3, s.lambda.value, 0.4);
  o.detail << " P_d(L=3, d=0.4, lambda=" << s.lambda.str() << ") = " << num(target) << ";";
  o.require(target >= 0.90, "P_d below 0.90 at d = 0.4");
  std::size_t d_breaks = 0;
  std::size_t lam_breaks = 0;
  for (std::size_t L : s.series_L) {
    std::vector<double> prev_lam(ds.size(), 2.0);
    for (double lam : lambdas) {
      double prev = 2.0;
      for (std::size_t k = 0; k < ds.size(); ++k) {
        const double v = pd(L, lam, ds[k]);
        if (v > prev) ++d_breaks;
        if (v > prev_lam[k]) ++lam_breaks;
        prev = v;
        prev_lam[k] = v;
      }
    }
  }
  o.detail << " monotonicity violations: " << d_breaks << " in d_P1, " << lam_breaks << " in lambda ("
           << s.series_L.size() * lambdas.size() * ds.size() << " points)";
  o.require(d_breaks == 0 && lam_breaks == 0, "monotonicity");
  return o;
}

// ---------------------------------------------------------------------------

Outcome criterion4() {
  Outcome o;
  const Scenario s = default_scenario("fig4");
  RunOptions run;
  run.mc = false;
  const Table t = figure4(s, run);
  // rows ordered M, rho, P_max
  std::size_t breaks = 0;
  double worst_rho_gap = 0.0;
  std::size_t m_breaks = 0;
  std::size_t compared = 0;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const double M = cell(t, r, "M");
    const double rho = cell(t, r, "rho");
    const double pmax = cell(t, r, "P_max_dB");
    const double pout = cell(t, r, "P_out");
    if (r > 0 && cell(t, r - 1, "M") == M && cell(t, r - 1, "rho") == rho && pout > cell(t, r - 1, "P_out")) {
      ++breaks;
    }
    for (std::size_t q = 0; q < t.rows.size(); ++q) {
      if (cell(t, q, "P_max_dB") != pmax) continue;
      if (M == 1 && cell(t, q, "M") == 1 && rho != cell(t, q, "rho")) {
        worst_rho_gap = std::max(worst_rho_gap, std::fabs(pout - cell(t, q, "P_out")));
      }
      if (M == 4 && rho == 0.9 && cell(t, q, "M") == 1 && cell(t, q, "rho") == 0.9) {
        ++compared;
        if (pout > cell(t, q, "P_out")) ++m_breaks;
      }
    }
  }
  o.detail << " P_max monotonicity violations " << breaks << "; M=4 above M=1 at " << m_breaks << "/"
           << compared << " points (rho=0.9); M=1 rho gap " << num(worst_rho_gap);
  o.require(breaks == 0, "outage not monotone in P_max");
  o.require(compared > 0 && m_breaks == 0, "diversity ordering");
  o.require(worst_rho_gap <= 1e-12, "rho invariance");
  return o;
}

// ---------------------------------------------------------------------------

Outcome criterion5() {
  Outcome o;
  const Scenario s = default_scenario("fig7");
  for (std::size_t L : s.series_L) {
    const SystemConfig sys = s.system(s.M, L);
    const EnergyModel m = build_energy_model(s.relay, sys.links, sys.primary, sys.policy, sys.csi, s.timing, sys.iid);
    double min_nh = std::numeric_limits<double>::infinity();
    for (double t : s.sweep.points()) min_nh = std::min(min_nh, m.total_nonharvesting(t));
    min_nh = std::min(min_nh, m.total_nonharvesting(0.02));
    const double e = m.total(0.02);
    o.detail << " L=" << L << (L == s.L ? " (default)" : "") << ": E_total(20 ms) = " << num(e)
             << " J, min non-harvesting " << num(min_nh) << " J;";
    if (L == s.L) {
      o.require(e < 0.0, "harvesting energy not negative at 20 ms");
      o.require(min_nh > 0.0, "non-harvesting energy not positive");
    }
  }
  return o;
}

// ---------------------------------------------------------------------------

Outcome criterion6() {
  Outcome o;
  const std::vector<std::vector<double>> sets = {{2.0}, {1.0, 3.0}, {0.5, 1.5, 4.0}, {1.0, 1.1, 1.3, 2.0},
                                                 {1e-3, 2e-3, 5e-3, 7e-3, 1e-2}};
  double worst_mass = 0.0;
  std::size_t cdf_breaks = 0;
  for (const auto& m : sets) {
    const double top = 80.0 * *std::max_element(m.begin(), m.end());
    for (double p : {0.25, 0.5, 1.0}) {
      const ActivitySum a(m, p);
      const double mass = oracle::integrate([&](double x) { return a.pdf(x); }, 0.0, top);
      worst_mass = std::max(worst_mass, std::fabs(mass - (1.0 - a.atom())));
      const double hmass = oracle::integrate([&](double x) { return hypoexp_pdf(x, m, p, 2.0); }, 0.0, 2.0 * top);
      worst_mass = std::max(worst_mass, std::fabs(hmass - (1.0 - a.atom())));
    }
    worst_mass = std::max(worst_mass, std::fabs(oracle::integrate([&](double x) { return max_exp_pdf(x, m); }, 0.0, top) - 1.0));

    const ActivitySum a(m, 0.5);
    auto check_cdf = [&](const std::function<double(double)>& F, double lo_value, double scale) {
      double prev = F(0.0);
      if (std::fabs(prev - lo_value) > 1e-12) ++cdf_breaks;
      for (double x : oracle::log_grid(1e-6 * scale, 1e3 * scale, 400)) {
        const double v = F(x);
        if (v < prev - 1e-15 || v > 1.0 || v < 0.0) ++cdf_breaks;
        prev = v;
      }
      if (std::fabs(F(1e6 * scale) - 1.0) > 1e-9) ++cdf_breaks;
    };
    check_cdf([&](double x) { return a.cdf(x); }, a.atom(), m.back());
    check_cdf([&](double x) { return max_exp_cdf(x, m); }, 0.0, m.back());
  }
  for (const char* name : {"fig3", "fig4", "table1"}) {
    const Scenario s = default_scenario(name);
    const SystemConfig sys = s.system(2, 3);
    const ReportingPhase rp(sys.links, sys.primary, sys.policy);
    const TransmissionPhase tp(sys.links, sys.primary, sys.policy, sys.csi, 0.3, sys.iid);
    for (std::size_t i = 0; i < 2; ++i) {
      double prev = rp.e2e_cdf(i, 0.0);
      if (std::fabs(prev - rp.relay(i).first_hop.atom()) > 1e-12) ++cdf_breaks;
      double tprev = tp.e2e_cdf(i, 0.0);
      if (tprev != 0.0) ++cdf_breaks;
      for (double x : oracle::log_grid(1e-4, 1e12, 400)) {
        const double v = rp.e2e_cdf(i, x);
        const double w = tp.e2e_cdf(i, x);
        if (v < prev - 1e-15 || w < tprev - 1e-15 || v > 1.0 || w > 1.0) ++cdf_breaks;
        prev = v;
        tprev = w;
      }
      if (std::fabs(prev - 1.0) > 1e-9 || std::fabs(tprev - 1.0) > 1e-9) ++cdf_breaks;
    }
  }
  o.detail << " worst PDF mass error " << num(worst_mass) << "; CDF violations " << cdf_breaks << ";";
  o.require(worst_mass <= 1e-6, "PDF normalisation");
  o.require(cdf_breaks == 0, "CDF shape");

  constexpr std::size_t n = 1000000;
  const double crit = oracle::ks_critical_1pct(n);
  Rng rng(2024);
  std::vector<double> draws(n);
  const std::vector<double> m{0.5, 1.5, 4.0, 2.5};
  const ActivitySum a(m, 0.5);
  for (double& x : draws) x = draw_activity_sum(rng, m, 0.5);
  const double ks_sum = oracle::ks_distance(draws, [&](double x) { return a.cdf(x); });
  for (double& x : draws) x = draw_max_exp(rng, m);
  const double ks_max = oracle::ks_distance(draws, [&](double x) { return max_exp_cdf(x, m); });
  const SystemConfig sys = default_scenario("fig3").system(1, 3);
  const ReportingPhase rp(sys.links, sys.primary, sys.policy);
  const auto& r = rp.relay(0);
  const auto means = [&] {
    std::vector<double> v;
    for (const auto& t : r.first_hop.terms()) v.push_back(t.mean);
    return v;
  }();
  for (double& x : draws) {
    const double g1 = draw_activity_sum(rng, means, sys.primary.p_on);
    const double g2 = draw_exp(rng, r.hop2_mean);
    x = g1 * g2 / (g2 + r.U);
  }
  const double ks_e2e = oracle::ks_distance(draws, [&](double x) { return x < 0.0 ? 0.0 : rp.e2e_cdf(0, x); });
  o.detail << " KS at 1e6 samples: activity sum " << num(ks_sum) << ", max order statistic " << num(ks_max)
           << ", dual-hop SNR " << num(ks_e2e) << " (1% critical " << num(crit) << ")";
  o.require(ks_sum < crit && ks_max < crit && ks_e2e < crit, "KS test");
  return o;
}

// ---------------------------------------------------------------------------

Outcome criterion7() {
  Outcome o;
  const Scenario s = default_scenario("table1");
  double worst_obj = 0.0;
  double worst_con = 0.0;
  double worst_cs = 0.0;
  double min_mu = 0.0;
  std::size_t solved = 0;
  std::size_t active = 0;
  for (std::size_t M : s.series_M) {
    for (std::size_t L : s.series_L) {
      const SystemConfig sys = s.system(M, L);
      const EnergyModel m = build_energy_model(s.relay, sys.links, sys.primary, sys.policy, sys.csi, s.timing, sys.iid);
      const double best_bits = m.expected_data(m.T_S_min(), s.rate);
      const std::vector<double> targets{0.0, 0.25 * best_bits, 0.75 * best_bits, s.D_star};
      for (double t : oracle::log_grid(2.0 / m.W, 0.09, 60)) {
        const double h = 0.01 * t;
        const double d2 = m.total(t - h) - 2.0 * m.total(t) + m.total(t + h);
        worst_obj = std::min(worst_obj, d2);
        for (double D : targets) {
          const double c0 = m.constraint(t - h, D, s.rate);
          const double c1 = m.constraint(t, D, s.rate);
          const double c2 = m.constraint(t + h, D, s.rate);
          if (std::isfinite(c0) && std::isfinite(c1) && std::isfinite(c2)) {
            worst_con = std::min(worst_con, c0 - 2.0 * c1 + c2);
          }
        }
      }
      for (double D : targets) {
        const Optimum opt = optimize_sensing_time(m, D, s.rate);
        ++solved;
        active += opt.constraint_active;
        min_mu = std::min(min_mu, opt.mu);
        worst_cs = std::max(worst_cs, std::fabs(opt.mu * m.constraint(opt.T_S_star, D, s.rate)));
      }
    }
  }
  o.detail << " min second difference: objective " << num(worst_obj) << ", constraint " << num(worst_con)
           << "; complementary slackness max |mu g| " << num(worst_cs) << " over " << solved
           << " solves (" << active << " with active constraint), min mu " << num(min_mu);
  o.require(worst_obj >= -1e-9 && worst_con >= -1e-9, "convexity");
  o.require(worst_cs <= 1e-6 && min_mu >= 0.0, "complementary slackness");
  return o;
}

// ---------------------------------------------------------------------------

Outcome criterion8() {
  Outcome o;
  namespace sf = gcrelay::specfun;
  double k1 = 0, i0e = 0, i0 = 0, j0 = 0, e1 = 0, e1s = 0, ei = 0, ident = 0;
  for (double x : oracle::log_grid(1e-3, 500.0, 50)) k1 = std::max(k1, oracle::rel_err(sf::bessel_k1(x), oracle::bessel_k1(x)));
  for (double x : oracle::log_grid(1e-3, 700.0, 50)) {
    const double want = oracle::bessel_i0e(x);
    i0e = std::max(i0e, oracle::rel_err(sf::bessel_i0e(x), want));
    if (x < 700.0) i0 = std::max(i0, oracle::rel_err(sf::bessel_i0(x), std::exp(x) * want));
  }
  for (double x : oracle::log_grid(1e-3, 200.0, 50)) j0 = std::max(j0, std::fabs(sf::bessel_j0(x) - oracle::bessel_j0(x)));
  for (double x : oracle::log_grid(1e-4, 600.0, 50)) {
    const double want = oracle::e1(x);
    e1 = std::max(e1, oracle::rel_err(sf::gamma_upper_0(x), want));
    e1s = std::max(e1s, oracle::rel_err(sf::gamma_upper_0_scaled(x), std::exp(x) * want));
    ident = std::max(ident, oracle::rel_err(sf::gamma_upper_0(x), -sf::ei(-x)));
  }
  for (double x : oracle::log_grid(1e-4, 300.0, 50)) ei = std::max(ei, oracle::rel_err(sf::ei(x), oracle::ei_positive(x)));
  double zk = 0.0;
  for (double z : oracle::log_grid(1e-3, 500.0, 50)) zk = std::max(zk, oracle::rel_err(sf::z_bessel_k1(z), z * oracle::bessel_k1(z)));
  o.detail << " max rel error vs quadrature: K1 " << num(k1) << ", zK1 " << num(zk) << ", I0 " << num(i0)
           << ", I0e " << num(i0e) << ", E1 " << num(e1) << ", scaled E1 " << num(e1s) << ", Ei " << num(ei)
           << "; max abs error J0 " << num(j0) << "; Gamma(0,x) vs -Ei(-x) " << num(ident);
  o.require(std::max({k1, zk, i0, i0e, e1, e1s, ei}) <= 1e-10, "relative tolerance 1e-10");
  o.require(j0 <= 1e-12, "J0 absolute tolerance 1e-12");
  o.require(ident <= 1e-9, "identity 1e-9");
  return o;
}

// ---------------------------------------------------------------------------

Outcome criterion9() {
  Outcome o;
  const Scenario s = default_scenario("default");
  auto run = [&](unsigned workers) {
    RunOptions r = RunOptions::from(s);
    r.workers = workers;
    return validate(s, r, ValidationOptions{}, nullptr).csv();
  };
  const std::string a = run(1);
  const std::string b = run(1);
  const std::string c = run(2);
  const std::string d = run(4);
  o.detail << " validate CSV (" << a.size() << " bytes, seed " << s.seed << ", " << s.trials
           << " trials): repeat " << (a == b ? "identical" : "DIFFERS") << ", 2 workers "
           << (a == c ? "identical" : "DIFFERS") << ", 4 workers " << (a == d ? "identical" : "DIFFERS");
  o.require(a == b && a == c && a == d, "bit-identical output");
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::function<Outcome()>> criteria = {criterion1, criterion2, criterion3,
                                                          criterion4, criterion5, criterion6,
                                                          criterion7, criterion8, criterion9};
  std::vector<int> which;
  for (int k = 1; k < argc; ++k) which.push_back(std::atoi(argv[k]));
  if (which.empty()) {
    for (int k = 1; k <= 9; ++k) which.push_back(k);
  }
  bool all = true;
  for (int c : which) {
    if (c < 1 || c > 9) {
      std::fprintf(stderr, "unknown criterion %d\n", c);
      return 2;
    }
    Outcome o;
    try {
      o = criteria[c - 1]();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " exception: " << e.what();
    }
    std::printf("criterion %d: %s -%s\n", c, o.pass ? "PASS" : "FAIL", o.detail.str().c_str());
    std::fflush(stdout);
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
