#include "gcrelay/energy.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "gcrelay/harvest.hpp"

namespace gcrelay {

void FrameTiming::validate(double W) const {
  if (!(T_R > 0.0)) throw std::invalid_argument("FrameTiming: T_R must be > 0");
  if (!(T_total > T_R)) throw std::invalid_argument("FrameTiming: T_total must exceed T_R");
  if (!(T_S > 0.0 && T_S < T())) throw std::invalid_argument("FrameTiming: T_S must lie in (0, T)");
  if (T_S * W < 1.0) throw std::invalid_argument("FrameTiming: fewer than one sensing sample");
}

void EnergyModel::check_T_S(double T_S) const {
  if (!(T_S > 0.0 && T_S < T)) throw std::domain_error("energy model: T_S must lie in (0, T)");
}

double EnergyModel::miss(double T_S) const { return std::exp(T_S * W * log_delta); }

double EnergyModel::P_d(double T_S) const { return -std::expm1(T_S * W * log_delta); }

double EnergyModel::total(double T_S) const {
  check_T_S(T_S);
  const double m = miss(T_S);
  return E_S * T_S * T_S * W + E_R * T_R * T_S * W + (m * Pr * E_T - E_H * (1.0 - m)) * (T - T_S);
}

double EnergyModel::total_nonharvesting(double T_S) const {
  check_T_S(T_S);
  return E_S * T_S * T_S * W + E_R * T_R * T_S * W + miss(T_S) * Pr * E_T * (T - T_S);
}

double EnergyModel::expected_data(double T_S, double rate) const {
  if (!(rate >= 0.0)) throw std::domain_error("expected_data: rate must be >= 0");
  if (T_S >= T) return 0.0;
  check_T_S(T_S);
  return miss(T_S) * Pr * rate * (T - T_S);
}

namespace {

// exponent Delta^(-T_S W) D* / ((T - T_S) W Pr), evaluated through logs
double exponent(const EnergyModel& m, double T_S, double D_star) {
  if (D_star == 0.0) return 0.0;
  return std::exp(std::log(D_star) - T_S * m.W * m.log_delta - std::log((m.T - T_S) * m.W * m.Pr));
}

}  // namespace

double EnergyModel::constraint(double T_S, double D_star, double rate) const {
  if (T_S >= T) throw std::domain_error("transformed_constraint: T_S must be < T");
  check_T_S(T_S);
  if (!(D_star >= 0.0)) throw std::domain_error("transformed_constraint: D* must be >= 0");
  return std::exp2(exponent(*this, T_S, D_star)) - std::exp2(rate / W);
}

double EnergyModel::constraint_slope(double T_S, double D_star, double rate) const {
  (void)rate;
  check_T_S(T_S);
  const double x = exponent(*this, T_S, D_star);
  return std::numbers::ln2 * std::exp2(x) * x * (-W * log_delta + 1.0 / (T - T_S));
}

double EnergyModel::slope(double T_S) const {
  const double m = miss(T_S);
  return 2.0 * E_S * W * T_S + E_R * T_R * W + E_H -
         m * (E_H + E_T * Pr) * (1.0 - (T - T_S) * W * log_delta);
}

double EnergyModel::curvature(double T_S) const {
  const double m = miss(T_S);
  return 2.0 * E_S * W -
         m * (E_H + E_T * Pr) * W * log_delta * (2.0 - (T - T_S) * W * log_delta);
}

bool EnergyModel::necessary_condition(double T_S) const {
  const double lhs = E_H + E_T * Pr;
  const double rhs = (E_H + 2.0 * E_S * T_S * W + E_R * T_R * W) /
                     (miss(T_S) * (1.0 - (T - T_S) * W * log_delta));
  return lhs <= rhs * (1.0 + 1e-6);
}

double EnergyModel::ecg(double T_S) const {
  check_T_S(T_S);
  const double pd = P_d(T_S);
  const double T_D = T - T_S;
  const double consumed = E_S * T_S + E_R * T_R * T_S * W + (1.0 - pd) * Pr * E_T * T_D;
  const double harvested = pd * E_H * T_D;
  if (harvested == 0.0) return std::numeric_limits<double>::infinity();
  return consumed / harvested;
}

EnergyModel build_energy_model(std::size_t i, const LinkSet& links, const PrimaryModel& primary,
                               const SecondaryPolicy& policy, const CsiModel& csi,
                               const FrameTiming& nominal, bool iid) {
  nominal.validate(policy.W);
  const ReportingPhase report(links, primary, policy);
  EnergyModel m;
  m.W = policy.W;
  m.T = nominal.T();
  m.T_R = nominal.T_R;
  m.log_delta = report.log_miss(policy.lambda);
  const double pd = m.P_d(nominal.T_S);
  m.P_d_nominal = pd;
  const TransmissionPhase trans(links, primary, policy, csi, pd, iid);
  m.E_S = policy.P_Rx;
  m.E_R = report.relay(i).power + policy.P_Tx;
  m.E_T = trans.powers().p_RD.at(i) + policy.P_Tx;
  m.Pr = trans.selection_prob(i);
  m.E_H = avg_harvested_power(i, links, primary, policy, pd).E_tilde;
  return m;
}

double total_energy(const EnergyModel& model, double T_S) { return model.total(T_S); }
double total_energy_nonharvesting(const EnergyModel& model, double T_S) {
  return model.total_nonharvesting(T_S);
}
double expected_data(const EnergyModel& model, double T_S, double rate) {
  return model.expected_data(T_S, rate);
}
double transformed_constraint(const EnergyModel& model, double T_S, double D_star, double rate) {
  return model.constraint(T_S, D_star, rate);
}
bool necessary_condition(const EnergyModel& model, double T_S_star) {
  return model.necessary_condition(T_S_star);
}
double ecg(const EnergyModel& model, double T_S) { return model.ecg(T_S); }

Optimum optimize_sensing_time(const EnergyModel& m, double D_star, double rate) {
  if (!(D_star >= 0.0)) throw std::domain_error("optimize_sensing_time: D* must be >= 0");
  constexpr double resolution = 1e-7;
  const double lo = m.T_S_min();
  double hi = m.T - resolution;
  if (!(hi > lo)) throw std::domain_error("optimize_sensing_time: frame too short");

  auto feasible = [&](double t) { return m.constraint(t, D_star, rate) <= 0.0; };
  if (!feasible(lo)) {
    const double max_bits = m.expected_data(lo, rate);
    std::ostringstream msg;
    msg << "target of " << D_star << " bits is infeasible; at most " << max_bits
        << " bits can be delivered (T_S = " << lo << " s)";
    throw InfeasibleError(msg.str(), max_bits);
  }
  if (!feasible(hi)) {
    double a = lo;
    double b = hi;
    for (int it = 0; it < 200 && b - a > 1e-15; ++it) {
      const double mid = 0.5 * (a + b);
      (feasible(mid) ? a : b) = mid;
    }
    hi = a;
  }

  // golden-section search on the convex objective
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo;
  double b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = m.total(c);
  double fd = m.total(d);
  while (b - a > 1e-3 * resolution) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = m.total(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = m.total(d);
    }
  }
  double t = 0.5 * (a + b);

  // polish on the analytic derivative
  if (m.slope(lo) >= 0.0) {
    t = lo;
  } else if (m.slope(hi) <= 0.0) {
    t = hi;
  } else {
    double x0 = lo;
    double x1 = hi;
    for (int it = 0; it < 200 && x1 - x0 > 1e-15; ++it) {
      const double mid = 0.5 * (x0 + x1);
      (m.slope(mid) < 0.0 ? x0 : x1) = mid;
    }
    const double polished = 0.5 * (x0 + x1);
    if (m.total(polished) <= m.total(t)) t = polished;
  }

  Optimum out{};
  out.T_S_star = t;
  out.E_min = m.total(t);
  out.slope = m.slope(t);
  out.upper = hi;
  out.at_lower_bound = (t == lo);
  out.constraint_active = D_star > 0.0 && t == hi && hi < m.T - resolution && out.slope < 0.0;
  out.mu = out.constraint_active ? -out.slope / m.constraint_slope(t, D_star, rate) : 0.0;
  out.necessary = m.necessary_condition(t);
  return out;
}

}  // namespace gcrelay
