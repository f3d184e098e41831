#include "gcrelay/transmission.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>

#include "gcrelay/specfun.hpp"

namespace gcrelay {

namespace {

bool same(double x, double y) { return std::fabs(x - y) <= 1e-12 * std::max(std::fabs(x), std::fabs(y)); }

void require_iid(const LinkSet& links) {
  for (std::size_t i = 1; i < links.relays(); ++i) {
    bool ok = same(links.d_SR[i], links.d_SR[0]) && same(links.d_RD[i], links.d_RD[0]);
    for (const auto& row : links.d_PR) ok = ok && same(row[i], row[0]);
    if (!ok) throw std::invalid_argument("TransmissionPhase: links are not identically distributed");
  }
}

double binom(std::size_t n, std::size_t k) {
  return std::round(std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0)));
}

// Xi and Z for one subset with combined rate phi.
SubsetTerm subset_term(double w, double phi, double b, double rho) {
  const double r2 = rho * rho;
  const double den = (1.0 - r2) * b * phi + r2;
  return {w / den, phi / den};
}

}  // namespace

double rho_from_doppler(double f_doppler, double T_diff) {
  if (!(f_doppler >= 0.0) || !(T_diff >= 0.0)) {
    throw std::domain_error("rho_from_doppler: inputs must be >= 0");
  }
  return std::fabs(specfun::bessel_j0(2.0 * std::numbers::pi * f_doppler * T_diff));
}

CsiModel CsiModel::from_doppler(double f_doppler, double T_diff) {
  return CsiModel{rho_from_doppler(f_doppler, T_diff)};
}

void CsiModel::validate() const {
  if (!(rho >= 0.0 && rho <= 1.0)) throw std::invalid_argument("CsiModel: rho must lie in [0, 1]");
}

TransmissionPowers trans_powers(const LinkSet& links, const PrimaryModel& /*primary*/,
                                const SecondaryPolicy& policy, double P_d) {
  if (!(P_d >= 0.0 && P_d <= 1.0)) throw std::domain_error("trans_powers: P_d outside [0, 1]");
  const double activity = 1.0 - P_d;
  TransmissionPowers out;
  out.p_SR = interference_limited_power(policy.P_max, policy.Q,
                                        max_exp_expectation(links.primary_gains_to_source()),
                                        activity);
  for (std::size_t l = 0; l < links.relays(); ++l) {
    out.p_RD.push_back(interference_limited_power(
        policy.P_max, policy.Q, max_exp_expectation(links.primary_gains_to_relay(l)), activity));
  }
  return out;
}

double trans_fixed_gain(double a) {
  if (!(a > 0.0)) throw std::domain_error("trans_fixed_gain: mean must be > 0");
  return a / specfun::gamma_upper_0_scaled(1.0 / a);
}

TransmissionPhase::TransmissionPhase(const LinkSet& links, const PrimaryModel& primary,
                                     const SecondaryPolicy& policy, const CsiModel& csi,
                                     double P_d, bool iid)
    : powers_(trans_powers(links, primary, policy, P_d)), iid_(iid) {
  links.validate();
  policy.validate();
  csi.validate();
  const std::size_t M = links.relays();
  if (M != policy.M) throw std::invalid_argument("TransmissionPhase: M disagrees with the link set");
  if (M > 20) throw std::domain_error("TransmissionPhase: more than 20 relays");
  if (iid) require_iid(links);

  std::vector<double> b(M);
  for (std::size_t l = 0; l < M; ++l) b[l] = powers_.p_RD[l] * links.gbar_RD(l) / policy.N0;

  for (std::size_t l = 0; l < M; ++l) {
    TransCoeffs c{};
    c.a = powers_.p_SR * links.gbar_SR(l) / policy.N0;
    c.b = b[l];
    c.U = trans_fixed_gain(c.a);
    if (iid) {
      for (std::size_t k = 0; k + 1 <= M; ++k) {
        const double w = binom(M - 1, k) * ((k % 2 == 0) ? 1.0 : -1.0) / b[l];
        c.terms.push_back(subset_term(w, (k + 1.0) / b[l], b[l], csi.rho));
      }
    } else {
      const std::uint32_t others = static_cast<std::uint32_t>(M - 1);
      for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << others); ++mask) {
        double phi = 1.0 / b[l];
        for (std::uint32_t t = 0; t < others; ++t) {
          if (mask & (std::uint32_t{1} << t)) phi += 1.0 / b[t < l ? t : t + 1];
        }
        const double w = ((std::popcount(mask) % 2 == 0) ? 1.0 : -1.0) / b[l];
        c.terms.push_back(subset_term(w, phi, b[l], csi.rho));
      }
    }
    c.select_prob = 0.0;
    for (const auto& t : c.terms) c.select_prob += t.Xi / t.Z;
    coeffs_.push_back(std::move(c));
  }
}

double TransmissionPhase::joint_cdf(std::size_t l, double x) const {
  if (x < 0.0 || std::isnan(x)) throw std::domain_error("trans_e2e_cdf: x must be >= 0");
  const TransCoeffs& c = coeffs_.at(l);
  if (std::isinf(x)) return c.select_prob;
  const double decay = std::exp(-x / c.a);
  double acc = 0.0;
  for (const auto& t : c.terms) {
    const double z = 2.0 * std::sqrt(c.U * t.Z * x / c.a);
    acc += t.Xi / t.Z * (1.0 - decay * specfun::z_bessel_k1(z));
  }
  return acc;
}

double TransmissionPhase::e2e_cdf(std::size_t l, double x) const {
  return joint_cdf(l, x) / coeffs_.at(l).select_prob;
}

double TransmissionPhase::outage(double gamma_th) const {
  if (iid_) return e2e_cdf(0, gamma_th);
  double acc = 0.0;
  for (std::size_t l = 0; l < coeffs_.size(); ++l) acc += joint_cdf(l, gamma_th);
  return acc;
}

double trans_e2e_cdf(double x, std::size_t l, const LinkSet& links, const PrimaryModel& primary,
                     const SecondaryPolicy& policy, const CsiModel& csi, double P_d, bool iid) {
  return TransmissionPhase(links, primary, policy, csi, P_d, iid).e2e_cdf(l, x);
}

double relay_selection_prob(std::size_t l, const LinkSet& links, const PrimaryModel& primary,
                            const SecondaryPolicy& policy, double P_d) {
  return TransmissionPhase(links, primary, policy, CsiModel{}, P_d).selection_prob(l);
}

double outage_probability(double gamma_th, const LinkSet& links, const PrimaryModel& primary,
                          const SecondaryPolicy& policy, const CsiModel& csi, double P_d,
                          bool iid) {
  return TransmissionPhase(links, primary, policy, csi, P_d, iid).outage(gamma_th);
}

SaturationGain solve_transmission_saturation_gain(const TransmissionPhase& phase, std::size_t l,
                                                  double N0) {
  const TransCoeffs& c = phase.coeffs(l);
  const double mean[1] = {c.a};
  return solve_clipping_level(ActivitySum(mean, 1.0), c.U, N0);
}

}  // namespace gcrelay
