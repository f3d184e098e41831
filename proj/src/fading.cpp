#include "gcrelay/fading.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>

#include "gcrelay/specfun.hpp"

namespace gcrelay {

namespace {

constexpr std::size_t kMaxSubsetNodes = 20;
constexpr double kDistinctTol = 1e-9;

void check_subset_size(std::size_t n, const char* fn) {
  if (n > kMaxSubsetNodes) {
    throw std::domain_error(std::string(fn) + ": more than 20 nodes");
  }
}

void check_positive_means(std::span<const double> means, const char* fn) {
  for (double m : means) {
    if (!(m > 0.0) || !std::isfinite(m)) {
      throw std::domain_error(std::string(fn) + ": means must be positive and finite");
    }
  }
}

}  // namespace

double mean_gain(double distance, double alpha) {
  if (!(distance > 0.0)) throw std::invalid_argument("mean_gain: distance must be > 0");
  return std::pow(distance, -alpha);
}

std::vector<double> LinkSet::primary_gains_to_relay(std::size_t i) const {
  std::vector<double> g(primaries());
  for (std::size_t l = 0; l < g.size(); ++l) g[l] = gbar_PR(l, i);
  return g;
}

std::vector<double> LinkSet::primary_gains_to_source() const {
  std::vector<double> g(primaries());
  for (std::size_t l = 0; l < g.size(); ++l) g[l] = gbar_PS(l);
  return g;
}

std::vector<double> LinkSet::primary_gains_to_destination() const {
  std::vector<double> g(primaries());
  for (std::size_t l = 0; l < g.size(); ++l) g[l] = gbar_PD(l);
  return g;
}

void LinkSet::validate() const {
  const std::size_t M = relays();
  const std::size_t L = primaries();
  if (M == 0) throw std::invalid_argument("LinkSet: at least one relay required");
  if (L == 0) throw std::invalid_argument("LinkSet: at least one primary required");
  if (d_RD.size() != M) throw std::invalid_argument("LinkSet: d_RD size differs from d_SR");
  if (d_PS.size() != L || d_PR.size() != L) {
    throw std::invalid_argument("LinkSet: primary distance lists differ in length");
  }
  auto positive = [](double d) { return d > 0.0 && std::isfinite(d); };
  auto all_positive = [&](const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), positive);
  };
  if (!all_positive(d_SR) || !all_positive(d_RD) || !all_positive(d_PS) ||
      !all_positive(d_PD)) {
    throw std::invalid_argument("LinkSet: distances must be positive");
  }
  for (const auto& row : d_PR) {
    if (row.size() != M) throw std::invalid_argument("LinkSet: d_PR row size differs from M");
    if (!all_positive(row)) throw std::invalid_argument("LinkSet: distances must be positive");
  }
  if (!std::isfinite(alpha) || alpha <= 0.0) {
    throw std::invalid_argument("LinkSet: alpha must be positive");
  }
}

LinkSet LinkSet::without_relay(std::size_t j) const {
  if (j >= relays()) throw std::out_of_range("LinkSet::without_relay: bad relay index");
  if (relays() == 1) throw std::invalid_argument("LinkSet::without_relay: last relay");
  LinkSet out = *this;
  out.d_SR.erase(out.d_SR.begin() + static_cast<std::ptrdiff_t>(j));
  out.d_RD.erase(out.d_RD.begin() + static_cast<std::ptrdiff_t>(j));
  for (auto& row : out.d_PR) row.erase(row.begin() + static_cast<std::ptrdiff_t>(j));
  return out;
}

LinkSet LinkSet::ladder(std::size_t M, std::size_t L, double d_SR1, double d_RD1,
                        double d_P_R1, double d_P_D1, double alpha, double primary_step,
                        double relay_step) {
  LinkSet links;
  links.alpha = alpha;
  for (std::size_t i = 0; i < M; ++i) {
    links.d_SR.push_back(d_SR1 + relay_step * static_cast<double>(i));
    links.d_RD.push_back(d_RD1 + relay_step * static_cast<double>(i));
  }
  for (std::size_t l = 0; l < L; ++l) {
    const double shift = primary_step * static_cast<double>(l);
    links.d_PS.push_back(d_P_R1 + shift);
    links.d_PR.emplace_back(M, d_P_R1 + shift);
    links.d_PD.push_back(d_P_D1 + shift);
  }
  links.validate();
  return links;
}

void PrimaryModel::validate() const {
  if (L == 0) throw std::invalid_argument("PrimaryModel: L must be >= 1");
  if (!(p_p > 0.0)) throw std::invalid_argument("PrimaryModel: p_p must be > 0");
  if (!(p_on >= 0.0 && p_on <= 1.0)) {
    throw std::invalid_argument("PrimaryModel: p_on must lie in [0, 1]");
  }
}

double active_count_pmf(std::size_t r, const PrimaryModel& primary) {
  if (r > primary.L) throw std::domain_error("active_count_pmf: r exceeds L");
  const double n = static_cast<double>(primary.L);
  const double k = static_cast<double>(r);
  const double log_binom = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
  const double p = primary.p_on;
  // pow handles the 0^0 corner cases.
  return std::exp(log_binom) * std::pow(p, k) * std::pow(1.0 - p, n - k);
}

ActivitySum::ActivitySum(std::span<const double> means, double p_on) {
  const std::size_t L = means.size();
  if (L == 0) throw std::domain_error("ActivitySum: no nodes");
  check_subset_size(L, "ActivitySum");
  check_positive_means(means, "ActivitySum");
  if (!(p_on >= 0.0 && p_on <= 1.0)) throw std::domain_error("ActivitySum: p_on outside [0, 1]");

  atom_ = std::pow(1.0 - p_on, static_cast<double>(L));
  if (p_on == 0.0) return;

  if (L >= 2) {
    for (std::size_t a = 0; a < L; ++a) {
      for (std::size_t b = a + 1; b < L; ++b) {
        const double scale = std::max(means[a], means[b]);
        if (std::fabs(means[a] - means[b]) <= kDistinctTol * scale) {
          throw DistinctnessError("ActivitySum: means " + std::to_string(a) + " and " +
                                  std::to_string(b) + " are not distinct");
        }
      }
    }
  }

  std::vector<double> coef(L, 0.0);
  const std::uint32_t full = (std::uint32_t{1} << L) - 1;
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    const int size = std::popcount(mask);
    const double weight = std::pow(p_on, size) * std::pow(1.0 - p_on, static_cast<double>(L) - size);
    if (weight == 0.0) continue;
    for (std::size_t k = 0; k < L; ++k) {
      if (!(mask & (std::uint32_t{1} << k))) continue;
      double a = 1.0;
      for (std::size_t j = 0; j < L; ++j) {
        if (j == k || !(mask & (std::uint32_t{1} << j))) continue;
        a *= means[k] / (means[k] - means[j]);
      }
      coef[k] += weight * a;
    }
  }
  for (std::size_t k = 0; k < L; ++k) terms_.push_back({coef[k], means[k]});
}

double ActivitySum::survival(double x) const {
  if (x < 0.0) return 1.0;
  double s = 0.0;
  for (const auto& t : terms_) s += t.coef * std::exp(-x / t.mean);
  return s;
}

double ActivitySum::cdf(double x) const {
  if (x < 0.0) return 0.0;
  return std::clamp(1.0 - survival(x), 0.0, 1.0);
}

double ActivitySum::pdf(double x) const {
  if (x < 0.0) return 0.0;
  double f = 0.0;
  for (const auto& t : terms_) f += t.coef / t.mean * std::exp(-x / t.mean);
  return f;
}

double ActivitySum::mean() const {
  double m = 0.0;
  for (const auto& t : terms_) m += t.coef * t.mean;
  return m;
}

double ActivitySum::tail_inv_one_plus(double t) const {
  if (t < 0.0) t = 0.0;
  double acc = 0.0;
  for (const auto& term : terms_) {
    acc += term.coef / term.mean * std::exp(-t / term.mean) *
           specfun::gamma_upper_0_scaled((t + 1.0) / term.mean);
  }
  return acc;
}

double ActivitySum::expect_inv_one_plus() const { return atom_ + tail_inv_one_plus(0.0); }

double ActivitySum::head_one_plus(double t) const {
  if (t < 0.0) return 0.0;
  double acc = atom_;
  for (const auto& term : terms_) {
    const double e = std::exp(-t / term.mean);
    acc += term.coef * ((1.0 + term.mean) * (-std::expm1(-t / term.mean)) - t * e);
  }
  return acc;
}

namespace {

std::vector<double> scaled(std::span<const double> means, double scale) {
  std::vector<double> out(means.begin(), means.end());
  for (double& m : out) m *= scale;
  return out;
}

}  // namespace

double hypoexp_pdf(double x, std::span<const double> means, double p_on, double scale) {
  return ActivitySum(scaled(means, scale), p_on).pdf(x);
}

double hypoexp_cdf(double x, std::span<const double> means, double p_on, double scale) {
  return ActivitySum(scaled(means, scale), p_on).cdf(x);
}

double max_exp_expectation(std::span<const double> means) {
  const std::size_t L = means.size();
  if (L == 0) throw std::domain_error("max_exp_expectation: empty list");
  check_subset_size(L, "max_exp_expectation");
  check_positive_means(means, "max_exp_expectation");
  const std::uint32_t full = (std::uint32_t{1} << L) - 1;
  double acc = 0.0;
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    double rate = 0.0;
    for (std::size_t t = 0; t < L; ++t) {
      if (mask & (std::uint32_t{1} << t)) rate += 1.0 / means[t];
    }
    const double sign = (std::popcount(mask) % 2 == 1) ? 1.0 : -1.0;
    acc += sign / rate;
  }
  return acc;
}

double max_exp_pdf(double x, std::span<const double> means) {
  if (means.empty()) throw std::domain_error("max_exp_pdf: empty list");
  check_positive_means(means, "max_exp_pdf");
  if (x < 0.0) return 0.0;
  double f = 0.0;
  for (std::size_t l = 0; l < means.size(); ++l) {
    double prod = std::exp(-x / means[l]) / means[l];
    for (std::size_t j = 0; j < means.size() && prod != 0.0; ++j) {
      if (j != l) prod *= -std::expm1(-x / means[j]);
    }
    f += prod;
  }
  return f;
}

double max_exp_cdf(double x, std::span<const double> means) {
  if (means.empty()) throw std::domain_error("max_exp_cdf: empty list");
  check_positive_means(means, "max_exp_cdf");
  if (x <= 0.0) return 0.0;
  double prod = 1.0;
  for (double m : means) prod *= -std::expm1(-x / m);
  return prod;
}

}  // namespace gcrelay
