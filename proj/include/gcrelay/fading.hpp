#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace gcrelay {

/// Raised when a partial-fraction family receives means that are not
/// pairwise distinct (relative separation below 1e-9).
class DistinctnessError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Mean channel gain of a link, d^{-alpha}.
double mean_gain(double distance, double alpha);

/// Geometry of the secondary network and its primary neighbours.
///
/// Relay index i runs over [0, M), primary index l over [0, L). Distances are
/// normalised to the 1 km reference.
struct LinkSet {
  std::vector<double> d_SR;                 // source -> relay i
  std::vector<double> d_RD;                 // relay i -> destination
  std::vector<double> d_PS;                 // primary l -> source
  std::vector<std::vector<double>> d_PR;    // [l][i] primary l -> relay i
  std::vector<double> d_PD;                 // primary l -> destination
  double alpha = 4.0;

  std::size_t relays() const { return d_SR.size(); }
  std::size_t primaries() const { return d_PD.size(); }

  double gbar_SR(std::size_t i) const { return mean_gain(d_SR.at(i), alpha); }
  double gbar_RD(std::size_t i) const { return mean_gain(d_RD.at(i), alpha); }
  double gbar_PS(std::size_t l) const { return mean_gain(d_PS.at(l), alpha); }
  double gbar_PR(std::size_t l, std::size_t i) const {
    return mean_gain(d_PR.at(l).at(i), alpha);
  }
  double gbar_PD(std::size_t l) const { return mean_gain(d_PD.at(l), alpha); }

  /// Mean gains from every primary to relay i (or to the source / destination).
  std::vector<double> primary_gains_to_relay(std::size_t i) const;
  std::vector<double> primary_gains_to_source() const;
  std::vector<double> primary_gains_to_destination() const;

  /// Throws std::invalid_argument on shape mismatch or non-positive distance.
  void validate() const;

  /// True when alpha lies outside the free-space to dense-urban range [2, 6].
  bool alpha_out_of_range() const { return alpha < 2.0 || alpha > 6.0; }

  /// Copy with relay j removed from the selection set.
  LinkSet without_relay(std::size_t j) const;

  /// Ladder geometry: primary distances grow by `primary_step` per node and
  /// relay hop distances by `relay_step` per relay. Primary-to-source and
  /// primary-to-relay distances share the ladder rooted at d_P_R.
  static LinkSet ladder(std::size_t M, std::size_t L, double d_SR1, double d_RD1,
                        double d_P_R1, double d_P_D1, double alpha,
                        double primary_step = 0.01, double relay_step = 0.005);
};

/// Bernoulli-active primary transmitters with a common power.
struct PrimaryModel {
  std::size_t L = 1;
  double p_p = 1.0;   // W
  double p_on = 0.5;  // Pr[theta_j = 1]

  void validate() const;
};

/// Probability that exactly r of the L primaries are active (binomial).
double active_count_pmf(std::size_t r, const PrimaryModel& primary);

/// Sum of independent exponentials, each switched on independently with
/// probability p_on.
///
/// The law is an atom at zero of mass (1 - p_on)^L plus a continuous part
/// whose survival function is a linear combination of exponentials,
/// sum_k c_k exp(-x / m_k). The coefficients average the hypoexponential
/// partial-fraction weights over every active subset of each size r, with
/// the binomial count probability f_r spread evenly over the subsets.
class ActivitySum {
 public:
  struct Term {
    double coef;
    double mean;
  };

  /// Throws DistinctnessError when two means of a subset that can occur
  /// are closer than a relative 1e-9, std::domain_error for more than 20
  /// nodes or non-positive means.
  ActivitySum(std::span<const double> means, double p_on);

  double atom() const { return atom_; }
  const std::vector<Term>& terms() const { return terms_; }

  double cdf(double x) const;       // includes the atom; 0 for x < 0
  double survival(double x) const;  // 1 - cdf
  double pdf(double x) const;       // density of the continuous part
  double mean() const;

  /// E[1 / (X + 1)], atom included.
  double expect_inv_one_plus() const;

  /// Integral over (t, inf) of pdf(x) / (x + 1).
  double tail_inv_one_plus(double t) const;

  /// Integral over [0, t] of (x + 1) pdf(x), atom included.
  double head_one_plus(double t) const;

 private:
  std::vector<Term> terms_;
  double atom_ = 1.0;
};

/// Density of the activity-weighted sum of exponentials with the given
/// per-node means (before scaling) multiplied by `scale`.
double hypoexp_pdf(double x, std::span<const double> means, double p_on, double scale = 1.0);
double hypoexp_cdf(double x, std::span<const double> means, double p_on, double scale = 1.0);

/// E[max of independent exponentials] by inclusion-exclusion over the
/// nonempty subsets. Accepts up to 20 means.
double max_exp_expectation(std::span<const double> means);

/// Density and CDF of the maximum, d/dx prod_l (1 - exp(-x/m_l)).
double max_exp_pdf(double x, std::span<const double> means);
double max_exp_cdf(double x, std::span<const double> means);

}  // namespace gcrelay
