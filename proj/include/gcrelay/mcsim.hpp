#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "gcrelay/energy.hpp"
#include "gcrelay/system.hpp"

namespace gcrelay {

/// xoshiro256** (Blackman and Vigna). Seeded from a seed sequence or, for a
/// single integer, through SplitMix64.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed = 1);
  template <class SeedSeq, class = decltype(std::declval<SeedSeq&>().generate(
                               std::declval<std::uint32_t*>(), std::declval<std::uint32_t*>()))>
  explicit Rng(SeedSeq& seq) {
    std::uint32_t w[8];
    seq.generate(w, w + 8);
    for (int k = 0; k < 4; ++k) s_[k] = (std::uint64_t{w[2 * k]} << 32) | w[2 * k + 1];
    if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }

  result_type operator()() {
    const std::uint64_t out = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return out;
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  std::uint64_t s_[4];
};

struct MCEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;

  /// (analytic - mean) / std_error. For a probability estimate the error is
  /// floored at 1/trials so an all-zero or all-one sample cannot give an
  /// infinite score. Any estimate is also floored at 1e-12 relative, the
  /// resolution of the running sums.
  double z_score(double analytic, bool probability = false) const;
};

struct MCOptions {
  std::uint64_t trials = 1000000;
  std::uint64_t seed = 1;
  unsigned workers = 1;
  std::uint64_t chunk = 8192;
};

/// Running sums for one or two per-trial outputs.
struct Moments {
  double n = 0, sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  void add(double x, double y = 0.0) {
    n += 1;
    sx += x;
    sy += y;
    sxx += x * x;
    syy += y * y;
    sxy += x * y;
  }
  void merge(const Moments& o) {
    n += o.n;
    sx += o.sx;
    sy += o.sy;
    sxx += o.sxx;
    syy += o.syy;
    sxy += o.sxy;
  }
};

/// Runs `trial(rng, moments)` opts.trials times. Trials are grouped in
/// chunks; chunk k draws from an engine seeded with (seed, k) and chunk sums
/// are merged in chunk order, so the result does not depend on `workers`.
Moments run_trials(const MCOptions& opts, const std::function<void(Rng&, Moments&)>& trial);

MCEstimate mean_estimate(const Moments& m, const MCOptions& opts);
/// Ratio of means sum x / sum y with a delta-method standard error.
MCEstimate ratio_estimate(const Moments& m, const MCOptions& opts);

// ---- samplers -------------------------------------------------------------

double draw_exp(Rng& rng, double mean);
/// sum_l theta_l X_l with theta_l ~ Bernoulli(p_on), X_l ~ Exp(means[l]).
double draw_activity_sum(Rng& rng, std::span<const double> means, double p_on);
double draw_max_exp(Rng& rng, std::span<const double> means);

/// |h|^2 and |h_hat|^2 for unit-variance h and h_hat = rho h + sqrt(1-rho^2) w.
std::pair<double, double> draw_outdated_pair(Rng& rng, double rho);

// ---- system-level estimators ---------------------------------------------

/// How primary activity is drawn during sensing.
enum class ActivityMode {
  per_observation,  // fresh theta for every sample and every path
  per_frame,        // theta fixed across the whole sensing window
};

/// Pr[some observation among U samples and M + 1 paths reaches lambda].
MCEstimate mc_detection(const SystemConfig& sys, std::uint64_t U, const MCOptions& opts,
                        ActivityMode mode = ActivityMode::per_observation);

/// Pr[reporting e2e SNR through relay i <= x].
MCEstimate mc_report_e2e_cdf(const SystemConfig& sys, std::size_t i, double x,
                             const MCOptions& opts);

/// Pr[transmission e2e SNR <= gamma_th] with selection on outdated CSI.
MCEstimate mc_outage(const SystemConfig& sys, double P_d, double gamma_th, const MCOptions& opts);

/// Frequency with which relay l is selected.
MCEstimate mc_relay_selection(const SystemConfig& sys, double P_d, std::size_t l,
                              const MCOptions& opts);

/// Mean of 1{detected} eta p_p sum theta gbar |g|^2 at relay i.
MCEstimate mc_harvest(const SystemConfig& sys, std::size_t i, std::uint64_t U,
                      const MCOptions& opts);

/// Branch-by-branch frame energy of relay i at sensing time T_S.
MCEstimate mc_frame_energy(const SystemConfig& sys, std::size_t i, const EnergyModel& model,
                           double T_S, bool harvesting, const MCOptions& opts);

/// Ratio of mean consumed to mean harvested energy at relay i.
MCEstimate mc_ecg(const SystemConfig& sys, std::size_t i, const EnergyModel& model, double T_S,
                  const MCOptions& opts);

/// Mean of the piecewise modified gain: 1/U below threshold T, 1/(gamma+1) above.
MCEstimate mc_modified_gain(std::span<const double> means, double p_on, double U, double T,
                            const MCOptions& opts);

}  // namespace gcrelay
