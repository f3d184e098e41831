#include "gcrelay/mcsim.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <thread>

#include <boost/math/special_functions/gamma.hpp>
#include <boost/random/binomial_distribution.hpp>
#include <boost/random/exponential_distribution.hpp>
#include <boost/random/normal_distribution.hpp>

#include "gcrelay/harvest.hpp"

namespace gcrelay {

Rng::Rng(std::uint64_t seed) {
  for (auto& word : s_) {
    seed += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = seed;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    word = z ^ (z >> 31);
  }
}

double MCEstimate::z_score(double analytic, bool probability) const {
  double se = std_error;
  if (probability && trials > 0) se = std::max(se, 1.0 / static_cast<double>(trials));
  // accumulation round-off bounds the resolution of a near-constant estimate
  se = std::max(se, 1e-12 * std::max(std::fabs(mean), std::fabs(analytic)));
  if (se == 0.0) return analytic == mean ? 0.0 : std::copysign(INFINITY, analytic - mean);
  return (analytic - mean) / se;
}

Moments run_trials(const MCOptions& opts, const std::function<void(Rng&, Moments&)>& trial) {
  if (opts.trials == 0) throw std::invalid_argument("run_trials: trials must be >= 1");
  if (opts.chunk == 0) throw std::invalid_argument("run_trials: chunk must be >= 1");
  const std::uint64_t chunks = (opts.trials + opts.chunk - 1) / opts.chunk;
  std::vector<Moments> partial(chunks);

  auto run_chunk = [&](std::uint64_t k) {
    std::seed_seq seq{static_cast<std::uint32_t>(opts.seed), static_cast<std::uint32_t>(opts.seed >> 32),
                      static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k >> 32)};
    Rng rng(seq);
    const std::uint64_t begin = k * opts.chunk;
    const std::uint64_t end = std::min(opts.trials, begin + opts.chunk);
    Moments m;
    for (std::uint64_t t = begin; t < end; ++t) trial(rng, m);
    partial[k] = m;
  };

  const unsigned workers = std::max(1u, std::min<unsigned>(opts.workers, static_cast<unsigned>(chunks)));
  if (workers == 1) {
    for (std::uint64_t k = 0; k < chunks; ++k) run_chunk(k);
  } else {
    std::atomic<std::uint64_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::uint64_t k = next++; k < chunks; k = next++) run_chunk(k);
      });
    }
    for (auto& th : pool) th.join();
  }
  Moments total;
  for (const auto& m : partial) total.merge(m);
  return total;
}

MCEstimate mean_estimate(const Moments& m, const MCOptions& opts) {
  MCEstimate e;
  e.trials = static_cast<std::uint64_t>(m.n);
  e.seed = opts.seed;
  e.mean = m.sx / m.n;
  const double var = m.n > 1 ? std::max(0.0, (m.sxx - m.n * e.mean * e.mean) / (m.n - 1)) : 0.0;
  e.std_error = std::sqrt(var / m.n);
  return e;
}

MCEstimate ratio_estimate(const Moments& m, const MCOptions& opts) {
  MCEstimate e;
  e.trials = static_cast<std::uint64_t>(m.n);
  e.seed = opts.seed;
  const double mx = m.sx / m.n;
  const double my = m.sy / m.n;
  if (my == 0.0) {
    e.mean = INFINITY;
    e.std_error = INFINITY;
    return e;
  }
  const double r = mx / my;
  const double n1 = std::max(1.0, m.n - 1);
  const double vx = (m.sxx - m.n * mx * mx) / n1;
  const double vy = (m.syy - m.n * my * my) / n1;
  const double cxy = (m.sxy - m.n * mx * my) / n1;
  const double var = std::max(0.0, (vx - 2.0 * r * cxy + r * r * vy) / (my * my));
  e.mean = r;
  e.std_error = std::sqrt(var / m.n);
  return e;
}

double draw_exp(Rng& rng, double mean) {
  return mean * boost::random::exponential_distribution<double>(1.0)(rng);
}

namespace {

// theta_l for every node; one engine call per 64 nodes when p_on = 1/2
std::uint64_t draw_activity_mask(Rng& rng, std::size_t n, double p_on) {
  if (n > 64) throw std::domain_error("activity sampler: more than 64 nodes");
  if (p_on == 0.5) return rng();
  std::uint64_t mask = 0;
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (std::size_t l = 0; l < n; ++l) {
    if (uni(rng) < p_on) mask |= std::uint64_t{1} << l;
  }
  return mask;
}

double masked_sum(Rng& rng, std::span<const double> means, std::uint64_t mask) {
  const std::uint64_t live = means.size() >= 64 ? mask : mask & ((std::uint64_t{1} << means.size()) - 1);
  double s = 0.0;
  for (std::uint64_t m = live; m; m &= m - 1) s += draw_exp(rng, means[std::countr_zero(m)]);
  return s;
}

}  // namespace

double draw_activity_sum(Rng& rng, std::span<const double> means, double p_on) {
  return masked_sum(rng, means, draw_activity_mask(rng, means.size(), p_on));
}

double draw_max_exp(Rng& rng, std::span<const double> means) {
  double best = 0.0;
  for (double m : means) best = std::max(best, draw_exp(rng, m));
  return best;
}

std::pair<double, double> draw_outdated_pair(Rng& rng, double rho) {
  boost::random::normal_distribution<double> gauss(0.0, std::sqrt(0.5));
  const double hr = gauss(rng), hi = gauss(rng);
  const double wr = gauss(rng), wi = gauss(rng);
  const double s = std::sqrt(std::max(0.0, 1.0 - rho * rho));
  const double er = rho * hr + s * wr;
  const double ei = rho * hi + s * wi;
  return {hr * hr + hi * hi, er * er + ei * ei};
}

namespace {

// Constants of the sensing stage reused by every sensing-based estimator.
struct SensingSampler {
  std::vector<std::vector<double>> relay_means;  // [i][l] first-hop SNR means
  std::vector<double> direct_means;
  std::vector<double> hop2;                      // [i]
  std::vector<double> U;                         // [i]
  double p_on;
  double lambda;

  explicit SensingSampler(const SystemConfig& sys) {
    const ReportingPhase phase(sys.links, sys.primary, sys.policy);
    const double snr = sys.primary.p_p / sys.policy.N0;
    for (std::size_t i = 0; i < sys.links.relays(); ++i) {
      auto m = sys.links.primary_gains_to_relay(i);
      for (double& v : m) v *= snr;
      relay_means.push_back(std::move(m));
      hop2.push_back(phase.relay(i).hop2_mean);
      U.push_back(phase.relay(i).U);
    }
    direct_means = sys.links.primary_gains_to_destination();
    for (double& v : direct_means) v *= snr;
    p_on = sys.primary.p_on;
    lambda = sys.policy.lambda;
    prepare();
  }

  // reporting-phase e2e SNR through relay i for one activity pattern
  double relay_e2e(Rng& rng, std::size_t i, std::uint64_t mask) const {
    const double g1 = masked_sum(rng, relay_means[i], mask);
    const double g2 = draw_exp(rng, hop2[i]);
    return g1 * g2 / (g2 + U[i]);
  }

  // true when relay i reports at least lambda; the second hop is only drawn
  // when the first hop alone could reach the threshold
  bool relay_hits(Rng& rng, std::size_t i, std::uint64_t mask) const {
    const double g1 = masked_sum(rng, relay_means[i], mask);
    if (g1 < lambda) return false;
    const double g2 = draw_exp(rng, hop2[i]);
    return g1 * g2 / (g2 + U[i]) >= lambda;
  }

  std::uint64_t activity(Rng& rng) const { return draw_activity_mask(rng, direct_means.size(), p_on); }

  // Path 0 is the direct link, path i + 1 relay i.
  std::span<const double> path_means(std::size_t p) const {
    return p == 0 ? std::span<const double>(direct_means) : std::span<const double>(relay_means[p - 1]);
  }

  bool sample_hits(Rng& rng, std::size_t p, std::uint64_t mask) const {
    if (p == 0) return masked_sum(rng, direct_means, mask) >= lambda;
    return relay_hits(rng, p - 1, mask);
  }

  // First-hop sum over the nodes in `nodes` is at most m_max * G with
  // G ~ Gamma(n, 1); only samples with G >= lambda / m_max can hit.
  struct Envelope {
    double shape = 0.0;
    double cut = 0.0;
    double prob = 1.0;
  };

  Envelope envelope(std::size_t p, std::uint64_t nodes) const {
    const auto means = path_means(p);
    Envelope e;
    double m_max = 0.0;
    for (std::size_t l = 0; l < means.size(); ++l) {
      if (nodes & (std::uint64_t{1} << l)) {
        e.shape += 1.0;
        m_max = std::max(m_max, means[l]);
      }
    }
    if (e.shape == 0.0) {
      e.prob = 0.0;
      return e;
    }
    e.cut = lambda / m_max;
    e.prob = boost::math::gamma_q(e.shape, e.cut);
    return e;
  }

  // One sample of the path conditioned on the envelope being exceeded.
  bool conditional_hits(Rng& rng, std::size_t p, std::uint64_t nodes, std::uint64_t mask,
                        const Envelope& e) const {
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    const double u = 1.0 - uni(rng);
    const double g = e.shape == 1.0 ? e.cut - std::log(u)
                                    : boost::math::gamma_q_inv(e.shape, u * e.prob);
    const auto means = path_means(p);
    double split[64];
    double total = 0.0;
    for (std::size_t l = 0; l < means.size(); ++l) {
      split[l] = (nodes & (std::uint64_t{1} << l)) ? draw_exp(rng, 1.0) : 0.0;
      total += split[l];
    }
    double g1 = 0.0;
    for (std::size_t l = 0; l < means.size(); ++l) {
      if (mask & (std::uint64_t{1} << l)) g1 += means[l] * g * split[l] / total;
    }
    if (g1 < lambda) return false;
    if (p == 0) return true;
    const double g2 = draw_exp(rng, hop2[p - 1]);
    return g1 * g2 / (g2 + U[p - 1]) >= lambda;
  }

  // Whether any of `samples` observations on path p reaches lambda.
  bool path_detects(Rng& rng, std::size_t p, std::uint64_t samples, const Envelope& e,
                    std::uint64_t nodes, bool fixed_mask) const {
    if (e.prob > kEnvelopeMax) {
      for (std::uint64_t u = 0; u < samples; ++u) {
        if (sample_hits(rng, p, fixed_mask ? nodes : activity(rng))) return true;
      }
      return false;
    }
    if (e.prob == 0.0) return false;
    boost::random::binomial_distribution<std::int64_t, double> count(
        static_cast<std::int64_t>(samples), e.prob);
    for (std::int64_t k = count(rng); k > 0; --k) {
      if (conditional_hits(rng, p, nodes, fixed_mask ? nodes : activity(rng), e)) return true;
    }
    return false;
  }

  static constexpr double kEnvelopeMax = 0.02;

  bool detect(Rng& rng, std::uint64_t samples, ActivityMode mode) const {
    const std::size_t paths = hop2.size() + 1;
    if (mode == ActivityMode::per_frame) {
      const std::uint64_t mask = activity(rng);
      for (std::size_t p = 0; p < paths; ++p) {
        if (path_detects(rng, p, samples, envelope(p, mask), mask, true)) return true;
      }
      return false;
    }
    for (std::size_t p = 0; p < paths; ++p) {
      if (path_detects(rng, p, samples, all_envelopes[p], all_nodes, false)) return true;
    }
    return false;
  }

  std::uint64_t all_nodes = 0;
  std::vector<Envelope> all_envelopes;

  void prepare() {
    const std::size_t L = direct_means.size();
    all_nodes = L == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << L) - 1;
    for (std::size_t p = 0; p <= hop2.size(); ++p) all_envelopes.push_back(envelope(p, all_nodes));
  }
};

// Selection on outdated estimates during the transmission phase.
struct SelectionSampler {
  TransmissionPhase phase;
  double rho;

  SelectionSampler(const SystemConfig& sys, double P_d)
      : phase(sys.links, sys.primary, sys.policy, sys.csi, P_d, false), rho(sys.csi.rho) {}

  // returns (selected relay, actual second-hop SNR)
  std::pair<std::size_t, double> select(Rng& rng) const {
    std::size_t best = 0;
    double best_hat = -1.0;
    double actual = 0.0;
    for (std::size_t l = 0; l < phase.relays(); ++l) {
      const auto [g, g_hat] = draw_outdated_pair(rng, rho);
      const double b = phase.coeffs(l).b;
      if (b * g_hat > best_hat) {
        best_hat = b * g_hat;
        best = l;
        actual = b * g;
      }
    }
    return {best, actual};
  }
};

double harvest_draw(Rng& rng, const SystemConfig& sys, const std::vector<double>& gbar) {
  const std::uint64_t mask = draw_activity_mask(rng, gbar.size(), sys.primary.p_on);
  double s = 0.0;
  for (std::size_t l = 0; l < gbar.size(); ++l) {
    if (mask & (std::uint64_t{1} << l)) s += gbar[l] * draw_exp(rng, gbar[l]);
  }
  return sys.policy.eta * sys.primary.p_p * s;
}

}  // namespace

MCEstimate mc_detection(const SystemConfig& sys, std::uint64_t U, const MCOptions& opts,
                        ActivityMode mode) {
  sys.validate();
  const SensingSampler s(sys);
  const Moments m = run_trials(opts, [&](Rng& rng, Moments& acc) {
    acc.add(s.detect(rng, U, mode) ? 1.0 : 0.0);
  });
  return mean_estimate(m, opts);
}

MCEstimate mc_report_e2e_cdf(const SystemConfig& sys, std::size_t i, double x,
                             const MCOptions& opts) {
  sys.validate();
  const SensingSampler s(sys);
  if (i >= s.hop2.size()) throw std::out_of_range("mc_report_e2e_cdf: bad relay index");
  const Moments m = run_trials(opts, [&](Rng& rng, Moments& acc) {
    acc.add(s.relay_e2e(rng, i, s.activity(rng)) <= x ? 1.0 : 0.0);
  });
  return mean_estimate(m, opts);
}

MCEstimate mc_outage(const SystemConfig& sys, double P_d, double gamma_th, const MCOptions& opts) {
  sys.validate();
  const SelectionSampler sel(sys, P_d);
  const Moments m = run_trials(opts, [&](Rng& rng, Moments& acc) {
    const auto [l, g2] = sel.select(rng);
    const auto& c = sel.phase.coeffs(l);
    const double g1 = draw_exp(rng, c.a);
    acc.add(g1 * g2 / (g2 + c.U) <= gamma_th ? 1.0 : 0.0);
  });
  return mean_estimate(m, opts);
}

MCEstimate mc_relay_selection(const SystemConfig& sys, double P_d, std::size_t l,
                              const MCOptions& opts) {
  sys.validate();
  const SelectionSampler sel(sys, P_d);
  const Moments m = run_trials(opts, [&](Rng& rng, Moments& acc) {
    acc.add(sel.select(rng).first == l ? 1.0 : 0.0);
  });
  return mean_estimate(m, opts);
}

MCEstimate mc_harvest(const SystemConfig& sys, std::size_t i, std::uint64_t U,
                      const MCOptions& opts) {
  sys.validate();
  const SensingSampler s(sys);
  const auto gbar = sys.links.primary_gains_to_relay(i);
  const Moments m = run_trials(opts, [&](Rng& rng, Moments& acc) {
    const bool detected = s.detect(rng, U, ActivityMode::per_observation);
    acc.add(detected ? harvest_draw(rng, sys, gbar) : 0.0);
  });
  return mean_estimate(m, opts);
}

namespace {

std::uint64_t sample_count(double T_S, double W) {
  const double u = std::round(T_S * W);
  if (u < 1.0) throw std::domain_error("frame simulation: fewer than one sensing sample");
  return static_cast<std::uint64_t>(u);
}

}  // namespace

MCEstimate mc_frame_energy(const SystemConfig& sys, std::size_t i, const EnergyModel& model,
                           double T_S, bool harvesting, const MCOptions& opts) {
  sys.validate();
  model.check_T_S(T_S);
  const SensingSampler s(sys);
  const SelectionSampler sel(sys, model.P_d_nominal);
  const auto gbar = sys.links.primary_gains_to_relay(i);
  const std::uint64_t U = sample_count(T_S, model.W);
  const double T_D = model.T - T_S;
  const double fixed = model.E_S * T_S * T_S * model.W + model.E_R * model.T_R * T_S * model.W;
  const Moments m = run_trials(opts, [&](Rng& rng, Moments& acc) {
    double e = fixed;
    if (s.detect(rng, U, ActivityMode::per_observation)) {
      if (harvesting) e -= harvest_draw(rng, sys, gbar) * T_D;
    } else if (sel.select(rng).first == i) {
      e += model.E_T * T_D;
    }
    acc.add(e);
  });
  return mean_estimate(m, opts);
}

MCEstimate mc_ecg(const SystemConfig& sys, std::size_t i, const EnergyModel& model, double T_S,
                  const MCOptions& opts) {
  sys.validate();
  model.check_T_S(T_S);
  const SensingSampler s(sys);
  const SelectionSampler sel(sys, model.P_d_nominal);
  const auto gbar = sys.links.primary_gains_to_relay(i);
  const std::uint64_t U = sample_count(T_S, model.W);
  const double T_D = model.T - T_S;
  const double fixed = model.E_S * T_S + model.E_R * model.T_R * T_S * model.W;
  const Moments m = run_trials(opts, [&](Rng& rng, Moments& acc) {
    double consumed = fixed;
    double harvested = 0.0;
    if (s.detect(rng, U, ActivityMode::per_observation)) {
      harvested = harvest_draw(rng, sys, gbar) * T_D;
    } else if (sel.select(rng).first == i) {
      consumed += model.E_T * T_D;
    }
    acc.add(consumed, harvested);
  });
  return ratio_estimate(m, opts);
}

MCEstimate mc_modified_gain(std::span<const double> means, double p_on, double U, double T,
                            const MCOptions& opts) {
  const std::vector<double> mv(means.begin(), means.end());
  const Moments m = run_trials(opts, [&](Rng& rng, Moments& acc) {
    const double g = draw_activity_sum(rng, mv, p_on);
    acc.add(g <= T ? 1.0 / U : 1.0 / (g + 1.0));
  });
  return mean_estimate(m, opts);
}

}  // namespace gcrelay
