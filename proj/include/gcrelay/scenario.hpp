#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gcrelay/energy.hpp"
#include "gcrelay/system.hpp"

namespace gcrelay {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A power written with its unit: watts, dBm, or dB relative to N0.
struct Quantity {
  enum class Unit { watt, dBm, dB };
  double value = 0.0;
  Unit unit = Unit::watt;

  /// Accepts "0.1 W", "20 dBm", "7 dB" or a bare number (watts).
  static Quantity parse(const std::string& text);
  double watts(double N0) const;
  /// Value divided by N0.
  double normalised(double N0) const { return watts(N0) / N0; }
  std::string str() const;
};

struct Sweep {
  double from = 0.0;
  double to = 0.0;
  double step = 1.0;
  std::vector<double> points() const;
};

/// Every knob of an experiment. Distances are in units of the 1 km
/// reference; times in seconds; rates in bit/s.
struct Scenario {
  std::string name = "default";

  std::size_t M = 1;
  std::size_t L = 1;
  double alpha = 4.0;
  double p_on = 0.5;
  bool iid = false;
  double d_SR = 0.1;
  double d_RD = 0.1;
  double d_PS = 0.4;
  double d_PR = 0.4;
  double d_PD = 0.4;
  double primary_step = 0.01;
  double relay_step = 0.005;

  double N0_dBm = -131.0;
  Quantity P_max{10.0, Quantity::Unit::dB};
  Quantity Q{2.0, Quantity::Unit::dB};
  Quantity p_p{10.0, Quantity::Unit::dB};
  Quantity lambda{30.0, Quantity::Unit::dB};
  Quantity gamma_th{3.0, Quantity::Unit::dB};
  Quantity P_Tx{10.0, Quantity::Unit::dBm};
  Quantity P_Rx{9.0, Quantity::Unit::dBm};
  double eta = 0.35;
  double W = 1e6;

  std::optional<double> rho;
  double f_doppler = 0.0;
  double T_diff = 0.0;
  double carrier = 2.5e9;

  FrameTiming timing{0.1, 1e-3, 20e-3};
  std::uint64_t U = 200;

  double rate = 1e5;
  double D_star = 0.0;
  std::size_t relay = 0;  // zero-based; the config file is one-based

  Sweep sweep{0.1, 1.5, 0.1};
  std::vector<std::size_t> series_L{1, 2, 3, 4};
  std::vector<std::size_t> series_M{1};
  std::vector<Quantity> series_lambda;
  std::vector<double> series_rho{0.9};

  std::uint64_t trials = 1000000;
  std::uint64_t seed = 1;
  unsigned workers = 1;

  double N0() const;
  double rho_value() const;

  LinkSet links(std::size_t M, std::size_t L) const;
  SystemConfig system() const { return system(M, L); }
  SystemConfig system(std::size_t M, std::size_t L) const;

  /// Sets `section.key` from text. Unknown keys raise ConfigError listing
  /// every valid key.
  void set(const std::string& key, const std::string& value);
  std::string get(const std::string& key) const;
  /// Applies an INI file whose [section] key = value pairs map to set().
  void load_file(const std::string& path);
  /// "section.key = value" lines for every key.
  std::string dump() const;
};

struct KeyInfo {
  std::string key;
  std::string help;
};

const std::vector<KeyInfo>& scenario_keys();

/// Caption defaults of a named experiment: default, fig3, fig4, fig6, fig7,
/// fig8, table1.
Scenario default_scenario(const std::string& name);
const std::vector<std::string>& scenario_names();

}  // namespace gcrelay
