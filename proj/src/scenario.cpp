#include "gcrelay/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace gcrelay {

namespace {

std::string trim(std::string s) {
  auto blank = [](unsigned char c) { return std::isspace(c) != 0; };
  s.erase(s.begin(), std::find_if_not(s.begin(), s.end(), blank));
  s.erase(std::find_if_not(s.rbegin(), s.rend(), blank).base(), s.end());
  return s;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

// number followed by an optional unit; returns the unit in lower case
std::pair<double, std::string> split_number(const std::string& text) {
  const std::string t = trim(text);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &used);
  } catch (const std::exception&) {
    throw ConfigError("not a number: '" + text + "'");
  }
  return {v, lower(trim(t.substr(used)))};
}

double parse_real(const std::string& text) {
  const auto [v, unit] = split_number(text);
  if (!unit.empty()) throw ConfigError("unexpected unit '" + unit + "' in '" + text + "'");
  return v;
}

double parse_time(const std::string& text) {
  const auto [v, unit] = split_number(text);
  if (unit.empty() || unit == "s") return v;
  if (unit == "ms") return v * 1e-3;
  if (unit == "us") return v * 1e-6;
  throw ConfigError("unknown time unit '" + unit + "' (use s, ms or us)");
}

double parse_rate(const std::string& text) {
  const auto [v, unit] = split_number(text);
  if (unit.empty() || unit == "bps") return v;
  if (unit == "kbps") return v * 1e3;
  if (unit == "mbps") return v * 1e6;
  throw ConfigError("unknown rate unit '" + unit + "' (use bps, kbps or Mbps)");
}

double parse_freq(const std::string& text) {
  const auto [v, unit] = split_number(text);
  if (unit.empty() || unit == "hz") return v;
  if (unit == "khz") return v * 1e3;
  if (unit == "mhz") return v * 1e6;
  if (unit == "ghz") return v * 1e9;
  throw ConfigError("unknown frequency unit '" + unit + "'");
}

std::uint64_t parse_count(const std::string& text) {
  const double v = parse_real(text);
  if (v < 0.0 || v != std::floor(v)) throw ConfigError("expected a nonnegative integer: '" + text + "'");
  return static_cast<std::uint64_t>(v);
}

bool parse_bool(const std::string& text) {
  const std::string t = lower(trim(text));
  if (t == "1" || t == "true" || t == "yes" || t == "on") return true;
  if (t == "0" || t == "false" || t == "no" || t == "off") return false;
  throw ConfigError("expected a boolean: '" + text + "'");
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  if (out.empty()) throw ConfigError("empty list");
  return out;
}

template <class T, class F>
std::vector<T> parse_list(const std::string& text, F parse) {
  std::vector<T> out;
  for (const auto& s : split_list(text)) out.push_back(static_cast<T>(parse(s)));
  return out;
}

template <class T, class F>
std::string join(const std::vector<T>& v, F show) {
  std::string out;
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (k) out += ", ";
    out += show(v[k]);
  }
  return out;
}

struct Binding {
  KeyInfo info;
  std::function<void(Scenario&, const std::string&)> set;
  std::function<std::string(const Scenario&)> get;
};

#define REAL(k, field, help)                                                           \
  Binding {                                                                            \
    {k, help}, [](Scenario& s, const std::string& v) { s.field = parse_real(v); },     \
        [](const Scenario& s) { return fmt(s.field); }                                 \
  }
#define POWER(k, field, help)                                                          \
  Binding {                                                                            \
    {k, help}, [](Scenario& s, const std::string& v) { s.field = Quantity::parse(v); }, \
        [](const Scenario& s) { return s.field.str(); }                                \
  }
#define TIME(k, field, help)                                                           \
  Binding {                                                                            \
    {k, help}, [](Scenario& s, const std::string& v) { s.field = parse_time(v); },     \
        [](const Scenario& s) { return fmt(s.field) + " s"; }                          \
  }

const std::vector<Binding>& bindings() {
  static const std::vector<Binding> table = {
      {{"network.M", "number of relays"},
       [](Scenario& s, const std::string& v) { s.M = parse_count(v); },
       [](const Scenario& s) { return std::to_string(s.M); }},
      {{"network.L", "number of primary nodes"},
       [](Scenario& s, const std::string& v) { s.L = parse_count(v); },
       [](const Scenario& s) { return std::to_string(s.L); }},
      REAL("network.alpha", alpha, "path-loss exponent"),
      REAL("network.p_on", p_on, "probability that a primary node is active"),
      {{"network.iid", "identical relay links (true) or the distance ladder (false)"},
       [](Scenario& s, const std::string& v) { s.iid = parse_bool(v); },
       [](const Scenario& s) { return std::string(s.iid ? "true" : "false"); }},
      REAL("network.d_SR", d_SR, "source to first relay distance"),
      REAL("network.d_RD", d_RD, "first relay to destination distance"),
      {{"network.d_P", "sets d_PS, d_PR and d_PD together"},
       [](Scenario& s, const std::string& v) { s.d_PS = s.d_PR = s.d_PD = parse_real(v); },
       [](const Scenario& s) { return fmt(s.d_PR); }},
      REAL("network.d_PS", d_PS, "first primary to source distance"),
      REAL("network.d_PR", d_PR, "first primary to every relay distance"),
      REAL("network.d_PD", d_PD, "first primary to destination distance"),
      REAL("network.primary_step", primary_step, "distance increment per primary node"),
      REAL("network.relay_step", relay_step, "distance increment per relay (ignored when iid)"),
      {{"power.N0", "noise power in dBm"},
       [](Scenario& s, const std::string& v) {
         const auto [x, unit] = split_number(v);
         if (!unit.empty() && unit != "dbm") throw ConfigError("power.N0 must be given in dBm");
         s.N0_dBm = x;
       },
       [](const Scenario& s) { return fmt(s.N0_dBm) + " dBm"; }},
      POWER("power.P_max", P_max, "maximum secondary output power"),
      POWER("power.Q", Q, "interference threshold at the primary nodes"),
      POWER("power.p_p", p_p, "primary transmit power"),
      POWER("power.lambda", lambda, "detection threshold"),
      POWER("power.gamma_th", gamma_th, "outage threshold"),
      POWER("power.P_Tx", P_Tx, "transmit circuit power"),
      POWER("power.P_Rx", P_Rx, "receive circuit power"),
      REAL("power.eta", eta, "RF-to-DC efficiency"),
      {{"power.W", "bandwidth"},
       [](Scenario& s, const std::string& v) { s.W = parse_freq(v); },
       [](const Scenario& s) { return fmt(s.W) + " Hz"; }},
      {{"csi.rho", "correlation of the outdated estimate, or auto for the Doppler model"},
       [](Scenario& s, const std::string& v) {
         if (v == "auto") {
           s.rho.reset();
         } else {
           s.rho = parse_real(v);
         }
       },
       [](const Scenario& s) { return s.rho ? fmt(*s.rho) : std::string("auto"); }},
      {{"csi.f_doppler", "maximum Doppler frequency"},
       [](Scenario& s, const std::string& v) { s.f_doppler = parse_freq(v); },
       [](const Scenario& s) { return fmt(s.f_doppler) + " Hz"; }},
      TIME("csi.T_diff", T_diff, "age of the channel estimate"),
      {{"csi.carrier", "carrier frequency (informational)"},
       [](Scenario& s, const std::string& v) { s.carrier = parse_freq(v); },
       [](const Scenario& s) { return fmt(s.carrier) + " Hz"; }},
      TIME("timing.T_total", timing.T_total, "frame duration"),
      TIME("timing.T_R", timing.T_R, "reporting duration"),
      TIME("timing.T_S", timing.T_S, "sensing duration"),
      {{"timing.U", "sensing samples for the detection experiments"},
       [](Scenario& s, const std::string& v) { s.U = parse_count(v); },
       [](const Scenario& s) { return std::to_string(s.U); }},
      {{"opt.rate", "transmission rate"},
       [](Scenario& s, const std::string& v) { s.rate = parse_rate(v); },
       [](const Scenario& s) { return fmt(s.rate) + " bps"; }},
      REAL("opt.D_star", D_star, "target data volume in bits"),
      {{"opt.relay", "relay whose energy is evaluated (1-based)"},
       [](Scenario& s, const std::string& v) {
         const auto r = parse_count(v);
         if (r == 0) throw ConfigError("opt.relay is 1-based");
         s.relay = r - 1;
       },
       [](const Scenario& s) { return std::to_string(s.relay + 1); }},
      REAL("sweep.from", sweep.from, "first sweep value"),
      REAL("sweep.to", sweep.to, "last sweep value"),
      REAL("sweep.step", sweep.step, "sweep increment"),
      {{"series.L", "comma-separated primary counts"},
       [](Scenario& s, const std::string& v) { s.series_L = parse_list<std::size_t>(v, parse_count); },
       [](const Scenario& s) { return join(s.series_L, [](std::size_t x) { return std::to_string(x); }); }},
      {{"series.M", "comma-separated relay counts"},
       [](Scenario& s, const std::string& v) { s.series_M = parse_list<std::size_t>(v, parse_count); },
       [](const Scenario& s) { return join(s.series_M, [](std::size_t x) { return std::to_string(x); }); }},
      {{"series.lambda", "comma-separated detection thresholds; empty uses power.lambda"},
       [](Scenario& s, const std::string& v) {
         s.series_lambda.clear();
         if (trim(v).empty()) return;
         for (const auto& item : split_list(v)) s.series_lambda.push_back(Quantity::parse(item));
       },
       [](const Scenario& s) { return join(s.series_lambda, [](const Quantity& q) { return q.str(); }); }},
      {{"series.rho", "comma-separated correlation coefficients"},
       [](Scenario& s, const std::string& v) { s.series_rho = parse_list<double>(v, parse_real); },
       [](const Scenario& s) { return join(s.series_rho, [](double x) { return fmt(x); }); }},
      {{"mc.trials", "Monte Carlo trials per point"},
       [](Scenario& s, const std::string& v) { s.trials = parse_count(v); },
       [](const Scenario& s) { return std::to_string(s.trials); }},
      {{"mc.seed", "Monte Carlo seed"},
       [](Scenario& s, const std::string& v) { s.seed = parse_count(v); },
       [](const Scenario& s) { return std::to_string(s.seed); }},
      {{"mc.workers", "worker threads"},
       [](Scenario& s, const std::string& v) { s.workers = static_cast<unsigned>(parse_count(v)); },
       [](const Scenario& s) { return std::to_string(s.workers); }},
  };
  return table;
}

#undef REAL
#undef POWER
#undef TIME

const Binding& find_binding(const std::string& key) {
  for (const auto& b : bindings()) {
    if (b.info.key == key) return b;
  }
  std::string msg = "unknown key '" + key + "'; valid keys:";
  for (const auto& b : bindings()) msg += "\n  " + b.info.key;
  throw ConfigError(msg);
}

}  // namespace

Quantity Quantity::parse(const std::string& text) {
  const auto [v, unit] = split_number(text);
  if (unit.empty()) throw ConfigError("power '" + text + "' needs a unit (W, mW, dBm or dB)");
  if (unit == "w") return {v, Unit::watt};
  if (unit == "mw") return {v * 1e-3, Unit::watt};
  if (unit == "dbm") return {v, Unit::dBm};
  if (unit == "db") return {v, Unit::dB};
  throw ConfigError("unknown power unit '" + unit + "' (use W, mW, dBm or dB)");
}

double Quantity::watts(double N0) const {
  switch (unit) {
    case Unit::watt:
      return value;
    case Unit::dBm:
      return 1e-3 * std::pow(10.0, value / 10.0);
    case Unit::dB:
      return N0 * std::pow(10.0, value / 10.0);
  }
  return value;
}

std::string Quantity::str() const {
  switch (unit) {
    case Unit::watt:
      return fmt(value) + " W";
    case Unit::dBm:
      return fmt(value) + " dBm";
    case Unit::dB:
      return fmt(value) + " dB";
  }
  return fmt(value);
}

std::vector<double> Sweep::points() const {
  if (!(step > 0.0)) throw ConfigError("sweep.step must be > 0");
  if (to < from) throw ConfigError("sweep range is empty");
  const auto n = static_cast<std::size_t>(std::floor((to - from) / step + 1e-9)) + 1;
  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = from + step * static_cast<double>(k);
  return out;
}

double Scenario::N0() const { return 1e-3 * std::pow(10.0, N0_dBm / 10.0); }

double Scenario::rho_value() const {
  if (rho) return *rho;
  if (f_doppler > 0.0) return rho_from_doppler(f_doppler, T_diff);
  return 1.0;
}

LinkSet Scenario::links(std::size_t m, std::size_t l) const {
  LinkSet out = LinkSet::ladder(m, l, d_SR, d_RD, d_PR, d_PD, alpha, primary_step,
                                iid ? 0.0 : relay_step);
  for (std::size_t k = 0; k < l; ++k) out.d_PS[k] = d_PS + primary_step * static_cast<double>(k);
  out.validate();
  return out;
}

SystemConfig Scenario::system(std::size_t m, std::size_t l) const {
  const double n0 = N0();
  SystemConfig sys;
  sys.links = links(m, l);
  sys.primary = PrimaryModel{l, p_p.watts(n0), p_on};
  sys.policy.M = m;
  sys.policy.P_max = P_max.watts(n0);
  sys.policy.Q = Q.watts(n0);
  sys.policy.N0 = n0;
  sys.policy.W = W;
  sys.policy.lambda = lambda.normalised(n0);
  sys.policy.eta = eta;
  sys.policy.P_Tx = P_Tx.watts(n0);
  sys.policy.P_Rx = P_Rx.watts(n0);
  sys.csi = CsiModel{rho_value()};
  sys.iid = iid;
  sys.validate();
  return sys;
}

void Scenario::set(const std::string& key, const std::string& value) {
  find_binding(trim(key)).set(*this, value);
}

std::string Scenario::get(const std::string& key) const { return find_binding(trim(key)).get(*this); }

void Scenario::load_file(const std::string& path) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(path, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(std::string("cannot read config: ") + e.what());
  }
  for (const auto& [section, body] : tree) {
    if (body.empty()) {
      if (section == "name") {
        name = body.data();
        continue;
      }
      throw ConfigError("key '" + section + "' must live inside a [section]");
    }
    for (const auto& [key, value] : body) set(section + "." + key, value.data());
  }
}

std::string Scenario::dump() const {
  std::string out;
  for (const auto& b : bindings()) out += b.info.key + " = " + b.get(*this) + "\n";
  return out;
}

const std::vector<KeyInfo>& scenario_keys() {
  static const std::vector<KeyInfo> keys = [] {
    std::vector<KeyInfo> k;
    for (const auto& b : bindings()) k.push_back(b.info);
    return k;
  }();
  return keys;
}

const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names = {"default", "fig3", "fig4", "fig6",
                                                 "fig7",    "fig8", "table1"};
  return names;
}

Scenario default_scenario(const std::string& name) {
  using U = Quantity::Unit;
  Scenario s;
  s.name = name;
  if (name == "default" || name == "fig3") {
    s.M = 1;
    s.L = 3;
    s.U = 200;
    s.d_RD = 0.1;
    s.d_SR = 0.1;
    s.d_PS = s.d_PR = s.d_PD = 0.4;
    s.Q = {2.0, U::dB};
    s.P_max = {10.0, U::dB};
    s.p_p = {10.0, U::dB};
    s.lambda = {30.0, U::dB};
    s.series_lambda = {{30.0, U::dB}, {32.0, U::dB}};
    s.series_L = {1, 2, 3, 4};
    s.sweep = {0.1, 1.5, 0.1};
    return s;
  }
  if (name == "fig4") {
    s.L = 2;
    s.M = 1;
    s.iid = true;
    s.U = 200;
    s.d_SR = s.d_RD = 0.1;
    s.d_PS = s.d_PR = 0.3;
    s.d_PD = 0.4;
    s.lambda = {3.0, U::dB};
    s.gamma_th = {3.0, U::dB};
    s.Q = {6.0, U::dB};
    s.p_p = {30.0, U::dB};
    s.P_max = {-20.0, U::dB};
    s.series_M = {1, 2, 4};
    s.series_rho = {0.1, 0.9};
    s.sweep = {-40.0, 0.0, 5.0};
    return s;
  }
  if (name == "fig6" || name == "fig7" || name == "fig8") {
    s.M = 4;
    s.L = 1;
    s.iid = true;
    s.d_SR = s.d_RD = 0.1;
    s.d_PS = s.d_PR = s.d_PD = 0.4;
    s.P_max = {20.0, U::dBm};
    s.p_p = {20.0, U::dBm};
    s.lambda = {17.0, U::dBm};
    s.Q = {17.0, U::dBm};
    s.P_Tx = {10.0, U::dBm};
    s.P_Rx = {9.0, U::dBm};
    s.timing = {0.1, 1e-3, 20e-3};
    s.series_L = {1, 2, 3, 4};
    s.sweep = {0.1, 1.5, 0.1};
    if (name == "fig7" || name == "fig8") s.sweep = {1e-3, 97e-3, 4e-3};
    if (name == "fig6" || name == "fig7") s.L = 2;
    if (name == "fig8") {
      s.M = 1;
      s.d_SR = s.d_RD = 0.2;
      s.d_PS = s.d_PR = s.d_PD = 0.5;
    }
    return s;
  }
  if (name == "table1") {
    s.M = 1;
    s.L = 1;
    s.iid = false;
    s.d_SR = s.d_RD = 0.5;
    s.d_PS = s.d_PR = s.d_PD = 1.0;
    s.lambda = {7.0, U::dB};
    s.Q = {7.0, U::dB};
    s.P_max = {30.0, U::dB};
    s.p_p = {30.0, U::dB};
    s.P_Tx = {10.0, U::dBm};
    s.P_Rx = {9.0, U::dBm};
    s.timing = {0.101, 1e-3, 20e-3};
    s.rate = 1e5;
    s.D_star = 0.0;
    s.series_M = {1, 2, 3, 4};
    s.series_L = {1, 2, 3, 4};
    return s;
  }
  std::string msg = "unknown scenario '" + name + "'; valid names:";
  for (const auto& n : scenario_names()) msg += " " + n;
  throw ConfigError(msg);
}

}  // namespace gcrelay
