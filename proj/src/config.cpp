#include "covent/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>

namespace covent {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(const std::string& key, const std::string& text) {
  double value = 0.0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end) {
    throw ValidationError("config: " + key + " = '" + text + "' is not a number");
  }
  return value;
}

long long parse_integer(const std::string& key, const std::string& text) {
  long long value = 0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end) {
    throw ValidationError("config: " + key + " = '" + text + "' is not an integer");
  }
  return value;
}

int parse_int(const std::string& key, const std::string& text) {
  const long long value = parse_integer(key, text);
  if (value < -1000000000LL || value > 1000000000LL) {
    throw ValidationError("config: " + key + " out of range");
  }
  return static_cast<int>(value);
}

Vec3 parse_vector(const std::string& key, const std::string& text) {
  Vec3 out{};
  std::istringstream in(text);
  std::string part;
  std::size_t i = 0;
  while (std::getline(in, part, ',')) {
    if (i == 3) break;
    out[i++] = parse_double(key, trim(part));
  }
  if (i != 3 || in.rdbuf()->in_avail() > 0) {
    throw ValidationError("config: " + key + " needs three comma-separated components");
  }
  return out;
}

using Setter = std::function<void(RunConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"omega_a", [](RunConfig& c, auto& k, auto& v) { c.params.omega_a = parse_double(k, v); }},
      {"omega_b", [](RunConfig& c, auto& k, auto& v) { c.params.omega_b = parse_double(k, v); }},
      // omega_b = omega_a + delta_e, handled in set_config_value.
      {"delta_e", [](RunConfig&, auto&, auto&) {}},
      {"separation_l",
       [](RunConfig& c, auto& k, auto& v) { c.params.separation_l = parse_double(k, v); }},
      {"dipole_d",
       [](RunConfig& c, auto& k, auto& v) {
         c.params.dipole_d = parse_double(k, v);
         c.params.mass_m.reset();
       }},
      {"mass_m",
       [](RunConfig& c, auto& k, auto& v) {
         c.params.mass_m = parse_double(k, v);
         c.params.dipole_d.reset();
       }},
      {"charge_q", [](RunConfig& c, auto& k, auto& v) { c.params.charge_q = parse_double(k, v); }},
      {"eta", [](RunConfig& c, auto& k, auto& v) { c.params.eta = parse_double(k, v); }},
      {"radial_nodes",
       [](RunConfig& c, auto& k, auto& v) { c.quadrature.radial_nodes = parse_int(k, v); }},
      {"angular_nodes",
       [](RunConfig& c, auto& k, auto& v) { c.quadrature.angular_nodes = parse_int(k, v); }},
      {"kmax_over_invd",
       [](RunConfig& c, auto& k, auto& v) { c.quadrature.kmax_over_invd = parse_double(k, v); }},
      {"pole_window",
       [](RunConfig& c, auto& k, auto& v) { c.quadrature.pole_window = parse_double(k, v); }},
      {"rel_tol", [](RunConfig& c, auto& k, auto& v) { c.quadrature.rel_tol = parse_double(k, v); }},
      {"oracle_k_longitudinal",
       [](RunConfig& c, auto& k, auto& v) { c.oracle.k_longitudinal = parse_vector(k, v); }},
      {"oracle_k_scalar",
       [](RunConfig& c, auto& k, auto& v) { c.oracle.k_scalar = parse_vector(k, v); }},
      {"oracle_weight", [](RunConfig& c, auto& k, auto& v) { c.oracle.weight = parse_double(k, v); }},
      {"n_max", [](RunConfig& c, auto& k, auto& v) { c.oracle.truncation.n_max = parse_int(k, v); }},
      {"p_max", [](RunConfig& c, auto& k, auto& v) { c.oracle.truncation.p_max = parse_int(k, v); }},
      {"max_total_photons",
       [](RunConfig& c, auto& k, auto& v) {
         c.oracle.truncation.max_total_photons = parse_int(k, v);
       }},
      {"seed",
       [](RunConfig& c, auto& k, auto& v) {
         const long long s = parse_integer(k, v);
         if (s < 0) throw ValidationError("config: seed must be non-negative");
         c.seed = static_cast<std::uint64_t>(s);
       }},
      {"per_k_samples", [](RunConfig& c, auto& k, auto& v) { c.per_k_samples = parse_int(k, v); }},
      {"tol_coulomb",
       [](RunConfig& c, auto& k, auto& v) {
         c.tolerances.coulomb_closed_form = parse_double(k, v);
       }},
      {"tol_c0", [](RunConfig& c, auto& k, auto& v) { c.tolerances.c0 = parse_double(k, v); }},
      {"tol_c1", [](RunConfig& c, auto& k, auto& v) { c.tolerances.c1 = parse_double(k, v); }},
      {"tol_c2", [](RunConfig& c, auto& k, auto& v) { c.tolerances.c2 = parse_double(k, v); }},
      {"tol_ratio", [](RunConfig& c, auto& k, auto& v) { c.tolerances.ratio = parse_double(k, v); }},
      {"tol_transformed",
       [](RunConfig& c, auto& k, auto& v) { c.tolerances.transformed = parse_double(k, v); }},
      {"tol_per_k", [](RunConfig& c, auto& k, auto& v) { c.tolerances.per_k = parse_double(k, v); }},
  };
  return table;
}

}  // namespace

void set_config_value(RunConfig& config, const std::string& key, const std::string& value) {
  const auto it = setters().find(key);
  if (it == setters().end()) throw ValidationError("config: unknown key '" + key + "'");
  if (key == "delta_e") {
    config.params.omega_b = config.params.omega_a + parse_double(key, value);
    return;
  }
  it->second(config, key, value);
}

RunConfig parse_config(std::istream& in) {
  RunConfig config;
  std::set<std::string> seen;
  std::string line;
  std::optional<std::string> delta_e;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ValidationError("config line " + std::to_string(line_number) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!seen.insert(key).second) throw ValidationError("config: key '" + key + "' repeated");
    if (key == "delta_e") {
      parse_double(key, value);
      delta_e = value;
      continue;
    }
    set_config_value(config, key, value);
  }
  if (seen.count("dipole_d") && seen.count("mass_m")) {
    throw ValidationError("config: give either dipole_d or mass_m, not both");
  }
  if (delta_e) {
    if (seen.count("omega_b")) throw ValidationError("config: give either omega_b or delta_e");
    set_config_value(config, "delta_e", *delta_e);
  }
  return config;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file '" + path + "'");
  return parse_config(in);
}

}  // namespace covent
