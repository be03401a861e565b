#include "uukin/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "uukin/error.hpp"

namespace uukin {

std::string to_string(Scenario s) {
  switch (s) {
    case Scenario::UU: return "uu";
    case Scenario::Memory: return "memory";
    case Scenario::Hierarchy: return "hierarchy";
    case Scenario::BoundaryLayer: return "boundary-layer";
    case Scenario::Scales: return "scales";
    case Scenario::Validate: return "validate";
  }
  return "?";
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::string join_issues(const std::vector<ConfigIssue>& issues) {
  std::ostringstream os;
  for (std::size_t i = 0; i < issues.size(); ++i) {
    if (i) os << "\n";
    if (issues[i].line) os << "line " << issues[i].line << ": ";
    os << issues[i].key << ": " << issues[i].reason;
  }
  return os.str();
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// parse helpers return an empty string on success, else the reason
std::string parse_real(const std::string& v, double& out) {
  std::size_t pos = 0;
  try {
    out = std::stod(v, &pos);
  } catch (...) {
    return "expected a real number, got '" + v + "'";
  }
  if (pos != v.size()) return "expected a real number, got '" + v + "'";
  if (!std::isfinite(out)) return "must be finite";
  return "";
}

std::string parse_count(const std::string& v, std::size_t& out) {
  if (v.empty() || v.find_first_not_of("-0123456789") != std::string::npos) {
    return "expected an integer, got '" + v + "'";
  }
  try {
    const long long x = std::stoll(v);
    if (x < 0) return "must be >= 0";
    out = static_cast<std::size_t>(x);
  } catch (...) {
    return "expected an integer, got '" + v + "'";
  }
  return "";
}

std::string parse_int(const std::string& v, long long& out) {
  if (v.empty() || v.find_first_not_of("-0123456789") != std::string::npos) {
    return "expected an integer, got '" + v + "'";
  }
  try {
    out = std::stoll(v);
  } catch (...) {
    return "expected an integer, got '" + v + "'";
  }
  return "";
}

std::string parse_bool(const std::string& v, bool& out) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") {
    out = true;
  } else if (v == "false" || v == "0" || v == "no" || v == "off") {
    out = false;
  } else {
    return "expected true or false, got '" + v + "'";
  }
  return "";
}

struct Key {
  std::function<std::string(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

using Table = std::map<std::string, Key>;

// value constraints: return "" when fine
using Check = std::function<std::string(double)>;
Check positive() {
  return [](double x) { return x > 0.0 ? "" : "must be > 0"; };
}
Check nonneg() {
  return [](double x) { return x >= 0.0 ? "" : "must be >= 0"; };
}
Check negative() {
  return [](double x) { return x < 0.0 ? "" : "must be < 0"; };
}
Check any() {
  return [](double) { return std::string(); };
}

template <class F>
void add_real(Table& t, const std::string& k, F ptr, Check c) {
  t[k] = Key{[ptr, c](RunConfig& cfg, const std::string& v) {
               double x = 0.0;
               auto r = parse_real(v, x);
               if (!r.empty()) return r;
               r = c(x);
               if (!r.empty()) return r;
               ptr(cfg) = x;
               return std::string();
             },
             [ptr](const RunConfig& cfg) { return format_double(ptr(const_cast<RunConfig&>(cfg))); }};
}

template <class F>
void add_count(Table& t, const std::string& k, F ptr, std::size_t min_value) {
  t[k] = Key{[ptr, min_value](RunConfig& cfg, const std::string& v) {
               long long x = 0;
               auto r = parse_int(v, x);
               if (!r.empty()) return r;
               if (x < static_cast<long long>(min_value)) return "must be >= " + std::to_string(min_value);
               ptr(cfg) = static_cast<std::size_t>(x);
               return std::string();
             },
             [ptr](const RunConfig& cfg) { return std::to_string(ptr(const_cast<RunConfig&>(cfg))); }};
}

template <class F>
void add_bool(Table& t, const std::string& k, F ptr) {
  t[k] = Key{[ptr](RunConfig& cfg, const std::string& v) {
               bool x = false;
               auto r = parse_bool(v, x);
               if (!r.empty()) return r;
               ptr(cfg) = x;
               return std::string();
             },
             [ptr](const RunConfig& cfg) { return std::string(ptr(const_cast<RunConfig&>(cfg)) ? "true" : "false"); }};
}

template <class F>
void add_choice(Table& t, const std::string& k, F ptr, std::vector<std::string> allowed) {
  t[k] = Key{[ptr, allowed](RunConfig& cfg, const std::string& v) {
               if (std::find(allowed.begin(), allowed.end(), v) == allowed.end()) {
                 std::string list;
                 for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
                 return "must be one of " + list + " (got '" + v + "')";
               }
               ptr(cfg) = v;
               return std::string();
             },
             [ptr](const RunConfig& cfg) { return ptr(const_cast<RunConfig&>(cfg)); }};
}

const Table& table() {
  static const Table t = [] {
    Table t;
    t["scenario"] = Key{[](RunConfig& c, const std::string& v) {
                          static const std::map<std::string, Scenario> m = {
                              {"uu", Scenario::UU},         {"memory", Scenario::Memory},
                              {"hierarchy", Scenario::Hierarchy}, {"boundary-layer", Scenario::BoundaryLayer},
                              {"scales", Scenario::Scales}, {"validate", Scenario::Validate}};
                          const auto it = m.find(v);
                          if (it == m.end()) {
                            return std::string(
                                "must be one of uu, memory, hierarchy, boundary-layer, scales, validate (got '" + v +
                                "')");
                          }
                          c.scenario = it->second;
                          return std::string();
                        },
                        [](const RunConfig& c) { return to_string(c.scenario); }};
    t["output.dir"] = Key{[](RunConfig& c, const std::string& v) {
                            if (v.empty()) return std::string("must not be empty");
                            c.output_dir = v;
                            return std::string();
                          },
                          [](const RunConfig& c) { return c.output_dir; }};
    t["seed"] = Key{[](RunConfig& c, const std::string& v) {
                      std::size_t x = 0;
                      auto r = parse_count(v, x);
                      if (!r.empty()) return r;
                      c.seed = x;
                      c.seed_set = true;
                      return std::string();
                    },
                    [](const RunConfig& c) { return std::to_string(c.seed); }};

    add_count(t, "grid.n", [](RunConfig& c) -> std::size_t& { return c.grid.n; }, 2);
    add_choice(t, "grid.spacing", [](RunConfig& c) -> std::string& { return c.grid.spacing; },
               {"geometric", "uniform"});
    add_real(t, "grid.eps_min", [](RunConfig& c) -> double& { return c.grid.eps_min; }, nonneg());
    add_real(t, "grid.eps_max", [](RunConfig& c) -> double& { return c.grid.eps_max; }, positive());

    add_choice(t, "initial.kind", [](RunConfig& c) -> std::string& { return c.initial.kind; },
               {"bose", "maxwellian", "equilibrium"});
    add_real(t, "initial.z", [](RunConfig& c) -> double& { return c.initial.z; }, positive());
    add_choice(t, "initial.theta", [](RunConfig& c) -> std::string& { return c.initial.theta; },
               {"exp", "exp_poly"});
    add_real(t, "initial.poly_a", [](RunConfig& c) -> double& { return c.initial.poly_a; }, nonneg());
    add_real(t, "initial.amplitude", [](RunConfig& c) -> double& { return c.initial.amplitude; }, nonneg());
    add_real(t, "initial.temperature", [](RunConfig& c) -> double& { return c.initial.temperature; }, positive());
    add_real(t, "initial.mu", [](RunConfig& c) -> double& { return c.initial.mu; }, negative());

    add_real(t, "collision.c", [](RunConfig& c) -> double& { return c.collision.occupancy_c; }, positive());
    t["collision.quadrature_order"] = Key{[](RunConfig& c, const std::string& v) {
                                            long long x = 0;
                                            auto r = parse_int(v, x);
                                            if (!r.empty()) return r;
                                            if (x != 2 && x != 4) return std::string("must be 2 or 4");
                                            c.collision.quadrature_order = static_cast<int>(x);
                                            return std::string();
                                          },
                                          [](const RunConfig& c) {
                                            return std::to_string(c.collision.quadrature_order);
                                          }};
    t["collision.interpolation"] = Key{[](RunConfig& c, const std::string& v) {
                                         if (v != "linear" && v != "entropic") {
                                           return std::string("must be one of linear, entropic (got '" + v + "')");
                                         }
                                         c.collision.interpolation = interpolation_from_string(v);
                                         return std::string();
                                       },
                                       [](const RunConfig& c) { return to_string(c.collision.interpolation); }};
    add_bool(t, "collision.symmetrize", [](RunConfig& c) -> bool& { return c.collision.symmetrize; });
    add_bool(t, "collision.classical", [](RunConfig& c) -> bool& { return c.collision.classical; });

    add_real(t, "dynamics.t_end", [](RunConfig& c) -> double& { return c.dynamics.t_end; }, positive());
    add_real(t, "dynamics.rtol", [](RunConfig& c) -> double& { return c.dynamics.control.rtol; }, positive());
    add_real(t, "dynamics.atol", [](RunConfig& c) -> double& { return c.dynamics.control.atol; }, positive());
    add_real(t, "dynamics.dt_initial", [](RunConfig& c) -> double& { return c.dynamics.control.dt_initial; },
             positive());
    add_real(t, "dynamics.dt_max", [](RunConfig& c) -> double& { return c.dynamics.control.dt_max; }, positive());
    add_real(t, "dynamics.dt_floor", [](RunConfig& c) -> double& { return c.dynamics.control.dt_floor; },
             positive());
    add_real(t, "dynamics.growth_ceiling", [](RunConfig& c) -> double& { return c.dynamics.control.growth_ceiling; },
             [](double x) { return x > 1.0 ? std::string() : std::string("must be > 1"); });
    add_count(t, "dynamics.snapshot_every", [](RunConfig& c) -> std::size_t& { return c.dynamics.control.snapshot_every; },
              1);
    add_count(t, "dynamics.max_steps", [](RunConfig& c) -> std::size_t& { return c.dynamics.control.max_steps; }, 1);
    add_count(t, "dynamics.checkpoint_every", [](RunConfig& c) -> std::size_t& { return c.dynamics.checkpoint_every; },
              0);
    add_bool(t, "dynamics.fit", [](RunConfig& c) -> bool& { return c.dynamics.fit; });

    t["lattice.m"] = Key{[](RunConfig& c, const std::string& v) {
                           long long x = 0;
                           auto r = parse_int(v, x);
                           if (!r.empty()) return r;
                           if (x < 1 || x % 2 == 0) return std::string("must be odd and >= 1");
                           if (x > 99) return std::string("must be <= 99");
                           c.lattice.m = static_cast<int>(x);
                           return std::string();
                         },
                         [](const RunConfig& c) { return std::to_string(c.lattice.m); }};
    add_real(t, "lattice.dp", [](RunConfig& c) -> double& { return c.lattice.dp; }, positive());
    add_real(t, "lattice.eps", [](RunConfig& c) -> double& { return c.lattice.eps; }, positive());
    add_real(t, "lattice.t_end", [](RunConfig& c) -> double& { return c.lattice.t_end; }, positive());
    add_real(t, "lattice.dt", [](RunConfig& c) -> double& { return c.lattice.dt; }, positive());
    add_real(t, "lattice.c", [](RunConfig& c) -> double& { return c.lattice.c; }, positive());
    add_real(t, "lattice.memory_budget_mb", [](RunConfig& c) -> double& { return c.lattice.memory_budget_mb; },
             positive());
    add_choice(t, "lattice.initial", [](RunConfig& c) -> std::string& { return c.lattice.initial; },
               {"random", "equilibrium"});
    add_real(t, "lattice.amplitude", [](RunConfig& c) -> double& { return c.lattice.amplitude; }, nonneg());
    add_real(t, "lattice.theta", [](RunConfig& c) -> double& { return c.lattice.theta; }, positive());
    add_real(t, "lattice.jitter", [](RunConfig& c) -> double& { return c.lattice.jitter; },
             [](double x) { return x >= 0.0 && x < 1.0 ? std::string() : std::string("must be in [0, 1)"); });
    add_real(t, "lattice.mu", [](RunConfig& c) -> double& { return c.lattice.mu; }, negative());

    add_real(t, "bl.beta", [](RunConfig& c) -> double& { return c.bl.beta; }, positive());
    add_real(t, "bl.tau0", [](RunConfig& c) -> double& { return c.bl.tau0; }, negative());
    add_real(t, "bl.tau_threshold", [](RunConfig& c) -> double& { return c.bl.tau_threshold; }, any());
    t["bl.n"] = Key{[](RunConfig& c, const std::string& v) {
                      std::size_t x = 0;
                      auto r = parse_count(v, x);
                      if (!r.empty()) return r;
                      if (x < 3 || x % 2 == 0) return std::string("must be odd and >= 3");
                      c.bl.n = x;
                      return std::string();
                    },
                    [](const RunConfig& c) { return std::to_string(c.bl.n); }};
    add_real(t, "bl.dtau", [](RunConfig& c) -> double& { return c.bl.dtau; }, positive());
    add_count(t, "bl.steps", [](RunConfig& c) -> std::size_t& { return c.bl.steps; }, 1);
    add_real(t, "bl.profile_power", [](RunConfig& c) -> double& { return c.bl.profile_power; },
             [](double x) { return x > 0.5 ? std::string() : std::string("must be > 0.5"); });

    add_real(t, "scales.beta", [](RunConfig& c) -> double& { return c.scales.beta; }, positive());
    add_real(t, "scales.eps", [](RunConfig& c) -> double& { return c.scales.eps; }, positive());
    add_real(t, "physical.mass", [](RunConfig& c) -> double& { return c.scales.physical.mass; }, positive());
    add_real(t, "physical.scattering_length",
             [](RunConfig& c) -> double& { return c.scales.physical.scattering_length; }, positive());
    add_real(t, "physical.de_broglie", [](RunConfig& c) -> double& { return c.scales.physical.de_broglie; },
             positive());
    add_real(t, "physical.interparticle", [](RunConfig& c) -> double& { return c.scales.physical.interparticle; },
             positive());
    add_real(t, "physical.density", [](RunConfig& c) -> double& { return c.scales.physical.density; }, nonneg());
    return t;
  }();
  return t;
}

void cross_checks(const RunConfig& c, std::vector<ConfigIssue>& issues) {
  if (!(c.grid.eps_max > c.grid.eps_min)) issues.push_back({0, "grid.eps_max", "must be > grid.eps_min"});
  if (c.grid.spacing == "geometric" && !(c.grid.eps_min > 0.0)) {
    issues.push_back({0, "grid.eps_min", "must be > 0 for a geometric grid"});
  }
  if (c.dynamics.control.dt_max < c.dynamics.control.dt_floor) {
    issues.push_back({0, "dynamics.dt_max", "must be >= dynamics.dt_floor"});
  }
  if (c.initial.kind == "bose" && c.initial.theta == "exp" && !(c.initial.z < 1.0)) {
    issues.push_back({0, "initial.z", "must be < 1 (condensed initial data)"});
  }
  if (c.lattice.initial == "random" && (c.scenario == Scenario::Memory || c.scenario == Scenario::Hierarchy) &&
      !c.seed_set) {
    issues.push_back({0, "seed", "is required for randomized lattice initial data"});
  }
  if (c.scenario == Scenario::Validate && !c.seed_set) {
    issues.push_back({0, "seed", "is required for the validate scenario (Monte-Carlo oracle)"});
  }
  if (c.bl.tau0 > c.bl.tau_threshold) issues.push_back({0, "bl.tau0", "must be <= bl.tau_threshold"});
}

}  // namespace

ConfigError::ConfigError(std::vector<ConfigIssue> issues)
    : std::runtime_error(join_issues(issues)), issues_(std::move(issues)) {}

RunConfig parse_config(const std::string& text, const std::vector<std::string>& overrides) {
  RunConfig cfg;
  std::vector<ConfigIssue> issues;
  const Table& t = table();
  std::map<std::string, std::size_t> seen;
  auto apply = [&](std::size_t line, const std::string& key, const std::string& value) {
    const auto it = t.find(key);
    if (it == t.end()) {
      issues.push_back({line, key, "unknown key"});
      return;
    }
    const std::string r = it->second.set(cfg, value);
    if (!r.empty()) {
      issues.push_back({line, key, r});
      return;
    }
    cfg.entries.emplace_back(key, value);
  };

  std::istringstream in(text);
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (s.empty()) continue;
    const auto eq = s.find('=');
    if (eq == std::string::npos) {
      issues.push_back({line, s, "expected 'key = value'"});
      continue;
    }
    const std::string key = trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));
    if (key.empty()) {
      issues.push_back({line, "", "missing key"});
      continue;
    }
    if (seen.count(key)) {
      issues.push_back({line, key, "duplicate key (first set on line " + std::to_string(seen[key]) + ")"});
      continue;
    }
    seen[key] = line;
    apply(line, key, value);
  }
  for (const auto& o : overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos) {
      issues.push_back({0, o, "override must be key=value"});
      continue;
    }
    apply(0, trim(o.substr(0, eq)), trim(o.substr(eq + 1)));
  }
  if (issues.empty()) cross_checks(cfg, issues);
  if (!issues.empty()) throw ConfigError(std::move(issues));
  return cfg;
}

RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), overrides);
}

std::vector<std::pair<std::string, std::string>> config_echo(const RunConfig& cfg) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& [k, key] : table()) out.emplace_back(k, key.get(cfg));
  return out;
}

}  // namespace uukin
