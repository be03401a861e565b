#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "uukin/collision.hpp"
#include "uukin/dynamics.hpp"
#include "uukin/params.hpp"

namespace uukin {

enum class Scenario { UU, Memory, Hierarchy, BoundaryLayer, Scales, Validate };
std::string to_string(Scenario s);

struct RunConfig {
  Scenario scenario = Scenario::UU;
  std::string output_dir = "out";
  std::uint64_t seed = 0;
  bool seed_set = false;

  struct Grid {
    std::size_t n = 256;
    std::string spacing = "geometric";
    double eps_min = 1e-4;
    double eps_max = 1e2;
  } grid;

  struct Initial {
    std::string kind = "bose";  // bose | maxwellian | equilibrium
    double z = 0.5;
    std::string theta = "exp";  // exp | exp_poly
    double poly_a = 0.0;
    double amplitude = 1.0;     // maxwellian: f = amplitude exp(-eps / temperature)
    double temperature = 1.0;   // maxwellian and equilibrium
    double mu = -0.5;           // equilibrium
  } initial;

  CollisionConfig collision;

  struct Dynamics {
    double t_end = 1.0;
    StepControl control;
    std::size_t checkpoint_every = 100;  // accepted steps, 0 disables
    bool fit = true;                     // fit exponents when a blow-up is flagged
  } dynamics;

  struct Lattice {
    int m = 3;
    double dp = 0.25;
    double eps = 0.5;
    double t_end = 1.0;
    double dt = 0.01;
    double c = 1.0;
    double memory_budget_mb = 512.0;
    std::string initial = "random";  // random | equilibrium
    double amplitude = 1.0;
    double theta = 0.5;
    double jitter = 0.5;
    double mu = -0.5;  // equilibrium initial data
  } lattice;

  struct BoundaryLayer {
    double beta = 1.069;
    double tau0 = -1.0;
    double tau_threshold = -1.0;
    std::size_t n = 21;
    double dtau = 1e-3;
    std::size_t steps = 10;
    double profile_power = 1.2;  // Phi(xi) = (1 + xi^2)^{-power}
  } bl;

  struct Scales {
    double beta = 1.069;
    double eps = 0.01;
    PhysicalParams physical{1.44e-25, 5.3e-9, 4e-7, 4e-7, 0.0, 0.0};
  } scales;

  /// Raw `key = value` pairs as given, in file order, after overrides.
  std::vector<std::pair<std::string, std::string>> entries;
};

struct ConfigIssue {
  std::size_t line = 0;  // 0 for overrides and cross-key checks
  std::string key;
  std::string reason;
};

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<ConfigIssue> issues);
  const std::vector<ConfigIssue>& issues() const { return issues_; }

 private:
  std::vector<ConfigIssue> issues_;
};

/// Parses `key = value` lines (`#` comments, dotted keys). `overrides` are `key=value`
/// strings applied after the file. Throws ConfigError listing every problem found.
RunConfig parse_config(const std::string& text, const std::vector<std::string>& overrides = {});
RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides = {});

/// Every known key with its current value, sorted by key.
std::vector<std::pair<std::string, std::string>> config_echo(const RunConfig& cfg);

/// 17 significant digits.
std::string format_double(double v);

}  // namespace uukin
