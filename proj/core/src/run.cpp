#include "uukin/run.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <json.hpp>
#include <sstream>

#include "uukin/boundary_layer.hpp"
#include "uukin/checkpoint.hpp"
#include "uukin/collision.hpp"
#include "uukin/dynamics.hpp"
#include "uukin/kernel.hpp"
#include "uukin/lattice.hpp"
#include "uukin/snapshot.hpp"

#ifndef UUKIN_VERSION
#define UUKIN_VERSION "0.0.0"
#endif

namespace uukin {

namespace fs = std::filesystem;
using nlohmann::json;

std::string library_version() { return UUKIN_VERSION; }

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Domain: return kExitDomain;
    case ErrorKind::Numerical: return kExitNumerical;
    case ErrorKind::Resolution: return kExitNumerical;
    case ErrorKind::Capacity: return kExitCapacity;
    case ErrorKind::Io: return kExitIo;
  }
  return kExitNumerical;
}

namespace {

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

std::string RunRecord::to_json() const {
  json j;
  j["artifact"] = "uukin-run-record";
  j["version"] = version;
  j["scenario"] = scenario;
  j["status"] = status;
  j["exit_code"] = exit_code;
  if (!error.empty()) j["error"] = error;
  j["resumed"] = resumed;
  j["start_time"] = start_time;
  j["end_time"] = end_time;
  j["wall_seconds"] = wall_seconds;
  json cfg = json::object();
  for (const auto& [k, v] : config) cfg[k] = v;
  j["config"] = cfg;
  json files_j = json::array();
  for (const auto& f : this->files) files_j.push_back({{"path", f.path}, {"fnv1a64", f.digest}});
  j["files"] = files_j;
  json diag = json::object();
  for (const auto& [k, v] : diagnostics) diag[k] = finite_or_null(v);
  j["diagnostics"] = diag;
  json nt = json::object();
  for (const auto& [k, v] : notes) nt[k] = v;
  j["notes"] = nt;
  json tb = json::object();
  for (const auto& [name, rows] : tables) {
    json arr = json::array();
    for (const auto& row : rows) {
      json r = json::object();
      for (const auto& [k, v] : row) r[k] = finite_or_null(v);
      arr.push_back(r);
    }
    tb[name] = arr;
  }
  j["tables"] = tb;
  return j.dump(2) + "\n";
}

namespace {

class Context {
 public:
  Context(const RunConfig& cfg, const RunOptions& opts, RunRecord& rec) : cfg(cfg), opts(opts), rec(rec) {
    dir = cfg.output_dir;
  }

  std::string path(const std::string& rel) const { return (fs::path(dir) / rel).string(); }

  // writes text and remembers it for the digest list
  void text(const std::string& rel, const std::string& body) {
    write_text_file(path(rel), body);
    emitted(rel);
  }
  void emitted(const std::string& rel) {
    for (auto& f : rec.files) {
      if (f.path == rel) return;
    }
    rec.files.push_back({rel, ""});
  }
  void log(const std::string& s) const {
    if (opts.log) *opts.log << s << "\n";
  }

  const RunConfig& cfg;
  const RunOptions& opts;
  RunRecord& rec;
  std::string dir;
};

GridPtr make_grid(const RunConfig& cfg) {
  if (cfg.grid.spacing == "uniform") return RadialGrid::uniform(cfg.grid.n, cfg.grid.eps_min, cfg.grid.eps_max);
  return RadialGrid::geometric(cfg.grid.n, cfg.grid.eps_min, cfg.grid.eps_max);
}

DistributionIso make_initial(const RunConfig& cfg, const GridPtr& g) {
  const auto& in = cfg.initial;
  if (in.kind == "maxwellian") {
    std::vector<double> v(g->size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = in.amplitude * std::exp(-g->node(i) / in.temperature);
    return DistributionIso(g, v);
  }
  if (in.kind == "equilibrium") return equilibrium(in.temperature, in.mu, cfg.collision.occupancy_c, g);
  return initial_bose(in.z, ThetaProfile::from_string(in.theta, in.poly_a), g);
}

std::string snap_name(std::size_t k) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "snapshots/snap_%06zu.csv", k);
  return buf;
}

void add_fit(RunRecord& rec, const Trajectory& traj) {
  const BlowupEstimate b = detect_blowup(traj);
  rec.diagnostics["blowup_detected"] = b.detected ? 1.0 : 0.0;
  if (!b.detected) return;
  rec.diagnostics["blowup_T"] = b.T;
  rec.diagnostics["blowup_T_low"] = b.T_low;
  rec.diagnostics["blowup_T_high"] = b.T_high;
  try {
    const SelfSimilarFit fit = fit_selfsimilar(traj, b.T);
    rec.diagnostics["beta"] = fit.beta;
    rec.diagnostics["beta_error"] = fit.beta_error;
    rec.diagnostics["alpha"] = fit.alpha;
    rec.diagnostics["alpha_error"] = fit.alpha_error;
    rec.diagnostics["alpha_consistency_gap"] = fit.consistency_gap;
    rec.diagnostics["fit_samples"] = static_cast<double>(fit.samples);
    rec.diagnostics["fit_window_log10_lo"] = fit.window.log_lo;
    rec.diagnostics["fit_window_log10_hi"] = fit.window.log_hi;
    std::vector<std::map<std::string, double>> rows;
    for (std::size_t i = 0; i < fit.local_beta.size(); ++i) {
      rows.push_back({{"log10_T_minus_t", fit.local_log_tau[i]},
                      {"beta", fit.local_beta[i]},
                      {"alpha", fit.local_alpha[i]}});
    }
    rec.tables["local_exponents"] = rows;
  } catch (const Error& e) {
    rec.notes["fit"] = std::string("exponent fit skipped: ") + e.what();
  }
}

Trajectory trajectory_from_index(const std::string& index_path, double c) {
  const auto entries = read_index(index_path);
  if (entries.empty()) throw IoError(index_path + ": empty index");
  const fs::path base = fs::path(index_path).parent_path();
  Trajectory traj;
  for (const auto& e : entries) {
    DistributionIso f = read_distribution_csv((base / e.path).string());
    const MomentReport m = moments(f, c);
    traj.snapshots.push_back(Snapshot{e.t, std::move(f), m});
  }
  traj.accepted = entries.size() - 1;
  // termination is not stored in the index; treat a strongly grown max f as a blow-up
  const double g = traj.snapshots.back().f.max() / std::max(traj.snapshots.front().f.max(), 1e-300);
  traj.termination = g >= 10.0 ? Termination::BlowUp : Termination::Completed;
  return traj;
}

// ---------------------------------------------------------------- uu

void scenario_uu(Context& cx) {
  const RunConfig& cfg = cx.cfg;
  RunRecord& rec = cx.rec;
  const GridPtr grid = make_grid(cfg);
  DistributionIso f0 = make_initial(cfg, grid);
  StepControl control = cfg.dynamics.control;
  double t0 = 0.0;
  std::size_t snap_count = 0;
  std::size_t accepted_before = 0;
  std::vector<IndexEntry> index;
  const std::string cp_base = "checkpoint/state";

  if (cx.opts.resume) {
    const IsoCheckpoint cp = load_iso_checkpoint(cx.path(cp_base));
    if (cp.f.size() != grid->size()) throw DomainError("resume: checkpoint grid does not match the configured grid");
    for (std::size_t i = 0; i < grid->size(); ++i) {
      if (cp.f.grid().node(i) != grid->node(i)) {
        throw DomainError("resume: checkpoint grid nodes differ from the configured grid");
      }
    }
    f0 = DistributionIso(grid, std::vector<double>(cp.f.values().begin(), cp.f.values().end()));
    t0 = cp.t;
    if (!(cfg.dynamics.t_end > t0)) throw DomainError("resume: dynamics.t_end must exceed the checkpoint time");
    if (cp.dt_next > 0.0) control.dt_initial = cp.dt_next;
    control.resume_err_prev = cp.err_prev;
    control.reference_max = cp.reference_max;
    accepted_before = cp.accepted;
    if (control.max_steps > accepted_before) control.max_steps -= accepted_before;
    for (const auto& e : read_index(cx.path("index.csv"))) {
      if (e.t <= t0) index.push_back(e);
    }
    snap_count = cp.snapshot_count;
    for (const auto& e : index) cx.emitted(e.path);
    rec.resumed = true;
    cx.log("resuming at t = " + format_double(t0));
  }
  const double reference_max = control.reference_max > 0.0 ? control.reference_max : f0.max();

  std::size_t since_cp = 0;
  bool first = true;
  auto observer = [&](const Snapshot& s) {
    if (first && cx.opts.resume) {
      first = false;
      return;  // the checkpoint state is already on disk
    }
    first = false;
    const std::string rel = snap_name(snap_count++);
    cx.text(rel, distribution_csv(s.f));
    index.push_back({s.t, rel});
    if (cfg.dynamics.checkpoint_every > 0 && ++since_cp >= cfg.dynamics.checkpoint_every) {
      since_cp = 0;
      IsoCheckpoint cp{s.t, s.f, s.dt_next, s.err_prev, reference_max, 0, snap_count};
      save_iso_checkpoint(cp, cx.path(cp_base));
      write_index(index, cx.path("index.csv"));
    }
  };
  const Trajectory traj = evolve(f0, cfg.dynamics.t_end, control, cfg.collision, t0, observer);
  write_index(index, cx.path("index.csv"));
  cx.emitted("index.csv");
  {
    const Snapshot& s = traj.last();
    IsoCheckpoint cp{s.t, s.f, s.dt_next, s.err_prev, reference_max, accepted_before + traj.accepted, snap_count};
    save_iso_checkpoint(cp, cx.path(cp_base));
    cx.emitted(cp_base + ".csv");
    cx.emitted(cp_base + ".json");
  }

  // drifts against the very first snapshot of the run (also after a resume)
  const DistributionIso first_f = read_distribution_csv(cx.path(index.front().path));
  const MomentReport m0 = moments(first_f, cfg.collision.occupancy_c, cfg.collision.quadrature_order);
  const double t_first = index.front().t;
  double dn = 0.0, de = 0.0;
  for (const auto& s : traj.snapshots) {
    dn = std::max(dn, std::fabs(s.moments.number - m0.number) / std::max(m0.number, 1e-300));
    de = std::max(de, std::fabs(s.moments.energy - m0.energy) / std::max(m0.energy, 1e-300));
  }
  const double span = std::max(traj.last().t - t_first, 1e-300);
  rec.diagnostics["number_drift"] = dn;
  rec.diagnostics["energy_drift"] = de;
  rec.diagnostics["number_drift_per_time"] = dn / span;
  rec.diagnostics["energy_drift_per_time"] = de / span;
  rec.diagnostics["clipped_mass"] = traj.clipped_mass;
  rec.diagnostics["min_entropy_increment"] = traj.min_entropy_increment;
  rec.diagnostics["accepted_steps"] = static_cast<double>(accepted_before + traj.accepted);
  rec.diagnostics["rejected_steps"] = static_cast<double>(traj.rejected);
  rec.diagnostics["t_final"] = traj.last().t;
  rec.diagnostics["max_f_final"] = traj.last().f.max();
  rec.diagnostics["snapshots"] = static_cast<double>(index.size());
  rec.notes["termination"] = to_string(traj.termination);
  if (!traj.diagnostic.empty()) rec.notes["termination_detail"] = traj.diagnostic;
  rec.notes["interpolation"] = to_string(cfg.collision.interpolation);

  if (traj.blowup() && cfg.dynamics.fit) {
    const Trajectory full = rec.resumed ? trajectory_from_index(cx.path("index.csv"), cfg.collision.occupancy_c) : traj;
    add_fit(rec, full);
  }
}

// ---------------------------------------------------------------- lattice

DistributionLattice make_lattice_initial(const RunConfig& cfg, const Lattice3& lat) {
  if (cfg.lattice.initial == "equilibrium") return lattice_equilibrium(lat, cfg.lattice.theta, cfg.lattice.mu, cfg.lattice.c);
  return lattice_random_initial(lat, cfg.lattice.amplitude, cfg.lattice.theta, cfg.lattice.jitter, cfg.seed);
}

LatticeBudget budget_of(const RunConfig& cfg) { return LatticeBudget{cfg.lattice.memory_budget_mb * 1024.0 * 1024.0}; }

double sup_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double e = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) e = std::max(e, std::fabs(a[i] - b[i]));
  return e;
}

double sup_abs(const std::vector<double>& a) {
  double e = 0.0;
  for (double v : a) e = std::max(e, std::fabs(v));
  return e;
}

void lattice_moments(RunRecord& rec, const std::vector<DistributionLattice>& traj, const std::string& prefix) {
  const double n0 = traj.front().number(), e0 = traj.front().energy();
  double dn = 0.0, de = 0.0;
  for (const auto& s : traj) {
    dn = std::max(dn, std::fabs(s.number() - n0) / std::max(n0, 1e-300));
    de = std::max(de, std::fabs(s.energy() - e0) / std::max(e0, 1e-300));
  }
  rec.diagnostics[prefix + "number_drift"] = dn;
  rec.diagnostics[prefix + "energy_drift"] = de;
}

void scenario_memory(Context& cx) {
  const RunConfig& cfg = cx.cfg;
  RunRecord& rec = cx.rec;
  const LatticeBudget budget = budget_of(cfg);
  budget.check(cfg.lattice.m);
  const Lattice3 lat(cfg.lattice.m, cfg.lattice.dp);
  LatticeRunOptions lo;
  lo.dt = cfg.lattice.dt;
  lo.budget = budget;

  std::vector<DistributionLattice> prior;
  DistributionLattice f0 = make_lattice_initial(cfg, lat);
  LatticeHistory hist;
  if (cx.opts.resume) {
    prior = read_lattice_history(lat, cx.path("checkpoint/memory_history.csv"));
    if (prior.empty()) throw IoError("resume: empty memory history");
    f0 = prior.back();
    hist.snapshots = prior;
    lo.history = &hist;
    rec.resumed = true;
  }
  const LatticeRun mem = run_memory(f0, cfg.lattice.t_end, cfg.lattice.eps, cfg.lattice.c, lo);
  std::vector<DistributionLattice> full = prior;
  for (std::size_t i = prior.empty() ? 0 : 1; i < mem.trajectory.size(); ++i) full.push_back(mem.trajectory[i]);

  LatticeRunOptions mo;
  mo.dt = cfg.lattice.dt;
  const LatticeRun markov = run_markov(full.front(), cfg.lattice.t_end, cfg.lattice.c, mo);

  write_lattice_history(full, cx.path("checkpoint/memory_history.csv"));
  cx.emitted("checkpoint/memory_history.csv");
  write_lattice_csv(full.back(), cx.path("lattice_memory_final.csv"));
  cx.emitted("lattice_memory_final.csv");
  write_lattice_csv(markov.trajectory.back(), cx.path("lattice_markov_final.csv"));
  cx.emitted("lattice_markov_final.csv");

  const double e = sup_diff(full.back().values, markov.trajectory.back().values);
  rec.diagnostics["memory_vs_markov_sup"] = e;
  rec.diagnostics["memory_vs_markov_rel"] = e / std::max(sup_abs(markov.trajectory.back().values), 1e-300);
  rec.diagnostics["t_final"] = full.back().t;
  rec.diagnostics["steps"] = static_cast<double>(full.size() - 1);
  lattice_moments(rec, full, "memory_");
}

void scenario_hierarchy(Context& cx) {
  const RunConfig& cfg = cx.cfg;
  RunRecord& rec = cx.rec;
  const LatticeBudget budget = budget_of(cfg);
  budget.check(cfg.lattice.m);
  const Lattice3 lat(cfg.lattice.m, cfg.lattice.dp);
  LatticeRunOptions lo;
  lo.dt = cfg.lattice.dt;
  lo.budget = budget;

  std::vector<DistributionLattice> prior_c, prior_m;
  DistributionLattice fc = make_lattice_initial(cfg, lat), fm = fc;
  PairCorrelation phi0;
  LatticeHistory hist;
  LatticeRunOptions lc = lo, lm = lo;
  if (cx.opts.resume) {
    prior_c = read_lattice_history(lat, cx.path("checkpoint/coupled_history.csv"));
    prior_m = read_lattice_history(lat, cx.path("checkpoint/memory_history.csv"));
    if (prior_c.empty() || prior_m.empty()) throw IoError("resume: empty lattice history");
    phi0 = load_pair_correlation(cx.path("checkpoint/pair_correlation"), budget);
    fc = prior_c.back();
    fm = prior_m.back();
    lc.phi0 = &phi0;
    hist.snapshots = prior_m;
    lm.history = &hist;
    rec.resumed = true;
  }
  const LatticeRun coupled = run_coupled(fc, cfg.lattice.t_end, cfg.lattice.eps, cfg.lattice.c, lc);
  const LatticeRun memory = run_memory(fm, cfg.lattice.t_end, cfg.lattice.eps, cfg.lattice.c, lm);
  auto join = [](std::vector<DistributionLattice> a, const std::vector<DistributionLattice>& b) {
    for (std::size_t i = a.empty() ? 0 : 1; i < b.size(); ++i) a.push_back(b[i]);
    return a;
  };
  const auto full_c = join(prior_c, coupled.trajectory);
  const auto full_m = join(prior_m, memory.trajectory);

  double worst = 0.0;
  for (std::size_t k = 0; k < std::min(full_c.size(), full_m.size()); ++k) {
    const double scale = std::max(sup_abs(full_m[k].values), 1e-300);
    worst = std::max(worst, sup_diff(full_c[k].values, full_m[k].values) / scale);
  }
  rec.diagnostics["coupled_vs_memory_rel"] = worst;
  rec.diagnostics["max_imag_residual"] = coupled.max_imag_residual;
  rec.diagnostics["max_conjugation_error"] = coupled.max_conjugation_error;
  rec.diagnostics["t_final"] = full_c.back().t;
  rec.diagnostics["pair_correlation_mb"] = pair_correlation_bytes(cfg.lattice.m) / (1024.0 * 1024.0);
  lattice_moments(rec, full_c, "coupled_");

  save_pair_correlation(coupled.final_phi, cx.path("checkpoint/pair_correlation"));
  cx.emitted("checkpoint/pair_correlation.bin");
  cx.emitted("checkpoint/pair_correlation.json");
  write_lattice_history(full_c, cx.path("checkpoint/coupled_history.csv"));
  cx.emitted("checkpoint/coupled_history.csv");
  write_lattice_history(full_m, cx.path("checkpoint/memory_history.csv"));
  cx.emitted("checkpoint/memory_history.csv");
  write_lattice_csv(full_c.back(), cx.path("lattice_coupled_final.csv"));
  cx.emitted("lattice_coupled_final.csv");
}

// ---------------------------------------------------------------- boundary layer

double g_profile_power = 1.2;
double power_profile(double xi) { return std::pow(1.0 + xi * xi, -g_profile_power); }

void scenario_boundary_layer(Context& cx) {
  const RunConfig& cfg = cx.cfg;
  RunRecord& rec = cx.rec;
  g_profile_power = cfg.bl.profile_power;
  const SelfSimilarProfile prof = analytic_profile(power_profile, 1e-3, 1e2);
  AsymptoticOptions ao;
  ao.n = cfg.bl.n;
  ao.tau_threshold = cfg.bl.tau_threshold;
  const HierarchyState s0 = asymptotic_data(prof, cfg.bl.tau0, cfg.bl.beta, ao);
  const HierarchyRate r0 = bl_rhs_truncated(s0);
  double src = 0.0;
  for (const auto& v : r0.dg2) src = std::max(src, std::abs(v));
  const HierarchyRun run = evolve_hierarchy(s0, HierarchyRunOptions{cfg.bl.dtau, cfg.bl.steps});
  const HierarchyState& s1 = run.states.back();

  std::vector<double> x(s0.grid.n);
  for (std::size_t j = 0; j < x.size(); ++j) x[j] = s0.grid.coord(j);
  write_complex_csv(x, s0.h1, "zeta", cx.path("h1_initial.csv"));
  cx.emitted("h1_initial.csv");
  write_complex_csv(x, s1.h1, "zeta", cx.path("h1_final.csv"));
  cx.emitted("h1_final.csv");
  const WignerForm w = wigner_form(s0);
  write_complex_csv(w.p, w.phi1, "P", cx.path("phi1_initial.csv"));
  cx.emitted("phi1_initial.csv");

  rec.diagnostics["g2_source_sup"] = src;
  rec.diagnostics["g2_sup_final"] = s1.g2_sup();
  rec.diagnostics["g2_growth_rate"] = s1.g2_sup() / (s1.tau - s0.tau);
  rec.diagnostics["density_initial"] = s0.density();
  rec.diagnostics["density_drift"] = run.max_density_drift;
  rec.diagnostics["exchange_asymmetry"] = s1.exchange_asymmetry();
  rec.diagnostics["tau_final"] = s1.tau;
  rec.diagnostics["grid_dx"] = s0.grid.dx;

  const MatchingStudy ms = matching_study(prof, cfg.bl.beta, {cfg.bl.tau0, cfg.bl.tau0 * std::sqrt(10.0), cfg.bl.tau0 * 10.0}, ao);
  std::vector<std::map<std::string, double>> rows;
  for (const auto& g : ms.rows) rows.push_back({{"tau0", g.tau0}, {"rate", g.rate}, {"source", g.source}});
  rec.tables["matching"] = rows;
  rec.diagnostics["matching_slope"] = ms.measured_slope;
  rec.diagnostics["matching_predicted_slope"] = ms.predicted_slope;
  rec.notes["closure"] = "cumulant discard at third order (G3 = 0), a modeling choice";
  rec.notes["profile"] = "Phi(xi) = (1 + xi^2)^-" + format_double(cfg.bl.profile_power);
}

// ---------------------------------------------------------------- scales

void scenario_scales(Context& cx) {
  const RunConfig& cfg = cx.cfg;
  RunRecord& rec = cx.rec;
  const double beta = cfg.scales.beta;
  const BoundaryLayerScales ex = scale_exponents(beta);
  rec.tables["exponents"] = {{{"beta", beta},
                              {"correlation_onset", correlation_onset_exponent(beta)},
                              {"time", ex.time_exponent},
                              {"space", ex.space_exponent},
                              {"momentum", ex.momentum_exponent},
                              {"amplitude", ex.amplitude_exponent},
                              {"physical_time", ex.physical_time_exponent},
                              {"correlation_magnitude", correlation_magnitude(1.0, beta).exponent}}};
  rec.diagnostics["exponent_identity_residual"] = ex.identity_residual;
  const double onset = correlation_onset_time(cfg.scales.eps, beta);
  rec.diagnostics["onset_T_minus_t"] = onset;
  const CorrelationMagnitude cm = correlation_magnitude(onset, beta);
  rec.diagnostics["correlation_ratio_at_onset"] = cm.ratio;
  rec.diagnostics["correlation_exponents_equal"] = cm.exponents_equal ? 1.0 : 0.0;

  const BoundaryLayerScales ps = physical_scales(cfg.scales.physical, beta);
  const NonDimParams nd = nondimensionalize(cfg.scales.physical);
  rec.diagnostics["epsilon"] = nd.epsilon;
  rec.diagnostics["occupancy_c"] = nd.occupancy_c;
  rec.diagnostics["t_bl_s"] = ps.t_bl;
  rec.diagnostics["p_bl_kg_m_s"] = ps.p_bl;
  rec.diagnostics["x_bl_m"] = ps.x_bl;
  rec.diagnostics["t_bl_exact_s"] = ps.t_bl_exact;
  rec.diagnostics["p_bl_exact_kg_m_s"] = ps.p_bl_exact;
  rec.diagnostics["x_bl_exact_m"] = ps.x_bl_exact;
  rec.diagnostics["px_over_hbar"] = ps.px_over_hbar;
  rec.diagnostics["px_exponent_sum"] = ps.px_exponent_sum;
  for (std::size_t i = 0; i < nd.warnings.size(); ++i) rec.notes["warning_" + std::to_string(i)] = nd.warnings[i];
}

// ---------------------------------------------------------------- validate

void scenario_validate(Context& cx) {
  const RunConfig& cfg = cx.cfg;
  RunRecord& rec = cx.rec;
  const GridPtr grid = make_grid(cfg);
  const double c = cfg.collision.occupancy_c;
  const DistributionIso eq = equilibrium(1.0, -0.5, c, grid);
  const CollisionRate r = collision_rhs_iso(eq, cfg.collision);
  rec.diagnostics["equilibrium_residual_sup"] = sup_abs(r.rate);

  // the configured data when it is away from equilibrium, otherwise a fixed test profile
  const bool at_eq = cfg.initial.kind == "equilibrium" || (cfg.initial.kind == "bose" && cfg.initial.theta == "exp");
  const DistributionIso f =
      at_eq ? initial_bose(0.5, ThetaProfile::from_string("exp_poly", 1.0), grid) : make_initial(cfg, grid);
  rec.notes["oracle_profile"] = at_eq ? "bose z=0.5 exp_poly A=1" : "configured initial data";
  const CollisionRate rf = collision_rhs_iso(f, cfg.collision);
  const MomentReport m = moments(f, c, cfg.collision.quadrature_order);
  rec.diagnostics["initial_number_rate_rel"] = std::fabs(rf.number_rate) / std::max(m.number, 1e-300);
  rec.diagnostics["initial_energy_rate_rel"] = std::fabs(rf.energy_rate) / std::max(m.energy, 1e-300);
  rec.diagnostics["initial_entropy_production"] = entropy_production(f, rf.rate, c, cfg.collision.quadrature_order);

  MonteCarloOptions mo;
  mo.occupancy_c = c;
  mo.interpolation = cfg.collision.interpolation;
  mo.classical = cfg.collision.classical;
  std::vector<std::map<std::string, double>> rows;
  for (std::size_t i : {grid->size() / 4, grid->size() / 2}) {
    const double eps = grid->node(i);
    const MonteCarloEstimate est = collision_mc(f, std::sqrt(eps), 200000, cfg.seed, mo);
    rows.push_back({{"eps", eps},
                    {"deterministic", rf.rate[i]},
                    {"monte_carlo", est.estimate},
                    {"std_error", est.standard_error},
                    {"z_score", (rf.rate[i] - est.estimate) / std::max(est.standard_error, 1e-300)}});
  }
  rec.tables["oracle"] = rows;
  rec.diagnostics["kernel_integral_minus_pi"] = broadened_kernel_integral(1.0, 0.5) - constants::pi;
}

}  // namespace

RunRecord run(const RunConfig& cfg, const RunOptions& opts) {
  RunRecord rec;
  rec.scenario = to_string(cfg.scenario);
  rec.version = library_version();
  rec.start_time = utc_now();
  rec.config = config_echo(cfg);
  const auto t_start = std::chrono::steady_clock::now();
  Context cx(cfg, opts, rec);
  try {
    fs::create_directories(cfg.output_dir);
    switch (cfg.scenario) {
      case Scenario::UU: scenario_uu(cx); break;
      case Scenario::Memory: scenario_memory(cx); break;
      case Scenario::Hierarchy: scenario_hierarchy(cx); break;
      case Scenario::BoundaryLayer: scenario_boundary_layer(cx); break;
      case Scenario::Scales: scenario_scales(cx); break;
      case Scenario::Validate: scenario_validate(cx); break;
    }
  } catch (const Error& e) {
    rec.status = "error";
    rec.error = e.what();
    rec.exit_code = exit_code_for(e.kind());
  } catch (const fs::filesystem_error& e) {
    rec.status = "error";
    rec.error = e.what();
    rec.exit_code = kExitIo;
  }
  for (auto& f : rec.files) {
    try {
      f.digest = file_digest(cx.path(f.path));
    } catch (const Error&) {
      f.digest = "missing";
    }
  }
  rec.end_time = utc_now();
  rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  if (opts.write_record) {
    try {
      write_text_file(cx.path("record.json"), rec.to_json());
    } catch (const Error& e) {
      if (rec.exit_code == kExitOk) {
        rec.status = "error";
        rec.error = e.what();
        rec.exit_code = kExitIo;
      }
    }
  }
  return rec;
}

RunRecord fit_from_index(const std::string& index_path) {
  RunRecord rec;
  rec.scenario = "fit";
  rec.version = library_version();
  rec.start_time = utc_now();
  const auto t_start = std::chrono::steady_clock::now();
  try {
    const Trajectory traj = trajectory_from_index(index_path, 1.0);
    rec.diagnostics["snapshots"] = static_cast<double>(traj.snapshots.size());
    rec.diagnostics["t_last"] = traj.last().t;
    add_fit(rec, traj);
  } catch (const Error& e) {
    rec.status = "error";
    rec.error = e.what();
    rec.exit_code = exit_code_for(e.kind());
  }
  rec.end_time = utc_now();
  rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return rec;
}

}  // namespace uukin
