#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "uukin/checkpoint.hpp"
#include "uukin/collision.hpp"
#include "uukin/error.hpp"
#include "uukin/parallel.hpp"
#include "uukin/run.hpp"
#include "uukin/snapshot.hpp"

using namespace uukin;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("uukin_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("zero distribution on 4 nodes is a 5-line csv") {
  const DistributionIso f = DistributionIso::zeros(RadialGrid::uniform(4, 1.0, 4.0));
  const std::string s = distribution_csv(f);
  CHECK(std::count(s.begin(), s.end(), '\n') == 5);
  CHECK(s.rfind("eps,f\n", 0) == 0);
}

TEST_CASE("csv round trip is bitwise exact") {
  const fs::path d = scratch("csv");
  const GridPtr g = RadialGrid::geometric(37, 1e-7, 3.3);
  const DistributionIso f = initial_bose(0.7, ThetaProfile::from_string("exp_poly", 0.4), g);
  write_distribution_csv(f, (d / "f.csv").string());
  const DistributionIso h = read_distribution_csv((d / "f.csv").string());
  REQUIRE(h.size() == f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    CHECK(h[i] == f[i]);
    CHECK(h.grid().node(i) == g->node(i));
  }
}

TEST_CASE("equilibrium csv matches the golden file") {
  const DistributionIso f = equilibrium(1.0, -0.5, 1.0, RadialGrid::geometric(16, 1e-4, 1e2));
  CHECK(distribution_csv(f) == slurp(fs::path(UUKIN_FIXTURE_DIR) / "equilibrium_16.csv"));
}

TEST_CASE("io errors carry the path") {
  try {
    read_distribution_csv("/nonexistent/dir/f.csv");
    FAIL("expected an IoError");
  } catch (const IoError& e) {
    CHECK(std::string(e.what()).find("/nonexistent/dir/f.csv") != std::string::npos);
  }
}

TEST_CASE("index and digest") {
  const fs::path d = scratch("index");
  write_index({{0.0, "a.csv"}, {0.5, "b.csv"}}, (d / "index.csv").string());
  const auto e = read_index((d / "index.csv").string());
  REQUIRE(e.size() == 2);
  CHECK(e[1].t == 0.5);
  CHECK(e[1].path == "b.csv");
  write_text_file((d / "x.txt").string(), "");
  CHECK(file_digest((d / "x.txt").string()) == "cbf29ce484222325");
  write_text_file((d / "y.txt").string(), "a");
  CHECK(file_digest((d / "y.txt").string()) == "af63dc4c8601ec8c");
}

TEST_CASE("pair correlation checkpoint round trip") {
  const fs::path d = scratch("phi");
  const Lattice3 lat(3, 0.25);
  PairCorrelation phi(lat);
  for (std::size_t i = 0; i < phi.size(); ++i) phi.data()[i] = cplx(std::sin(0.1 * i), std::cos(0.3 * i) / 7.0);
  phi.t = 0.37;
  phi.eps = 0.25;
  save_pair_correlation(phi, (d / "phi").string());
  CHECK(fs::file_size(d / "phi.bin") == phi.size() * 16);
  const PairCorrelation back = load_pair_correlation((d / "phi").string());
  CHECK(back.data() == phi.data());
  CHECK(back.t == phi.t);
  CHECK(back.lattice().side() == 3);
  fs::resize_file(d / "phi.bin", 100);
  CHECK_THROWS_AS(load_pair_correlation((d / "phi").string()), IoError);
}

TEST_CASE("iso checkpoint round trip") {
  const fs::path d = scratch("iso");
  IsoCheckpoint cp;
  cp.t = 0.25;
  cp.f = equilibrium(1.0, -0.5, 1.0, RadialGrid::geometric(12, 1e-4, 1e2));
  cp.dt_next = 3.5e-3;
  cp.err_prev = 0.42;
  cp.reference_max = 1.5;
  cp.accepted = 17;
  cp.snapshot_count = 18;
  save_iso_checkpoint(cp, (d / "state").string());
  const IsoCheckpoint b = load_iso_checkpoint((d / "state").string());
  CHECK(b.t == cp.t);
  CHECK(b.dt_next == cp.dt_next);
  CHECK(b.err_prev == cp.err_prev);
  CHECK(b.accepted == 17);
  CHECK(b.snapshot_count == 18);
  for (std::size_t i = 0; i < cp.f.size(); ++i) CHECK(b.f[i] == cp.f[i]);
}

TEST_CASE("scales scenario writes one record with the exponent table") {
  const fs::path d = scratch("scales");
  const RunConfig cfg = parse_config("scenario = scales\n", {"output.dir=" + d.string()});
  const RunRecord rec = run(cfg);
  CHECK(rec.exit_code == 0);
  CHECK(rec.tables.count("exponents") == 1);
  CHECK(rec.tables.at("exponents").front().at("correlation_onset") == doctest::Approx(0.63734).epsilon(1e-5));
  CHECK(fs::exists(d / "record.json"));
}

TEST_CASE("uu scenario on equilibrium keeps drifts below threshold") {
  const fs::path d = scratch("uu_eq");
  const RunConfig cfg = parse_config(
      "scenario = uu\ninitial.kind = equilibrium\ngrid.n = 48\ndynamics.t_end = 0.2\n", {"output.dir=" + d.string()});
  const RunRecord rec = run(cfg);
  REQUIRE(rec.exit_code == 0);
  CHECK(rec.diagnostics.at("number_drift_per_time") < 1e-8);
  CHECK(rec.diagnostics.at("energy_drift_per_time") < 1e-6);
  for (const auto& f : rec.files) {
    CHECK(f.digest.size() == 16);
    CHECK(file_digest((d / f.path).string()) == f.digest);
  }
}

TEST_CASE("memory scenario with M=99 fails on capacity before allocating") {
  const fs::path d = scratch("m99");
  const RunConfig cfg =
      parse_config("scenario = memory\nseed = 1\nlattice.m = 99\n", {"output.dir=" + d.string()});
  const RunRecord rec = run(cfg);
  CHECK(rec.exit_code == kExitCapacity);
  CHECK(rec.status == "error");
  CHECK(exit_code_for(ErrorKind::Domain) == 2);
  CHECK(exit_code_for(ErrorKind::Numerical) == 3);
}

TEST_CASE("outputs are byte-identical across worker counts") {
  const std::string text = "scenario = uu\ninitial.theta = exp_poly\ninitial.poly_a = 1\ngrid.n = 40\ndynamics.t_end = 0.05\n";
  const fs::path a = scratch("thr1"), b = scratch("thr3");
  set_worker_count(1);
  run(parse_config(text, {"output.dir=" + a.string()}));
  set_worker_count(3);
  run(parse_config(text, {"output.dir=" + b.string()}));
  set_worker_count(1);
  CHECK(slurp(a / "index.csv") == slurp(b / "index.csv"));
  CHECK(slurp(a / "checkpoint/state.csv") == slurp(b / "checkpoint/state.csv"));
  const auto idx = read_index((a / "index.csv").string());
  CHECK(slurp(a / idx.back().path) == slurp(b / idx.back().path));
}

TEST_CASE("uu resume continues within integrator tolerance") {
  const std::string text = "scenario = uu\ninitial.theta = exp_poly\ninitial.poly_a = 1\ngrid.n = 40\n"
                           "dynamics.checkpoint_every = 2\n";
  const fs::path a = scratch("res_full"), b = scratch("res_part");
  run(parse_config(text, {"output.dir=" + a.string(), "dynamics.t_end=0.1"}));
  run(parse_config(text, {"output.dir=" + b.string(), "dynamics.t_end=0.05"}));
  RunOptions ro;
  ro.resume = true;
  const RunRecord rec = run(parse_config(text, {"output.dir=" + b.string(), "dynamics.t_end=0.1"}), ro);
  REQUIRE(rec.exit_code == 0);
  CHECK(rec.resumed);
  const DistributionIso fa = read_distribution_csv((a / "checkpoint/state.csv").string());
  const DistributionIso fb = read_distribution_csv((b / "checkpoint/state.csv").string());
  double d = 0.0;
  for (std::size_t i = 0; i < fa.size(); ++i) d = std::max(d, std::fabs(fa[i] - fb[i]));
  CHECK(d / fa.max() < 1e-7);
  CHECK(read_index((b / "index.csv").string()).back().t == doctest::Approx(0.1));
}
