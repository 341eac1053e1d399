#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "lgfrac/damage.hpp"
#include "lgfrac/error.hpp"
#include "lgfrac/staggered.hpp"
#include "oracles.hpp"

using namespace lgfrac;

namespace {

BeamModel single_layer(double he = 0.05) {
  auto spec = presets::single_layer_benchmark();
  spec.layers[0].material = GlassMaterial{70e9, 0.22, 45e6, 1e-3};
  spec.width = 1.0;
  spec.layers[0].thickness = 1e-3;  // A = 1e-3 m^2
  return BeamModel(spec, build_mesh(spec, he, false));
}

// Sets u' and phi' uniformly along the single layer.
StateFields uniform_strain(const BeamModel& model, double axial, double curvature) {
  auto s = model.zero_state();
  for (std::size_t i = 0; i < model.dofs().nodes(); ++i) {
    const double x = model.mesh().x[i];
    s.kinematics(static_cast<long>(model.dofs().u(i, 0))) = axial * x;
    s.kinematics(static_cast<long>(model.dofs().phi(i, 0))) = curvature * x;
  }
  return s;
}

}  // namespace

TEST_CASE("Rankine driving force") {
  const auto model = single_layer();
  const double h = model.spec().layers[0].thickness;
  // pure bending, bottom fiber at 1e-3
  auto y = driving_force(model, uniform_strain(model, 0.0, 1e-3 / (0.5 * h)));
  for (double v : y.per_layer[0]) CHECK(v == doctest::Approx(35.0).epsilon(1e-12));
  y = driving_force(model, uniform_strain(model, -1e-3, 0.0));
  for (double v : y.per_layer[0]) CHECK(v == 0.0);
  y = driving_force(model, uniform_strain(model, 1e-3, 0.0));
  for (double v : y.per_layer[0]) CHECK(v == doctest::Approx(35.0).epsilon(1e-12));
  y = driving_force(model, uniform_strain(model, 0.0, -1e-3 / (0.5 * h)));
  for (double v : y.per_layer[0]) CHECK(v == doctest::Approx(35.0).epsilon(1e-12));
}

TEST_CASE("driving force is non-negative at random states") {
  const auto model = single_layer();
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n;
  for (int k = 0; k < 20; ++k) {
    auto s = model.zero_state();
    for (long i = 0; i < s.kinematics.size(); ++i) s.kinematics(i) = 1e-3 * n(rng);
    for (auto kind : {DrivingForceKind::rankine, DrivingForceKind::tensile_energy}) {
      const auto y = driving_force(model, s, kind);
      for (double v : y.per_layer[0]) CHECK(v >= 0.0);
    }
  }
}

TEST_CASE("damage system with no driving force stays at the floor") {
  const std::size_t n = 21;
  std::vector<double> y(n - 1, 0.0), floors(n, 0.0);
  auto sys = assemble_damage_system(y, 1e-3, 77.0, 1e-3, 2e-3, floors);
  auto r = solve_damage_vi(sys);
  for (double d : r.x) CHECK(d == 0.0);
  std::fill(floors.begin(), floors.end(), 0.4);
  sys = assemble_damage_system(y, 1e-3, 77.0, 1e-3, 2e-3, floors);
  r = solve_damage_vi(sys);
  for (double d : r.x) CHECK(d == 0.4);
}

TEST_CASE("pinned floors and saturation") {
  std::vector<double> y(10, 1.0), floors(11, 0.0);
  floors[4] = 1.0;
  auto r = solve_damage_vi(assemble_damage_system(y, 1e-3, 77.0, 1e-3, 2e-3, floors));
  CHECK(r.x[4] == 1.0);
  std::vector<double> huge(1, 1e20), f2(2, 0.0);
  r = solve_damage_vi(assemble_damage_system(huge, 1e-3, 77.0, 1e-3, 2e-3, f2));
  for (double d : r.x) CHECK(d == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("uniform driving force gives the homogeneous damage") {
  const double gc = 77.0, area = 1e-3, ell = 2e-3;
  const double y = 3.0 * gc * area / (16.0 * ell * 0.25);  // d = 0.75
  std::vector<double> ys(40, y), floors(41, 0.0);
  const auto r = solve_damage_vi(assemble_damage_system(ys, 0.5e-3, gc, area, ell, floors));
  const double expected = 1.0 - 3.0 * gc * area / (16.0 * ell * y);
  for (double d : r.x) CHECK(d == doctest::Approx(expected).epsilon(1e-10));
  // below the onset the homogeneous value clamps to the floor
  std::vector<double> weak(40, 0.5 * 3.0 * gc * area / (16.0 * ell));
  for (double d : solve_damage_vi(assemble_damage_system(weak, 0.5e-3, gc, area, ell, floors)).x)
    CHECK(d == 0.0);
}

TEST_CASE("active-set solution equals brute-force enumeration") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unit;
  double worst = 0.0;
  int trials = 0;
  for (std::size_t nodes = 2; nodes <= 12; ++nodes) {
    for (int k = 0; k < (nodes <= 8 ? 20 : 4); ++k) {
      const double gc = 77.0, area = 1e-3, ell = 1e-3 + 3e-3 * unit(rng);
      const double onset = 3.0 * gc * area / (16.0 * ell);
      std::vector<double> y(nodes - 1), floors(nodes);
      for (auto& v : y) v = onset * 3.0 * unit(rng) * unit(rng);
      for (auto& f : floors) f = unit(rng) < 0.3 ? 0.8 * unit(rng) : 0.0;
      if (unit(rng) < 0.2) floors[static_cast<std::size_t>(unit(rng) * nodes)] = 1.0;
      const auto sys = assemble_damage_system(y, 0.5e-3 + 1e-3 * unit(rng), gc, area, ell, floors);
      const auto vi = solve_damage_vi(sys);
      const auto bf = oracle::brute_force_box_qp(sys);
      REQUIRE(bf.x.size() == nodes);
      for (std::size_t i = 0; i < nodes; ++i) worst = std::max(worst, std::abs(vi.x[i] - bf.x[i]));
      CHECK(vi.kkt_residual <= 1e-10);
      ++trials;
    }
  }
  CHECK(trials > 100);
  CHECK(worst <= 1e-10);
}

TEST_CASE("VI solution is box feasible and complementary") {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> unit;
  for (int k = 0; k < 50; ++k) {
    const std::size_t n = 200;
    std::vector<double> y(n - 1), floors(n);
    for (auto& v : y) v = 2e4 * unit(rng) * unit(rng) * unit(rng);
    for (auto& f : floors) f = unit(rng) < 0.1 ? unit(rng) : 0.0;
    const auto sys = assemble_damage_system(y, 0.5e-3, 77.0, 1e-3, 1e-3, floors);
    const auto r = solve_damage_vi(sys);
    const auto grad = sys.gradient(r.x);
    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) scale = std::max({scale, std::abs(sys.rhs[i]), sys.diag[i]});
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(r.x[i] >= floors[i]);
      CHECK(r.x[i] <= 1.0);
      if (r.x[i] > floors[i] && r.x[i] < 1.0) CHECK(std::abs(grad[i]) <= 1e-10 * scale);
      else if (r.x[i] == floors[i] && r.x[i] < 1.0) CHECK(grad[i] >= -1e-10 * scale);
      else if (r.x[i] == 1.0 && floors[i] < 1.0) CHECK(grad[i] <= 1e-10 * scale);
    }
  }
}

TEST_CASE("inconsistent bounds are rejected") {
  DamageSystem s;
  s.diag = {1.0, 1.0};
  s.off = {0.0};
  s.rhs = {0.0, 0.0};
  s.lower = {0.0, 0.6};
  s.upper = {1.0, 0.5};
  CHECK_THROWS_AS(solve_damage_vi(s), Error);
}

TEST_CASE("dissipation of a single developed crack approaches Gc A") {
  const double gc = 77.0, area = 1e-3, ell = 4e-3;
  double prev_err = 1.0;
  for (double he : {ell / 2.0, ell / 4.0, ell / 10.0}) {
    const std::size_t n = static_cast<std::size_t>(std::lround(10.0 * ell / he)) * 2 + 1;
    std::vector<double> y(n - 1, 0.0), floors(n, 0.0);
    floors[n / 2] = 1.0;
    const auto sys = assemble_damage_system(y, he, gc, area, ell, floors);
    const auto r = solve_damage_vi(sys);
    const double energy = sys.objective(r.x);
    const double err = std::abs(energy - gc * area) / (gc * area);
    CHECK(err <= prev_err);
    prev_err = err;
  }
  CHECK(prev_err <= 0.05);
}
