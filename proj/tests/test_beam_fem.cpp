#include <doctest.h>

#include <cmath>
#include <random>

#include "lgfrac/beam_fem.hpp"
#include "lgfrac/error.hpp"
#include "lgfrac/staggered.hpp"
#include "oracles.hpp"

using namespace lgfrac;

namespace {

BeamModel coarse_five_layer(double he = 50e-3, bool half = true, bool split = true,
                            double eta = 1e-8) {
  Discretization disc;
  disc.element_length = he;
  disc.thickness_points = 40;
  disc.symmetric_half = half;
  SolverSettings s;
  s.split = split;
  s.residual_stiffness = eta;
  return make_model(presets::five_layer(), disc, s);
}

struct RandomState {
  Eigen::VectorXd q;
  std::vector<Eigen::VectorXd> damage;
};

RandomState random_state(const BeamModel& model, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unit;
  RandomState s;
  s.q.resize(static_cast<long>(model.dofs().size()));
  for (std::size_t i = 0; i < model.dofs().nodes(); ++i) {
    s.q(static_cast<long>(model.dofs().w(i))) = 1e-3 * normal(rng);
    for (std::size_t g = 0; g < model.glass_count(); ++g) {
      s.q(static_cast<long>(model.dofs().u(i, g))) = 1e-5 * normal(rng);
      s.q(static_cast<long>(model.dofs().phi(i, g))) = 1e-3 * normal(rng);
    }
  }
  for (std::size_t g = 0; g < model.glass_count(); ++g) {
    Eigen::VectorXd d(static_cast<long>(model.dofs().nodes()));
    for (long i = 0; i < d.size(); ++i) d(i) = unit(rng);
    s.damage.push_back(d);
  }
  return s;
}

}  // namespace

TEST_CASE("mesh construction") {
  auto spec = presets::five_layer();
  spec.overhang = 0.0;
  auto m = build_mesh(spec, 0.5e-3, true);
  CHECK(m.elements() == 1000);
  CHECK(m.nodes() == 1001);
  CHECK(m.x.back() == doctest::Approx(0.5));
  spec.overhang = 50e-3;
  CHECK(build_mesh(spec, 0.5e-3, true).elements() == 1100);
  spec.overhang = 0.0;
  auto full = build_mesh(spec, 0.5, false);
  CHECK(full.elements() == 2);
  for (std::size_t i = 1; i < m.nodes(); ++i) CHECK(m.x[i] > m.x[i - 1]);
  CHECK_THROWS_AS(build_mesh(spec, 0.3, true), ConfigError);
}

TEST_CASE("thickness quadrature") {
  const auto q = ThicknessQuadrature::midpoint(6e-3, 40);
  CHECK(q.points.size() == 40);
  CHECK(q.weight * 40 == doctest::Approx(6e-3));
  for (std::size_t j = 0; j < 40; ++j) CHECK(q.points[j] == doctest::Approx(-q.points[39 - j]));
}

TEST_CASE("polymer kinematics from interface continuity") {
  const auto model = coarse_five_layer();
  auto state = model.zero_state();
  auto pk = reconstruct_polymer_kinematics(model, state);
  REQUIRE(pk.size() == 2);
  CHECK(pk[0].u.cwiseAbs().maxCoeff() == 0.0);

  for (std::size_t i = 0; i < model.dofs().nodes(); ++i)
    for (std::size_t g = 0; g < 3; ++g) state.kinematics(static_cast<long>(model.dofs().u(i, g))) = 2e-4;
  pk = reconstruct_polymer_kinematics(model, state);
  CHECK(pk[1].u(3) == doctest::Approx(2e-4).epsilon(1e-14));
  CHECK(std::abs(pk[1].phi(3)) < 1e-14);

  // Glass 5 mm / polymer 2 mm / glass 5 mm with the example rotations.
  auto spec = presets::stack(std::vector<double>{5, 2, 5}, presets::float_glass(), constant_polymer(1e6));
  BeamModel three(spec, build_mesh(spec, 0.25, true));
  auto s3 = three.zero_state();
  s3.kinematics(static_cast<long>(three.dofs().u(0, 0))) = -0.025;
  s3.kinematics(static_cast<long>(three.dofs().phi(0, 0))) = 0.01;
  s3.kinematics(static_cast<long>(three.dofs().u(0, 1))) = 0.025;
  s3.kinematics(static_cast<long>(three.dofs().phi(0, 1))) = 0.01;
  const auto p3 = reconstruct_polymer_kinematics(three, s3);
  const auto [um, pm] = oracle::polymer_from_continuity(-0.025, 0.01, 5e-3, 0.025, 0.01, 5e-3, 2e-3);
  CHECK(p3[0].u(0) == doctest::Approx(um).epsilon(1e-13));
  CHECK(p3[0].phi(0) == doctest::Approx(pm).epsilon(1e-13));
}

TEST_CASE("fiber strain") {
  auto spec = presets::single_layer_benchmark();
  BeamModel model(spec, build_mesh(spec, 0.05, false));
  auto s = model.zero_state();
  for (std::size_t i = 0; i < model.dofs().nodes(); ++i) {
    const double x = model.mesh().x[i];
    s.kinematics(static_cast<long>(model.dofs().u(i, 0))) = 1e-4 * x;
    s.kinematics(static_cast<long>(model.dofs().phi(i, 0))) = 2e-2 * x;
  }
  CHECK(strain_at_fiber(model, s, 0, 0.33, 5e-3) == doctest::Approx(2e-4).epsilon(1e-12));
  CHECK(strain_at_fiber(model, s, 0, 0.33, 0.0) == doctest::Approx(1e-4).epsilon(1e-12));
  CHECK_THROWS_AS(strain_at_fiber(model, s, 0, 0.33, 11e-3), Error);
}

TEST_CASE("zero state gives zero residual") {
  const auto model = coarse_five_layer();
  const auto s = model.zero_state();
  const auto a = model.assemble(s.kinematics, s.damage, false);
  CHECK(a.internal_force.cwiseAbs().maxCoeff() == 0.0);
  CHECK(a.energy == 0.0);
}

TEST_CASE("reduced residual equals the full-DOF residual mapped to independent DOFs") {
  std::mt19937_64 rng(11);
  for (bool split : {true, false}) {
    auto model = coarse_five_layer(50e-3, true, split);
    model.set_time(600.0, 23.0);
    for (int k = 0; k < 10; ++k) {
      const auto s = random_state(model, rng);
      const Eigen::VectorXd r = model.assemble(s.q, s.damage, false).internal_force;
      const Eigen::VectorXd ref = oracle::reduced_residual_via_full(model, s.q, s.damage);
      CHECK((r - ref).norm() <= 1e-10 * ref.norm());
    }
  }
}

TEST_CASE("tangent matches finite differences at random states") {
  std::mt19937_64 rng(12);
  const auto model = coarse_five_layer();
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    const auto s = random_state(model, rng);
    worst = std::max(worst, oracle::tangent_fd_error(model, s.q, s.damage, rng));
  }
  CHECK(worst <= 1e-5);
}

TEST_CASE("split with zero damage reproduces the unsplit energy") {
  std::mt19937_64 rng(13);
  const auto with = coarse_five_layer(50e-3, true, true, 0.0);
  const auto without = coarse_five_layer(50e-3, true, false, 0.0);
  for (int k = 0; k < 10; ++k) {
    auto s = random_state(with, rng);
    for (auto& d : s.damage) d.setZero();
    const double a = with.energy(s.q, s.damage);
    const double b = without.energy(s.q, s.damage);
    CHECK(std::abs(a - b) <= 1e-13 * b);
    const auto fa = with.assemble(s.q, s.damage, false).internal_force;
    const auto fb = without.assemble(s.q, s.damage, false).internal_force;
    CHECK((fa - fb).norm() <= 1e-13 * fb.norm());
  }
}

TEST_CASE("a fully damaged element still carries compression") {
  auto spec = presets::single_layer_benchmark();
  BeamModel model(spec, build_mesh(spec, 0.25, true));
  REQUIRE(model.mesh().elements() == 2);
  auto s = model.zero_state();
  s.damage[0].setOnes();
  const double eps = 1e-4;
  const double ea = spec.layers[0].glass().young_modulus * spec.width * spec.layers[0].thickness;
  for (std::size_t i = 0; i < model.dofs().nodes(); ++i)
    s.kinematics(static_cast<long>(model.dofs().u(i, 0))) = -eps * model.mesh().x[i];
  auto a = model.assemble(s.kinematics, s.damage, false);
  CHECK(a.internal_force(static_cast<long>(model.dofs().u(2, 0))) == doctest::Approx(-ea * eps).epsilon(1e-12));
  s.kinematics *= -1.0;
  a = model.assemble(s.kinematics, s.damage, false);
  CHECK(std::abs(a.internal_force(static_cast<long>(model.dofs().u(2, 0)))) <= 1.1e-8 * ea * eps);
}

TEST_CASE("slender cantilever matches the Timoshenko closed form") {
  auto spec = presets::single_layer_benchmark();
  const double length = 1.0;
  const double h = spec.layers[0].thickness;
  REQUIRE(length / h == doctest::Approx(50.0));
  Mesh1D mesh;
  const int n = 100;
  for (int i = 0; i <= n; ++i) mesh.x.push_back(length * i / n);
  mesh.element_length = length / n;
  mesh.support_nodes = {0};
  mesh.load_nodes = {static_cast<std::size_t>(n)};
  BeamModel model(spec, mesh);
  const auto& dofs = model.dofs();
  const double tip = 1e-3;
  BoundarySet bc;
  bc.fixed = {dofs.w(0), dofs.u(0, 0), dofs.phi(0, 0), dofs.w(n)};
  bc.values = {0.0, 0.0, 0.0, tip};
  bc.load_dofs = {dofs.w(n)};
  bc.support_dofs = {dofs.w(0)};
  auto state = model.zero_state();
  const auto r = solve_equilibrium(model, state, bc);
  const auto& g = spec.layers[0].glass();
  const auto sec = section_properties(spec.width, h);
  const double compliance = length * length * length / (3.0 * g.young_modulus * sec.second_moment) +
                            length / (g.shear_modulus() * sec.shear_area);
  CHECK(tip / r.reaction == doctest::Approx(compliance).epsilon(0.01));
  CHECK(std::abs(r.reaction + r.support_reaction) <= 1e-8 * std::abs(r.reaction));
}

TEST_CASE("single layer at the analytic failure deflection reaches the strength") {
  const auto spec = presets::single_layer_benchmark();
  BeamModel model(spec, build_mesh(spec, 0.5e-3, true));
  auto state = model.zero_state();
  const auto r = solve_equilibrium(model, state, four_point_boundary(model, 6e-3));
  const double e = spec.layers[0].glass().young_modulus;
  const double sigma = e * strain_at_fiber(model, state, 0, 0.4999, 0.5 * spec.layers[0].thickness);
  CHECK(sigma == doctest::Approx(45e6).epsilon(5e-3));
  CHECK(r.reaction > 0.0);
  CHECK(std::abs(r.reaction + r.support_reaction) <= 1e-8 * r.reaction);
}

TEST_CASE("zero prescribed deflection gives zero fields") {
  const auto model = coarse_five_layer();
  auto state = model.zero_state();
  const auto r = solve_equilibrium(model, state, four_point_boundary(model, 0.0));
  CHECK(r.reaction == 0.0);
  CHECK(state.kinematics.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("5LG small-load stiffness lies between the layered and monolithic bounds") {
  Discretization disc;
  disc.element_length = 2e-3;
  auto model = make_model(presets::five_layer(), disc, SolverSettings{});
  model.set_time(3.0, 23.0);
  auto state = model.zero_state();
  const double w = 1e-5;
  const auto r = solve_equilibrium(model, state, four_point_boundary(model, w));
  const auto& spec = model.spec();
  const double lower = oracle::four_point_stiffness(
      oracle::layered_bending_stiffness(spec, model.polymer_shear_modulus(1)), spec.span, spec.load_offset);
  const double upper = oracle::four_point_stiffness(oracle::monolithic_bending_stiffness(spec),
                                                    spec.span, spec.load_offset);
  CHECK(r.reaction / w > lower);
  CHECK(r.reaction / w < upper);
}

TEST_CASE("non-finite state is reported") {
  const auto model = coarse_five_layer();
  auto s = model.zero_state();
  s.kinematics(1) = std::numeric_limits<double>::quiet_NaN();
  try {
    (void)model.assemble(s.kinematics, s.damage, true);
    FAIL("expected an assembly error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::assembly);
    CHECK(std::string(e.what()).find("element 0") != std::string::npos);
  }
}
