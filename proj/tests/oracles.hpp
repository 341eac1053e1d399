#pragma once

// Independent reference computations used by the unit tests and the
// acceptance runner. Nothing here calls into the code it checks except to
// read inputs (spec, mesh, state).

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "lgfrac/beam_fem.hpp"
#include "lgfrac/damage.hpp"

namespace oracle {

// Interface continuity solved directly: for polymer layer m between glass
// layers a (above) and b (below), with z pointing down,
//   u_m - h_m/2 phi_m = u_a + h_a/2 phi_a
//   u_m + h_m/2 phi_m = u_b - h_b/2 phi_b
inline std::pair<double, double> polymer_from_continuity(double ua, double pa, double ha,
                                                         double ub, double pb, double hb,
                                                         double hm) {
  Eigen::Matrix2d a;
  a << 1.0, -0.5 * hm, 1.0, 0.5 * hm;
  Eigen::Vector2d r(ua + 0.5 * ha * pa, ub - 0.5 * hb * pb);
  const Eigen::Vector2d x = a.fullPivLu().solve(r);
  return {x(0), x(1)};
}

// Residual of the reduced system from a full-DOF assembly: every layer has its
// own (u, phi) at each node, w is shared, and the polymer DOFs are tied to the
// glass DOFs by the continuity relations above. The reduced residual is
// T^T r_full with T the (linear) reduced-to-full map, built here by probing
// the continuity solve with unit vectors.
inline Eigen::VectorXd reduced_residual_via_full(const lgfrac::BeamModel& model,
                                                 const Eigen::VectorXd& q,
                                                 const std::vector<Eigen::VectorXd>& damage) {
  const auto& spec = model.spec();
  const auto& mesh = model.mesh();
  const auto& dofs = model.dofs();
  const std::size_t nl = spec.layers.size();
  const std::size_t nn = mesh.nodes();
  const std::size_t fpn = 1 + 2 * nl;  // full DOFs per node: w, (u_m, phi_m) for all layers
  const double he = mesh.element_length;
  const double eta = model.options().residual_stiffness;

  std::vector<int> glass_index(nl, -1);
  for (std::size_t g = 0; g < model.glass_count(); ++g)
    glass_index[model.glass_layer(g)] = static_cast<int>(g);

  // Reduced-to-full map at one node (rows: full node DOFs, cols: reduced node DOFs).
  const std::size_t rpn = dofs.per_node();
  Eigen::MatrixXd tnode = Eigen::MatrixXd::Zero(static_cast<long>(fpn), static_cast<long>(rpn));
  for (std::size_t k = 0; k < rpn; ++k) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(static_cast<long>(rpn));
    e(static_cast<long>(k)) = 1.0;
    std::vector<double> u(nl), p(nl);
    for (std::size_t m = 0; m < nl; ++m)
      if (glass_index[m] >= 0) {
        u[m] = e(static_cast<long>(1 + 2 * glass_index[m]));
        p[m] = e(static_cast<long>(2 + 2 * glass_index[m]));
      }
    for (std::size_t m = 1; m + 1 < nl; m += 2) {
      const auto [um, pm] = polymer_from_continuity(u[m - 1], p[m - 1], spec.layers[m - 1].thickness,
                                                    u[m + 1], p[m + 1], spec.layers[m + 1].thickness,
                                                    spec.layers[m].thickness);
      u[m] = um;
      p[m] = pm;
    }
    tnode(0, static_cast<long>(k)) = e(0);
    for (std::size_t m = 0; m < nl; ++m) {
      tnode(static_cast<long>(1 + 2 * m), static_cast<long>(k)) = u[m];
      tnode(static_cast<long>(2 + 2 * m), static_cast<long>(k)) = p[m];
    }
  }

  Eigen::VectorXd full_q(static_cast<long>(nn * fpn));
  for (std::size_t i = 0; i < nn; ++i)
    full_q.segment(static_cast<long>(i * fpn), static_cast<long>(fpn)) =
        tnode * q.segment(static_cast<long>(i * rpn), static_cast<long>(rpn));

  Eigen::VectorXd rf = Eigen::VectorXd::Zero(full_q.size());
  auto at = [&](std::size_t node, std::size_t local) { return static_cast<long>(node * fpn + local); };
  for (std::size_t e = 0; e < mesh.elements(); ++e) {
    const std::size_t a = e, b = e + 1;
    const double wp = (full_q(at(b, 0)) - full_q(at(a, 0))) / he;
    for (std::size_t m = 0; m < nl; ++m) {
      const auto& layer = spec.layers[m];
      const double h = layer.thickness;
      const double ua = full_q(at(a, 1 + 2 * m)), ub = full_q(at(b, 1 + 2 * m));
      const double pa = full_q(at(a, 2 + 2 * m)), pb = full_q(at(b, 2 + 2 * m));
      const double eps0 = (ub - ua) / he, kappa = (pb - pa) / he;
      const double gamma = 0.5 * (pa + pb) + wp;
      double n = 0.0, mom = 0.0, v = 0.0;
      const double area = spec.width * h;
      const double inertia = spec.width * h * h * h / 12.0;
      const double shear_area = 5.0 / 6.0 * spec.width * h;
      if (glass_index[m] >= 0) {
        const auto g = static_cast<std::size_t>(glass_index[m]);
        const double young = model.glass_modulus(g, e);
        const double dm = 0.5 * (damage[g](static_cast<long>(a)) + damage[g](static_cast<long>(b)));
        const double deg = (1.0 - dm) * (1.0 - dm) + eta;
        const int strips = model.options().thickness_points;
        const double dz = h / strips;
        for (int j = 0; j < strips; ++j) {
          const double z = -0.5 * h + (j + 0.5) * dz;
          const double eps = eps0 + z * kappa;
          const double c = young * spec.width * dz * ((model.options().split && eps < 0.0) ? 1.0 : deg);
          n += c * eps;
          mom += c * eps * z;
        }
        const double gmod = young / (2.0 * (1.0 + layer.glass().poisson_ratio));
        v = deg * gmod * shear_area * gamma;
      } else {
        const double gp = model.polymer_shear_modulus(m);
        const double ep = 2.0 * (1.0 + layer.polymer().poisson_ratio) * gp;
        n = ep * area * eps0;
        mom = ep * inertia * kappa;
        v = gp * shear_area * gamma;
      }
      // d(he * psi) / d(node DOFs) with one-point integration.
      rf(at(a, 1 + 2 * m)) -= n;
      rf(at(b, 1 + 2 * m)) += n;
      rf(at(a, 2 + 2 * m)) += -mom + 0.5 * he * v;
      rf(at(b, 2 + 2 * m)) += mom + 0.5 * he * v;
      rf(at(a, 0)) -= v;
      rf(at(b, 0)) += v;
    }
  }

  Eigen::VectorXd rr(q.size());
  for (std::size_t i = 0; i < nn; ++i)
    rr.segment(static_cast<long>(i * rpn), static_cast<long>(rpn)) =
        tnode.transpose() * rf.segment(static_cast<long>(i * fpn), static_cast<long>(fpn));
  return rr;
}

// Relative error of the assembled tangent against central differences of the
// assembled residual along a random direction. The step is shrunk below
// `step` when needed so that no glass fiber changes sign.
inline double tangent_fd_error(const lgfrac::BeamModel& model, const Eigen::VectorXd& q,
                               const std::vector<Eigen::VectorXd>& damage, std::mt19937_64& rng,
                               double step = 1e-6) {
  const long n = q.size();
  std::normal_distribution<double> normal;
  Eigen::VectorXd dir(n);
  for (long i = 0; i < n; ++i) dir(i) = normal(rng);
  dir *= std::max(q.norm(), 1e-6) / dir.norm();
  const auto a = model.assemble(q, damage, true);
  Eigen::SparseMatrix<double> k(n, n);
  k.setFromTriplets(a.tangent.begin(), a.tangent.end());
  const Eigen::VectorXd kd = k * dir;
  // Keep every glass fiber on its side of the tension/compression kink.
  double t = step;
  for (std::size_t g = 0; g < model.glass_count(); ++g) {
    const std::size_t m = model.glass_layer(g);
    for (std::size_t e = 0; e < model.mesh().elements(); ++e)
      for (double z : model.quadrature(m).points) {
        const double eps = model.fiber_strain(q, m, e, z);
        const double deps = model.fiber_strain(dir, m, e, z);
        if (deps != 0.0) t = std::min(t, 0.5 * std::abs(eps / deps));
      }
  }
  const Eigen::VectorXd rp = model.assemble(q + t * dir, damage, false).internal_force;
  const Eigen::VectorXd rm = model.assemble(q - t * dir, damage, false).internal_force;
  const Eigen::VectorXd fd = (rp - rm) / (2.0 * t);
  return (fd - kd).norm() / std::max(kd.norm(), std::numeric_limits<double>::min());
}

struct BoxQpSolution {
  std::vector<double> x;
  double objective = std::numeric_limits<double>::infinity();
};

// Exhaustive enumeration of the 3^n working sets (lower / upper / free) of
// min 1/2 x'Hx - f'x on a box; keeps the feasible stationary point with the
// smallest objective. Dense solves, n <= 12.
inline BoxQpSolution brute_force_box_qp(const lgfrac::DamageSystem& s) {
  const int n = static_cast<int>(s.size());
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd f(n), lo(n), hi(n);
  for (int i = 0; i < n; ++i) {
    h(i, i) = s.diag[static_cast<std::size_t>(i)];
    if (i + 1 < n) h(i, i + 1) = h(i + 1, i) = s.off[static_cast<std::size_t>(i)];
    f(i) = s.rhs[static_cast<std::size_t>(i)];
    lo(i) = s.lower[static_cast<std::size_t>(i)];
    hi(i) = s.upper[static_cast<std::size_t>(i)];
  }
  BoxQpSolution best;
  long total = 1;
  for (int i = 0; i < n; ++i) total *= 3;
  std::vector<int> state(static_cast<std::size_t>(n));
  for (long code = 0; code < total; ++code) {
    long c = code;
    std::vector<int> free_idx;
    Eigen::VectorXd x(n);
    for (int i = 0; i < n; ++i) {
      state[static_cast<std::size_t>(i)] = static_cast<int>(c % 3);
      c /= 3;
      if (state[static_cast<std::size_t>(i)] == 0) x(i) = lo(i);
      else if (state[static_cast<std::size_t>(i)] == 1) x(i) = hi(i);
      else free_idx.push_back(i);
    }
    if (!free_idx.empty()) {
      const int k = static_cast<int>(free_idx.size());
      Eigen::MatrixXd hf(k, k);
      Eigen::VectorXd rhs(k);
      for (int a = 0; a < k; ++a) {
        rhs(a) = f(free_idx[static_cast<std::size_t>(a)]);
        for (int j = 0; j < n; ++j)
          if (state[static_cast<std::size_t>(j)] != 2) rhs(a) -= h(free_idx[static_cast<std::size_t>(a)], j) * x(j);
        for (int b = 0; b < k; ++b)
          hf(a, b) = h(free_idx[static_cast<std::size_t>(a)], free_idx[static_cast<std::size_t>(b)]);
      }
      const Eigen::VectorXd y = hf.ldlt().solve(rhs);
      for (int a = 0; a < k; ++a) x(free_idx[static_cast<std::size_t>(a)]) = y(a);
    }
    bool feasible = true;
    for (int i = 0; i < n; ++i)
      if (x(i) < lo(i) - 1e-14 || x(i) > hi(i) + 1e-14) feasible = false;
    if (!feasible) continue;
    const double obj = 0.5 * x.dot(h * x) - f.dot(x);
    if (obj < best.objective) {
      best.objective = obj;
      best.x.assign(x.data(), x.data() + n);
    }
  }
  return best;
}

// Euler-Bernoulli four-point bending: load-point stiffness P / w of a simply
// supported span L with the two loads P/2 at distance a from the supports.
inline double four_point_stiffness(double bending_stiffness, double span, double a) {
  return 12.0 * bending_stiffness / (a * a * (3.0 * span - 4.0 * a));
}

// Bending stiffness of the stack acting as independent layers.
inline double layered_bending_stiffness(const lgfrac::LaminateSpec& spec, double polymer_shear) {
  double ei = 0.0;
  for (const auto& l : spec.layers) {
    const double i = spec.width * l.thickness * l.thickness * l.thickness / 12.0;
    if (l.kind() == lgfrac::LayerKind::glass)
      ei += l.glass().young_modulus * i;
    else
      ei += 2.0 * (1.0 + l.polymer().poisson_ratio) * polymer_shear * i;
  }
  return ei;
}

// Bending stiffness of a monolithic glass section of the total thickness.
inline double monolithic_bending_stiffness(const lgfrac::LaminateSpec& spec) {
  const double h = spec.total_thickness();
  double e = 0.0;
  for (const auto& l : spec.layers)
    if (l.kind() == lgfrac::LayerKind::glass) e = l.glass().young_modulus;
  return e * spec.width * h * h * h / 12.0;
}

}  // namespace oracle
