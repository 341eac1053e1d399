#include "lgfrac/damage.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "lgfrac/error.hpp"

namespace lgfrac {

DrivingForceField driving_force(const BeamModel& model, const StateFields& state,
                                DrivingForceKind kind) {
  DrivingForceField out;
  const auto& q = state.kinematics;
  const std::size_t ne = model.mesh().elements();
  for (std::size_t g = 0; g < model.glass_count(); ++g) {
    const std::size_t m = model.glass_layer(g);
    const auto& layer = model.spec().layers[m];
    const auto sec = model.section(m);
    std::vector<double> y(ne);
    for (std::size_t e = 0; e < ne; ++e) {
      const double young = model.glass_modulus(g, e);
      const auto s = model.layer_strain(q, m, e);
      if (kind == DrivingForceKind::rankine) {
        const double top = std::max(s.axial - 0.5 * layer.thickness * s.curvature, 0.0);
        const double bottom = std::max(s.axial + 0.5 * layer.thickness * s.curvature, 0.0);
        y[e] = 0.5 * young * sec.area * std::max(top * top, bottom * bottom);
      } else {
        const auto& quad = model.quadrature(m);
        double psi = 0.0;
        for (double z : quad.points) {
          const double eps = std::max(s.axial + z * s.curvature, 0.0);
          psi += eps * eps;
        }
        psi *= 0.5 * young * model.spec().width * quad.weight;
        const double shear_mod = young / (2.0 * (1.0 + layer.glass().poisson_ratio));
        psi += 0.5 * shear_mod * sec.shear_area * s.shear * s.shear;
        y[e] = psi;
      }
    }
    out.per_layer.push_back(std::move(y));
  }
  return out;
}

std::vector<double> DamageSystem::gradient(std::span<const double> x) const {
  const std::size_t n = size();
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) {
    double v = diag[i] * x[i] - rhs[i];
    if (i > 0) v += off[i - 1] * x[i - 1];
    if (i + 1 < n) v += off[i] * x[i + 1];
    g[i] = v;
  }
  return g;
}

double DamageSystem::objective(std::span<const double> x) const {
  double v = 0.0;
  const std::size_t n = size();
  for (std::size_t i = 0; i < n; ++i) {
    v += 0.5 * diag[i] * x[i] * x[i] - rhs[i] * x[i];
    if (i + 1 < n) v += off[i] * x[i] * x[i + 1];
  }
  return v;
}

DamageSystem assemble_damage_system(std::span<const double> driving_force, double element_length,
                                    double fracture_energy, double area, double length_scale,
                                    std::span<const double> floors) {
  const std::size_t ne = driving_force.size();
  const std::size_t n = ne + 1;
  if (floors.size() != n)
    throw Error(ErrorCode::invalid_argument, "damage floors must have one value per node");
  DamageSystem s;
  s.diag.assign(n, 0.0);
  s.off.assign(ne, 0.0);
  s.rhs.assign(n, 0.0);
  s.lower.assign(floors.begin(), floors.end());
  s.upper.assign(n, 1.0);

  const double h = element_length;
  const double grad = 0.75 * fracture_energy * area * length_scale / h;
  const double linear = 3.0 / 8.0 * fracture_energy * area / length_scale * 0.5 * h;
  for (std::size_t e = 0; e < ne; ++e) {
    const double y = driving_force[e];
    if (!std::isfinite(y))
      throw Error(ErrorCode::invalid_argument, "non-finite driving force in element " +
                                                   std::to_string(e));
    const double mass = 0.5 * y * h;  // 2 * Y * h * (1/2)(1/2)
    s.diag[e] += mass + grad;
    s.diag[e + 1] += mass + grad;
    s.off[e] += mass - grad;
    s.rhs[e] += y * h - linear;
    s.rhs[e + 1] += y * h - linear;
  }
  return s;
}

namespace {

enum class Bound : signed char { free = 0, lower = -1, upper = 1, pinned = 2 };

// Minimizer over free nodes with the others held at x; result written into y.
void solve_equality(const DamageSystem& s, const std::vector<Bound>& state,
                    const std::vector<double>& x, double pivot_floor, std::vector<double>& y) {
  const std::size_t n = s.size();
  std::vector<double> sub(n, 0.0), dia(n), sup(n, 0.0), r(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (state[i] != Bound::free) {
      dia[i] = 1.0;
      r[i] = x[i];
      continue;
    }
    dia[i] = s.diag[i];
    r[i] = s.rhs[i];
    if (i > 0) {
      if (state[i - 1] == Bound::free)
        sub[i] = s.off[i - 1];
      else
        r[i] -= s.off[i - 1] * x[i - 1];
    }
    if (i + 1 < n) {
      if (state[i + 1] == Bound::free)
        sup[i] = s.off[i];
      else
        r[i] -= s.off[i] * x[i + 1];
    }
  }
  // Thomas algorithm; the free blocks are positive semidefinite, a vanishing
  // pivot (unbounded direction) is lifted to pivot_floor and the ratio test
  // then stops the step at the nearest bound.
  for (std::size_t i = 1; i < n; ++i) {
    double p = dia[i - 1];
    if (std::abs(p) < pivot_floor) p = dia[i - 1] = pivot_floor;
    const double w = sub[i] / p;
    dia[i] -= w * sup[i - 1];
    r[i] -= w * r[i - 1];
  }
  if (std::abs(dia[n - 1]) < pivot_floor) dia[n - 1] = pivot_floor;
  y.resize(n);
  y[n - 1] = r[n - 1] / dia[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) y[i] = (r[i] - sup[i] * y[i + 1]) / dia[i];
}

}  // namespace

VIResult solve_damage_vi(const DamageSystem& s, std::span<const double> warm_start,
                         double tolerance) {
  const std::size_t n = s.size();
  if (n == 0) return {};
  if (s.lower.size() != n || s.upper.size() != n || s.rhs.size() != n || s.off.size() + 1 != n)
    throw Error(ErrorCode::invalid_argument, "damage system has inconsistent sizes");
  for (std::size_t i = 0; i < n; ++i)
    if (!(s.lower[i] <= s.upper[i]))
      throw Error(ErrorCode::invalid_argument,
                  "inconsistent damage bounds at node " + std::to_string(i));

  double scale = std::numeric_limits<double>::min();
  for (std::size_t i = 0; i < n; ++i)
    scale = std::max({scale, std::abs(s.rhs[i]), std::abs(s.diag[i])});
  const double pivot_floor = 1e-14 * scale;

  std::vector<double> x(n);
  std::vector<Bound> state(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x0 = warm_start.size() == n ? warm_start[i] : s.lower[i];
    x[i] = std::clamp(x0, s.lower[i], s.upper[i]);
    if (s.lower[i] == s.upper[i])
      state[i] = Bound::pinned;
    else if (x[i] == s.lower[i])
      state[i] = Bound::lower;
    else if (x[i] == s.upper[i])
      state[i] = Bound::upper;
    else
      state[i] = Bound::free;
  }

  VIResult result;
  std::vector<double> y;
  std::vector<double> trace;
  const int cap = static_cast<int>(20 * n + 200);
  for (int it = 0; it < cap; ++it) {
    solve_equality(s, state, x, pivot_floor, y);
    double step = 0.0, size = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (state[i] != Bound::free) continue;
      step = std::max(step, std::abs(y[i] - x[i]));
      size = std::max(size, std::abs(x[i]));
    }

    if (step <= 1e-13 * size) {
      for (std::size_t i = 0; i < n; ++i)
        if (state[i] == Bound::free) x[i] = y[i];
      const auto g = s.gradient(x);
      double worst = -tolerance * scale;
      std::size_t release = n;
      double kkt = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        double multiplier;
        switch (state[i]) {
          case Bound::lower: multiplier = g[i]; break;
          case Bound::upper: multiplier = -g[i]; break;
          case Bound::free: kkt = std::max(kkt, std::abs(g[i])); continue;
          default: continue;
        }
        kkt = std::max(kkt, -multiplier);
        if (multiplier < worst) {
          worst = multiplier;
          release = i;
        }
      }
      trace.push_back(kkt / scale);
      if (release == n) {
        result.x = std::move(x);
        result.iterations = it + 1;
        result.kkt_residual = kkt / scale;
        return result;
      }
      state[release] = Bound::free;
      continue;
    }

    double alpha = 1.0;
    std::size_t block = n;
    Bound side = Bound::free;
    for (std::size_t i = 0; i < n; ++i) {
      if (state[i] != Bound::free) continue;
      const double p = y[i] - x[i];
      if (p < 0.0) {
        const double t = (s.lower[i] - x[i]) / p;
        if (t < alpha) {
          alpha = t;
          block = i;
          side = Bound::lower;
        }
      } else if (p > 0.0) {
        const double t = (s.upper[i] - x[i]) / p;
        if (t < alpha) {
          alpha = t;
          block = i;
          side = Bound::upper;
        }
      }
    }
    alpha = std::max(alpha, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      if (state[i] == Bound::free) x[i] = std::clamp(x[i] + alpha * (y[i] - x[i]), s.lower[i], s.upper[i]);
    if (block < n) {
      x[block] = side == Bound::lower ? s.lower[block] : s.upper[block];
      state[block] = side;
    }
  }
  throw NonConvergence("damage active-set iteration limit reached", trace);
}

}  // namespace lgfrac
