#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "lgfrac/beam_fem.hpp"

namespace lgfrac {

enum class DrivingForceKind {
  rankine,         // 1/2 E A max(<e_top>+^2, <e_bottom>+^2)
  tensile_energy,  // cross-section tensile energy; comparison only
};

/// Per glass layer, one value per element (midpoint quadrature), J/m.
struct DrivingForceField {
  std::vector<std::vector<double>> per_layer;
};

DrivingForceField driving_force(const BeamModel& model, const StateFields& state,
                                DrivingForceKind kind = DrivingForceKind::rankine);

/// Box-constrained quadratic  min 1/2 x'Hx - f'x,  lower <= x <= upper,
/// with H symmetric tridiagonal.
struct DamageSystem {
  std::vector<double> diag;
  std::vector<double> off;  // off[i] couples nodes i and i + 1
  std::vector<double> rhs;
  std::vector<double> lower;
  std::vector<double> upper;

  std::size_t size() const { return diag.size(); }
  /// H x - f
  std::vector<double> gradient(std::span<const double> x) const;
  double objective(std::span<const double> x) const;
};

/// Stationarity of  sum_e h (d_mid - 1)^2 Y_e + 3/8 Gc A sum_e h (d_mid / l + l d'^2)
/// on a uniform linear mesh with midpoint quadrature; upper bounds are 1.
DamageSystem assemble_damage_system(std::span<const double> driving_force, double element_length,
                                    double fracture_energy, double area, double length_scale,
                                    std::span<const double> floors);

struct VIResult {
  std::vector<double> x;
  int iterations = 0;
  double kkt_residual = 0.0;  // scaled, see solve_damage_vi
};

/// Primal active-set method for the box QP; finite termination, ties broken
/// by lowest node index. `warm_start` (projected onto the box) seeds the
/// working set. The returned KKT residual is the largest violation of
/// stationarity/complementarity relative to max(|f|, |diag|) and must be <= tol.
VIResult solve_damage_vi(const DamageSystem& system, std::span<const double> warm_start = {},
                         double tolerance = 1e-10);

}  // namespace lgfrac
