#pragma once

// Layer-wise Timoshenko discretization of a laminated beam. Each layer carries
// (u, w, phi); w is shared by all layers and the polymer (u, phi) are
// eliminated through interlayer displacement continuity, leaving
// 1 + 2 * (glass layer count) independent fields per node.
//
// Local fiber coordinate z points downwards in every layer, so the bottom
// fiber sits at z = +h/2 and a sagging beam has w > 0 at the load points.
//
// Sign convention for the strain split: <e>+ = max(e, 0) and <e>- = min(e, 0),
// so <e>+ + <e>- = e. A fiber with e = 0 is assigned to the tensile branch.

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <Eigen/SparseCholesky>
#include <array>
#include <cstddef>
#include <optional>
#include <vector>

#include "lgfrac/laminate.hpp"

namespace lgfrac {

struct Mesh1D {
  std::vector<double> x;  // node positions, m
  double element_length = 0.0;
  bool symmetric_half = false;
  std::vector<std::size_t> support_nodes;
  std::vector<std::size_t> load_nodes;
  std::optional<std::size_t> symmetry_node;  // last node of a half model
  std::size_t anchor_node = 0;               // axial anchor of a full model

  std::size_t nodes() const { return x.size(); }
  std::size_t elements() const { return x.empty() ? 0 : x.size() - 1; }
};

/// Uniform mesh on [0, L/2] (half) or [0, L]; supports and load points snap to nodes.
Mesh1D build_mesh(const LaminateSpec& spec, double element_length, bool symmetric_half);

/// Node-major numbering: [w, u_1, phi_1, u_2, phi_2, ...] per node, glass layers top to bottom.
class DofMap {
 public:
  DofMap() = default;
  DofMap(std::size_t nodes, std::size_t glass_layers) : nodes_(nodes), glass_(glass_layers) {}

  std::size_t per_node() const { return 1 + 2 * glass_; }
  std::size_t size() const { return nodes_ * per_node(); }
  std::size_t nodes() const { return nodes_; }
  std::size_t glass_layers() const { return glass_; }
  std::size_t w(std::size_t node) const { return node * per_node(); }
  std::size_t u(std::size_t node, std::size_t g) const { return node * per_node() + 1 + 2 * g; }
  std::size_t phi(std::size_t node, std::size_t g) const { return node * per_node() + 2 + 2 * g; }

 private:
  std::size_t nodes_ = 0;
  std::size_t glass_ = 0;
};

struct StateFields {
  Eigen::VectorXd kinematics;
  std::vector<Eigen::VectorXd> damage;  // per glass layer, nodal
  std::vector<Eigen::VectorXd> floor;   // irreversibility lower bounds
};

struct ThicknessQuadrature {
  std::vector<double> points;  // strip midpoints, layer-local z
  double weight = 0.0;         // h / J

  static ThicknessQuadrature midpoint(double thickness, int count);
};

struct GeneralizedStrain {
  double axial = 0.0;      // centerline strain u'
  double curvature = 0.0;  // phi'
  double shear = 0.0;      // phi + w'
};

struct PolymerKinematics {
  Eigen::VectorXd u;
  Eigen::VectorXd phi;
};

struct BeamOptions {
  int thickness_points = 40;
  bool split = true;
  /// Added to (1 - d)^2 on the degraded terms so fully broken elements keep a
  /// positive definite tangent.
  double residual_stiffness = 1e-8;
  /// Young modulus multiplier per glass layer and element; empty means 1.
  std::vector<std::vector<double>> modulus_scaling;
};

/// Result of one element-wise pass: internal force over all DOFs and, when
/// requested, the tangent as triplets.
struct Assembly {
  Eigen::VectorXd internal_force;
  /// Sum of |element contributions| per DOF; the scale of cancellation in internal_force.
  Eigen::VectorXd force_magnitude;
  std::vector<Eigen::Triplet<double>> tangent;
  double energy = 0.0;
};

class BeamModel {
 public:
  BeamModel(LaminateSpec spec, Mesh1D mesh, BeamOptions options = {});

  const LaminateSpec& spec() const { return spec_; }
  const Mesh1D& mesh() const { return mesh_; }
  const DofMap& dofs() const { return dofs_; }
  const BeamOptions& options() const { return options_; }
  std::size_t glass_count() const { return glass_.size(); }
  /// Index into spec().layers of glass layer g.
  std::size_t glass_layer(std::size_t g) const { return glass_[g]; }
  SectionProperties section(std::size_t layer) const { return sections_[layer]; }
  const ThicknessQuadrature& quadrature(std::size_t layer) const { return quadrature_[layer]; }

  /// Quasi-elastic interlayer moduli at the given loading time and temperature.
  void set_time(double time, double temperature);
  double polymer_shear_modulus(std::size_t layer) const { return polymer_g_[layer]; }

  StateFields zero_state() const;

  GeneralizedStrain layer_strain(const Eigen::VectorXd& q, std::size_t layer,
                                 std::size_t element) const;
  /// Normal strain u' + z phi' at element midpoint; z in [-h/2, h/2].
  double fiber_strain(const Eigen::VectorXd& q, std::size_t layer, std::size_t element,
                      double z) const;
  double element_damage(const StateFields& s, std::size_t g, std::size_t element) const;
  double glass_modulus(std::size_t g, std::size_t element) const;

  /// Internal force (and tangent if requested) at fixed damage.
  Assembly assemble(const Eigen::VectorXd& q, const std::vector<Eigen::VectorXd>& damage,
                    bool with_tangent) const;
  double energy(const Eigen::VectorXd& q, const std::vector<Eigen::VectorXd>& damage) const;
  /// Stored energy of the full (not half) beam.
  double stored_energy(const StateFields& s) const;
  /// Regularized dissipated energy of the full beam.
  double dissipated_energy(const StateFields& s) const;
  /// 2 for the half model, 1 otherwise.
  double symmetry_factor() const { return mesh_.symmetric_half ? 2.0 : 1.0; }

  /// Nodal displacement map of layer `layer`: u and phi as linear functionals of node DOFs.
  const Eigen::VectorXd& axial_map(std::size_t layer) const { return u_map_[layer]; }
  const Eigen::VectorXd& rotation_map(std::size_t layer) const { return phi_map_[layer]; }

 private:
  struct LayerOperator {
    Eigen::VectorXd axial, curvature, shear;  // rows over the 2 * per_node element DOFs
  };

  template <bool WithTangent>
  void element_pass(const Eigen::VectorXd& q, const std::vector<Eigen::VectorXd>& damage,
                    Assembly& out) const;

  LaminateSpec spec_;
  Mesh1D mesh_;
  BeamOptions options_;
  DofMap dofs_;
  std::vector<std::size_t> glass_;
  std::vector<int> glass_of_layer_;  // -1 for polymer
  std::vector<SectionProperties> sections_;
  std::vector<ThicknessQuadrature> quadrature_;
  std::vector<Eigen::VectorXd> u_map_, phi_map_;
  std::vector<LayerOperator> ops_;
  std::vector<double> polymer_g_;
};

std::vector<PolymerKinematics> reconstruct_polymer_kinematics(const BeamModel& model,
                                                              const StateFields& state);

/// Fiber strain at an arbitrary x, using the element containing x.
double strain_at_fiber(const BeamModel& model, const StateFields& state, std::size_t layer,
                       double x, double z);

/// Prescribed DOFs and the DOFs whose constraint forces make up the reactions.
struct BoundarySet {
  std::vector<std::size_t> fixed;   // DOF indices
  std::vector<double> values;       // prescribed values, same order
  std::vector<std::size_t> load_dofs;
  std::vector<std::size_t> support_dofs;
};

/// w = 0 at supports, w = prescribed at load points, u = phi = 0 for every glass
/// layer at the symmetry node (half model) or u = 0 for the top layer at the
/// anchor node (full model).
BoundarySet four_point_boundary(const BeamModel& model, double prescribed_deflection);

struct NewtonSettings {
  double tolerance = 1e-12;
  int max_iterations = 60;
  /// Consecutive residual increases tolerated before declaring divergence.
  int divergence_window = 8;
};

struct EquilibriumResult {
  double reaction = 0.0;          // total load (doubled for the half model), N
  double support_reaction = 0.0;  // same convention at the supports
  int iterations = 0;
  double residual = 0.0;  // final relative residual
};

/// Newton solver on the free DOFs. Keeps the symbolic factorization across
/// solves; the constrained DOF set must not change between calls.
class EquilibriumSolver {
 public:
  EquilibriumSolver(const BeamModel& model, const std::vector<std::size_t>& fixed_dofs,
                    NewtonSettings settings = {});

  EquilibriumResult solve(Eigen::VectorXd& q, const std::vector<Eigen::VectorXd>& damage,
                          const BoundarySet& bc);

 private:
  const BeamModel& model_;
  NewtonSettings settings_;
  std::vector<long> free_index_;  // -1 when constrained
  long free_count_ = 0;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt_;
  bool analyzed_ = false;
};

/// One-shot convenience wrapper around EquilibriumSolver.
EquilibriumResult solve_equilibrium(const BeamModel& model, StateFields& state,
                                    const BoundarySet& bc, NewtonSettings settings = {});

}  // namespace lgfrac
