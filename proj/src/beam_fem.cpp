#include "lgfrac/beam_fem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "lgfrac/error.hpp"

namespace lgfrac {

namespace {

std::size_t snap(const std::vector<double>& x, double h, double pos, const char* what) {
  const double n = std::round(pos / h);
  if (n < 0 || n > static_cast<double>(x.size() - 1))
    throw ConfigError(what, "position lies outside the model");
  const auto node = static_cast<std::size_t>(n);
  if (std::abs(x[node] - pos) > 0.5 * h * (1.0 + 1e-9))
    throw ConfigError(what, "position farther than h_e/2 from any node");
  return node;
}

void push_unique(std::vector<std::size_t>& v, std::size_t n) {
  if (std::find(v.begin(), v.end(), n) == v.end()) v.push_back(n);
}

}  // namespace

Mesh1D build_mesh(const LaminateSpec& spec, double element_length, bool symmetric_half) {
  if (!(element_length > 0.0))
    throw ConfigError("discretization.element_length", "must be > 0");
  const double length = spec.total_length();
  const double model_length = symmetric_half ? 0.5 * length : length;
  const double count = std::round(model_length / element_length);
  if (count < 1.0 || std::abs(count * element_length - model_length) > 1e-6 * element_length)
    throw ConfigError("discretization.element_length",
                        "does not divide the model length into whole elements");

  Mesh1D mesh;
  const auto ne = static_cast<std::size_t>(count);
  mesh.element_length = model_length / count;
  mesh.symmetric_half = symmetric_half;
  mesh.x.resize(ne + 1);
  for (std::size_t i = 0; i <= ne; ++i) mesh.x[i] = model_length * static_cast<double>(i) / count;

  const double h = mesh.element_length;
  push_unique(mesh.support_nodes, snap(mesh.x, h, spec.overhang, "laminate.overhang"));
  push_unique(mesh.load_nodes,
              snap(mesh.x, h, spec.overhang + spec.load_offset, "laminate.load_offset"));
  if (symmetric_half) {
    mesh.symmetry_node = ne;
  } else {
    push_unique(mesh.support_nodes, snap(mesh.x, h, length - spec.overhang, "laminate.overhang"));
    push_unique(mesh.load_nodes, snap(mesh.x, h, length - spec.overhang - spec.load_offset,
                                      "laminate.load_offset"));
    mesh.anchor_node = ne / 2;
  }
  for (auto l : mesh.load_nodes)
    if (std::find(mesh.support_nodes.begin(), mesh.support_nodes.end(), l) !=
        mesh.support_nodes.end())
      throw ConfigError("laminate.load_offset", "load point coincides with a support node");
  return mesh;
}

ThicknessQuadrature ThicknessQuadrature::midpoint(double thickness, int count) {
  if (count < 1) throw Error(ErrorCode::invalid_argument, "thickness quadrature needs J >= 1");
  ThicknessQuadrature q;
  q.weight = thickness / count;
  q.points.resize(static_cast<std::size_t>(count));
  for (int j = 0; j < count; ++j)
    q.points[static_cast<std::size_t>(j)] = -0.5 * thickness + (j + 0.5) * q.weight;
  return q;
}

BeamModel::BeamModel(LaminateSpec spec, Mesh1D mesh, BeamOptions options)
    : spec_(std::move(spec)), mesh_(std::move(mesh)), options_(std::move(options)) {
  spec_.validate();
  glass_ = spec_.glass_indices();
  dofs_ = DofMap(mesh_.nodes(), glass_.size());
  const std::size_t nl = spec_.layers.size();
  const std::size_t nd = dofs_.per_node();

  glass_of_layer_.assign(nl, -1);
  for (std::size_t g = 0; g < glass_.size(); ++g) glass_of_layer_[glass_[g]] = static_cast<int>(g);

  for (std::size_t g = 0; g < options_.modulus_scaling.size(); ++g)
    if (!options_.modulus_scaling[g].empty() &&
        options_.modulus_scaling[g].size() != mesh_.elements())
      throw Error(ErrorCode::invalid_argument, "modulus scaling must have one entry per element");
  if (options_.modulus_scaling.size() > glass_.size())
    throw Error(ErrorCode::invalid_argument, "modulus scaling given for too many glass layers");

  for (const auto& l : spec_.layers) {
    sections_.push_back(section_properties(spec_.width, l.thickness));
    quadrature_.push_back(ThicknessQuadrature::midpoint(l.thickness, options_.thickness_points));
  }

  u_map_.assign(nl, Eigen::VectorXd::Zero(static_cast<long>(nd)));
  phi_map_.assign(nl, Eigen::VectorXd::Zero(static_cast<long>(nd)));
  for (std::size_t g = 0; g < glass_.size(); ++g) {
    u_map_[glass_[g]](static_cast<long>(1 + 2 * g)) = 1.0;
    phi_map_[glass_[g]](static_cast<long>(2 + 2 * g)) = 1.0;
  }
  for (std::size_t m = 1; m + 1 < nl; m += 2) {
    const double ha = spec_.layers[m - 1].thickness;
    const double hp = spec_.layers[m].thickness;
    const double hb = spec_.layers[m + 1].thickness;
    const auto& ua = u_map_[m - 1];
    const auto& pa = phi_map_[m - 1];
    const auto& ub = u_map_[m + 1];
    const auto& pb = phi_map_[m + 1];
    u_map_[m] = 0.5 * (ua + ub) + 0.25 * (ha * pa - hb * pb);
    phi_map_[m] = (ub - ua - 0.5 * ha * pa - 0.5 * hb * pb) / hp;
  }

  const double he = mesh_.element_length;
  const long n = static_cast<long>(nd);
  Eigen::VectorXd ew = Eigen::VectorXd::Zero(n);
  ew(0) = 1.0;
  for (std::size_t m = 0; m < nl; ++m) {
    LayerOperator op;
    op.axial.resize(2 * n);
    op.curvature.resize(2 * n);
    op.shear.resize(2 * n);
    op.axial << -u_map_[m] / he, u_map_[m] / he;
    op.curvature << -phi_map_[m] / he, phi_map_[m] / he;
    op.shear << 0.5 * phi_map_[m] - ew / he, 0.5 * phi_map_[m] + ew / he;
    ops_.push_back(std::move(op));
  }
  polymer_g_.assign(nl, 0.0);
  set_time(0.0, 20.0);
}

void BeamModel::set_time(double time, double temperature) {
  for (std::size_t m = 0; m < spec_.layers.size(); ++m)
    if (spec_.layers[m].kind() == LayerKind::polymer)
      polymer_g_[m] = quasi_elastic_shear_modulus(spec_.layers[m].polymer(), time, temperature);
}

StateFields BeamModel::zero_state() const {
  StateFields s;
  s.kinematics = Eigen::VectorXd::Zero(static_cast<long>(dofs_.size()));
  s.damage.assign(glass_.size(), Eigen::VectorXd::Zero(static_cast<long>(mesh_.nodes())));
  s.floor = s.damage;
  return s;
}

GeneralizedStrain BeamModel::layer_strain(const Eigen::VectorXd& q, std::size_t layer,
                                          std::size_t element) const {
  const long nd = static_cast<long>(dofs_.per_node());
  const auto qe = q.segment(static_cast<long>(element) * nd, 2 * nd);
  const auto& op = ops_[layer];
  return {op.axial.dot(qe), op.curvature.dot(qe), op.shear.dot(qe)};
}

double BeamModel::fiber_strain(const Eigen::VectorXd& q, std::size_t layer, std::size_t element,
                               double z) const {
  const auto s = layer_strain(q, layer, element);
  return s.axial + z * s.curvature;
}

double BeamModel::element_damage(const StateFields& s, std::size_t g, std::size_t element) const {
  const auto e = static_cast<long>(element);
  return 0.5 * (s.damage[g](e) + s.damage[g](e + 1));
}

double BeamModel::glass_modulus(std::size_t g, std::size_t element) const {
  const double e = spec_.layers[glass_[g]].glass().young_modulus;
  if (g < options_.modulus_scaling.size() && !options_.modulus_scaling[g].empty())
    return e * options_.modulus_scaling[g][element];
  return e;
}

template <bool WithTangent>
void BeamModel::element_pass(const Eigen::VectorXd& q, const std::vector<Eigen::VectorXd>& damage,
                             Assembly& out) const {
  const long nd = static_cast<long>(dofs_.per_node());
  const long nl = 2 * nd;
  const double he = mesh_.element_length;
  const double eta = options_.residual_stiffness;
  Eigen::VectorXd fe(nl);
  Eigen::MatrixXd ke(nl, nl);

  for (std::size_t e = 0; e < mesh_.elements(); ++e) {
    const long base = static_cast<long>(e) * nd;
    const auto qe = q.segment(base, nl);
    fe.setZero();
    if constexpr (WithTangent) ke.setZero();

    for (std::size_t m = 0; m < spec_.layers.size(); ++m) {
      const auto& op = ops_[m];
      const double ea = op.axial.dot(qe);
      const double kappa = op.curvature.dot(qe);
      const double gamma = op.shear.dot(qe);
      const auto& sec = sections_[m];
      double n = 0, mom = 0, v = 0, d11 = 0, d12 = 0, d22 = 0, ds = 0;

      const int g = glass_of_layer_[m];
      if (g >= 0) {
        const auto gi = static_cast<std::size_t>(g);
        const double young = glass_modulus(gi, e);
        const double dm = 0.5 * (damage[gi](static_cast<long>(e)) +
                                 damage[gi](static_cast<long>(e) + 1));
        const double degraded = (1.0 - dm) * (1.0 - dm) + eta;
        const auto& quad = quadrature_[m];
        const double scale = young * spec_.width * quad.weight;
        for (double z : quad.points) {
          const double eps = ea + kappa * z;
          const double c = scale * ((options_.split && eps < 0.0) ? 1.0 : degraded);
          n += c * eps;
          mom += c * eps * z;
          out.energy += 0.5 * c * eps * eps * he;
          if constexpr (WithTangent) {
            d11 += c;
            d12 += c * z;
            d22 += c * z * z;
          }
        }
        const double shear_mod =
            young / (2.0 * (1.0 + spec_.layers[m].glass().poisson_ratio));
        ds = degraded * shear_mod * sec.shear_area;
      } else {
        const double gp = polymer_g_[m];
        const double ep = 2.0 * (1.0 + spec_.layers[m].polymer().poisson_ratio) * gp;
        d11 = ep * sec.area;
        d22 = ep * sec.second_moment;
        ds = gp * sec.shear_area;
        n = d11 * ea;
        mom = d22 * kappa;
        out.energy += 0.5 * (n * ea + mom * kappa) * he;
      }
      v = ds * gamma;
      out.energy += 0.5 * v * gamma * he;

      fe.noalias() += he * (n * op.axial + mom * op.curvature + v * op.shear);
      if constexpr (WithTangent) {
        ke.noalias() += he * (d11 * op.axial * op.axial.transpose() +
                              d12 * (op.axial * op.curvature.transpose() +
                                     op.curvature * op.axial.transpose()) +
                              d22 * op.curvature * op.curvature.transpose() +
                              ds * op.shear * op.shear.transpose());
      }
    }

    if (!fe.allFinite() || (WithTangent && !ke.allFinite())) {
      std::ostringstream os;
      os << "non-finite element contribution in element " << e << " (x = " << mesh_.x[e] << " m)";
      throw Error(ErrorCode::assembly, os.str());
    }
    out.internal_force.segment(base, nl) += fe;
    out.force_magnitude.segment(base, nl) += fe.cwiseAbs();
    if constexpr (WithTangent) {
      for (long i = 0; i < nl; ++i)
        for (long j = 0; j < nl; ++j)
          out.tangent.emplace_back(static_cast<int>(base + i), static_cast<int>(base + j),
                                   ke(i, j));
    }
  }
}

Assembly BeamModel::assemble(const Eigen::VectorXd& q, const std::vector<Eigen::VectorXd>& damage,
                             bool with_tangent) const {
  Assembly out;
  out.internal_force = Eigen::VectorXd::Zero(static_cast<long>(dofs_.size()));
  out.force_magnitude = Eigen::VectorXd::Zero(static_cast<long>(dofs_.size()));
  if (with_tangent) {
    out.tangent.reserve(mesh_.elements() * 4 * dofs_.per_node() * dofs_.per_node());
    element_pass<true>(q, damage, out);
  } else {
    element_pass<false>(q, damage, out);
  }
  return out;
}

double BeamModel::energy(const Eigen::VectorXd& q,
                         const std::vector<Eigen::VectorXd>& damage) const {
  return assemble(q, damage, false).energy;
}

double BeamModel::stored_energy(const StateFields& s) const {
  return symmetry_factor() * energy(s.kinematics, s.damage);
}

double BeamModel::dissipated_energy(const StateFields& s) const {
  const double he = mesh_.element_length;
  double total = 0.0;
  for (std::size_t g = 0; g < glass_.size(); ++g) {
    const auto& glass = spec_.layers[glass_[g]].glass();
    const double ell = glass.regularization_length;
    const double c = 3.0 / 8.0 * glass.fracture_energy() * sections_[glass_[g]].area;
    const auto& d = s.damage[g];
    for (long e = 0; e + 1 < d.size(); ++e) {
      const double dm = 0.5 * (d(e) + d(e + 1));
      const double slope = (d(e + 1) - d(e)) / he;
      total += c * he * (dm / ell + ell * slope * slope);
    }
  }
  return symmetry_factor() * total;
}

std::vector<PolymerKinematics> reconstruct_polymer_kinematics(const BeamModel& model,
                                                              const StateFields& state) {
  std::vector<PolymerKinematics> out;
  const auto& dofs = model.dofs();
  const long nd = static_cast<long>(dofs.per_node());
  const long nn = static_cast<long>(dofs.nodes());
  for (std::size_t m = 0; m < model.spec().layers.size(); ++m) {
    if (model.spec().layers[m].kind() != LayerKind::polymer) continue;
    PolymerKinematics pk{Eigen::VectorXd(nn), Eigen::VectorXd(nn)};
    for (long i = 0; i < nn; ++i) {
      const auto qn = state.kinematics.segment(i * nd, nd);
      pk.u(i) = model.axial_map(m).dot(qn);
      pk.phi(i) = model.rotation_map(m).dot(qn);
    }
    out.push_back(std::move(pk));
  }
  return out;
}

double strain_at_fiber(const BeamModel& model, const StateFields& state, std::size_t layer,
                       double x, double z) {
  const double h = model.spec().layers.at(layer).thickness;
  if (z < -0.5 * h * (1 + 1e-12) || z > 0.5 * h * (1 + 1e-12))
    throw Error(ErrorCode::invalid_argument, "strain_at_fiber: z outside the layer");
  const auto ne = model.mesh().elements();
  auto e = static_cast<std::size_t>(std::max(0.0, std::floor(x / model.mesh().element_length)));
  e = std::min(e, ne - 1);
  return model.fiber_strain(state.kinematics, layer, e, z);
}

BoundarySet four_point_boundary(const BeamModel& model, double prescribed_deflection) {
  BoundarySet bc;
  const auto& mesh = model.mesh();
  const auto& dofs = model.dofs();
  for (auto n : mesh.support_nodes) {
    bc.fixed.push_back(dofs.w(n));
    bc.values.push_back(0.0);
    bc.support_dofs.push_back(dofs.w(n));
  }
  for (auto n : mesh.load_nodes) {
    bc.fixed.push_back(dofs.w(n));
    bc.values.push_back(prescribed_deflection);
    bc.load_dofs.push_back(dofs.w(n));
  }
  if (mesh.symmetry_node) {
    for (std::size_t g = 0; g < dofs.glass_layers(); ++g) {
      bc.fixed.push_back(dofs.u(*mesh.symmetry_node, g));
      bc.values.push_back(0.0);
      bc.fixed.push_back(dofs.phi(*mesh.symmetry_node, g));
      bc.values.push_back(0.0);
    }
  } else {
    bc.fixed.push_back(dofs.u(mesh.anchor_node, 0));
    bc.values.push_back(0.0);
  }
  return bc;
}

EquilibriumSolver::EquilibriumSolver(const BeamModel& model,
                                     const std::vector<std::size_t>& fixed_dofs,
                                     NewtonSettings settings)
    : model_(model), settings_(settings) {
  free_index_.assign(model.dofs().size(), 0);
  for (auto d : fixed_dofs) free_index_.at(d) = -1;
  for (auto& f : free_index_)
    if (f >= 0) f = free_count_++;
}

EquilibriumResult EquilibriumSolver::solve(Eigen::VectorXd& q,
                                           const std::vector<Eigen::VectorXd>& damage,
                                           const BoundarySet& bc) {
  for (std::size_t i = 0; i < bc.fixed.size(); ++i) {
    if (free_index_[bc.fixed[i]] >= 0)
      throw Error(ErrorCode::invalid_argument, "boundary set does not match the solver's DOFs");
    q(static_cast<long>(bc.fixed[i])) = bc.values[i];
  }

  const long nf = free_count_;
  const long n = static_cast<long>(q.size());
  std::vector<double> trace;
  Eigen::VectorXd r(nf), dq(nf);
  std::vector<Eigen::Triplet<double>> reduced;
  Eigen::SparseMatrix<double> k(nf, nf);
  int increases = 0;
  double last_step = std::numeric_limits<double>::infinity();
  double previous = std::numeric_limits<double>::infinity();

  EquilibriumResult result;
  for (int it = 0;; ++it) {
    Assembly a = model_.assemble(q, damage, true);
    for (long i = 0; i < n; ++i)
      if (free_index_[static_cast<std::size_t>(i)] >= 0)
        r(free_index_[static_cast<std::size_t>(i)]) = a.internal_force(i);
    const double res = r.norm();
    // Relative to the magnitude of the element contributions, so the
    // tolerance sits above the cancellation error of the assembly.
    const double ref = a.force_magnitude.norm();
    const double rel = ref > 0.0 ? res / ref : 0.0;
    trace.push_back(rel);

    // Round-off floor: once the correction is negligible against q the
    // residual cannot drop further.
    const bool converged = res <= settings_.tolerance * ref ||
                           (it > 0 && last_step <= 1e-10 * q.norm());
    if (converged || it >= settings_.max_iterations) {
      if (!converged)
        throw NonConvergence("Newton iteration limit reached (relative residual " +
                                 std::to_string(rel) + ")",
                             trace);
      result.iterations = it;
      result.residual = rel;
      const double f = model_.symmetry_factor();
      for (auto d : bc.load_dofs) result.reaction += f * a.internal_force(static_cast<long>(d));
      for (auto d : bc.support_dofs)
        result.support_reaction += f * a.internal_force(static_cast<long>(d));
      return result;
    }
    if (res > previous) {
      if (++increases >= settings_.divergence_window)
        throw NonConvergence("Newton iteration diverging", trace);
    } else {
      increases = 0;
    }
    previous = res;

    reduced.clear();
    reduced.reserve(a.tangent.size());
    for (const auto& t : a.tangent) {
      const long i = free_index_[static_cast<std::size_t>(t.row())];
      const long j = free_index_[static_cast<std::size_t>(t.col())];
      if (i >= 0 && j >= 0 && i >= j) reduced.emplace_back(i, j, t.value());
    }
    k.setFromTriplets(reduced.begin(), reduced.end());
    if (!analyzed_) {
      ldlt_.analyzePattern(k.selfadjointView<Eigen::Lower>());
      analyzed_ = true;
    }
    ldlt_.factorize(k.selfadjointView<Eigen::Lower>());
    if (ldlt_.info() != Eigen::Success)
      throw NonConvergence("tangent factorization failed", trace);
    dq = ldlt_.solve(-r);

    // Backtracking on the (convex) stored energy.
    const double e0 = a.energy;
    const double slope = r.dot(dq);
    double alpha = 1.0;
    Eigen::VectorXd trial = q;
    for (int ls = 0; ls < 30; ++ls) {
      trial = q;
      for (long i = 0; i < n; ++i) {
        const long fi = free_index_[static_cast<std::size_t>(i)];
        if (fi >= 0) trial(i) += alpha * dq(fi);
      }
      const double e1 = model_.energy(trial, damage);
      if (e1 <= e0 + 1e-4 * alpha * slope + 1e-13 * std::abs(e0)) break;
      alpha *= 0.5;
    }
    last_step = alpha * dq.norm();
    q = trial;
  }
}

EquilibriumResult solve_equilibrium(const BeamModel& model, StateFields& state,
                                    const BoundarySet& bc, NewtonSettings settings) {
  EquilibriumSolver solver(model, bc.fixed, settings);
  return solver.solve(state.kinematics, state.damage, bc);
}

}  // namespace lgfrac
