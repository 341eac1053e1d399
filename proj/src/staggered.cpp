#include "lgfrac/staggered.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include <Eigen/QR>

#include "lgfrac/error.hpp"

namespace lgfrac {

namespace {

std::vector<double> deflections(const BeamModel& model, const Eigen::VectorXd& q) {
  const auto& dofs = model.dofs();
  std::vector<double> w(dofs.nodes());
  for (std::size_t i = 0; i < dofs.nodes(); ++i) w[i] = q(static_cast<long>(dofs.w(i)));
  return w;
}

std::vector<double> concatenated(const std::vector<Eigen::VectorXd>& fields) {
  std::vector<double> out;
  for (const auto& f : fields) out.insert(out.end(), f.data(), f.data() + f.size());
  return out;
}

double relative_change(std::span<const double> a, std::span<const double> b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += (a[i] - b[i]) * (a[i] - b[i]);
    den += a[i] * a[i];
  }
  if (den == 0.0) return num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return std::sqrt(num / den);
}

// Anderson mixing for the fixed-point map d -> G(d) of one staggered sweep,
// restricted to nodes strictly inside their bounds; the history restarts
// whenever that set changes, so the mixing sees a smooth map.
class AndersonMixer {
 public:
  explicit AndersonMixer(std::size_t depth) : depth_(depth) {}

  // Next iterate from the current input x and its image g = G(x); `inside`
  // marks the mixed components, the others take g.
  Eigen::VectorXd next(const Eigen::VectorXd& x, const Eigen::VectorXd& g,
                       const std::vector<bool>& inside) {
    if (inside != inside_) {
      reset();
      inside_ = inside;
    }
    Eigen::VectorXd f = g - x;
    for (long i = 0; i < f.size(); ++i)
      if (!inside[static_cast<std::size_t>(i)]) f(i) = 0.0;
    if (has_prev_) {
      df_.push_back(f - f_prev_);
      dg_.push_back(g - g_prev_);
      if (df_.size() > depth_) {
        df_.pop_front();
        dg_.pop_front();
      }
    }
    f_prev_ = f;
    g_prev_ = g;
    has_prev_ = true;
    if (df_.empty()) return g;

    const long m = static_cast<long>(df_.size());
    Eigen::MatrixXd a(f.size(), m), b(f.size(), m);
    for (long j = 0; j < m; ++j) {
      a.col(j) = df_[static_cast<std::size_t>(j)];
      b.col(j) = dg_[static_cast<std::size_t>(j)];
    }
    const Eigen::VectorXd gamma = a.colPivHouseholderQr().solve(f);
    if (!gamma.allFinite()) {
      reset();
      return g;
    }
    Eigen::VectorXd out = g - b * gamma;
    for (long i = 0; i < f.size(); ++i)
      if (!inside[static_cast<std::size_t>(i)]) out(i) = g(i);
    return out;
  }

  void reset() {
    df_.clear();
    dg_.clear();
    has_prev_ = false;
  }

 private:
  std::size_t depth_;
  std::deque<Eigen::VectorXd> df_, dg_;
  Eigen::VectorXd f_prev_, g_prev_;
  std::vector<bool> inside_;
  bool has_prev_ = false;
};

}  // namespace

double staggered_error(std::span<const double> deflection, std::span<const double> damage,
                       std::span<const double> previous_deflection,
                       std::span<const double> previous_damage) {
  if (deflection.size() != previous_deflection.size() || damage.size() != previous_damage.size())
    throw Error(ErrorCode::invalid_argument, "staggered_error: iterates differ in size");
  return std::max(relative_change(deflection, previous_deflection),
                  relative_change(damage, previous_damage));
}

BeamModel make_model(const LaminateSpec& spec, const Discretization& disc,
                     const SolverSettings& settings, const RunOverrides& overrides) {
  LaminateSpec s = spec.with_length_scale(disc.effective_length_scale());
  if (!overrides.strengths.empty()) s = s.with_strengths(overrides.strengths);
  Mesh1D mesh = build_mesh(s, disc.element_length, disc.symmetric_half);
  BeamOptions opt;
  opt.thickness_points = disc.thickness_points;
  opt.split = settings.split;
  opt.residual_stiffness = settings.residual_stiffness;
  opt.modulus_scaling = overrides.modulus_scaling;
  return BeamModel(std::move(s), std::move(mesh), std::move(opt));
}

std::size_t central_element(const Mesh1D& mesh) {
  return mesh.symmetric_half ? mesh.elements() - 1 : mesh.elements() / 2;
}

int count_cracks(std::span<const double> damage, double element_length, double length_scale,
                 bool symmetric_half, double threshold) {
  struct Interval {
    std::size_t first, last;
  };
  std::vector<Interval> cracks;
  for (std::size_t i = 0; i < damage.size(); ++i) {
    if (!(damage[i] > threshold)) continue;
    if (!cracks.empty() && cracks.back().last + 1 == i) {
      cracks.back().last = i;
    } else if (!cracks.empty() &&
               static_cast<double>(i - cracks.back().last) * element_length < 2.0 * length_scale) {
      cracks.back().last = i;
    } else {
      cracks.push_back({i, i});
    }
  }
  int count = 0;
  for (const auto& c : cracks)
    count += (!symmetric_half || c.last + 1 == damage.size()) ? 1 : 2;
  return count;
}

SolveHistory run_quasi_static(const LaminateSpec& spec, const LoadProgram& program,
                              const Discretization& disc, const SolverSettings& settings,
                              const RunOverrides& overrides, const StepObserver& observer) {
  if (!(program.displacement_rate > 0.0) || !(program.increment > 0.0))
    throw Error(ErrorCode::invalid_argument, "load program needs positive rate and increment");

  BeamModel model = make_model(spec, disc, settings, overrides);
  const std::size_t ng = model.glass_count();
  const double he = model.mesh().element_length;
  const double ell = disc.effective_length_scale();

  std::vector<double> gc(ng), area(ng);
  for (std::size_t g = 0; g < ng; ++g) {
    const auto m = model.glass_layer(g);
    gc[g] = model.spec().layers[m].glass().fracture_energy();
    area[g] = model.section(m).area;
  }

  EquilibriumSolver solver(model, four_point_boundary(model, 0.0).fixed, settings.newton);
  StateFields state = model.zero_state();

  SolveHistory history;
  history.glass_labels = model.spec().glass_labels();

  auto make_row = [&](std::size_t step, double t, double w, const EquilibriumResult& eq,
                      int iterations) {
    HistoryRow row;
    row.step = step;
    row.time = t;
    row.displacement = w;
    row.reaction = eq.reaction;
    row.support_reaction = eq.support_reaction;
    row.staggered_iterations = iterations;
    for (std::size_t g = 0; g < ng; ++g) {
      const auto& d = state.damage[g];
      row.max_damage.push_back(d.size() ? d.maxCoeff() : 0.0);
      row.crack_count.push_back(count_cracks(std::span<const double>(d.data(), d.size()), he, ell,
                                             disc.symmetric_half, settings.crack_threshold));
    }
    row.stored_energy = model.stored_energy(state);
    row.dissipated_energy = model.dissipated_energy(state);
    return row;
  };

  history.rows.push_back(make_row(0, 0.0, 0.0, EquilibriumResult{}, 0));
  if (observer) observer(history.rows.back(), model, state);

  // One load step: staggered iterations at fixed floors. Returns false when
  // the staggered loop hits its cap.
  auto attempt = [&](StateFields& s, double w_prev, double w_target, double t,
                     EquilibriumResult& eq, int& iterations) {
    model.set_time(t, settings.temperature);
    s.floor = s.damage;
    if (w_prev > 0.0) s.kinematics *= w_target / w_prev;
    const BoundarySet bc = four_point_boundary(model, w_target);

    auto w_old = deflections(model, s.kinematics);
    auto d_old = concatenated(s.damage);
    AndersonMixer mixer(static_cast<std::size_t>(std::max(settings.anderson_depth, 0)));
    bool mixing = settings.anderson_depth > 0;
    double best_xi = std::numeric_limits<double>::infinity();
    int best_at = 0;
    for (int i = 1; i <= settings.staggered_max_iterations; ++i) {
      eq = solver.solve(s.kinematics, s.damage, bc);
      const auto y = driving_force(model, s, settings.driving_force);
      std::vector<Eigen::VectorXd> image(ng);
      for (std::size_t g = 0; g < ng; ++g) {
        const auto& floor = s.floor[g];
        const auto sys = assemble_damage_system(y.per_layer[g], he, gc[g], area[g], ell,
                                                std::span<const double>(floor.data(), floor.size()));
        const auto& d = s.damage[g];
        auto vi = solve_damage_vi(sys, std::span<const double>(d.data(), d.size()),
                                  settings.vi_tolerance);
        image[g] = Eigen::Map<Eigen::VectorXd>(vi.x.data(), static_cast<long>(vi.x.size()));
      }
      auto w_new = deflections(model, s.kinematics);
      auto d_new = concatenated(image);
      const double xi = staggered_error(w_new, d_new, w_old, d_old);
      if (xi <= settings.staggered_tolerance) {
        // Reaction and energies consistent with the accepted damage.
        const bool damage_moved = d_new != d_old;
        s.damage = std::move(image);
        if (damage_moved) eq = solver.solve(s.kinematics, s.damage, bc);
        iterations = i;
        return true;
      }
      w_old = std::move(w_new);
      if (xi < best_xi) {
        best_xi = xi;
        best_at = i;
      }
      // A mixed sequence that stops improving falls back to plain sweeps for
      // the rest of the step.
      if (mixing && i - best_at > 2 * settings.anderson_depth) mixing = false;
      if (!mixing || xi > 1e-2) {
        mixer.reset();
        s.damage = std::move(image);
      } else {
        // Mixing only pays off in the slow linear tail; large changes (crack
        // nucleation, active-set switches) take plain sweeps.
        const long n = static_cast<long>(d_new.size());
        std::vector<bool> inside;
        inside.reserve(d_new.size());
        for (std::size_t g = 0; g < ng; ++g)
          for (long j = 0; j < image[g].size(); ++j)
            inside.push_back(image[g](j) > s.floor[g](j) && image[g](j) < 1.0);
        const Eigen::VectorXd mixed =
            mixer.next(Eigen::Map<const Eigen::VectorXd>(d_old.data(), n),
                       Eigen::Map<const Eigen::VectorXd>(d_new.data(), n), inside);
        long k = 0;
        for (std::size_t g = 0; g < ng; ++g)
          for (long j = 0; j < s.damage[g].size(); ++j, ++k)
            s.damage[g](j) = std::clamp(mixed(k), s.floor[g](j), 1.0);
      }
      d_old = concatenated(s.damage);
    }
    return false;
  };

  double w_prev = 0.0;
  std::size_t step = 0;
  const double eps = 1e-12 * program.max_displacement;
  while (step < program.max_steps && w_prev < program.max_displacement - eps) {
    double increment = program.increment;
    int halvings = 0;
    StateFields trial;
    EquilibriumResult eq;
    int iterations = 0;
    double w_target = 0.0;
    for (;;) {
      w_target = std::min(w_prev + increment, program.max_displacement);
      trial = state;
      std::string failure;
      try {
        if (attempt(trial, w_prev, w_target, w_target / program.displacement_rate, eq, iterations))
          break;
        failure = "staggered iteration limit reached at w = " + std::to_string(w_target * 1e3) +
                  " mm";
      } catch (const Error& e) {
        if (e.code() != ErrorCode::nonconvergence && e.code() != ErrorCode::assembly) throw;
        failure = e.what();
      }
      if (halvings >= settings.max_halvings) {
        history.complete = false;
        history.abort_reason = failure;
        return history;
      }
      ++halvings;
      ++history.halvings;
      increment *= 0.5;
    }
    for (std::size_t g = 0; g < ng; ++g) {
      const auto& d = trial.damage[g];
      history.min_damage_increment =
          std::min(history.min_damage_increment, (d - state.damage[g]).minCoeff());
      history.max_bound_violation = std::max(
          {history.max_bound_violation, (trial.floor[g] - d).maxCoeff(), d.maxCoeff() - 1.0});
    }
    state = std::move(trial);
    w_prev = w_target;
    ++step;
    history.rows.push_back(make_row(step, w_target / program.displacement_rate, w_target, eq,
                                    iterations));
    if (observer) observer(history.rows.back(), model, state);

    const auto& row = history.rows.back();
    const bool all_failed = std::all_of(row.max_damage.begin(), row.max_damage.end(),
                                        [&](double d) { return d >= settings.failure_threshold; });
    if (program.stop_when_all_failed && all_failed) break;
  }
  return history;
}

std::string format_sequence(const std::vector<FailureGroup>& groups) {
  std::string out;
  for (std::size_t i = 0; i < groups.size(); ++i) {
    if (i) out += " -> ";
    for (std::size_t j = 0; j < groups[i].layers.size(); ++j) {
      if (j) out += "+";
      out += std::to_string(groups[i].layers[j]);
    }
  }
  return out;
}

FailureSummary extract_failure_events(const SolveHistory& history, double threshold) {
  FailureSummary out;
  const std::size_t ng = history.glass_labels.size();
  std::vector<bool> failed(ng, false);
  std::size_t failed_count = 0;
  for (const auto& row : history.rows) {
    FailureGroup group;
    for (std::size_t g = 0; g < ng && g < row.max_damage.size(); ++g) {
      if (failed[g] || !(row.max_damage[g] >= threshold)) continue;
      failed[g] = true;
      ++failed_count;
      group.layers.push_back(history.glass_labels[g]);
    }
    if (group.layers.empty()) continue;
    group.step = row.step;
    group.displacement = row.displacement;
    if (!out.initial_displacement) out.initial_displacement = row.displacement;
    if (failed_count == ng) out.final_displacement = row.displacement;
    out.groups.push_back(std::move(group));
  }
  out.sequence = format_sequence(out.groups);
  return out;
}

}  // namespace lgfrac
