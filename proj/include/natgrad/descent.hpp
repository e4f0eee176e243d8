#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "natgrad/ambient.hpp"
#include "natgrad/core.hpp"
#include "natgrad/invariance.hpp"
#include "natgrad/models.hpp"
#include "natgrad/natural_gradient.hpp"

namespace natgrad {

struct DescentConfig {
  int steps = 100;
  double step_size = 0.05;
  InverseKind inverse = InverseKind::mp();
  bool ascend = false;
};

struct TrajectoryRecord {
  int step = 0;
  Vector xi;
  Vector model_point;
  double objective = 0.0;
  Vector coefficients;
  double gnorm = 0.0;
  double thm1_residual = 0.0;
};

struct Trajectory {
  std::vector<TrajectoryRecord> records;
  bool domain_exit = false;
  bool diverged = false;
  std::string diagnostic;
};

inline bool inside_box(const SamplingBox& box, const Vector& xi) {
  for (Eigen::Index i = 0; i < xi.size(); ++i) {
    if (xi(i) < box.lo(i) || xi(i) > box.hi(i)) return false;
  }
  return true;
}

/// Iterates xi <- xi -/+ step_size * (chosen inverse of G) grad_xi, recording
/// the full diagnostic row at every iterate. Stops with a diagnostic when an
/// iterate leaves the parameter box or the objective becomes non-finite.
inline Trajectory run_descent(const AmbientSpace& space, const Parametrization& phi,
                              const Objective& obj, const Vector& xi0,
                              const SamplingBox& box, const DescentConfig& cfg) {
  Trajectory traj;
  Vector xi = xi0;
  const double sign = cfg.ascend ? 1.0 : -1.0;
  for (int step = 0; step <= cfg.steps; ++step) {
    TrajectoryRecord rec;
    rec.step = step;
    rec.xi = xi;
    rec.model_point = phi.value(xi);
    rec.objective = obj.value_at(rec.model_point);
    if (!std::isfinite(rec.objective)) {
      traj.diverged = true;
      traj.diagnostic = "objective became non-finite at step " + std::to_string(step);
      traj.records.push_back(std::move(rec));
      break;
    }
    const NaturalParameterGradient npg =
        natural_parameter_gradient(space, phi, obj, xi, cfg.inverse);
    rec.coefficients = npg.coefficients;
    const TangentVector on_model = pushforward(phi, xi, npg.coefficients);
    rec.gnorm = metric_norm(space, on_model);
    rec.thm1_residual = theorem1_residual(space, phi, obj, xi);
    traj.records.push_back(rec);
    if (step == cfg.steps) break;
    xi += sign * cfg.step_size * npg.coefficients;
    if (!inside_box(box, xi)) {
      traj.domain_exit = true;
      traj.diagnostic = "iterate left the parameter box after step " +
                        std::to_string(step + 1);
      break;
    }
  }
  return traj;
}

struct PairedTrajectories {
  Trajectory primary;               // under phi, from xi0
  Trajectory reparametrized;        // under psi = phi o f, from f^{-1}(xi0)
};

/// Runs the model's descent under phi and, when a reparametrization is
/// registered, the matching run under psi = phi o f from theta0 = f^{-1}(xi0).
inline PairedTrajectories run_paired_descent(const models::ModelBundle& model,
                                             const DescentConfig& cfg) {
  PairedTrajectories out;
  out.primary = run_descent(model.space, model.phi, model.obj, model.xi0, model.box, cfg);
  if (model.f) {
    const Parametrization psi = compose(model.phi, *model.f);
    const Vector theta0 = model.f->inverse(model.xi0);
    // the theta box is the preimage of the xi box; for the registered affine
    // maps a generous fixed box suffices
    SamplingBox theta_box = models::square_box(model.phi.domain_dim, -1e6, 1e6);
    out.reparametrized = run_descent(model.space, psi, model.obj, theta0, theta_box, cfg);
  }
  return out;
}

}  // namespace natgrad
