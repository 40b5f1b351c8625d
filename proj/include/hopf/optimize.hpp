// optimize.hpp -- nonlinear conjugate-gradient relaxation on the product of
// unit spheres, with the beta (E2 regularizer) phase-out schedule and
// discontinuity detection.
#pragma once

#include <functional>
#include <vector>

#include "hopf/energy.hpp"
#include "hopf/field.hpp"
#include "hopf/geometry.hpp"

namespace hopf {

struct RelaxConfig {
  double beta0 = 0.5;        // initial E2 weight
  double beta_decay = 0.7;   // per-stage multiplier
  int beta_stages = 10;      // total stages; the final stage runs at beta=0
  double grad_tol = 1e-8;    // tangent-gradient max-norm stage stop
  int max_iters = 2000;      // per stage
  double discontinuity_threshold = 1.5707963267948966;  // pi/2
  int check_every = 25;      // continuity-check cadence (iterations)
  // Largest site rotation per accepted step (radians).  Keeps the motion
  // local: unbounded trial steps can jump the lattice-scale energy barriers
  // that protect the topological sector.
  double max_rotation = 0.3;
};

struct TraceRow {
  int stage = 0;
  int iteration = 0;  // global accepted-step counter
  double E4 = 0;
  double E2 = 0;
  double grad_norm = 0;  // tangent max-norm
};

struct RelaxResult {
  Field field;
  std::vector<TraceRow> trace;
  bool converged = false;
  bool discontinuous = false;
  int iterations = 0;
  EnergyReport final_report;  // beta = 0
};

/// Stage k runs at beta = beta0 * beta_decay^k, the last stage at exactly
/// beta = 0.  Within a stage: Polak-Ribiere CG over tangent directions with
/// restart on non-descent, Armijo backtracking line search, and tangent
/// step + renormalization updates.  An ill-conditioned plaquette mid-run
/// marks the result discontinuous and halts gracefully.
RelaxResult relax(const Field& field, const LatticeGeometry& geom,
                  const RelaxConfig& config);

/// Backtracking Armijo search for E4 + beta*E2 along a tangent direction;
/// returns the accepted step or 0 (caller restarts CG).
double line_search(const Field& field, const LatticeGeometry& geom,
                   const std::vector<double>& direction, double beta,
                   double initial_step);

}  // namespace hopf
