#include "hopf/optimize.hpp"

#include <algorithm>
#include <cmath>

#include "hopf/lattice.hpp"

namespace hopf {

namespace {

double dot_all(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double inf_norm(const std::vector<double>& a) {
  double m = 0;
  for (double x : a) m = std::max(m, std::abs(x));
  return m;
}

// phi <- normalize(phi + t d), site-wise; |phi + t d| >= 1 for tangent d.
void retract_into(const Field& base, const std::vector<double>& d, double t,
                  Field& out) {
  const size_t n = base.data.size();
  for (size_t i = 0; i < n; i += 3) {
    double x = base.data[i] + t * d[i];
    double y = base.data[i + 1] + t * d[i + 1];
    double z = base.data[i + 2] + t * d[i + 2];
    double r = std::sqrt(x * x + y * y + z * z);
    out.data[i] = x / r;
    out.data[i + 1] = y / r;
    out.data[i + 2] = z / r;
  }
}

// re-project a direction onto the tangent planes of a (new) field
void project_tangent(const Field& field, std::vector<double>& d) {
  const size_t n = field.data.size();
  for (size_t i = 0; i < n; i += 3) {
    double px = field.data[i], py = field.data[i + 1], pz = field.data[i + 2];
    double dp = d[i] * px + d[i + 1] * py + d[i + 2] * pz;
    d[i] -= dp * px;
    d[i + 1] -= dp * py;
    d[i + 2] -= dp * pz;
  }
}

}  // namespace

double line_search(const Field& field, const LatticeGeometry& geom,
                   const std::vector<double>& direction, double beta,
                   double initial_step) {
  std::vector<double> g = gradient(field, geom, beta);
  double gd = dot_all(g, direction);
  if (gd >= 0) return 0.0;  // not a descent direction
  double E0 = energy_e4_value(field, geom) +
              (beta > 0 ? beta * energy_e2(field, geom) : 0.0);
  Field trial = field;
  double alpha = initial_step;
  for (int bt = 0; bt < 50; ++bt) {
    retract_into(field, direction, alpha, trial);
    double E;
    try {
      E = energy_e4_value(trial, geom) +
          (beta > 0 ? beta * energy_e2(trial, geom) : 0.0);
    } catch (const IllConditionedPlaquette&) {
      alpha *= 0.5;  // stepped into a fold; shorten
      continue;
    }
    if (E <= E0 + 1e-4 * alpha * gd) return alpha;
    alpha *= 0.5;
  }
  return 0.0;
}

RelaxResult relax(const Field& field0, const LatticeGeometry& geom,
                  const RelaxConfig& config) {
  RelaxResult res;
  res.field = field0;

  std::vector<double> betas;
  for (int k = 0; k < config.beta_stages - 1; ++k)
    betas.push_back(config.beta0 * std::pow(config.beta_decay, k));
  betas.push_back(0.0);  // schedule always ends at the pure E4 problem

  Field trial = res.field;
  int global_iter = 0;
  bool aborted = false;

  for (size_t stage = 0; stage < betas.size() && !aborted; ++stage) {
    double beta = betas[stage];
    bool stage_converged = false;
    try {
      std::vector<double> g = gradient(res.field, geom, beta);
      std::vector<double> dir(g.size());
      for (size_t i = 0; i < g.size(); ++i) dir[i] = -g[i];
      double E = energy_e4_value(res.field, geom) +
                 (beta > 0 ? beta * energy_e2(res.field, geom) : 0.0);
      double step = 0.5 / std::max(1e-12, inf_norm(g));
      int consecutive_failures = 0;

      for (int it = 0; it < config.max_iters; ++it) {
        double gnorm = inf_norm(g);
        if (gnorm < config.grad_tol) {
          stage_converged = true;
          break;
        }
        double gd = dot_all(g, dir);
        if (gd >= 0) {  // restart with steepest descent
          for (size_t i = 0; i < g.size(); ++i) dir[i] = -g[i];
          gd = -dot_all(g, g);
        }

        // Armijo backtracking, capped so no site rotates more than
        // max_rotation in one step
        double alpha =
            std::min(step, config.max_rotation / std::max(1e-300, inf_norm(dir)));
        double E_new = E;
        bool accepted = false;
        for (int bt = 0; bt < 50; ++bt) {
          retract_into(res.field, dir, alpha, trial);
          double Et;
          try {
            Et = energy_e4_value(trial, geom) +
                 (beta > 0 ? beta * energy_e2(trial, geom) : 0.0);
          } catch (const IllConditionedPlaquette&) {
            alpha *= 0.5;
            continue;
          }
          if (Et <= E + 1e-4 * alpha * gd) {
            accepted = true;
            E_new = Et;
            break;
          }
          alpha *= 0.5;
        }
        if (!accepted) {
          bool was_steepest = (consecutive_failures > 0);
          for (size_t i = 0; i < g.size(); ++i) dir[i] = -g[i];
          ++consecutive_failures;
          if (was_steepest) break;  // cannot decrease even along -g
          continue;
        }
        consecutive_failures = 0;
        std::swap(res.field.data, trial.data);
        E = E_new;
        step = std::min(2.0 * alpha, 1e6);
        ++global_iter;

        std::vector<double> g_new = gradient(res.field, geom, beta);
        double num = 0, den = 0;
        for (size_t i = 0; i < g.size(); ++i) {
          num += g_new[i] * (g_new[i] - g[i]);
          den += g[i] * g[i];
        }
        double pr = den > 0 ? std::max(0.0, num / den) : 0.0;  // PR+
        project_tangent(res.field, dir);
        for (size_t i = 0; i < g.size(); ++i)
          dir[i] = pr * dir[i] - g_new[i];
        g.swap(g_new);

        double E2v = energy_e2(res.field, geom);
        double E4v = E - beta * E2v;
        res.trace.push_back({int(stage), global_iter, E4v, E2v, inf_norm(g)});

        // Transient roughness is expected (and healed) while the E2
        // regularizer is on; the continuity tripwire guards the pure-E4
        // endpoint.
        if (beta == 0.0 && global_iter % config.check_every == 0 &&
            continuity_check(res.field) > config.discontinuity_threshold) {
          res.discontinuous = true;
          aborted = true;
          break;
        }
      }
    } catch (const IllConditionedPlaquette&) {
      res.discontinuous = true;  // field tore mid-run; keep last good iterate
      aborted = true;
    }
    if (stage + 1 == betas.size()) res.converged = stage_converged && !aborted;
  }

  res.iterations = global_iter;
  if (!res.discontinuous &&
      continuity_check(res.field) > config.discontinuity_threshold)
    res.discontinuous = true;
  if (res.discontinuous) res.converged = false;

  try {
    res.final_report = energy_e4(res.field, geom);
    res.final_report.E2 = energy_e2(res.field, geom);
    res.final_report.beta = 0.0;
    res.final_report.E_total = res.final_report.E4;
  } catch (const IllConditionedPlaquette&) {
    res.discontinuous = true;
    res.converged = false;
  }
  return res;
}

}  // namespace hopf
