// ansatz1d.hpp -- reduced 1D energy functionals of the symmetric ansatze,
// their minimization, and the closed-form A_{m,n} energy.
#pragma once

#include <string>
#include <vector>

#include "hopf/manifold.hpp"

namespace hopf {

struct ProfileSolution {
  std::vector<double> grid;  // theta in [0,pi] (VAV) or r in [0,pi/2] (A_mn)
  std::vector<double> f;     // profile values at the grid nodes
  double L = 0;              // geometric parameter (S2xS1 only)
  double energy = 0;         // reduced functional value
  bool monotone = true;      // profile monotonicity (warning flag if false)

  /// Linear interpolation, clamped to the grid range.
  double eval(double x) const;
};

/// Reduced VAV energy on S2xS1 (sphere radius L, circle length 2pi):
///   E[f] = 1/(4 sqrt(2)) * int_0^pi f'^2 sin^2(f) (1/(L sin th) + L sin th) dth
/// with f(0)=0, f(pi/2)=pi, f(pi)=2pi.  Midpoint-staggered quadrature on the
/// profile's grid.  Throws on violated boundary conditions.
double vav_energy(const ProfileSolution& profile, double L);

/// Minimize the reduced VAV functional over interior profile values on an
/// n_theta-interval grid; L_auto=true adds an outer golden-section search
/// over L in [0.5, 3.0] (error if the optimum pins to the bracket edge).
ProfileSolution vav_minimize(int n_theta, double L, bool L_auto = false);

/// Closed-form A_{m,n} energy: ((p - 1/p) / (2 log p)) * m * n with p = m/n,
/// continuously extended to m*n at p = 1.
double amn_energy_formula(int m, int n);

/// Recover the optimal A_{m,n} profile numerically: target polar angle
/// alpha(r), alpha(0)=0, alpha(pi/2)=pi, minimizing
///   E[alpha] = (1/8) int_0^{pi/2} alpha'^2 sin^2(alpha)
///              (m^2 tan r + n^2 cot r) dr.
ProfileSolution amn_profile_minimize(int m, int n, int n_r);

/// Topological lower bound: |Q| on 3D manifolds, Q^2 on 2D ones.
double bound_value(const ManifoldSpec& spec, int Q);

}  // namespace hopf
