#include "hopf/ansatz1d.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hopf {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Reduced functionals share the shape
//   E[f] = pref * sum_j h * d_j^2 * sin^2(m_j) * G_{j+1/2},
// d_j = (f_{j+1}-f_j)/h, m_j = midpoint value; G is evaluated at staggered
// nodes so the endpoint singularities of the metric terms are never sampled.
struct Reduced1D {
  double pref = 1;
  double h = 1;
  std::vector<double> G;      // size n (intervals)
  std::vector<char> pinned;   // size n+1 (nodes)

  int n() const { return int(G.size()); }

  double energy(const std::vector<double>& f) const {
    double E = 0;
    for (int j = 0; j < n(); ++j) {
      double d = (f[size_t(j + 1)] - f[size_t(j)]) / h;
      double sm = std::sin(0.5 * (f[size_t(j)] + f[size_t(j + 1)]));
      E += h * d * d * sm * sm * G[size_t(j)];
    }
    return pref * E;
  }

  void gradient(const std::vector<double>& f, std::vector<double>& g) const {
    g.assign(f.size(), 0.0);
    for (int j = 0; j < n(); ++j) {
      double d = (f[size_t(j + 1)] - f[size_t(j)]) / h;
      double m = 0.5 * (f[size_t(j)] + f[size_t(j + 1)]);
      double sm = std::sin(m), cm = std::cos(m);
      double common = pref * G[size_t(j)];
      double dd = common * 2.0 * d * sm * sm;       // via d_j
      double dm = common * h * d * d * sm * cm;     // via m_j
      g[size_t(j)] += -dd + dm;
      g[size_t(j + 1)] += dd + dm;
    }
    for (size_t i = 0; i < f.size(); ++i)
      if (pinned[i]) g[i] = 0.0;
  }

  // Polak-Ribiere CG with Armijo backtracking over the free nodes.
  double minimize(std::vector<double>& f, int max_iters = 50000,
                  double tol = 1e-12) const {
    std::vector<double> g, g_prev, dir;
    gradient(f, g);
    dir = g;
    for (double& v : dir) v = -v;
    double E = energy(f);
    double step = 0.1;
    auto inf_norm = [](const std::vector<double>& v) {
      double m = 0;
      for (double x : v) m = std::max(m, std::abs(x));
      return m;
    };
    double gtol = tol * (1.0 + std::abs(E)) / h;
    for (int it = 0; it < max_iters; ++it) {
      if (inf_norm(g) < gtol) break;
      double gd = 0;
      for (size_t i = 0; i < g.size(); ++i) gd += g[i] * dir[i];
      if (gd >= 0) {  // restart on non-descent
        for (size_t i = 0; i < g.size(); ++i) dir[i] = -g[i];
        gd = 0;
        for (size_t i = 0; i < g.size(); ++i) gd += g[i] * dir[i];
      }
      double alpha = step;
      std::vector<double> trial(f.size());
      bool accepted = false;
      for (int bt = 0; bt < 60; ++bt) {
        for (size_t i = 0; i < f.size(); ++i) trial[i] = f[i] + alpha * dir[i];
        double Et = energy(trial);
        if (Et <= E + 1e-4 * alpha * gd) {
          f.swap(trial);
          E = Et;
          accepted = true;
          break;
        }
        alpha *= 0.5;
      }
      if (!accepted) break;  // cannot decrease further at this resolution
      step = 2.0 * alpha;
      g_prev.swap(g);
      gradient(f, g);
      double num = 0, den = 0;
      for (size_t i = 0; i < g.size(); ++i) {
        num += g[i] * (g[i] - g_prev[i]);
        den += g_prev[i] * g_prev[i];
      }
      double beta = den > 0 ? std::max(0.0, num / den) : 0.0;
      for (size_t i = 0; i < g.size(); ++i) dir[i] = beta * dir[i] - g[i];
    }
    return E;
  }
};

Reduced1D make_vav_functional(const std::vector<double>& grid, double L) {
  if (L <= 0) throw std::invalid_argument("vav: L must be positive");
  Reduced1D r;
  int n = int(grid.size()) - 1;
  r.h = kPi / n;
  r.pref = 1.0 / (4.0 * std::sqrt(2.0));
  r.G.resize(size_t(n));
  for (int j = 0; j < n; ++j) {
    double th = (j + 0.5) * r.h;
    r.G[size_t(j)] = 1.0 / (L * std::sin(th)) + L * std::sin(th);
  }
  r.pinned.assign(size_t(n + 1), 0);
  return r;
}

Reduced1D make_amn_functional(int n_r, int m, int n) {
  Reduced1D r;
  r.h = (kPi / 2.0) / n_r;
  r.pref = 1.0 / 8.0;
  r.G.resize(size_t(n_r));
  for (int j = 0; j < n_r; ++j) {
    double rr = (j + 0.5) * r.h;
    r.G[size_t(j)] =
        double(m) * m * std::tan(rr) + double(n) * n / std::tan(rr);
  }
  r.pinned.assign(size_t(n_r + 1), 0);
  return r;
}

std::vector<double> uniform_grid(double a, double b, int n) {
  std::vector<double> g(size_t(n + 1));
  for (int j = 0; j <= n; ++j) g[size_t(j)] = a + (b - a) * j / n;
  return g;
}

bool check_monotone(const std::vector<double>& f) {
  for (size_t i = 1; i < f.size(); ++i)
    if (f[i] < f[i - 1] - 1e-9) return false;
  return true;
}

ProfileSolution vav_minimize_at(int n_theta, double L) {
  if (n_theta < 64)
    throw std::invalid_argument("vav_minimize: n_theta must be >= 64");
  int n = n_theta + (n_theta % 2);  // need a node exactly at pi/2
  ProfileSolution sol;
  sol.grid = uniform_grid(0.0, kPi, n);
  sol.f.resize(size_t(n + 1));
  for (int j = 0; j <= n; ++j) sol.f[size_t(j)] = 2.0 * sol.grid[size_t(j)];
  Reduced1D r = make_vav_functional(sol.grid, L);
  r.pinned[0] = r.pinned[size_t(n / 2)] = r.pinned[size_t(n)] = 1;
  sol.energy = r.minimize(sol.f);
  sol.L = L;
  sol.monotone = check_monotone(sol.f);
  return sol;
}

}  // namespace

double ProfileSolution::eval(double x) const {
  if (grid.empty()) throw std::invalid_argument("empty profile");
  if (x <= grid.front()) return f.front();
  if (x >= grid.back()) return f.back();
  auto it = std::upper_bound(grid.begin(), grid.end(), x);
  size_t j = size_t(it - grid.begin());
  double t = (x - grid[j - 1]) / (grid[j] - grid[j - 1]);
  return (1.0 - t) * f[j - 1] + t * f[j];
}

double vav_energy(const ProfileSolution& profile, double L) {
  auto near = [](double a, double b) { return std::abs(a - b) < 1e-9; };
  if (profile.grid.size() < 3 || !near(profile.grid.front(), 0.0) ||
      !near(profile.grid.back(), kPi))
    throw std::invalid_argument("vav_energy: profile grid must span [0, pi]");
  if (!near(profile.f.front(), 0.0) || !near(profile.eval(kPi / 2), kPi) ||
      !near(profile.f.back(), 2.0 * kPi))
    throw std::invalid_argument(
        "vav_energy: boundary conditions f(0)=0, f(pi/2)=pi, f(pi)=2pi");
  // resample onto a uniform staggered grid of comparable resolution
  int n = int(profile.grid.size()) - 1;
  n += n % 2;
  std::vector<double> grid = uniform_grid(0.0, kPi, n);
  std::vector<double> f(size_t(n + 1));
  for (int j = 0; j <= n; ++j) f[size_t(j)] = profile.eval(grid[size_t(j)]);
  Reduced1D r = make_vav_functional(grid, L);
  return r.energy(f);
}

ProfileSolution vav_minimize(int n_theta, double L, bool L_auto) {
  if (!L_auto) return vav_minimize_at(n_theta, L);
  // Golden-section over L: the energy-vs-L curve is smooth and single-dipped
  // near its optimum; a bracket edge hit means that assumption broke.
  double a = 0.5, b = 3.0;
  const double gr = 0.61803398874989484820;
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = vav_minimize_at(n_theta, x1).energy;
  double f2 = vav_minimize_at(n_theta, x2).energy;
  while (b - a > 1e-4) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = vav_minimize_at(n_theta, x1).energy;
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = vav_minimize_at(n_theta, x2).energy;
    }
  }
  double L_best = 0.5 * (a + b);
  if (L_best < 0.52 || L_best > 2.98)
    throw std::runtime_error("vav_minimize: optimum hit the L bracket edge");
  return vav_minimize_at(n_theta, L_best);
}

double amn_energy_formula(int m, int n) {
  if (m < 1 || n < 1)
    throw std::invalid_argument("amn_energy_formula: m,n must be >= 1");
  if (m == n) return double(m) * n;  // p -> 1 limit: E = Q
  double p = double(m) / n;
  return (p - 1.0 / p) / (2.0 * std::log(p)) * m * n;
}

ProfileSolution amn_profile_minimize(int m, int n, int n_r) {
  if (n_r < 64)
    throw std::invalid_argument("amn_profile_minimize: n_r must be >= 64");
  if (m < 1 || n < 1)
    throw std::invalid_argument("amn_profile_minimize: m,n must be >= 1");
  ProfileSolution sol;
  sol.grid = uniform_grid(0.0, kPi / 2.0, n_r);
  sol.f.resize(size_t(n_r + 1));
  for (int j = 0; j <= n_r; ++j) sol.f[size_t(j)] = 2.0 * sol.grid[size_t(j)];
  Reduced1D r = make_amn_functional(n_r, m, n);
  r.pinned[0] = r.pinned[size_t(n_r)] = 1;
  sol.energy = r.minimize(sol.f);
  sol.monotone = check_monotone(sol.f);
  return sol;
}

double bound_value(const ManifoldSpec& spec, int Q) {
  if (manifold_is_2d(spec.kind)) return double(Q) * Q;
  return std::abs(double(Q));
}

}  // namespace hopf
