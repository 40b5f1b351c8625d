// lattice.hpp -- flat-index bookkeeping for (up to) 3D lattices and small
// 3-vector arithmetic shared across modules.
#pragma once

#include <array>
#include <cmath>
#include <cstdint>

#include "hopf/manifold.hpp"

namespace hopf {

struct Indexer {
  std::array<int, 3> n{1, 1, 1};

  explicit Indexer(const ManifoldSpec& spec) {
    for (size_t d = 0; d < spec.dims.size(); ++d) n[d] = spec.dims[d];
  }
  Indexer(int nx, int ny, int nz) : n{nx, ny, nz} {}

  std::int64_t size() const { return std::int64_t(n[0]) * n[1] * n[2]; }

  std::int64_t at(int i, int j, int k) const {
    return (std::int64_t(i) * n[1] + j) * n[2] + k;
  }
  std::array<int, 3> coords(std::int64_t idx) const {
    int k = int(idx % n[2]);
    int j = int((idx / n[2]) % n[1]);
    int i = int(idx / (std::int64_t(n[1]) * n[2]));
    return {i, j, k};
  }
  int wrap(int axis, int i) const {
    int m = n[axis];
    i %= m;
    return i < 0 ? i + m : i;
  }
};

inline double dot(const std::array<double, 3>& a,
                  const std::array<double, 3>& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}
inline std::array<double, 3> cross(const std::array<double, 3>& a,
                                   const std::array<double, 3>& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
          a[0] * b[1] - a[1] * b[0]};
}
inline double norm(const std::array<double, 3>& a) {
  return std::sqrt(dot(a, a));
}
inline std::array<double, 3> normalized(const std::array<double, 3>& a) {
  double r = norm(a);
  return {a[0] / r, a[1] / r, a[2] / r};
}
inline std::array<double, 3> axpy(double t, const std::array<double, 3>& x,
                                  const std::array<double, 3>& y) {
  return {y[0] + t * x[0], y[1] + t * x[1], y[2] + t * x[2]};
}

/// SplitMix64: the documented deterministic generator behind `perturb`.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}
inline double uniform_pm1(std::uint64_t& state) {
  return 2.0 * (double(splitmix64(state) >> 11) * 0x1.0p-53) - 1.0;
}

}  // namespace hopf
