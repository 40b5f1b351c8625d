// manifold.hpp -- supported compact manifolds and their lattice specs.
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace hopf {

enum class Manifold { S3, T3, S2xS1, S2, T2 };

std::string manifold_name(Manifold m);
std::optional<Manifold> manifold_from_name(const std::string& name);

bool manifold_is_2d(Manifold m);
bool manifold_is_flat(Manifold m);

/// Which lattice spec a field lives on: manifold kind, per-coordinate site
/// counts, the S2 radius L (S2xS1 only) and period scale factors (flat tori
/// only; each in (0,1], default 1).
struct ManifoldSpec {
  Manifold kind = Manifold::T3;
  std::vector<int> dims;            // one entry per coordinate
  std::optional<double> L;          // S2xS1 sphere radius
  std::vector<double> periods;      // T3/T2 period factors, empty = all 1

  int rank() const { return manifold_is_2d(kind) ? 2 : 3; }
  std::int64_t n_sites() const;
  double period_factor(int axis) const;

  /// Throws std::invalid_argument on any violated invariant
  /// (dims < 4, missing/excess L, bad periods).
  void validate() const;
};

bool operator==(const ManifoldSpec& a, const ManifoldSpec& b);

}  // namespace hopf
