#include "hopf/manifold.hpp"

#include <algorithm>
#include <stdexcept>

namespace hopf {

std::string manifold_name(Manifold m) {
  switch (m) {
    case Manifold::S3: return "s3";
    case Manifold::T3: return "t3";
    case Manifold::S2xS1: return "s2s1";
    case Manifold::S2: return "s2";
    case Manifold::T2: return "t2";
  }
  return "?";
}

std::optional<Manifold> manifold_from_name(const std::string& name) {
  std::string s;
  for (char c : name) s += char(std::tolower(static_cast<unsigned char>(c)));
  if (s == "s3") return Manifold::S3;
  if (s == "t3") return Manifold::T3;
  if (s == "s2s1" || s == "s2xs1") return Manifold::S2xS1;
  if (s == "s2") return Manifold::S2;
  if (s == "t2") return Manifold::T2;
  return std::nullopt;
}

bool manifold_is_2d(Manifold m) {
  return m == Manifold::S2 || m == Manifold::T2;
}

bool manifold_is_flat(Manifold m) {
  return m == Manifold::T3 || m == Manifold::T2;
}

std::int64_t ManifoldSpec::n_sites() const {
  std::int64_t n = 1;
  for (int d : dims) n *= d;
  return n;
}

double ManifoldSpec::period_factor(int axis) const {
  if (periods.empty()) return 1.0;
  return periods[size_t(axis)];
}

void ManifoldSpec::validate() const {
  if (int(dims.size()) != rank())
    throw std::invalid_argument("dims must have " + std::to_string(rank()) +
                                " entries for " + manifold_name(kind));
  for (int d : dims)
    if (d < 4) throw std::invalid_argument("all dims must be >= 4");
  if (kind == Manifold::S2xS1) {
    if (!L || *L <= 0)
      throw std::invalid_argument("s2s1 requires a positive sphere radius L");
  } else if (L) {
    throw std::invalid_argument("L is only meaningful for s2s1");
  }
  if (!periods.empty()) {
    if (!manifold_is_flat(kind))
      throw std::invalid_argument("periods are only meaningful for flat tori");
    if (int(periods.size()) != rank())
      throw std::invalid_argument("periods must have one entry per axis");
    for (double p : periods)
      if (!(p > 0.0 && p <= 1.0))
        throw std::invalid_argument("period factors must lie in (0, 1]");
  }
}

bool operator==(const ManifoldSpec& a, const ManifoldSpec& b) {
  auto pa = a.periods.empty() ? std::vector<double>(a.dims.size(), 1.0)
                              : a.periods;
  auto pb = b.periods.empty() ? std::vector<double>(b.dims.size(), 1.0)
                              : b.periods;
  return a.kind == b.kind && a.dims == b.dims && a.L == b.L && pa == pb;
}

}  // namespace hopf
