// geometry.hpp -- lattice discretization of the supported manifolds:
// staggered grids, diagonal metric factors, plaquette coefficient tables
// and the normalization constant kappa.
#pragma once

#include <array>
#include <vector>

#include "hopf/manifold.hpp"

namespace hopf {

// Orientation pairs (mu < nu). In 3D the plaquette pairs are indexed
// 0:(0,1), 1:(0,2), 2:(1,2); in 2D only pair 0:(0,1) exists.
struct PlaquetteBlock {
  int mu = 0, nu = 0;
  std::array<int, 3> dims{1, 1, 1};  // plaquette index space (3rd = 1 in 2D)
  // Per-plaquette energy coefficient C such that the energy contribution of
  // a plaquette with signed target area W is C * W^2.  Flattened over
  // `dims`, last axis fastest.
  std::vector<double> coeff;
  // 1/(sqrt(g) h1 h2 (h3)) at the plaquette: converts the energy
  // contribution to a physical density, and W to the pullback density B.
  std::vector<double> inv_measure;

  std::int64_t count() const {
    return std::int64_t(dims[0]) * dims[1] * dims[2];
  }
};

// Closure of the plaquette sum at a non-periodic boundary (r on S3, theta on
// S2(xS1)).  The coordinate circle along `degen` collapses there; all its
// values are identified into virtual sites that carry the normalized mean of
// the adjacent lattice row.  Cap plaquettes connect the boundary row to the
// virtual sites: in the (0, degen) pair the two virtual corners coincide
// (zero-width quads, i.e. triangles), in the (0, vary) pair they differ.
// The metric is evaluated at the cap center, half a cell from the boundary
// row; the diverging metric factor there is the discrete version of the
// wall that pins the field's boundary behaviour.
struct CapBlock {
  int side = 0;    // 0: low boundary, 1: high
  int nu = 1;      // plaquette pair (0, nu)
  int degen = 1;   // axis identified at this boundary
  int vary = 2;    // axis the virtual value varies along (unused in 2D)
  double coeff = 0;
  double inv_measure = 0;
};

struct LatticeGeometry {
  ManifoldSpec spec;
  std::array<double, 3> h{1, 1, 1};        // coordinate spacings
  std::array<bool, 3> periodic{true, true, true};
  std::array<std::vector<double>, 3> coord;  // site coordinates per axis

  std::vector<double> cell_volume;  // site-centered sqrt(g)*h1*h2*(h3)
  std::vector<PlaquetteBlock> plaq; // one block per orientation pair
  std::vector<CapBlock> caps;       // boundary closures (curved manifolds)

  // E2 link coefficients: per axis, the factor g^{mumu}*w_cell/h_mu^2
  // varies only along the non-uniform axis (if any); stored per site below.
  // e2_coeff[axis][site] multiplied by |dphi|^2 gives the link term before
  // the global 1/(32 pi^2).
  std::array<std::vector<double>, 3> e2_coeff;

  double kappa = 0;    // E4 normalization (3D) or V/(32 pi^2) prefactor (2D)
  double lambda = 0;   // eigenvalue behind kappa (3D), 0 for 2D
  double volume = 0;   // sum of cell volumes

  int rank() const { return spec.rank(); }
  std::int64_t n_sites() const { return spec.n_sites(); }

  // Number of sites along axis d that carry a plaquette/link start in that
  // direction (dims[d] if periodic, dims[d]-1 otherwise).
  int span(int axis) const;
};

/// kappa = 1/(32 pi^2 sqrt(lambda)) with lambda = 4 (S3), 1/max_period^2
/// (T3), 2/L^2 (S2xS1); for 2D manifolds the Eq-2-style prefactor V/(32 pi^2).
double normalization_kappa(const ManifoldSpec& spec);

LatticeGeometry build_geometry(const ManifoldSpec& spec);

}  // namespace hopf
