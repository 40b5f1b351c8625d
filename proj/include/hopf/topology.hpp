// topology.hpp -- topological diagnostics: 2D degree, net vortex fluxes,
// spectral Hopf charge on T3, preimage curve extraction and Gauss linking.
#pragma once

#include <stdexcept>
#include <vector>

#include "hopf/energy.hpp"
#include "hopf/field.hpp"
#include "hopf/geometry.hpp"

namespace hopf {

// Orientation convention, fixed once: plaquettes are traversed
// (s, s+mu, s+mu+nu, s+nu) with mu < nu in right-handed axis order, and the
// target solid angle is positive for loops counterclockwise around the
// outward normal.  With the stereographic convention of field.hpp this pins
// degree_2d(identity on S2) = +1 and the standard Hopf map to Q = +1.

struct TopologyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ChargeReport {
  double Q_numeric = 0;
  int Q = 0;                     // nearest integer
  double residual = 0;           // |Q_numeric - Q|
  std::vector<int> net_fluxes;   // per direction where defined
};

/// Degree of a 2D field: (1/4pi) * sum of plaquette areas.
ChargeReport degree_2d(const Field& field, const LatticeGeometry& geom);

/// Net vortex number through the closed cross-sections transverse to
/// `direction` (T3: any axis; S2xS1: the S1 axis only).  All parallel
/// cross-sections must agree; disagreement throws TopologyError.
int net_flux(const Field& field, const LatticeGeometry& geom, int direction);

/// Spectral Hopf charge on T3: assemble cell-centered F from plaquettes,
/// solve dA = F per Fourier mode in the divergence-free gauge and integrate
/// (1/16pi^2) B.A.  Requires all three net fluxes to vanish (otherwise the
/// field is algebraically essential and TopologyError is thrown).
ChargeReport hopf_charge_t3(const Field& field, const LatticeGeometry& geom);

/// Spectral core of hopf_charge_t3, operating on Yee-staggered field
/// strength components F01, F02, F12 (forward-difference curl convention,
/// arrays flattened last-axis-fastest over dims).  Exposed so the gauge
/// solve can be validated against synthetic vector potentials.
ChargeReport hopf_charge_from_components(
    const std::vector<double>& F01, const std::vector<double>& F02,
    const std::vector<double>& F12, const std::array<int, 3>& dims,
    const std::array<double, 3>& h, double* recon_error = nullptr);

enum class CurveProjection {
  None,    // raw lattice coordinates
  Stereo3  // S3 -> R3 stereographic / S2xS1 -> solid torus in R3
};

struct PreimageCurve {
  Vec3 value{0, 0, 1};  // the regular value p
  // Closed polylines (first == last point).  Points are in raw coordinates
  // or in the 3D projection, per the extraction call.
  std::vector<std::vector<Vec3>> components;
  bool all_closed = true;  // false => open component(s): discontinuity warning
};

/// Extract psi^{-1}(p) by marching the Kuhn tetrahedralization of every
/// lattice cell: inside each tetrahedron the two chart functions
/// (Re w', Im w') of the field around p are interpolated linearly and their
/// common zero segment is emitted; segments are stitched into closed
/// polylines.  p is nudged deterministically if some site attains it.
PreimageCurve preimage(const Field& field, const LatticeGeometry& geom,
                       Vec3 p, CurveProjection projection);

struct LinkingResult {
  int lk = 0;
  double lk_numeric = 0;
  bool reliable = true;  // false if the curves approach within ~1 segment
};

/// Gauss linking number of two disjoint closed polylines in R3 (exact
/// segment-pair solid angles, no quadrature).
LinkingResult linking_number(const std::vector<Vec3>& c1,
                             const std::vector<Vec3>& c2);

/// Sum of pairwise linking numbers between all components of two preimage
/// families -- the preimage estimate of the Hopf charge.
LinkingResult total_linking(const PreimageCurve& f1, const PreimageCurve& f2);

}  // namespace hopf
