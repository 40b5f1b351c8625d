// energy.hpp -- discrete E4 energy (squared plaquette solid angles), the E2
// regularizer, analytic gradients, densities and the directional split.
#pragma once

#include <stdexcept>
#include <vector>

#include "hopf/field.hpp"
#include "hopf/geometry.hpp"

namespace hopf {

/// Thrown when a plaquette contains an (almost) antipodal vertex pair, i.e.
/// the field is too rough for the geodesic-area discretization to make sense.
struct IllConditionedPlaquette : std::runtime_error {
  IllConditionedPlaquette()
      : std::runtime_error("ill-conditioned plaquette: antipodal neighbours "
                           "(field is discontinuous at lattice resolution)") {}
};

struct EnergyReport {
  double E4 = 0;
  double E2 = 0;
  double beta = 0;
  double E_total = 0;                 // E4 + beta*E2
  std::vector<double> directional;    // 3D: (E_x,E_y,E_z); 2D: single entry
  std::vector<double> density;        // per site-centered cell, kappa*F.F
  double density_min = 0, density_max = 0;
  double kappa = 0;
};

/// Signed spherical area of the quadrilateral (v1 v2 v3 v4) on the target
/// sphere, split along the (v1,v3) diagonal; each triangle via
///   area = 2 atan2(va.(vb x vc), 1 + va.vb + vb.vc + vc.va).
/// Range (-4pi, 4pi); reversing orientation flips the sign.
double plaquette_area(const Vec3& v1, const Vec3& v2, const Vec3& v3,
                      const Vec3& v4);

/// Full E4 evaluation with density and directional split.
EnergyReport energy_e4(const Field& field, const LatticeGeometry& geom);

/// E4 only (no density/split bookkeeping) -- the relaxation inner loop.
double energy_e4_value(const Field& field, const LatticeGeometry& geom);

/// Chordal-difference Dirichlet energy (1/32pi^2) sum |dphi|^2, used only
/// as a relaxation regularizer.
double energy_e2(const Field& field, const LatticeGeometry& geom);

/// Site-wise gradient of E4 + beta*E2 projected onto the tangent planes
/// (g.phi = 0 exactly).  Layout matches Field::data.
std::vector<double> gradient(const Field& field, const LatticeGeometry& geom,
                             double beta);

/// First-order energy change under period scaling (1-eps_y, 1-eps_z):
///   dE = (E_x - E_y + E_z) eps_y + (E_x - E_z + E_y) eps_z.
double anisotropy_first_order(double E_x, double E_y, double E_z,
                              double eps_y, double eps_z);

/// Both first-order coefficients positive: shrinking either period raises
/// the energy.
bool period_stable(double E_x, double E_y, double E_z);

/// 2D only: per-plaquette pullback density B = F_12 / sqrt(g) (signed).
/// Constant B characterizes the bound-saturating solutions.
std::vector<double> b_density(const Field& field, const LatticeGeometry& geom);

/// Signed areas of one boundary-closure block, flattened over the
/// (dims[1] x dims[2]) transverse index space (dims[1] in 2D).  As traversed
/// the low-side caps are oriented opposite to the (0,nu) plaquettes; degree
/// and flux sums must weight them by -1.
std::vector<double> cap_areas(const Field& field, const LatticeGeometry& geom,
                              const CapBlock& cap);

}  // namespace hopf
