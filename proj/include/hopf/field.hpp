// field.hpp -- unit 3-vector fields on a lattice, stereographic coordinate
// conversion, and the initial configurations used throughout (symmetric
// ansatze, baby-skyrmion fields, vortex-antivortex data, perturbations).
#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <vector>

#include "hopf/manifold.hpp"

namespace hopf {

struct ProfileSolution;  // ansatz1d.hpp

using Vec3 = std::array<double, 3>;

/// Stereographic convention fixed once for the whole project:
///   w = (phi1 + i phi2) / (1 + phi3),
/// so w=0 is (0,0,1) and w=infinity is (0,0,-1).  Infinity is represented
/// by any non-finite complex value.
Vec3 stereo_to_vector(std::complex<double> w);
std::complex<double> vector_to_stereo(const Vec3& v);

struct Field {
  ManifoldSpec spec;
  std::vector<double> data;  // 3 doubles per site, last coordinate fastest

  std::int64_t n_sites() const { return spec.n_sites(); }

  Vec3 get(std::int64_t site) const {
    return {data[3 * site], data[3 * site + 1], data[3 * site + 2]};
  }
  void set(std::int64_t site, const Vec3& v) {
    data[3 * site] = v[0];
    data[3 * site + 1] = v[1];
    data[3 * site + 2] = v[2];
  }

  /// Rescale every site vector to unit norm (exact up to rounding).
  void renormalize();
};

Field make_constant_field(const ManifoldSpec& spec, const Vec3& v);

/// w(r,s,t) = f(r) exp(i(m s - n t)) on S3; the default profile f = cot(r)
/// is exact for m = n.  `profile`, when given, supplies the target polar
/// angle alpha(r) with alpha(0)=0, alpha(pi/2)=pi (|w| = cot(alpha/2)).
/// Hopf charge of the construction is m*n.
Field init_amn(const ManifoldSpec& spec, int m, int n,
               const ProfileSolution* profile = nullptr);

/// Vortex-antivortex field on S2xS1 from a profile f(theta) with
/// f(0)=0, f(pi/2)=pi, f(pi)=2 pi; the azimuthal winding switches from
/// phi+chi to phi-chi at theta=pi/2.  Hopf charge 2.
Field init_vav_s2s1(const ManifoldSpec& spec, const ProfileSolution& profile);

/// Parallel vortex-antivortex initial data on T3 with Hopf charge 2*pairs
/// and zero net vortex flux in all three directions.  Built as a
/// degree-(2*pairs) map T3 -> S3 composed with the standard Hopf map; the
/// charge is validated numerically by hopf_charge_t3 in the tests.
Field init_t3_vav(const ManifoldSpec& spec, int pairs);

/// Degree-Q baby-skyrmion field w = z^Q/|z|^{Q-1} on S2 (constant energy
/// density, saturates E = Q^2).
Field init_baby_s2(const ManifoldSpec& spec, int Q);

/// The exact degree-2 field on T2 with constant energy density:
/// phi1 = 1 - (2/pi)|x-pi|, phi2 = sgn(x-pi) f(x) cos y, phi3 = f(x) sin y.
Field init_baby_t2(const ManifoldSpec& spec);

/// Degree-1 bubble on T2 (collapses the complement of a disk to the south
/// pole).  Used as initial data for the spreading experiment; no continuous
/// energy minimizer exists in this sector.
Field init_baby_t2_q1(const ManifoldSpec& spec);

/// Deterministic pseudo-random tangent displacement of given amplitude at
/// every site (SplitMix64 keyed by seed and site index), renormalized.
Field perturb(const Field& field, double amplitude, std::uint64_t seed);

/// Max over lattice links of the angle between adjacent site vectors.
double continuity_check(const Field& field);

}  // namespace hopf
