#pragma once

#include <complex>
#include <string>
#include <vector>

namespace resobeam {

/// Axial layout of the two focal telecentric cat's-eye retroreflectors.
/// Positions are absolute (m); z = 0 is conventionally M1's plane.
struct CavityGeometry {
  double f = 0.030;        ///< focal length of each retroreflector lens
  double l = 0.030225;     ///< mirror-to-lens interval
  double d = 3.0;          ///< distance between the two IO planes
  double z_M1 = 0.0;
  double z_L1 = 0.030225;
  double z_L2 = 0.030225 + 0.060 + 3.0;
  double z_M2 = 0.030225 + 0.060 + 3.0 + 0.030225;
  double z_g = 0.030225;   ///< gain medium, adjacent to L1 by default
  double a_g = 2e-3;       ///< gain-medium aperture radius
  double lambda = 1064e-9;

  /// Symmetric layout with M1 at z = 0 and the gain medium at L1.
  static CavityGeometry symmetric(double f, double l, double d, double a_g, double lambda);

  /// Re-derives z_L1, z_L2, z_M2 from f, l, d keeping z_M1 and the gain
  /// medium's offset from L1.
  void relayout();

  /// Human-readable list of violated invariants; empty when valid.
  std::vector<std::string> validate() const;
};

struct RayMatrix {
  double A = 1.0;
  double B = 0.0;  // m
  double C = 0.0;  // 1/m
  double D = 1.0;

  double determinant() const { return A * D - B * C; }
  RayMatrix operator*(const RayMatrix& rhs) const;
};

RayMatrix free_space(double length);
RayMatrix thin_lens(double focal_length);

/// Single-pass matrix M1 -> M2 in closed form.
RayMatrix ray_matrix(const CavityGeometry& geom);

struct Stability {
  bool stable = false;
  double margin = 0.0;  ///< g1* g2*
};

/// Stable iff 0 < g1*g2* < 1; the boundary points are reported unstable.
Stability is_stable(const CavityGeometry& geom);

/// Complex beam parameter q(z) of the fundamental mode. Throws
/// UnstableCavityError for unstable layouts and std::out_of_range for z
/// outside [z_M1, z_M2].
std::complex<double> q_parameter(const CavityGeometry& geom, double z);

/// TEM00 radius at z.
double mode_radius(const CavityGeometry& geom, double z);

/// Resonant-beam radius at z, scaled so that the radius at the gain medium
/// equals the gain aperture a_g.
double beam_radius(const CavityGeometry& geom, double z);

}  // namespace resobeam
