#include "resobeam/geometry.hpp"

#include <cmath>
#include <stdexcept>

#include "resobeam/errors.hpp"

namespace resobeam {
namespace {

bool close(double a, double b) {
  return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

CavityGeometry CavityGeometry::symmetric(double f, double l, double d, double a_g, double lambda) {
  CavityGeometry g;
  g.f = f;
  g.l = l;
  g.d = d;
  g.a_g = a_g;
  g.lambda = lambda;
  g.z_M1 = 0.0;
  g.z_L1 = l;
  g.z_g = l;
  g.relayout();
  return g;
}

void CavityGeometry::relayout() {
  const double gain_offset = z_L1 - z_g;
  z_L1 = z_M1 + l;
  z_L2 = z_L1 + 2.0 * f + d;
  z_M2 = z_L2 + l;
  z_g = z_L1 - gain_offset;
}

std::vector<std::string> CavityGeometry::validate() const {
  std::vector<std::string> issues;
  if (!(f > 0.0)) issues.emplace_back("geometry.f must be > 0");
  if (!(l > 0.0)) issues.emplace_back("geometry.l must be > 0");
  if (!(d >= 0.0)) issues.emplace_back("geometry.d must be >= 0");
  if (!(a_g > 0.0)) issues.emplace_back("geometry.a_g must be > 0");
  if (!(lambda > 0.0)) issues.emplace_back("geometry.lambda must be > 0");
  if (!(z_M1 <= z_g && z_g <= z_L1)) issues.emplace_back("geometry.z_g must lie in [z_M1, z_L1]");
  if (!(z_L1 < z_L2 && z_L2 <= z_M2)) issues.emplace_back("geometry.z_L2 must satisfy z_L1 < z_L2 <= z_M2");
  if (!close(z_L2 - z_L1, 2.0 * f + d)) issues.emplace_back("geometry.z_L2 - z_L1 must equal 2f + d");
  if (!close(z_L1 - z_M1, l)) issues.emplace_back("geometry.z_L1 - z_M1 must equal l");
  if (!close(z_M2 - z_L2, l)) issues.emplace_back("geometry.z_M2 - z_L2 must equal l");
  return issues;
}

RayMatrix RayMatrix::operator*(const RayMatrix& r) const {
  return {A * r.A + B * r.C, A * r.B + B * r.D, C * r.A + D * r.C, C * r.B + D * r.D};
}

RayMatrix free_space(double length) { return {1.0, length, 0.0, 1.0}; }

RayMatrix thin_lens(double focal_length) { return {1.0, 0.0, -1.0 / focal_length, 1.0}; }

RayMatrix ray_matrix(const CavityGeometry& g) {
  const double f = g.f;
  const double l = g.l;
  const double d = g.d;
  const double a = -1.0 - d / f + d * l / (f * f);
  RayMatrix m;
  m.A = a;
  m.B = 2.0 * f - 2.0 * l + d - 2.0 * d * l / f + d * l * l / (f * f);
  m.C = d / (f * f);
  m.D = a;
  return m;
}

Stability is_stable(const CavityGeometry& geom) {
  const RayMatrix m = ray_matrix(geom);
  const double margin = m.A * m.D;
  return {margin > 0.0 && margin < 1.0, margin};
}

std::complex<double> q_parameter(const CavityGeometry& geom, double z) {
  const RayMatrix m = ray_matrix(geom);
  const double g1 = m.A;
  const double g2 = m.D;
  const double product = g1 * g2;
  if (!(product > 0.0 && product < 1.0)) {
    throw UnstableCavityError("no confined Gaussian mode: g1*g2* = " + std::to_string(product));
  }
  if (z < geom.z_M1 || z > geom.z_M2) {
    throw std::out_of_range("q_parameter: z outside [z_M1, z_M2]");
  }
  const double z_rel = z - geom.z_M1;
  const double l1 = geom.z_L1 - geom.z_M1;
  const double l2 = geom.z_L2 - geom.z_M1;

  using cd = std::complex<double>;
  const cd waist{0.0, std::abs(m.B) * std::sqrt(g2 / (g1 * (1.0 - product)))};
  if (z_rel <= l1) return waist + z_rel;

  const auto through_lens = [&](cd q) { return q / (-q / geom.f + 1.0); };
  const cd after_l1 = through_lens(waist + l1);
  if (z_rel <= l2) return after_l1 + (z_rel - l1);

  const cd after_l2 = through_lens(after_l1 + (l2 - l1));
  return after_l2 + (z_rel - l2);
}

double mode_radius(const CavityGeometry& geom, double z) {
  const std::complex<double> inv = 1.0 / q_parameter(geom, z);
  return std::sqrt(-geom.lambda / (M_PI * inv.imag()));
}

double beam_radius(const CavityGeometry& geom, double z) {
  const double at_gain = mode_radius(geom, geom.z_g);
  if (z == geom.z_g) return geom.a_g;
  return geom.a_g / at_gain * mode_radius(geom, z);
}

}  // namespace resobeam
