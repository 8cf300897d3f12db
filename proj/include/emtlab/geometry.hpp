#pragma once

// Lorentzian backgrounds in ADM form: semi-orthonormal frames with e0 the
// future unit normal, causal-direction bookkeeping, and curvature of an
// analytic metric family by central differences.

#include <functional>
#include <string>

#include "emtlab/linalg.hpp"
#include "emtlab/numerics.hpp"

namespace emtlab::geometry {

// Lapse, shift and spatial metric at a point.  Coordinates are (t, x1, ...,
// x_{m-1}); the full metric is
//   g = -N^2 dt (x) dt + dt (x) beta_flat + beta_flat (x) dt + gbar.
struct AdmData {
  int m = 0;
  double N = 1.0;
  RVec beta;  // length m-1, vector components w.r.t. gbar
  RMat gbar;  // (m-1) x (m-1), symmetric positive definite

  void validate() const;
  RMat spacetime_metric() const;  // m x m coordinate components
};

inline RMat eta_matrix(int m) {
  RMat eta = RMat::identity(m);
  eta(0, 0) = -1;
  return eta;
}

// Frame vectors e_mu (rows) in coordinate components, Gram matrix = eta,
// e0 = n the future unit normal.  covectors holds the dual coframe e^mu
// (rows), so covectors * vectors^T = Id.
struct Frame {
  int m = 0;
  RMat vectors;
  RMat covectors;

  RVec to_frame_covector(const RVec& coord_oneform) const;  // w_mu = e_mu^a w_a
  RVec to_coord_vector(const RVec& frame_components) const; // V^a = V^mu e_mu^a
};

Frame build_frame(const AdmData& adm);

// Spatial frame from a caller-chosen ordering/mixing of the coordinate
// spatial basis (rows of `spatial_basis`); used by the frame-independence
// tests.  The basis must be gbar-nondegenerate.
Frame build_frame_with_basis(const AdmData& adm, const RMat& spatial_basis);

// Axis-aligned coordinate box with a uniform sample grid.
struct Region {
  RVec center;
  RVec half_widths;
  std::vector<int> samples;  // points per axis, >= 1

  int total_points() const;
  RVec point(int index) const;  // row-major over axes
  double cell_volume() const;   // product of axis spacings
};

enum class CausalClass { timelike, null, spacelike_invalid };

struct CausalDirection {
  RVec xi;
  double norm = 0;
  CausalClass kind = CausalClass::timelike;
};

CausalDirection classify_direction(const RVec& xi, double tol = 1e-9);

struct MetricFamily {
  int m = 0;
  std::string name;
  std::function<AdmData(const RVec&)> adm;   // ADM data at coordinates x
  std::function<RMat(const RVec&)> metric;   // full coordinate metric at x

  static MetricFamily minkowski(int m);
  static MetricFamily de_sitter(int m, double H);
  static MetricFamily flrw(int m, std::function<double(double)> scale);
  static MetricFamily from_adm(int m, std::function<AdmData(const RVec&)> adm, std::string name);
};

struct CurvatureData {
  int m = 0;
  std::vector<RMat> christoffel;  // [lambda](mu, nu), coordinate indices
  std::vector<double> riemann;    // R^l_{mnk} flattened, coordinate indices
  RMat ricci;                     // frame components
  double scal = 0;
  RMat einstein;                  // frame components
  RMat ricci_coord;
  RMat second_fundamental;        // K_ij = g(nabla_{e_i} n, e_j), spatial frame
  double mean_curvature = 0;

  double riem(int l, int mu, int nu, int k) const {
    return riemann[((static_cast<size_t>(l) * m + mu) * m + nu) * m + k];
  }
};

// Christoffels from g and dg; Riemann/Ricci/Scal/Einstein assembled with
// signature (-,+,...,+); second fundamental form of the t = const slice.
CurvatureData curvature_package(const MetricFamily& family, const RVec& x,
                                const numerics::Stencil& st);

std::vector<RMat> christoffels(const MetricFamily& family, const RVec& x,
                               const numerics::Stencil& st);

// Divergence (div T)_b = g^{ca} (nabla_c T)_{ab} of a symmetric 2-tensor
// field given in coordinate components; nabla_star_T = -div T.
RVec covariant_divergence(const std::function<RMat(const RVec&)>& tensor_field,
                          const MetricFamily& family, const RVec& x,
                          const numerics::Stencil& st);

// Covariant derivative of a coordinate 1-form field, (nabla_a w)_b.
RMat covariant_derivative_oneform(const std::function<RVec(const RVec&)>& oneform_field,
                                  const MetricFamily& family, const RVec& x,
                                  const numerics::Stencil& st);

}  // namespace emtlab::geometry
