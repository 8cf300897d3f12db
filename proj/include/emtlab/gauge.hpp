#pragma once

// Compact Lie algebras with Ad-invariant inner products, unitary
// representations, connections and curvature in a local trivialization,
// covariant jets of Higgs and twisted-spinor fields, potentials, Yukawa
// couplings, the currents feeding the field equations, and Euler-Lagrange
// residuals.
//
// Conventions frozen here and verified by the identity suite (see
// docs/conventions.md):
//   box_omega     = eta-trace of the second covariant derivative,
//   d_omega^*     = -(gauge-covariant divergence),
//   spinor nabla  = d + (1/4) omega_{a mu nu} gamma^mu gamma^nu + chi(A_a).

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "emtlab/clifford.hpp"
#include "emtlab/geometry.hpp"
#include "emtlab/linalg.hpp"
#include "emtlab/numerics.hpp"

namespace emtlab::gauge {

struct LieAlgebraModel {
  std::string name;
  int dim_g = 0;
  int def_dim = 0;                  // dimension of the defining space
  std::vector<CMat> basis;          // anti-Hermitian, orthonormal
  std::vector<double> dual_factor;  // coords_a(Z) = -dual_factor[a] Re tr(basis[a] Z)
  std::vector<double> structure;    // f_abc = <[xi_a, xi_b], xi_c>

  double f(int a, int b, int c) const {
    return structure[(static_cast<size_t>(a) * dim_g + b) * dim_g + c];
  }
  RVec bracket(const RVec& u, const RVec& v) const;
  CMat matrix(const RVec& u) const;
  RVec coords(const CMat& z) const;
  double ad_invariance_residual() const;
};

// Supported factor names: "u1", "su2", "su3"; a list builds the direct sum.
LieAlgebraModel build_lie_algebra(const std::vector<std::string>& factors);

struct RepresentationModel {
  int dim_w = 0;
  std::vector<CMat> rho;  // per generator on W
  int dim_v_plus = 0, dim_v_minus = 0;
  std::vector<CMat> chi;  // per generator on V = V+ (+) V-, block diagonal

  int dim_v() const { return dim_v_plus + dim_v_minus; }
  CMat rho_of(const RVec& u) const;
  CMat chi_of(const RVec& u) const;
  double unitarity_residual() const;  // anti-Hermiticity + block structure
};

RepresentationModel rep_trivial(const LieAlgebraModel& alg, int dim_w, int dim_v_plus,
                                int dim_v_minus);
RepresentationModel rep_u1_charge(const LieAlgebraModel& alg, double q_w, int dim_w,
                                  double q_v_plus, int dim_v_plus, double q_v_minus,
                                  int dim_v_minus);
RepresentationModel rep_su2_fundamental(const LieAlgebraModel& alg);

struct Potential {
  enum class Kind { none, mexican_hat, conformal } kind = Kind::none;
  double lambda = 0, mu = 0;

  void validate() const;
};

struct PotentialValue {
  double U = 0;
  CVec grad;
};

// Conformal kind needs the scalar curvature; passing it to another kind is
// harmless, omitting it for conformal is an error.
PotentialValue potential_eval(const Potential& pot, const CVec& phi, int m,
                              std::optional<double> scal = std::nullopt);

struct YukawaModel {
  enum class Kind { zero, mass, block } kind = Kind::zero;
  double mass = 0;                 // odd-m mass map: i Y Psi = mass * Psi
  std::vector<CMat> blocks;        // per W_k: V+ -> V-, Y linear in Phi
  int dim_w = 0, dim_v_plus = 0, dim_v_minus = 0;

  // B(phi) on V = V+ (+) V- with blocks [[0, -y(phi)^dagger], [y(phi), 0]];
  // Y_phi = Id_Sigma (x) B(phi), so that iY_phi is self-adjoint.
  CMat twist_op(const CVec& phi) const;
  // the Phi-derivative family used by J3 and the divergence identities;
  // zero map for the zero/mass kinds
  CMat twist_op_linear(const CVec& alpha) const;
};

CVec yukawa_apply(const YukawaModel& yk, const CVec& phi, const CVec& psi, int dim_sigma);
// <Psi, i Y_phi Psi>, real by self-adjointness
double yukawa_pair(const clifford::CliffordModel& model, const YukawaModel& yk, const CVec& phi,
                   const CVec& psi);
// J3 with 2 Re<phi, J3> = <Psi, i Y_phi Psi> for all phi in the linear family
CVec yukawa_dual(const clifford::CliffordModel& model, const YukawaModel& yk, const CVec& psi);

// Everything needed to evaluate fields pointwise: the background, algebraic
// models, and coordinate-space field callables.
struct FieldConfig {
  int m = 0;
  geometry::MetricFamily metric;
  LieAlgebraModel algebra;
  RepresentationModel rep;
  clifford::CliffordModel cliff;
  Potential potential;
  YukawaModel yukawa;

  // A[a] in g-coordinates, a a coordinate index
  std::function<std::vector<RVec>(const RVec&)> connection;
  std::function<CVec(const RVec&)> higgs;
  // twisted spinor components in the frame-aligned trivialization
  std::function<CVec(const RVec&)> spinor;

  // optional mixing of the coordinate spatial basis fed to Gram-Schmidt;
  // empty means the coordinate order x1, ..., x_{m-1}
  RMat spatial_basis;

  bool has_connection() const { return static_cast<bool>(connection); }
  bool has_higgs() const { return static_cast<bool>(higgs); }
  bool has_spinor() const { return static_cast<bool>(spinor); }

  std::vector<RVec> connection_at(const RVec& x) const;
  geometry::Frame frame_at(const RVec& x) const;
};

struct GaugeJet {
  int m = 0;
  geometry::Frame frame;
  std::vector<RVec> A;                // A(e_mu), g-coordinates
  std::vector<std::vector<RVec>> F;   // F(e_mu, e_nu), antisymmetric
  bool has_phi = false;
  CVec phi;
  std::vector<CVec> dphi;             // (nabla Phi)(e_mu)
  bool has_depth2 = false;
  std::vector<std::vector<CVec>> ddphi;  // (nabla^2 Phi)(e_mu, e_nu), unsymmetrized
  bool has_spinor = false;
  clifford::SpinorJet psi;
};

// F_{ab} = d_a A_b - d_b A_a + [A_a, A_b] in coordinate indices.
std::vector<std::vector<RVec>> field_strength_coord(const FieldConfig& cfg, const RVec& x,
                                                    const numerics::Stencil& st);

// (nabla Phi)_a = d_a Phi + rho(A_a) Phi in coordinate indices.
std::vector<CVec> higgs_cov_deriv_coord(const FieldConfig& cfg, const RVec& x,
                                        const numerics::Stencil& st);

GaugeJet covariant_jet(const FieldConfig& cfg, const RVec& x, const numerics::Stencil& st,
                       int depth);

struct EBSplit {
  std::vector<RVec> electric;               // E_i = F(n, e_i)
  std::vector<std::vector<RVec>> magnetic;  // B_ij = F(e_i, e_j)
  double norm2_e = 0, norm2_b = 0;          // |E|^2, |B|^2; |F|^2 = -|E|^2 + |B|^2
};

EBSplit eb_split(const std::vector<std::vector<RVec>>& f_frame, int dim_g);

struct Currents {
  std::vector<RVec> j1;  // per frame direction, g-coordinates
  std::vector<RVec> j2;
  CVec j3;
};

Currents currents(const GaugeJet& jet, const FieldConfig& cfg);

// (d_omega^* F)(e_nu) = -g^{ab} (nabla_a F)_{b nu} converted to the frame.
std::vector<RVec> d_omega_star_f(const FieldConfig& cfg, const RVec& x,
                                 const numerics::Stencil& st);

// box_omega Phi = eta-trace of the second covariant derivative.
CVec box_phi(const FieldConfig& cfg, const RVec& x, const numerics::Stencil& st);

// Spin connection term sigma_a = (1/4) omega_{a mu nu} gamma^mu gamma^nu.
std::vector<CMat> spin_connection(const FieldConfig& cfg, const RVec& x,
                                  const numerics::Stencil& st);

// (nabla Psi)_a = d_a Psi + sigma_a Psi + chi(A_a) Psi, coordinate index a.
std::vector<CVec> spinor_cov_deriv(const FieldConfig& cfg,
                                   const std::function<CVec(const RVec&)>& field, const RVec& x,
                                   const numerics::Stencil& st);

CVec dirac_of_fields(const FieldConfig& cfg, const std::function<CVec(const RVec&)>& field,
                     const RVec& x, const numerics::Stencil& st);

struct ElResiduals {
  std::vector<RVec> yang_mills;  // per frame direction, g-coordinates
  CVec higgs;
  CVec dirac;
  double norm_yang_mills() const;
  double norm_higgs() const { return norm2(higgs); }
  double norm_dirac() const { return norm2(dirac); }
};

ElResiduals el_residuals(const FieldConfig& cfg, const RVec& x, const numerics::Stencil& st);

// || D^2 Psi - (-box Psi + (1/4) Scal Psi + (1/2) gamma^mu gamma^nu chi(F_{mu nu}) Psi) ||
double weitzenboeck_residual(const FieldConfig& cfg, const RVec& x, const numerics::Stencil& st);

}  // namespace emtlab::gauge
