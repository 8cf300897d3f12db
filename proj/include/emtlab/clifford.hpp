#pragma once

// Gamma-matrix models of Cl(1, m-1) with the convention
//   gamma_mu gamma_nu + gamma_nu gamma_mu = -2 eta_{mu nu},
// so gamma_0^2 = +Id and gamma_i^2 = -Id.  The spinor pairing is
// <psi, phi> = psi^dagger A phi with A = gamma_0, under which Clifford
// multiplication by real vectors is symmetric.

#include <vector>

#include "emtlab/linalg.hpp"

namespace emtlab::clifford {

struct CliffordModel {
  int m = 0;
  int dim = 0;  // 2^floor(m/2)
  std::vector<CMat> gamma;
  CMat pairing;    // A = gamma_0
  bool even = false;
  CMat chirality;  // omega with omega^2 = Id, anticommuting with every gamma (even m)
  CMat proj_plus, proj_minus;

  // residual of all model invariants; ~1e-15 for a correct build
  double invariant_residual() const;
};

// Recursive tensor-product construction; supports 2 <= m <= 8.
CliffordModel build_clifford_model(int m);

// Apply (M (x) Id_V) to a twisted spinor with layout psi[s*dimV + v].
CVec apply_spinor_matrix(const CMat& M, const CVec& psi, int dim_v);

// Apply (Id_Sigma (x) B) to a twisted spinor.
CVec apply_twist_matrix(const CMat& B, const CVec& psi, int dim_sigma);

// Indefinite pairing <psi, phi> = psi^dagger (A (x) Id) phi.
cplx pair(const CliffordModel& model, const CVec& psi, const CVec& phi, int dim_v);

// Clifford multiplication by the frame vector with components X^mu.
CVec mult(const CliffordModel& model, const RVec& x_frame, const CVec& psi, int dim_v);

// Chirality sector of a twisted spinor: +1 if it lies in
// (Sigma_+ (x) V_+) + (Sigma_- (x) V_-), -1 for the mixed bundle, 0 otherwise.
int chirality_tag(const CliffordModel& model, const CVec& psi, int dim_v_plus, int dim_v_minus,
                  double tol = 1e-10);

struct SpinorJet {
  CVec value;
  std::vector<CVec> nabla;  // (nabla_omega Psi)(e_mu) per frame direction
  int dim_v = 1;
  int tag = 0;  // +1 / -1 / 0 (full)
};

struct DiracResult {
  CVec value;
  int tag = 0;
};

// eta^{mu nu} e_mu . (nabla Psi)(e_nu) = -gamma_0 (nabla Psi)_0 + sum_i gamma_i (nabla Psi)_i
DiracResult dirac_apply(const CliffordModel& model, const SpinorJet& jet);

}  // namespace emtlab::clifford
