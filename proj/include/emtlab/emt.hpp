#pragma once

// Sector energy-momentum tensors in a semi-orthonormal frame with e0 = n,
// their trace and divergence identities, and the variational cross-check
// against the defining metric perturbation.

#include <optional>

#include "emtlab/gauge.hpp"

namespace emtlab::emt {

enum class Sector { yang_mills, higgs, dirac, conformal_higgs, total };

const char* sector_name(Sector s);

struct EnergyMomentumTensor {
  int m = 0;
  Sector sector = Sector::total;
  RMat comps;  // frame components, symmetric

  double trace_eta() const;                 // eta^{mu nu} T_{mu nu}
  double contract(const RVec& x_frame) const;  // T(X, X)
  double symmetry_residual() const;
};

// T_{mu nu} = eta^{ab} <F_{mu a}, F_{nu b}> - (1/2)|F|^2 eta_{mu nu}
EnergyMomentumTensor emt_yang_mills(const std::vector<std::vector<RVec>>& f_frame, int m);

EnergyMomentumTensor emt_higgs_value(const gauge::GaugeJet& jet, double potential_value);
// evaluates the potential itself; rejects the conformal kind
EnergyMomentumTensor emt_higgs(const gauge::GaugeJet& jet, const gauge::Potential& pot);

EnergyMomentumTensor emt_dirac(const clifford::SpinorJet& psi,
                               const clifford::CliffordModel& model, int m);

// Needs a depth-2 jet and curvature; nabla^2 Phi is symmetrized.  The
// formula is the on-shell one (it absorbed the Higgs equation).
EnergyMomentumTensor emt_conformal_higgs(const gauge::GaugeJet& jet,
                                         const geometry::CurvatureData& curv, double lambda,
                                         double yukawa_pairing);

struct SectorSet {
  int m = 0;
  bool has_ym = false, has_higgs = false, has_chiggs = false, has_dirac = false;
  EnergyMomentumTensor ym, higgs, chiggs, dirac, total;
  gauge::GaugeJet jet;
  double potential_value = 0;
  double yukawa_pairing = 0;
  double f_norm2 = 0;       // |F|^2
  double dphi_norm2 = 0;    // |nabla Phi|^2
  double phi_norm2 = 0;
  std::optional<geometry::CurvatureData> curvature;
};

SectorSet evaluate_sectors(const gauge::FieldConfig& cfg, const RVec& x,
                           const numerics::Stencil& st);

struct TraceResiduals {
  std::optional<double> yang_mills;       // algebraic
  std::optional<double> higgs;            // algebraic
  std::optional<double> dirac_algebraic;  // Tr = (1/2) Re<Psi, i D Psi>
  std::optional<double> dirac_on_shell;   // Tr = -(1/2) <Psi, i Y Psi>
  std::optional<double> chiggs_on_shell;
  std::optional<double> total_conformal_on_shell;
  double max_algebraic() const;
};

TraceResiduals trace_check(const SectorSet& s, const gauge::FieldConfig& cfg);

// Sector tensor in coordinate components at x (for divergence stencils).
RMat sector_tensor_coord(const gauge::FieldConfig& cfg, const RVec& x,
                         const numerics::Stencil& jet_st, Sector sector);

// nabla^* T in frame components: -(div T) evaluated by Christoffel-corrected
// central differences of the coordinate tensor field at step `div_st`.
RVec nabla_star_tensor(const gauge::FieldConfig& cfg, const RVec& x,
                       const numerics::Stencil& jet_st, const numerics::Stencil& div_st,
                       Sector sector);

struct DivergenceResiduals {
  // (a) off-shell Yang-Mills: nabla^* T^YM(e_nu) = -eta^{lm} <(d*F)_l, F_{m nu}>
  std::optional<double> ym_off_shell;
  // (b) off-shell Higgs: nabla^* T^H(e_nu) = -Re<box Phi - grad U/2, (nabla Phi)_nu>
  //                                          - Re<(nabla Phi)^mu, rho(F_{mu nu}) Phi>
  std::optional<double> higgs_off_shell;
  // (c) on-shell conservation of the total tensor
  std::optional<double> total_on_shell;
};

DivergenceResiduals divergence_identity_check(const gauge::FieldConfig& cfg, const RVec& x,
                                              const numerics::Stencil& jet_st,
                                              const numerics::Stencil& div_st,
                                              bool scene_is_solution);

struct VariationalResult {
  double lhs = 0, rhs = 0;
  double abs_error() const { return std::abs(lhs - rhs); }
  double rel_error() const {
    double scale = std::max(std::abs(lhs), std::abs(rhs));
    return scale > 0 ? abs_error() / scale : abs_error();
  }
};

// d/dt of the action under g -> g + t h against the integral of <h, T>;
// only the Yang-Mills and metric-independent Higgs sectors are in scope.
VariationalResult variational_oracle(const gauge::FieldConfig& cfg,
                                     const std::function<RMat(const RVec&)>& h_field,
                                     const geometry::Region& region, double t_step, int threads);

}  // namespace emtlab::emt
