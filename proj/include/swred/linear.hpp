#pragma once

// Linearization of the residual system and numerical deformation theory.
//
// At a configuration c, the derivative of the residual map in the direction
// X = (alpha, beta1, beta2, gamma) is embedded in a one-parameter family
// d2^t (t in [0,1]) that turns on the zeroth-order couplings:
//
//   dr1  = (d alpha)-coefficient + t ( Re(conj(psi1) b1) - Re(conj(psi2) b2) )
//   dr2  = -2 d_zbar p_gamma - t ( b1 conj(psi2) + psi1 conj(b2) )
//   dr3a = d_zbar b2 - conj(a) b2 - (t/2) conj(phi) b1
//          + t ( q_alpha psi2 + (1/2) q_gamma psi1 )
//   dr3b = d_z b1 + a b1 - (t/2) phi b2
//          + t ( p_alpha psi1 - (1/2) p_gamma psi2 )
//
// (p/q are the dz / dzbar coefficients; q = -conj(p) for iR-valued forms).
// t = 1 is the honest derivative of the nonlinear residuals; t = 0 decouples
// the system into (d, d*) on alpha, d_zbar on gamma, and the covariant Dirac
// pair on beta.  The matching gauge family is d1^t f = (df, -t f psi, 0).
//
// At a solution base, d2^t d1^t = 0 holds at t = 0 and t = 1.  For interior
// t the composition does not cancel: on the Dirac rows it equals
// ((t^2 - t)/2) f phi psi2 and ((t^2 - t)/2) f conj(phi) psi1, which vanish
// only when phi psi = 0.  Tests pin both facts.
//
// kernel_index computes, at a solution, the kernel and cokernel of the
// rolled-up operator T_t = (d2^t, (d1^t)^*) restricted to band-limited
// tangents: the kernel from an SVD of d2^t stacked on the gauge pairings,
// the cokernel as the null space over pairs (y, f) of
// <d2 b, y> + <b, d1 f>_g = 0 tested against an enlarged domain band (which
// captures the adjoint exactly, since multiplication by the base fields
// shifts bands by at most the base's own bandwidth).

#include <string>
#include <vector>

#include "swred/residuals.hpp"

namespace swred {

struct LinearizedResidual {
  TwoFormField dr1;
  TwoFormField dr2;
  ScalarField dr3a;
  ScalarField dr3b;
};

LinearizedResidual linearized_residual(const Configuration& c,
                                       const TangentVector& x, double t = 1.0);

// d1^t f = (df, -t f psi1, -t f psi2, 0).
TangentVector d1(const Configuration& c, const GaugeElement& f, double t = 1.0);

// L2 metric on tangents: |X|^2 = 4|p_alpha|^2 + 2|b1|^2 + 2|b2|^2
// + 4|p_gamma|^2 integrated (the iR-form slots carry |dz|^2 = 2 twice).
double tangent_inner(const TangentVector& x, const TangentVector& y);
double tangent_norm(const TangentVector& x);

double residual_norm_sq(const LinearizedResidual& r);

// L2-orthonormal basis of iR-valued functions with modes in [-band, band]^2
// (i * {1, sqrt2 cos, sqrt2 sin} / side); size (2 band + 1)^2.
std::vector<ScalarField> imaginary_function_basis(const TorusGrid& g, int band);

// Smallest B such that all modes of f outside [-B, B]^2 are below
// rel_tol * (largest coefficient).
int field_band(const ScalarField& f, double rel_tol = 1e-12);

struct NotASolution : std::runtime_error {
  explicit NotASolution(double residual_norm);
  double residual_norm;
};

// The singular spectrum did not separate cleanly into kernel and
// non-kernel parts; dimensions would not be trustworthy.
struct UntrustworthyGap : std::runtime_error {
  UntrustworthyGap(const std::string& where, double gap, double required);
  double gap;
};

struct DimensionReport {
  int kernel_dim = 0;
  int cokernel_dim = 0;
  int index = 0;
  double kernel_gap = 0.0;    // smallest kept / largest discarded sigma
  double cokernel_gap = 0.0;
  int n = 0;
  int max_mode = 0;
  double t = 1.0;
};

struct KernelOptions {
  int max_mode = -1;           // < 0: use n/4
  double svd_rel_tol = 1e-8;   // kernel cutoff relative to sigma_max
  double min_gap = 1e3;        // below this, throw UntrustworthyGap
  double solution_tol = 1e-8;  // max allowed sqrt(energy) of the base
};

struct DeformationAnalysis {
  DimensionReport report;
  std::vector<TangentVector> kernel_basis;  // g-orthonormal
};

DeformationAnalysis analyze_deformations(const Configuration& c, double t = 1.0,
                                         const KernelOptions& opt = {});
DimensionReport kernel_index(const Configuration& c, double t = 1.0,
                             const KernelOptions& opt = {});

// Tangent space of the product model space: harmonic iR 1-forms for the
// connection factor and d_zbar-closed coefficients for the Higgs factor.
struct SigmaReport {
  int harmonic_dim;
  int dbar_kernel_dim;
  int total;
};
SigmaReport sigma_tangent_dim(const TorusGrid& g, int max_mode = -1);

// Closed-form expected dimensions by genus and degree:
//   "N" -> 2g + 2, "Sigma" -> 4g,
//   "vortex-psi1-zero" -> c1 + g + 1, "vortex-psi2-zero" -> -c1 + g + 1.
int dimension_formula(const std::string& name, int genus, int c1);

}  // namespace swred
