#pragma once

// Descent solvers for the coupled first-order system, driving the quartic
// energy E(c) = w_c ||r1||^2 + w_h ||r2||^2 + w_d (||r3a||^2 + ||r3b||^2)
// to zero.
//
// energy_gradient returns the exact Riesz representative of dE with respect
// to the tangent metric g (block weights 4/2/2/4).  Integrating the chain
// rule  dE(X) = 2 Re[ w_c <r1, dr1(X)> + w_h <r2, dr2(X)>
//                     + w_d (<r3a, dr3a(X)> + <r3b, dr3b(X)>) ]
// by parts gives the closed form (coefficient fields of the tangent slots)
//
//   grad_a  = w_c d_z r1 + (w_d/2) (r3b conj(psi1) - conj(r3a) psi2)
//   grad_b1 = w_c r1 psi1 - w_h r2 psi2
//             + w_d (-(1/2) phi r3a - d_zbar r3b + conj(a) r3b)
//   grad_b2 = -w_c r1 psi2 - w_h conj(r2) psi1
//             + w_d (-d_z r3a - a r3a - (1/2) conj(phi) r3b)
//   grad_g  = w_h d_z r2 - (w_d/4) (conj(r3a) psi1 + r3b conj(psi2))
//
// Every identity used in the derivation (integration by parts against the
// spectral derivatives, conjugation flips, pointwise rearrangements) holds
// exactly for the discrete operators, so tangent_inner(energy_gradient(c), X)
// equals the discrete directional derivative of the energy to roundoff for
// every grid tangent X.  Because the energy is gauge invariant and the gauge
// directions act on the Dirac rows by a pointwise imaginary multiplier, the
// gradient is exactly g-orthogonal to every gauge direction.
//
// solve() runs one of two descent methods from a starting configuration:
//
//   gauss_newton   minimum-norm least-squares step of the linearized system
//                  over the full grid tangent basis (every storage mode,
//                  Nyquist rows included).  The Jacobian is the exact
//                  derivative of the discrete residual map, so close to a
//                  solution the iterates converge quadratically to the
//                  discrete zero manifold; a band-limited step space would
//                  instead stall at the energy of the out-of-band content.
//                  The minimum-norm step (rank-revealing complete orthogonal
//                  decomposition) avoids the null directions — gauge action
//                  and moduli — so the iterate does not drift along the
//                  orbit;
//   gradient_flow  steepest descent along -energy_gradient.
//
// Both are safeguarded by Armijo backtracking using the exact directional
// derivative.  Iteration ends when the energy reaches energy_tol
// (converged), when the spinor L2 norm falls below psi_floor — near the
// decoupled branch psi == 0 the least-squares system degenerates, so the
// run is abandoned rather than silently re-targeted (StalledLineSearch) —
// when no descent step is found (StalledLineSearch), or when max_iters
// steps are exhausted (MaxItersExceeded).  Both exceptions carry the
// SolveReport accumulated so far.
//
// coulomb_gauge_fix moves a configuration into the Coulomb slice of a
// reference: it returns the gauged configuration together with the gauge
// parameter that makes the connection difference co-closed.  For iR
// 1-forms, delta(A - A_ref) = -4i Im(d_zbar(a - a_ref)), and the gauge
// shift a -> a + d_z(i s) moves that source by 4i d_z d_zbar(s), so
// inverting the discrete 4 d_z d_zbar on the source cancels it exactly,
// at every representable mode (the inversion must use the derivative
// operators' own symbol, which drops Nyquist frequency components).
// Configurations differing by a gauge transformation fix to the same
// slice point up to a constant phase (the harmonic remainder of the
// gauge parameter).

#include <stdexcept>
#include <string>
#include <vector>

#include "swred/linear.hpp"

namespace swred {

enum class SolveMethod { gauss_newton, gradient_flow };

struct SolveOptions {
  SolveMethod method = SolveMethod::gauss_newton;
  int max_iters = 50;
  double energy_tol = 1e-18;
  double psi_floor = 1e-4;  // abort below this spinor L2 norm
  double armijo_slope = 1e-4;
  double backtrack = 0.5;
  int max_backtracks = 40;
  EnergyWeights weights{};
  // return the result in Coulomb gauge relative to the starting
  // configuration (a convenience composition with coulomb_gauge_fix)
  bool gauge_fix = false;
};

struct SolveStep {
  int iteration;
  double energy;
  double r1, r2, r3a, r3b;  // L2 norms of the residual blocks
  double step;              // accepted line-search step; 0 on the starting row
};

struct SolveReport {
  std::vector<SolveStep> trace;  // starting state plus one row per step
  int iterations = 0;
  double initial_energy = 0.0;
  double final_energy = 0.0;
  double r1_norm = 0.0, r2_norm = 0.0, r3a_norm = 0.0, r3b_norm = 0.0;
  double gauge_fix_residual = 0.0;  // ||codifferential(A - A_start)|| at the end
  bool converged = false;
};

struct StalledLineSearch : std::runtime_error {
  SolveReport report;
  StalledLineSearch(const std::string& why, SolveReport rep);
};

struct MaxItersExceeded : std::runtime_error {
  SolveReport report;
  explicit MaxItersExceeded(SolveReport rep);
};

struct SolveResult {
  Configuration configuration;
  SolveReport report;
};

TangentVector energy_gradient(const Configuration& c,
                              const EnergyWeights& w = {});

struct GaugeFixResult {
  Configuration configuration;  // gauge_apply(gauge, input)
  GaugeElement gauge;           // zero-mean up to the constant (phase) part
};

GaugeFixResult coulomb_gauge_fix(const Configuration& c,
                                 const Configuration& reference);

// Throws std::invalid_argument when the starting spinor L2 norm is below
// 1e-8: the decoupled stratum psi == 0 is excluded from the search.
SolveResult solve(const Configuration& start, const SolveOptions& opt = {});

}  // namespace swred
