#pragma once

// Metric, symplectic pairings, and quaternionic structures on the tangent
// space of configurations.
//
// With X = (alpha, b1, b2, gamma), writing p/q for dz/dzbar coefficients
// and <u, v> = integral of u conj(v):
//
//   g(X,Y)  = 4 Re<pa,pa'> + 2 Re<b1,b1'> + 2 Re<b2,b2'> + 4 Re<pg,pg'>
//   Omega   = 4 Im<pa,pa'> - 2 Im<b1,b1'> + 2 Im<b2,b2'> + 4 Im<pg,pg'>
//   omega1  =   same as Omega but with the gamma term negated
//   omega2  = 4 Im<pg,pa'> + 4 Im<pa,pg'> + 2 Re<b2,b1'> - 2 Re<b1,b2'>
//   omega3  = -4 Re<pg,pa'> + 4 Re<pa,pg'> - 2 Im<b2,b1'> - 2 Im<b1,b2'>
//   Q(X,Y)  = -4i int q_a pg' + 4i int q_a' pg - 2<b1,b2'> + 2 conj<b2,b1'>
//
// Q is computed through the dzbar coefficients and plain (unconjugated)
// products — an independent route that must reproduce omega2 + i omega3.
//
// The compatible almost-complex structures (star multiplies a form's
// dz-coefficient by -i):
//
//   star_both: (*, diag(i,-i) on b, *)    g(star_both X, Y) = Omega(X, Y)
//   hk1:       (*, diag(i,-i) on b, -*)   g(hk1 X, Y) = omega1(X, Y)
//   hk2:       alpha -> *gamma, (b1,b2) -> (b2,-b1), gamma -> *alpha
//   hk3:       alpha -> -gamma, (b1,b2) -> (i b2, i b1), gamma -> alpha
//
// (hk1, hk2, hk3) satisfy the quaternion relations (hk1 hk2 = hk3 and
// cyclic, squares = -1), each is a g-isometry, and omega_k = g(hk_k ., .).
//
// Moment maps: the curvature residual 2-form generates the gauge action
// through Omega — for any configuration and any iR function zeta,
//
//   H_zeta = int zeta * (curvature residual),   dH_zeta(X) = Omega(X_zeta, X)
//
// exactly.  The Higgs residual plays the same role for Q after two frame
// rotations: the moment form is -i times the Higgs residual, and the
// pairing is Q with the second argument's gamma coefficient rotated by -i
// (pairing_q_rotated).  Both identities are exact at every configuration,
// not only at solutions.

#include "swred/linear.hpp"

namespace swred {

double metric_g(const TangentVector& x, const TangentVector& y);
double symplectic_omega(const TangentVector& x, const TangentVector& y);
double omega1(const TangentVector& x, const TangentVector& y);
double omega2(const TangentVector& x, const TangentVector& y);
double omega3(const TangentVector& x, const TangentVector& y);
Complex pairing_q(const TangentVector& x, const TangentVector& y);

enum class Structure { star_both, hk1, hk2, hk3 };
TangentVector apply_structure(Structure s, const TangentVector& x);

// Moment 2-forms and their Hamiltonians.
TwoFormField moment_map(const Configuration& c);    // curvature residual
TwoFormField moment_map_q(const Configuration& c);  // -i * Higgs residual
double moment_hamiltonian(const Configuration& c, const ScalarField& zeta);
Complex moment_hamiltonian_q(const Configuration& c, const ScalarField& zeta);
// Q with the gamma coefficient of the SECOND argument rotated by -i.
Complex pairing_q_rotated(const TangentVector& x, const TangentVector& y);

// How far S X is from staying a gauge-orthogonal solution of the
// linearized equations at c, relative to |S X|: the norm of the linearized
// residual of S X and the largest gauge pairing.  For X in the gauge-fixed
// kernel both vanish iff S preserves the kernel.
struct LemmaCheck {
  double lin_residual;
  double gauge_defect;
};
LemmaCheck orthogonality_lemma_check(const Configuration& c,
                                     const TangentVector& x, Structure variant,
                                     double t = 1.0);

// Randomized verification of every structural identity above; deviations
// are relative.  inject_sign_fault deliberately corrupts one sign in the
// omega3 evaluation to demonstrate that the suite detects a broken
// identity (a self-test of the harness, used by the CLI).
struct IdentityReport {
  std::vector<std::pair<std::string, double>> deviations;
  double worst() const;
};
IdentityReport hyperkahler_identity_check(const TorusGrid& g, unsigned seed,
                                          bool inject_sign_fault = false);

}  // namespace swred
