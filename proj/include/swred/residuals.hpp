#pragma once

// The reduced Seiberg-Witten system with Higgs field on the torus, written
// as residuals that vanish exactly on solutions:
//
//   r1  = ( F(A)-coefficient ) + (|psi1|^2 - |psi2|^2)/2      [2-form]
//         where F(A) = dA has dz^dzbar-coefficient -2 Re(d_zbar a)
//   r2  = -2 d_zbar phi - psi1 conj(psi2)                     [2-form]
//   r3a = d_zbar psi2 - conj(a) psi2 - (1/2) conj(phi) psi1   [function]
//   r3b = d_z    psi1 +       a psi1 - (1/2)      phi  psi2   [function]
//
// r1 is iR-valued as a 2-form (real dz^dzbar-coefficient); r2 is a general
// complex 2-form equation.  Under a gauge transformation zeta the pair
// (r1, r2) is invariant and (r3a, r3b) scales by e^{-zeta}, so the energy
//
//   E = |r1|^2 + |r2|^2 + |r3a|^2 + |r3b|^2   (L^2 norms of coefficients)
//
// is gauge-invariant.

#include "swred/configuration.hpp"

namespace swred {

// Thrown by construct_higgs_from_spinor when the source psi1 conj(psi2) has
// a nonzero mean, which obstructs solving the Higgs equation on the torus.
struct ObstructedSource : std::runtime_error {
  explicit ObstructedSource(double mean_abs);
  double mean_abs;
};

// Thrown by vortex_residuals when neither spinor component vanishes.
struct NotVortexConfiguration : std::runtime_error {
  NotVortexConfiguration();
};

struct ResidualBundle {
  TwoFormField r1;
  TwoFormField r2;
  ScalarField r3a;
  ScalarField r3b;
};

TwoFormField residual_curvature(const Configuration& c);
TwoFormField residual_higgs(const Configuration& c);
// Returns {r3a, r3b} packed in a Spinor-shaped pair.
struct DiracResidual {
  ScalarField r3a;
  ScalarField r3b;
};
DiracResidual residual_dirac(const Configuration& c);

ResidualBundle residuals(const Configuration& c);

struct EnergyWeights {
  double curvature = 1.0;
  double higgs = 1.0;
  double dirac = 1.0;
};

double energy(const ResidualBundle& r, const EnergyWeights& w = {});
double energy(const Configuration& c, const EnergyWeights& w = {});

// Solves the Higgs equation for a given spinor by inverting the discrete
// d_zbar on psi1 conj(psi2).  The mean of the pairing must vanish
// (ObstructedSource otherwise); the result makes r2 vanish at every mode
// the grid can correct -- identically for band-resolved pairings.
Higgs construct_higgs_from_spinor(const Spinor& s);

// The system specialized to one-component spinors (abelian vortex form).
// Requires psi1 or psi2 to vanish identically; returns the same residual
// bundle, in which the Dirac rows decouple.
ResidualBundle vortex_residuals(const Configuration& c);

}  // namespace swred
