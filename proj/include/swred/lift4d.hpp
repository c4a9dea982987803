#pragma once

// Four-dimensional picture over T^2 x R^2_inv: configurations whose fields
// do not depend on x3, x4.  The U(1) connection is i sum_j A_j dx_j with
// real components A_j, curvature F_jk = i(d_j A_k - d_k A_j), and the
// spinor bundle carries the quaternion action
//
//   gamma(e1) = Id,   I = diag(i, -i),   J = [[0,-1],[1,0]],  K = [[0,-i],[-i,0]]
//
// satisfying I^2 = J^2 = K^2 = -Id, IJ = K, JK = I, KI = J.
//
// Residuals of the coupled system:
//
//   curv_a = F12 + F34 - eta1          eta1 = i (|psi1|^2 - |psi2|^2)
//   curv_b = F13 + F42 - eta2 / 2      eta2 = 2i Im(psi1 conj(psi2))
//   curv_c = F14 + F23 - eta3 / 2      eta3 = -2i Re(psi1 conj(psi2))
//   dirac  = D1 Psi - I D2 Psi - J D3 Psi - K D4 Psi,   D_j = d_j + i A_j
//
// A torus configuration (a, psi, phi) lifts through
//
//   A1 = 2 Im a,  A2 = 2 Re a,  A3 = -Im phi,  A4 = Re phi
//
// and the two pictures agree exactly, with fixed constants:
//
//   curv_a = -2i r1,   curv_b + i curv_c = r2,
//   dirac_1 = 2 r3b,   dirac_2 = 2 r3a.

#include <array>

#include "swred/residuals.hpp"

namespace swred {

using SpinorMatrix = std::array<std::array<Complex, 2>, 2>;

SpinorMatrix quaternion_i();
SpinorMatrix quaternion_j();
SpinorMatrix quaternion_k();

// Largest entry-wise deviation across the quaternion relations
// (squares, products, anticommutators).  Exactly zero.
double clifford_defect();

struct Config4D {
  std::array<ScalarField, 4> A;  // real-valued connection components
  Spinor psi;
  Config4D(std::array<ScalarField, 4> A, Spinor psi);  // validates
  const TorusGrid& grid() const { return psi.psi1.grid; }
};

struct Residual4D {
  ScalarField curv_a;
  ScalarField curv_b;
  ScalarField curv_c;
  ScalarField dirac1;
  ScalarField dirac2;
};

Config4D lift(const Configuration& c);
Configuration project_2d(const Config4D& c);

Residual4D sw4d_residuals(const Config4D& c);

// Evaluates both routes on the same configuration and reports the max-abs
// deviation of each frozen identity.
struct ReductionCheck {
  double curv_a;    // |curv_a + 2i r1|
  double curv_bc;   // |curv_b + i curv_c - r2|
  double dirac1;    // |dirac_1 - 2 r3b|
  double dirac2;    // |dirac_2 - 2 r3a|
  double max_deviation() const;
};

ReductionCheck reduction_consistency_check(const Configuration& c);

}  // namespace swred
