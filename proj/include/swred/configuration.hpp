#pragma once

// Field content on the torus.
//
// A configuration is (A, psi, Phi):
//   A   = a dz - conj(a) dzbar     U(1) connection form, values in iR
//   psi = (psi1, psi2)             spinor components (complex functions)
//   Phi = phi dz - conj(phi) dzbar Higgs 1-form, values in iR
//
// Both iR-valued 1-forms are stored through their free dz-coefficient.
//
// Gauge transformations are parametrized by an iR-valued function zeta
// (the group element is e^{zeta}):
//
//   a  ->  a + d_z zeta,    psi_i -> e^{-zeta} psi_i,    phi fixed.
//
// Tangent directions at a configuration are X = (alpha, beta1, beta2, gamma)
// with alpha, gamma iR-valued 1-forms and beta_i complex functions.  The
// infinitesimal gauge action is X_zeta = (d zeta, -zeta psi1, -zeta psi2, 0).

#include <random>

#include "swred/spectral.hpp"

namespace swred {

// Thrown when a requested closed-form solution does not close up on the
// torus (its phase gradient is not an integer mode).
struct NonPeriodicParameter : std::runtime_error {
  explicit NonPeriodicParameter(const std::string& what);
};

struct Connection {
  ScalarField a;  // dz-coefficient
  explicit Connection(ScalarField a_) : a(std::move(a_)) {}
  OneFormField form() const { return imaginary_one_form(a); }
};

struct Spinor {
  ScalarField psi1;
  ScalarField psi2;
  Spinor(ScalarField p1, ScalarField p2);
};

struct Higgs {
  ScalarField phi;  // dz-coefficient
  explicit Higgs(ScalarField phi_) : phi(std::move(phi_)) {}
  OneFormField form() const { return imaginary_one_form(phi); }
};

struct Configuration {
  Connection connection;
  Spinor spinor;
  Higgs higgs;
  Configuration(Connection c, Spinor s, Higgs h);
  const TorusGrid& grid() const { return connection.a.grid; }
};

// iR-valued gauge parameter; also serves as a Lie-algebra element.
struct GaugeElement {
  ScalarField zeta;
  explicit GaugeElement(ScalarField z);
};

struct TangentVector {
  OneFormField alpha;  // iR-valued
  ScalarField beta1;
  ScalarField beta2;
  OneFormField gamma;  // iR-valued
  TangentVector(OneFormField a, ScalarField b1, ScalarField b2, OneFormField g);
  const TorusGrid& grid() const { return beta1.grid; }
};

// Build a tangent vector from the free dz-coefficients of alpha and gamma.
TangentVector tangent_from_coefficients(const ScalarField& pa,
                                        const ScalarField& b1,
                                        const ScalarField& b2,
                                        const ScalarField& pg);
TangentVector zero_tangent(const TorusGrid& g);

TangentVector operator+(const TangentVector& x, const TangentVector& y);
TangentVector operator-(const TangentVector& x, const TangentVector& y);
TangentVector operator*(double c, const TangentVector& x);

// c + t X, acting on the stored coefficients.
Configuration advance(const Configuration& c, const TangentVector& x, double t);

Configuration gauge_apply(const GaugeElement& u, const Configuration& c);
// Pushforward of a tangent vector along gauge_apply(u, .).
TangentVector gauge_pushforward(const GaugeElement& u, const TangentVector& x);
// Infinitesimal gauge action at c.
TangentVector gauge_vector_field(const GaugeElement& zeta, const Configuration& c);

// Closed-form solution family (translation-invariant modulus):
//
//   a    = -i c2 / 2
//   psi1 = c1
//   psi2 = c1 e^{i c2 (z + zbar)}
//   phi  = -i c2 e^{-i c2 (z + zbar)}
//
// It solves the coupled system exactly iff |c1|^2 = 2 c2^2; other amplitudes
// are useful as controlled non-solutions.  Throws NonPeriodicParameter
// unless 2 c2 side / (2 pi) is an integer.
Configuration explicit_torus_solution(const TorusGrid& g, Complex c1, double c2);

// Matching amplitude for a given c2 and phase angle.
Complex explicit_solution_amplitude(double c2, double phase = 0.0);

// Random band-limited data, reproducible from the caller's engine.
ScalarField random_bandlimited_field(const TorusGrid& g, int max_mode,
                                     double amplitude, std::mt19937_64& rng);
Configuration random_configuration(const TorusGrid& g, int max_mode,
                                   double amplitude, std::mt19937_64& rng);
TangentVector random_tangent(const TorusGrid& g, int max_mode,
                             double amplitude, std::mt19937_64& rng);
GaugeElement random_gauge(const TorusGrid& g, int max_mode, double amplitude,
                          std::mt19937_64& rng);

}  // namespace swred
