#include "swred/residuals.hpp"

#include <cmath>
#include <string>

namespace swred {

ObstructedSource::ObstructedSource(double mean_abs_)
    : std::runtime_error(
          "construct_higgs_from_spinor: psi1 conj(psi2) has nonzero mean " +
          std::to_string(mean_abs_) + "; the Higgs equation has no solution"),
      mean_abs(mean_abs_) {}

NotVortexConfiguration::NotVortexConfiguration()
    : std::runtime_error(
          "vortex_residuals: neither spinor component vanishes") {}

TwoFormField residual_curvature(const Configuration& c) {
  const TwoFormField curv = exterior_d(c.connection.form());
  const ScalarField& p1 = c.spinor.psi1;
  const ScalarField& p2 = c.spinor.psi2;
  return TwoFormField(curv.f + 0.5 * (p1 * conj(p1) - p2 * conj(p2)));
}

TwoFormField residual_higgs(const Configuration& c) {
  return TwoFormField(Complex{-2.0, 0.0} * partial_zbar(c.higgs.phi) -
                      c.spinor.psi1 * conj(c.spinor.psi2));
}

DiracResidual residual_dirac(const Configuration& c) {
  const ScalarField& a = c.connection.a;
  const ScalarField& phi = c.higgs.phi;
  const ScalarField& p1 = c.spinor.psi1;
  const ScalarField& p2 = c.spinor.psi2;
  ScalarField r3a = partial_zbar(p2) - conj(a) * p2 - 0.5 * (conj(phi) * p1);
  ScalarField r3b = partial_z(p1) + a * p1 - 0.5 * (phi * p2);
  return {std::move(r3a), std::move(r3b)};
}

ResidualBundle residuals(const Configuration& c) {
  DiracResidual d = residual_dirac(c);
  return {residual_curvature(c), residual_higgs(c), std::move(d.r3a),
          std::move(d.r3b)};
}

double energy(const ResidualBundle& r, const EnergyWeights& w) {
  return w.curvature * l2_norm_sq(r.r1) + w.higgs * l2_norm_sq(r.r2) +
         w.dirac * (l2_norm_sq(r.r3a) + l2_norm_sq(r.r3b));
}

double energy(const Configuration& c, const EnergyWeights& w) {
  return energy(residuals(c), w);
}

Higgs construct_higgs_from_spinor(const Spinor& s) {
  const ScalarField pairing = s.psi1 * conj(s.psi2);
  const double mean_abs = std::abs(mean(pairing));
  if (mean_abs > precondition_tol * std::max(1.0, max_abs(pairing)))
    throw ObstructedSource(mean_abs);
  // Invert -2 d_zbar on the pairing mode by mode, using the derivative's
  // own symbol (Nyquist frequency components dropped), so the Higgs
  // residual vanishes at every mode the grid can correct.  The symbol is
  // zero only at the mean (the documented obstruction, checked above) and
  // at the three doubly-Nyquist slots, which are empty for any pairing
  // the grid resolves.
  std::vector<Complex> modes = to_modes(pairing);
  const TorusGrid& g = pairing.grid;
  const int n = g.n;
  for (int a = 0; a < n; ++a) {
    const int m1 = g.signed_mode(a);
    const double k1 = (m1 == -n / 2) ? 0.0 : g.kappa(m1);
    for (int b = 0; b < n; ++b) {
      const int m2 = g.signed_mode(b);
      const double k2 = (m2 == -n / 2) ? 0.0 : g.kappa(m2);
      // -2 * d_zbar symbol = -(i k1 - k2) = k2 - i k1
      const Complex symbol{k2, -k1};
      const std::size_t idx = static_cast<std::size_t>(a) * n + b;
      modes[idx] =
          (symbol == Complex{0.0, 0.0}) ? Complex{0.0, 0.0} : modes[idx] / symbol;
    }
  }
  return Higgs(from_modes(g, modes));
}

ResidualBundle vortex_residuals(const Configuration& c) {
  const double scale =
      std::max({1.0, max_abs(c.spinor.psi1), max_abs(c.spinor.psi2)});
  const bool psi1_zero = max_abs(c.spinor.psi1) <= precondition_tol * scale;
  const bool psi2_zero = max_abs(c.spinor.psi2) <= precondition_tol * scale;
  if (!psi1_zero && !psi2_zero) throw NotVortexConfiguration();
  return residuals(c);
}

}  // namespace swred
