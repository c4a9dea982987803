#include "swred/configuration.hpp"

#include <cmath>
#include <string>

namespace swred {

namespace {

void require_imaginary_one_form(const OneFormField& a, const char* who) {
  if (!is_imaginary_one_form(a))
    throw std::invalid_argument(std::string(who) +
                                ": 1-form is not iR-valued (q != -conj(p))");
}

}  // namespace

NonPeriodicParameter::NonPeriodicParameter(const std::string& what)
    : std::runtime_error(what) {}

Spinor::Spinor(ScalarField p1, ScalarField p2)
    : psi1(std::move(p1)), psi2(std::move(p2)) {
  require_same_grid(psi1.grid, psi2.grid);
}

Configuration::Configuration(Connection c, Spinor s, Higgs h)
    : connection(std::move(c)), spinor(std::move(s)), higgs(std::move(h)) {
  require_same_grid(connection.a.grid, spinor.psi1.grid);
  require_same_grid(connection.a.grid, higgs.phi.grid);
}

GaugeElement::GaugeElement(ScalarField z) : zeta(std::move(z)) {
  if (!is_imaginary_field(zeta))
    throw std::invalid_argument("GaugeElement: zeta is not iR-valued");
}

TangentVector::TangentVector(OneFormField a, ScalarField b1, ScalarField b2,
                             OneFormField g)
    : alpha(std::move(a)),
      beta1(std::move(b1)),
      beta2(std::move(b2)),
      gamma(std::move(g)) {
  require_same_grid(alpha.grid(), beta1.grid);
  require_same_grid(alpha.grid(), beta2.grid);
  require_same_grid(alpha.grid(), gamma.grid());
  require_imaginary_one_form(alpha, "TangentVector alpha");
  require_imaginary_one_form(gamma, "TangentVector gamma");
}

TangentVector tangent_from_coefficients(const ScalarField& pa,
                                        const ScalarField& b1,
                                        const ScalarField& b2,
                                        const ScalarField& pg) {
  return {imaginary_one_form(pa), b1, b2, imaginary_one_form(pg)};
}

TangentVector zero_tangent(const TorusGrid& g) {
  ScalarField z(g);
  return tangent_from_coefficients(z, z, z, z);
}

TangentVector operator+(const TangentVector& x, const TangentVector& y) {
  return {x.alpha + y.alpha, x.beta1 + y.beta1, x.beta2 + y.beta2,
          x.gamma + y.gamma};
}

TangentVector operator-(const TangentVector& x, const TangentVector& y) {
  return {x.alpha - y.alpha, x.beta1 - y.beta1, x.beta2 - y.beta2,
          x.gamma - y.gamma};
}

TangentVector operator*(double c, const TangentVector& x) {
  const Complex cc{c, 0.0};
  return {cc * x.alpha, cc * x.beta1, cc * x.beta2, cc * x.gamma};
}

Configuration advance(const Configuration& c, const TangentVector& x, double t) {
  const Complex tc{t, 0.0};
  return {Connection(c.connection.a + tc * x.alpha.p),
          Spinor(c.spinor.psi1 + tc * x.beta1, c.spinor.psi2 + tc * x.beta2),
          Higgs(c.higgs.phi + tc * x.gamma.p)};
}

Configuration gauge_apply(const GaugeElement& u, const Configuration& c) {
  const ScalarField scale = exp_field(-u.zeta);
  return {Connection(c.connection.a + partial_z(u.zeta)),
          Spinor(scale * c.spinor.psi1, scale * c.spinor.psi2),
          Higgs(c.higgs.phi)};
}

TangentVector gauge_pushforward(const GaugeElement& u, const TangentVector& x) {
  const ScalarField scale = exp_field(-u.zeta);
  return {x.alpha, scale * x.beta1, scale * x.beta2, x.gamma};
}

TangentVector gauge_vector_field(const GaugeElement& zeta,
                                 const Configuration& c) {
  return {exterior_d(zeta.zeta), -(zeta.zeta * c.spinor.psi1),
          -(zeta.zeta * c.spinor.psi2), OneFormField(c.grid())};
}

Configuration explicit_torus_solution(const TorusGrid& g, Complex c1,
                                      double c2) {
  const double mode = c2 * g.side / std::numbers::pi;  // = 2 c2 side / 2 pi
  if (std::abs(mode - std::round(mode)) > 1e-12)
    throw NonPeriodicParameter(
        "explicit_torus_solution: 2 c2 side / 2 pi = " + std::to_string(mode) +
        " is not an integer; psi2 would not close up on the torus");
  constexpr Complex I{0.0, 1.0};
  ScalarField a = sample(g, [&](double, double) { return -I * c2 / 2.0; });
  ScalarField psi1 = sample(g, [&](double, double) { return c1; });
  ScalarField psi2 = sample(g, [&](double x1, double) {
    return c1 * std::exp(I * (2.0 * c2 * x1));
  });
  ScalarField phi = sample(g, [&](double x1, double) {
    return -I * c2 * std::exp(-I * (2.0 * c2 * x1));
  });
  return {Connection(std::move(a)), Spinor(std::move(psi1), std::move(psi2)),
          Higgs(std::move(phi))};
}

Complex explicit_solution_amplitude(double c2, double phase) {
  return std::sqrt(2.0) * c2 * std::exp(Complex{0.0, phase});
}

ScalarField random_bandlimited_field(const TorusGrid& g, int max_mode,
                                     double amplitude, std::mt19937_64& rng) {
  if (max_mode >= g.n / 2)
    throw std::invalid_argument("random_bandlimited_field: band exceeds grid");
  std::uniform_real_distribution<double> amp(-1.0, 1.0);
  std::vector<Complex> modes(g.size());
  for (int m1 = -max_mode; m1 <= max_mode; ++m1)
    for (int m2 = -max_mode; m2 <= max_mode; ++m2) {
      // Mild spectral decay keeps pointwise products of these fields well
      // resolved on the grid; the peak is then normalized to `amplitude`.
      const double decay = 1.0 / (1.0 + m1 * m1 + m2 * m2);
      modes[g.index(g.mode_index(m1), g.mode_index(m2))] =
          decay * Complex(amp(rng), amp(rng));
    }
  ScalarField f = from_modes(g, modes);
  const double peak = max_abs(f);
  if (peak > 0.0) f = (amplitude / peak) * f;
  return f;
}

Configuration random_configuration(const TorusGrid& g, int max_mode,
                                   double amplitude, std::mt19937_64& rng) {
  ScalarField a = random_bandlimited_field(g, max_mode, amplitude, rng);
  ScalarField p1 = random_bandlimited_field(g, max_mode, amplitude, rng);
  ScalarField p2 = random_bandlimited_field(g, max_mode, amplitude, rng);
  ScalarField phi = random_bandlimited_field(g, max_mode, amplitude, rng);
  return {Connection(std::move(a)), Spinor(std::move(p1), std::move(p2)),
          Higgs(std::move(phi))};
}

TangentVector random_tangent(const TorusGrid& g, int max_mode,
                             double amplitude, std::mt19937_64& rng) {
  ScalarField pa = random_bandlimited_field(g, max_mode, amplitude, rng);
  ScalarField b1 = random_bandlimited_field(g, max_mode, amplitude, rng);
  ScalarField b2 = random_bandlimited_field(g, max_mode, amplitude, rng);
  ScalarField pg = random_bandlimited_field(g, max_mode, amplitude, rng);
  return tangent_from_coefficients(pa, b1, b2, pg);
}

GaugeElement random_gauge(const TorusGrid& g, int max_mode, double amplitude,
                          std::mt19937_64& rng) {
  constexpr Complex I{0.0, 1.0};
  return GaugeElement(
      I * real_part(random_bandlimited_field(g, max_mode, amplitude, rng)));
}

}  // namespace swred
