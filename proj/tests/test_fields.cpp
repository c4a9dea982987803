#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "swred/configuration.hpp"

using namespace swred;

namespace {
constexpr Complex I{0.0, 1.0};

double max_diff(const ScalarField& a, const ScalarField& b) {
  return max_abs(a - b);
}
}  // namespace

TEST_CASE("closed-form family: field values match hand-written samples") {
  TorusGrid g(8);
  const double c2 = 0.5;
  const Complex c1 = explicit_solution_amplitude(c2, 0.7);
  CHECK(std::abs(std::abs(c1) * std::abs(c1) - 2.0 * c2 * c2) < 1e-14);

  Configuration c = explicit_torus_solution(g, c1, c2);
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j) {
      const double x1 = g.x1(i);
      CHECK(std::abs(c.connection.a.at(i, j) - (-I * c2 / 2.0)) < 1e-15);
      CHECK(std::abs(c.spinor.psi1.at(i, j) - c1) < 1e-15);
      CHECK(std::abs(c.spinor.psi2.at(i, j) -
                     c1 * std::exp(I * 2.0 * c2 * x1)) < 1e-14);
      CHECK(std::abs(c.higgs.phi.at(i, j) +
                     I * c2 * std::exp(-I * 2.0 * c2 * x1)) < 1e-14);
    }
}

TEST_CASE("closed-form family: non-integer phase mode is rejected") {
  TorusGrid g(8);
  CHECK_THROWS_AS((void)explicit_torus_solution(g, {0.4, 0.0}, 0.3),
                  NonPeriodicParameter);
  // Doubling the side halves the admissible c2 spacing.
  TorusGrid g2(8, 4.0 * std::numbers::pi);
  CHECK_NOTHROW((void)explicit_torus_solution(g2, {0.35, 0.0}, 0.25));
  CHECK_THROWS_AS((void)explicit_torus_solution(g2, {0.4, 0.0}, 0.3),
                  NonPeriodicParameter);
}

TEST_CASE("iR-valuedness is enforced at construction") {
  TorusGrid g(8);
  ScalarField re(g);
  for (Complex& v : re.values) v = Complex{1.0, 0.0};
  CHECK_THROWS_AS(GaugeElement{re}, std::invalid_argument);
  CHECK_NOTHROW(GaugeElement{I * re});

  OneFormField bad{re, re};  // q != -conj(p)
  ScalarField zero(g);
  CHECK_THROWS_AS(
      (TangentVector{bad, zero, zero, OneFormField(g)}),
      std::invalid_argument);
  CHECK_NOTHROW(
      (TangentVector{imaginary_one_form(re), zero, zero, OneFormField(g)}));
}

TEST_CASE("gauge action: identity, composition, and effect on each field") {
  TorusGrid g(16);
  std::mt19937_64 rng(7);
  Configuration c = random_configuration(g, 3, 0.8, rng);
  GaugeElement u1 = random_gauge(g, 3, 0.6, rng);
  GaugeElement u2 = random_gauge(g, 3, 0.6, rng);

  // Identity.
  Configuration cid = gauge_apply(GaugeElement{ScalarField(g)}, c);
  CHECK(max_diff(cid.connection.a, c.connection.a) < 1e-13);
  CHECK(max_diff(cid.spinor.psi1, c.spinor.psi1) < 1e-13);

  // Composition: zeta adds.
  Configuration lhs = gauge_apply(u1, gauge_apply(u2, c));
  Configuration rhs = gauge_apply(GaugeElement{u1.zeta + u2.zeta}, c);
  CHECK(max_diff(lhs.connection.a, rhs.connection.a) < 1e-11);
  CHECK(max_diff(lhs.spinor.psi1, rhs.spinor.psi1) < 1e-11);
  CHECK(max_diff(lhs.spinor.psi2, rhs.spinor.psi2) < 1e-11);
  CHECK(max_diff(lhs.higgs.phi, c.higgs.phi) < 1e-15);  // Higgs untouched

  // a shifts by d_z zeta; |psi| is preserved pointwise.
  Configuration gc = gauge_apply(u1, c);
  CHECK(max_diff(gc.connection.a, c.connection.a + partial_z(u1.zeta)) < 1e-12);
  ScalarField mod_before = c.spinor.psi1 * conj(c.spinor.psi1);
  ScalarField mod_after = gc.spinor.psi1 * conj(gc.spinor.psi1);
  CHECK(max_diff(mod_before, mod_after) < 1e-12);
  // The gauged connection is still a valid iR-form coefficient.
  CHECK(is_imaginary_one_form(gc.connection.form()));
}

TEST_CASE("gauge vector field is the derivative of the gauge orbit") {
  TorusGrid g(16);
  std::mt19937_64 rng(19);
  Configuration c = random_configuration(g, 3, 0.8, rng);
  GaugeElement zeta = random_gauge(g, 3, 0.7, rng);
  TangentVector x = gauge_vector_field(zeta, c);

  const double t = 1e-5;
  GaugeElement up{t * zeta.zeta};
  GaugeElement dn{-t * zeta.zeta};
  Configuration cp = gauge_apply(up, c);
  Configuration cm = gauge_apply(dn, c);
  auto deriv = [&](const ScalarField& plus, const ScalarField& minus) {
    return (1.0 / (2.0 * t)) * (plus - minus);
  };
  CHECK(max_diff(deriv(cp.connection.a, cm.connection.a), x.alpha.p) < 1e-8);
  CHECK(max_diff(deriv(cp.spinor.psi1, cm.spinor.psi1), x.beta1) < 1e-8);
  CHECK(max_diff(deriv(cp.spinor.psi2, cm.spinor.psi2), x.beta2) < 1e-8);
  CHECK(max_abs(x.gamma.p) == 0.0);
}

TEST_CASE("tangent arithmetic and advance") {
  TorusGrid g(8);
  std::mt19937_64 rng(23);
  Configuration c = random_configuration(g, 2, 1.0, rng);
  TangentVector x = random_tangent(g, 2, 1.0, rng);
  TangentVector y = random_tangent(g, 2, 1.0, rng);

  TangentVector s = x + y;
  CHECK(max_diff(s.beta1, x.beta1 + y.beta1) < 1e-15);
  TangentVector d = 2.0 * x - x;
  CHECK(max_diff(d.alpha.p, x.alpha.p) < 1e-14);
  CHECK(max_diff(d.gamma.p, x.gamma.p) < 1e-14);

  Configuration c2 = advance(c, x, 0.25);
  CHECK(max_diff(c2.connection.a, c.connection.a + Complex{0.25, 0.0} * x.alpha.p) < 1e-15);
  CHECK(max_diff(c2.higgs.phi, c.higgs.phi + Complex{0.25, 0.0} * x.gamma.p) < 1e-15);
}

TEST_CASE("random generators are band-limited and reproducible") {
  TorusGrid g(16);
  std::mt19937_64 a(99), b(99);
  ScalarField fa = random_bandlimited_field(g, 3, 1.0, a);
  ScalarField fb = random_bandlimited_field(g, 3, 1.0, b);
  CHECK(max_diff(fa, fb) == 0.0);
  CHECK(max_diff(band_limit(fa, 3), fa) < 1e-12);
  CHECK(max_abs(fa) > 0.0);

  std::mt19937_64 c(100);
  ScalarField fc = random_bandlimited_field(g, 3, 1.0, c);
  CHECK(max_diff(fa, fc) > 1e-3);

  GaugeElement u = random_gauge(g, 3, 1.0, a);
  CHECK(is_imaginary_field(u.zeta, 1e-13));
}
