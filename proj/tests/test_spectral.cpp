#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "swred/spectral.hpp"

using namespace swred;

namespace {

constexpr Complex I{0.0, 1.0};

// ---------------------------------------------------------------------------
// Oracles.  Everything in this block is independent of the spectral engine:
// direct O(n^4) Fourier sums, explicit trigonometric polynomials whose
// derivatives are taken term-by-term on exponentials, and 4th-order periodic
// finite differences.
// ---------------------------------------------------------------------------

// Direct DFT, no FFT library involved.
std::vector<Complex> slow_modes(const ScalarField& f) {
  const TorusGrid& g = f.grid;
  const int n = g.n;
  std::vector<Complex> out(g.size());
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const double k1 = g.kappa(g.signed_mode(a));
      const double k2 = g.kappa(g.signed_mode(b));
      Complex s{0.0, 0.0};
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          s += f.at(i, j) * std::exp(-I * (k1 * g.x1(i) + k2 * g.x2(j)));
      out[a * n + b] = s / static_cast<double>(n * n);
    }
  return out;
}

struct TrigTerm {
  int m1, m2;
  Complex c;
};

// sum_t c_t e^{i(k(m1) x1 + k(m2) x2)}, sampled pointwise.
ScalarField synth(const TorusGrid& g, const std::vector<TrigTerm>& terms) {
  return sample(g, [&](double x1, double x2) {
    Complex s{0.0, 0.0};
    for (const TrigTerm& t : terms)
      s += t.c * std::exp(I * (g.kappa(t.m1) * x1 + g.kappa(t.m2) * x2));
    return s;
  });
}

// Exact d/dx1 and d/dx2: differentiate each exponential by hand.
ScalarField synth_d1(const TorusGrid& g, std::vector<TrigTerm> terms) {
  for (TrigTerm& t : terms) t.c *= I * g.kappa(t.m1);
  return synth(g, terms);
}

ScalarField synth_d2(const TorusGrid& g, std::vector<TrigTerm> terms) {
  for (TrigTerm& t : terms) t.c *= I * g.kappa(t.m2);
  return synth(g, terms);
}

std::vector<TrigTerm> random_terms(std::mt19937_64& rng, int max_mode,
                                   int count, bool zero_mean = false) {
  std::uniform_int_distribution<int> mode(-max_mode, max_mode);
  std::uniform_real_distribution<double> amp(-1.0, 1.0);
  std::vector<TrigTerm> terms;
  for (int t = 0; t < count; ++t) {
    TrigTerm term{mode(rng), mode(rng), Complex(amp(rng), amp(rng))};
    if (zero_mean && term.m1 == 0 && term.m2 == 0) term.m1 = 1;
    terms.push_back(term);
  }
  return terms;
}

// 4th-order central difference with periodic wraparound.
ScalarField fd_partial(const ScalarField& f, int axis) {
  const int n = f.grid.n;
  const double h = f.grid.spacing();
  ScalarField out(f.grid);
  auto wrap = [n](int i) { return (i % n + n) % n; };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      auto v = [&](int s) {
        return axis == 0 ? f.at(wrap(i + s), j) : f.at(i, wrap(j + s));
      };
      out.at(i, j) = (8.0 * (v(1) - v(-1)) - (v(2) - v(-2))) / (12.0 * h);
    }
  return out;
}

double max_diff(const ScalarField& a, const ScalarField& b) {
  return max_abs(a - b);
}

}  // namespace

// ---------------------------------------------------------------------------

TEST_CASE("forward transform matches a direct DFT and the mode layout") {
  TorusGrid g(8);
  std::mt19937_64 rng(11);
  ScalarField f(g);
  std::uniform_real_distribution<double> amp(-1.0, 1.0);
  for (Complex& v : f.values) v = Complex(amp(rng), amp(rng));

  const auto fast = to_modes(f);
  const auto slow = slow_modes(f);
  double err = 0.0;
  for (size_t i = 0; i < fast.size(); ++i)
    err = std::max(err, std::abs(fast[i] - slow[i]));
  CHECK(err < 1e-12);

  // Round trip.
  CHECK(max_diff(from_modes(g, fast), f) < 1e-12);

  // e^{i(3 x1 - 2 x2)} lands at exactly one coefficient slot.
  ScalarField mono = synth(g, {{3, -2, {1.0, 0.0}}});
  const auto modes = to_modes(mono);
  for (int a = 0; a < g.n; ++a)
    for (int b = 0; b < g.n; ++b) {
      const Complex c = modes[a * g.n + b];
      if (a == g.mode_index(3) && b == g.mode_index(-2))
        CHECK(std::abs(c - Complex{1.0, 0.0}) < 1e-12);
      else
        CHECK(std::abs(c) < 1e-12);
    }
}

TEST_CASE("first derivatives agree with term-by-term differentiation") {
  for (double side : {2.0 * std::numbers::pi, 4.0 * std::numbers::pi}) {
    TorusGrid g(16, side);
    std::mt19937_64 rng(23);
    const auto terms = random_terms(rng, 3, 12);
    const ScalarField f = synth(g, terms);
    const ScalarField d1 = synth_d1(g, terms);
    const ScalarField d2 = synth_d2(g, terms);

    CHECK(max_diff(partial_x1(f), d1) < 1e-11);
    CHECK(max_diff(partial_x2(f), d2) < 1e-11);
    // d_z and d_zbar are defined through d1 and d2.
    CHECK(max_diff(partial_z(f), 0.5 * (d1 - I * d2)) < 1e-11);
    CHECK(max_diff(partial_zbar(f), 0.5 * (d1 + I * d2)) < 1e-11);
  }
}

TEST_CASE("spectral derivative is the limit of finite differences at 4th order") {
  auto smooth = [](double x1, double x2) {
    return Complex(std::exp(std::sin(x1)) * std::cos(2.0 * x2),
                   std::exp(std::cos(2.0 * x2)) * std::sin(x1));
  };
  auto fd_error = [&](int n, int axis) {
    TorusGrid g(n);
    ScalarField f = sample(g, smooth);
    ScalarField sp = axis == 0 ? partial_x1(f) : partial_x2(f);
    return max_diff(sp, fd_partial(f, axis));
  };
  // Start at n = 32 so the spectral truncation of the test function is
  // already far below the finite-difference error being measured.
  for (int axis : {0, 1}) {
    const double e32 = fd_error(32, axis);
    const double e64 = fd_error(64, axis);
    const double e128 = fd_error(128, axis);
    CHECK(e32 / e64 > 12.0);
    CHECK(e32 / e64 < 20.0);
    CHECK(e64 / e128 > 12.0);
    CHECK(e64 / e128 < 20.0);
  }
}

TEST_CASE("frozen values: monomial derivatives and Green inverse") {
  TorusGrid g(16);
  // e^{i(z + zbar)} = e^{2i x1}: mode (2, 0).
  ScalarField e = synth(g, {{2, 0, {1.0, 0.0}}});
  CHECK(max_diff(partial_z(e), I * e) < 1e-12);
  CHECK(max_diff(partial_zbar(e), I * e) < 1e-12);
  CHECK(max_diff(laplacian(e), -4.0 * e) < 1e-11);
  CHECK(max_diff(green_invert(e), -0.25 * e) < 1e-12);

  // Mixed mode (1, 2): d_z -> (k2 + i k1)/2 = 1 + i/2.
  ScalarField m = synth(g, {{1, 2, {1.0, 0.0}}});
  CHECK(max_diff(partial_z(m), Complex(1.0, 0.5) * m) < 1e-12);
  CHECK(max_diff(partial_zbar(m), Complex(-1.0, 0.5) * m) < 1e-12);
}

TEST_CASE("laplacian factorizations and Green inverse round trips") {
  TorusGrid g(16);
  std::mt19937_64 rng(37);
  const auto terms = random_terms(rng, 3, 10, /*zero_mean=*/true);
  const ScalarField f = synth(g, terms);

  CHECK(max_diff(laplacian(f), 4.0 * partial_z(partial_zbar(f))) < 1e-10);
  CHECK(max_diff(laplacian(f), partial_x1(partial_x1(f)) + partial_x2(partial_x2(f))) < 1e-10);

  CHECK(max_diff(laplacian(green_invert(f)), f) < 1e-10);
  CHECK(max_diff(green_invert(laplacian(f)), f) < 1e-10);
  CHECK(std::abs(mean(green_invert(f))) < 1e-12);

  ScalarField one = sample(g, [](double, double) { return Complex{1.0, 0.0}; });
  CHECK_THROWS_AS((void)green_invert(f + one), NonZeroMean);
}

TEST_CASE("Nyquist line: first derivatives drop it, Green inverse keeps it") {
  TorusGrid g(8);
  // cos(4 x1) lives entirely on the m1 = -4 line; on this grid its true
  // derivative -4 sin(4 x1) samples to zero, so the zeroed multiplier is
  // the sampled truth.
  ScalarField f = sample(g, [](double x1, double) {
    return Complex(std::cos(4.0 * x1), 0.0);
  });
  CHECK(max_abs(partial_x1(f)) < 1e-12);
  CHECK(max_diff(laplacian(f), -16.0 * f) < 1e-11);
  CHECK(max_diff(laplacian(green_invert(f)), f) < 1e-12);
  CHECK(max_diff(green_invert(laplacian(f)), f) < 1e-12);
}

TEST_CASE("derivatives of real fields stay real, conj intertwines d_z, d_zbar") {
  TorusGrid g(8);
  std::mt19937_64 rng(41);
  ScalarField f(g);
  std::uniform_real_distribution<double> amp(-1.0, 1.0);
  for (Complex& v : f.values) v = Complex(amp(rng), 0.0);

  CHECK(is_real_field(partial_x1(f), 1e-13));
  CHECK(is_real_field(partial_x2(f), 1e-13));
  CHECK(max_diff(conj(partial_z(f)), partial_zbar(conj(f))) < 1e-12);
}

TEST_CASE("exterior derivative, Stokes, and d o d = 0") {
  TorusGrid g(16);
  std::mt19937_64 rng(43);
  const ScalarField f = synth(g, random_terms(rng, 3, 8));
  const ScalarField p = synth(g, random_terms(rng, 3, 8));
  const ScalarField q = synth(g, random_terms(rng, 3, 8));
  const OneFormField a{p, q};

  // d(df) = 0.
  CHECK(l2_norm_sq(exterior_d(exterior_d(f))) < 1e-22);

  // Integral of an exact 2-form vanishes.
  CHECK(std::abs(integrate_2form(exterior_d(a))) < 1e-12);

  // Integration by parts for the factor-level derivative.
  const ScalarField h = synth(g, random_terms(rng, 3, 8));
  CHECK(std::abs(l2_inner(partial_z(f), h) + l2_inner(f, partial_zbar(h))) < 1e-10);
}

TEST_CASE("Hodge star on 1-forms: involution sign, isometry, codifferential") {
  TorusGrid g(16);
  std::mt19937_64 rng(47);
  const OneFormField a{synth(g, random_terms(rng, 3, 8)),
                       synth(g, random_terms(rng, 3, 8))};

  // ** = -1 on 1-forms of a surface.
  const OneFormField ss = hodge_star(hodge_star(a));
  CHECK(max_diff(ss.p, -a.p) < 1e-12);
  CHECK(max_diff(ss.q, -a.q) < 1e-12);
  CHECK(l2_norm_sq(hodge_star(a)) == doctest::Approx(l2_norm_sq(a)));

  // delta = -*d* on 1-forms: *(f dz^dzbar) = -2i f.
  const ScalarField via_star = 2.0 * I * exterior_d(hodge_star(a)).f;
  CHECK(max_diff(codifferential(a), via_star) < 1e-11);

  // Adjointness <df, a> = <f, delta a> with |dz|^2 = 2.
  const ScalarField f = synth(g, random_terms(rng, 3, 8));
  const Complex lhs = 2.0 * (l2_inner(partial_z(f), a.p) + l2_inner(partial_zbar(f), a.q));
  const Complex rhs = l2_inner(f, codifferential(a));
  CHECK(std::abs(lhs - rhs) < 1e-10);
}

TEST_CASE("area form integrates to twice the squared side") {
  for (double side : {2.0 * std::numbers::pi, 4.0 * std::numbers::pi}) {
    TorusGrid g(8, side);
    // omega = i dz^dzbar.
    TwoFormField omega(sample(g, [](double, double) { return I; }));
    CHECK(std::abs(integrate_2form(omega) - Complex(2.0 * side * side, 0.0)) < 1e-9);
  }
}

TEST_CASE("Parseval ties grid sums to mode sums") {
  TorusGrid g(16, 3.0);
  std::mt19937_64 rng(53);
  ScalarField f(g);
  std::uniform_real_distribution<double> amp(-1.0, 1.0);
  for (Complex& v : f.values) v = Complex(amp(rng), amp(rng));

  double mode_sum = 0.0;
  for (const Complex& c : to_modes(f)) mode_sum += std::norm(c);
  CHECK(l2_norm_sq(f) == doctest::Approx(g.side * g.side * mode_sum).epsilon(1e-12));
}

TEST_CASE("imaginary-valued forms: factory, predicates, closure under d and *") {
  TorusGrid g(16);
  std::mt19937_64 rng(59);
  const ScalarField p = synth(g, random_terms(rng, 3, 8));
  const OneFormField a = imaginary_one_form(p);

  CHECK(is_imaginary_one_form(a, 1e-13));
  // Definitional check: values on the coordinate directions are in iR.
  // a(e1) = p + q, a(e2) = i(p - q).
  CHECK(max_abs(real_part(a.p + a.q)) < 1e-13);
  CHECK(max_abs(real_part(I * (a.p - a.q)))< 1e-13);

  CHECK(is_imaginary_one_form(hodge_star(a), 1e-12));
  CHECK(is_imaginary_two_form(exterior_d(a), 1e-11));
  // d of an iR scalar is an iR 1-form.
  const ScalarField zeta = I * real_part(p);
  CHECK(is_imaginary_field(zeta, 1e-13));
  CHECK(is_imaginary_one_form(exterior_d(zeta), 1e-11));
  // codifferential of an iR 1-form is iR.
  CHECK(is_imaginary_field(codifferential(a), 1e-11));

  OneFormField skew = a;
  skew.q.values[5] += Complex{1e-3, 0.0};
  CHECK(!is_imaginary_one_form(skew));
}

TEST_CASE("band_limit keeps low modes and removes high ones") {
  TorusGrid g(16);
  const ScalarField lo = synth(g, {{3, -4, {1.0, 2.0}}});
  const ScalarField hi = synth(g, {{5, 0, {1.0, 0.0}}, {0, -6, {0.0, 1.0}}});
  CHECK(max_diff(band_limit(lo + hi, 4), lo) < 1e-12);
  CHECK(max_abs(band_limit(hi, 4)) < 1e-12);
}
