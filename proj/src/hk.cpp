#include "swred/hk.hpp"

#include <algorithm>
#include <cmath>

namespace swred {

namespace {

constexpr Complex kI{0.0, 1.0};

// <u, v> = integral of u * conj(v)
Complex ip(const ScalarField& u, const ScalarField& v) { return l2_inner(u, v); }

}  // namespace

double metric_g(const TangentVector& x, const TangentVector& y) {
  return tangent_inner(x, y);
}

double symplectic_omega(const TangentVector& x, const TangentVector& y) {
  return 4.0 * ip(x.alpha.p, y.alpha.p).imag() -
         2.0 * ip(x.beta1, y.beta1).imag() + 2.0 * ip(x.beta2, y.beta2).imag() +
         4.0 * ip(x.gamma.p, y.gamma.p).imag();
}

double omega1(const TangentVector& x, const TangentVector& y) {
  return 4.0 * ip(x.alpha.p, y.alpha.p).imag() -
         2.0 * ip(x.beta1, y.beta1).imag() + 2.0 * ip(x.beta2, y.beta2).imag() -
         4.0 * ip(x.gamma.p, y.gamma.p).imag();
}

double omega2(const TangentVector& x, const TangentVector& y) {
  return 4.0 * ip(x.gamma.p, y.alpha.p).imag() +
         4.0 * ip(x.alpha.p, y.gamma.p).imag() +
         2.0 * ip(x.beta2, y.beta1).real() - 2.0 * ip(x.beta1, y.beta2).real();
}

double omega3(const TangentVector& x, const TangentVector& y) {
  return -4.0 * ip(x.gamma.p, y.alpha.p).real() +
         4.0 * ip(x.alpha.p, y.gamma.p).real() -
         2.0 * ip(x.beta2, y.beta1).imag() - 2.0 * ip(x.beta1, y.beta2).imag();
}

Complex pairing_q(const TangentVector& x, const TangentVector& y) {
  return -4.0 * kI * integral(x.alpha.q * y.gamma.p) +
         4.0 * kI * integral(y.alpha.q * x.gamma.p) -
         2.0 * l2_inner(x.beta1, y.beta2) +
         2.0 * std::conj(l2_inner(x.beta2, y.beta1));
}

TangentVector apply_structure(Structure s, const TangentVector& x) {
  const ScalarField& pa = x.alpha.p;
  const ScalarField& b1 = x.beta1;
  const ScalarField& b2 = x.beta2;
  const ScalarField& pg = x.gamma.p;
  switch (s) {
    case Structure::star_both:
      return tangent_from_coefficients((-kI) * pa, kI * b1, (-kI) * b2,
                                       (-kI) * pg);
    case Structure::hk1:
      return tangent_from_coefficients((-kI) * pa, kI * b1, (-kI) * b2,
                                       kI * pg);
    case Structure::hk2:
      return tangent_from_coefficients((-kI) * pg, b2, Complex(-1.0) * b1,
                                       (-kI) * pa);
    case Structure::hk3:
      return tangent_from_coefficients(Complex(-1.0) * pg, kI * b2, kI * b1,
                                       pa);
  }
  throw std::logic_error("apply_structure: unreachable");
}

TwoFormField moment_map(const Configuration& c) { return residual_curvature(c); }

TwoFormField moment_map_q(const Configuration& c) {
  return TwoFormField{(-kI) * residual_higgs(c).f};
}

double moment_hamiltonian(const Configuration& c, const ScalarField& zeta) {
  return integrate_2form(TwoFormField{zeta * moment_map(c).f}).real();
}

Complex moment_hamiltonian_q(const Configuration& c, const ScalarField& zeta) {
  return integrate_2form(TwoFormField{zeta * moment_map_q(c).f});
}

Complex pairing_q_rotated(const TangentVector& x, const TangentVector& y) {
  TangentVector yr = tangent_from_coefficients(y.alpha.p, y.beta1, y.beta2,
                                               (-kI) * y.gamma.p);
  return pairing_q(x, yr);
}

LemmaCheck orthogonality_lemma_check(const Configuration& c,
                                     const TangentVector& x, Structure variant,
                                     double t) {
  const TorusGrid& g = c.grid();
  const TangentVector sx = apply_structure(variant, x);
  const double scale = tangent_norm(sx);

  LemmaCheck out{};
  out.lin_residual =
      std::sqrt(residual_norm_sq(linearized_residual(c, sx, t))) / scale;

  const int spread =
      std::max({field_band(c.connection.a), field_band(c.spinor.psi1),
                field_band(c.spinor.psi2), field_band(c.higgs.phi)});
  const int band = std::min(g.n / 4 + spread, g.n / 2 - 1);
  double worst = 0.0;
  for (const ScalarField& f : imaginary_function_basis(g, band))
    worst = std::max(worst,
                     std::abs(tangent_inner(sx, d1(c, GaugeElement{f}, t))));
  out.gauge_defect = worst / scale;
  return out;
}

double IdentityReport::worst() const {
  double w = 0.0;
  for (const auto& [name, dev] : deviations) w = std::max(w, dev);
  return w;
}

IdentityReport hyperkahler_identity_check(const TorusGrid& g, unsigned seed,
                                          bool inject_sign_fault) {
  std::mt19937_64 rng(seed);
  const TangentVector x = random_tangent(g, 3, 1.0, rng);
  const TangentVector y = random_tangent(g, 3, 0.8, rng);
  const Configuration c = random_configuration(g, 2, 0.7, rng);
  const GaugeElement zeta = random_gauge(g, 2, 0.6, rng);
  const double scale = tangent_norm(x) * tangent_norm(y);

  // omega3 evaluation used below; the injected fault flips the sign of its
  // first term, which must trip the compatibility and splitting rows.
  auto omega3_eval = [&](const TangentVector& u, const TangentVector& v) {
    const double good = omega3(u, v);
    if (!inject_sign_fault) return good;
    return good + 8.0 * ip(u.gamma.p, v.alpha.p).real();
  };

  IdentityReport rep;
  auto add = [&](const char* name, double dev) {
    rep.deviations.emplace_back(name, dev);
  };

  {
    double d = std::abs(metric_g(x, y) - metric_g(y, x));
    add("metric-symmetry", d / scale);
  }
  {
    double d = 0.0;
    d = std::max(d, std::abs(symplectic_omega(x, y) + symplectic_omega(y, x)));
    d = std::max(d, std::abs(omega1(x, y) + omega1(y, x)));
    d = std::max(d, std::abs(omega2(x, y) + omega2(y, x)));
    d = std::max(d, std::abs(omega3_eval(x, y) + omega3_eval(y, x)));
    add("pairing-antisymmetry", d / scale);
  }
  const Structure all[] = {Structure::star_both, Structure::hk1,
                           Structure::hk2, Structure::hk3};
  {
    double d = 0.0;
    for (Structure s : all) {
      TangentVector xx = apply_structure(s, apply_structure(s, x)) + x;
      d = std::max(d, tangent_norm(xx));
    }
    add("squares-to-minus-one", d / tangent_norm(x));
  }
  {
    auto comp = [&](Structure a, Structure b, Structure want) {
      TangentVector got = apply_structure(a, apply_structure(b, x));
      return tangent_norm(got - apply_structure(want, x));
    };
    double d = std::max({comp(Structure::hk1, Structure::hk2, Structure::hk3),
                         comp(Structure::hk2, Structure::hk3, Structure::hk1),
                         comp(Structure::hk3, Structure::hk1, Structure::hk2)});
    add("quaternion-products", d / tangent_norm(x));
  }
  {
    double d = 0.0;
    for (Structure s : all)
      d = std::max(d, std::abs(metric_g(apply_structure(s, x),
                                        apply_structure(s, y)) -
                               metric_g(x, y)));
    add("structures-are-isometries", d / scale);
  }
  {
    double d = 0.0;
    d = std::max(d, std::abs(symplectic_omega(x, y) -
                             metric_g(apply_structure(Structure::star_both, x), y)));
    d = std::max(d, std::abs(omega1(x, y) -
                             metric_g(apply_structure(Structure::hk1, x), y)));
    d = std::max(d, std::abs(omega2(x, y) -
                             metric_g(apply_structure(Structure::hk2, x), y)));
    d = std::max(d, std::abs(omega3_eval(x, y) -
                             metric_g(apply_structure(Structure::hk3, x), y)));
    add("metric-compatibility", d / scale);
  }
  {
    const Complex q = pairing_q(x, y);
    const Complex split{omega2(x, y), omega3_eval(x, y)};
    add("q-equals-omega2-plus-i-omega3", std::abs(q - split) / scale);
  }
  {
    const TangentVector px = gauge_pushforward(zeta, x);
    const TangentVector py = gauge_pushforward(zeta, y);
    double d = 0.0;
    d = std::max(d, std::abs(metric_g(px, py) - metric_g(x, y)));
    d = std::max(d, std::abs(symplectic_omega(px, py) - symplectic_omega(x, y)));
    d = std::max(d, std::abs(omega1(px, py) - omega1(x, y)));
    d = std::max(d, std::abs(omega2(px, py) - omega2(x, y)));
    d = std::max(d, std::abs(omega3(px, py) - omega3(x, y)));
    d = std::max(d, std::abs(pairing_q(px, py) - pairing_q(x, y)));
    add("gauge-invariance", d / scale);
  }
  {
    // central differences are exact: both Hamiltonians are quadratic
    const double s = 0.25;
    const TangentVector xz = gauge_vector_field(zeta, c);
    const double fd = (moment_hamiltonian(advance(c, x, s), zeta.zeta) -
                       moment_hamiltonian(advance(c, x, -s), zeta.zeta)) /
                      (2.0 * s);
    const double want = symplectic_omega(xz, x);
    add("moment-hamiltonian", std::abs(fd - want) / (1.0 + std::abs(want)));

    const Complex fdq = (moment_hamiltonian_q(advance(c, x, s), zeta.zeta) -
                         moment_hamiltonian_q(advance(c, x, -s), zeta.zeta)) /
                        Complex(2.0 * s);
    const Complex wantq = pairing_q_rotated(xz, x);
    add("moment-hamiltonian-higgs",
        std::abs(fdq - wantq) / (1.0 + std::abs(wantq)));
  }
  return rep;
}

}  // namespace swred
