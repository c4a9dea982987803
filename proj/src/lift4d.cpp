#include "swred/lift4d.hpp"

#include <algorithm>
#include <cmath>

namespace swred {

namespace {

constexpr Complex I{0.0, 1.0};

SpinorMatrix matmul(const SpinorMatrix& a, const SpinorMatrix& b) {
  SpinorMatrix r{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      r[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
  return r;
}

SpinorMatrix matsub(const SpinorMatrix& a, const SpinorMatrix& b) {
  SpinorMatrix r{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r[i][j] = a[i][j] - b[i][j];
  return r;
}

SpinorMatrix matadd(const SpinorMatrix& a, const SpinorMatrix& b) {
  SpinorMatrix r{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r[i][j] = a[i][j] + b[i][j];
  return r;
}

double mat_max_abs(const SpinorMatrix& a) {
  double m = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) m = std::max(m, std::abs(a[i][j]));
  return m;
}

struct SpinorPair {
  ScalarField s1;
  ScalarField s2;
};

SpinorPair mat_apply(const SpinorMatrix& m, const SpinorPair& v) {
  return {m[0][0] * v.s1 + m[0][1] * v.s2, m[1][0] * v.s1 + m[1][1] * v.s2};
}

SpinorPair operator-(const SpinorPair& a, const SpinorPair& b) {
  return {a.s1 - b.s1, a.s2 - b.s2};
}

}  // namespace

SpinorMatrix quaternion_i() {
  return {{{Complex{0, 1}, Complex{0, 0}}, {Complex{0, 0}, Complex{0, -1}}}};
}

SpinorMatrix quaternion_j() {
  return {{{Complex{0, 0}, Complex{-1, 0}}, {Complex{1, 0}, Complex{0, 0}}}};
}

SpinorMatrix quaternion_k() {
  return {{{Complex{0, 0}, Complex{0, -1}}, {Complex{0, -1}, Complex{0, 0}}}};
}

double clifford_defect() {
  const SpinorMatrix qi = quaternion_i();
  const SpinorMatrix qj = quaternion_j();
  const SpinorMatrix qk = quaternion_k();
  SpinorMatrix minus_id{};
  for (int i = 0; i < 2; ++i) minus_id[i][i] = Complex{-1.0, 0.0};

  double d = 0.0;
  // Squares.
  d = std::max(d, mat_max_abs(matsub(matmul(qi, qi), minus_id)));
  d = std::max(d, mat_max_abs(matsub(matmul(qj, qj), minus_id)));
  d = std::max(d, mat_max_abs(matsub(matmul(qk, qk), minus_id)));
  // Cyclic products.
  d = std::max(d, mat_max_abs(matsub(matmul(qi, qj), qk)));
  d = std::max(d, mat_max_abs(matsub(matmul(qj, qk), qi)));
  d = std::max(d, mat_max_abs(matsub(matmul(qk, qi), qj)));
  // Anticommutators.
  d = std::max(d, mat_max_abs(matadd(matmul(qi, qj), matmul(qj, qi))));
  d = std::max(d, mat_max_abs(matadd(matmul(qj, qk), matmul(qk, qj))));
  d = std::max(d, mat_max_abs(matadd(matmul(qk, qi), matmul(qi, qk))));
  return d;
}

Config4D::Config4D(std::array<ScalarField, 4> A_, Spinor psi_)
    : A(std::move(A_)), psi(std::move(psi_)) {
  for (const ScalarField& comp : A) {
    require_same_grid(comp.grid, psi.psi1.grid);
    if (!is_real_field(comp))
      throw std::invalid_argument("Config4D: connection components must be real");
  }
}

Config4D lift(const Configuration& c) {
  const ScalarField& a = c.connection.a;
  const ScalarField& phi = c.higgs.phi;
  return Config4D(
      {2.0 * imag_part(a), 2.0 * real_part(a), -imag_part(phi), real_part(phi)},
      c.spinor);
}

Configuration project_2d(const Config4D& c) {
  ScalarField a = 0.5 * (c.A[1] + I * c.A[0]);
  ScalarField phi = c.A[3] - I * c.A[2];
  return {Connection(std::move(a)), c.psi, Higgs(std::move(phi))};
}

Residual4D sw4d_residuals(const Config4D& c) {
  const ScalarField& p1 = c.psi.psi1;
  const ScalarField& p2 = c.psi.psi2;
  const TorusGrid& g = c.grid();

  // Nothing depends on x3, x4: their derivatives vanish.
  auto d = [&](int j, const ScalarField& f) -> ScalarField {
    if (j == 1) return partial_x1(f);
    if (j == 2) return partial_x2(f);
    return ScalarField(g);
  };
  auto curvature = [&](int j, int k) -> ScalarField {
    return I * (d(j, c.A[k - 1]) - d(k, c.A[j - 1]));
  };

  const ScalarField cross = p1 * conj(p2);
  const ScalarField eta1 = I * (p1 * conj(p1) - p2 * conj(p2));
  const ScalarField eta2 = 2.0 * I * imag_part(cross);
  const ScalarField eta3 = -2.0 * I * real_part(cross);

  ScalarField curv_a = curvature(1, 2) + curvature(3, 4) - eta1;
  ScalarField curv_b = curvature(1, 3) + curvature(4, 2) - 0.5 * eta2;
  ScalarField curv_c = curvature(1, 4) + curvature(2, 3) - 0.5 * eta3;

  // D_j Psi = (d_j + i A_j) Psi, then gamma-contract.
  auto cov = [&](int j) -> SpinorPair {
    const ScalarField& Aj = c.A[j - 1];
    return {d(j, p1) + I * (Aj * p1), d(j, p2) + I * (Aj * p2)};
  };
  SpinorPair dirac = cov(1) - mat_apply(quaternion_i(), cov(2));
  dirac = dirac - mat_apply(quaternion_j(), cov(3));
  dirac = dirac - mat_apply(quaternion_k(), cov(4));

  return {std::move(curv_a), std::move(curv_b), std::move(curv_c),
          std::move(dirac.s1), std::move(dirac.s2)};
}

double ReductionCheck::max_deviation() const {
  return std::max({curv_a, curv_bc, dirac1, dirac2});
}

ReductionCheck reduction_consistency_check(const Configuration& c) {
  const Residual4D four = sw4d_residuals(lift(c));
  const ResidualBundle two = residuals(c);

  ReductionCheck out{};
  out.curv_a = max_abs(four.curv_a + 2.0 * I * two.r1.f);
  out.curv_bc = max_abs(four.curv_b + I * four.curv_c - two.r2.f);
  out.dirac1 = max_abs(four.dirac1 - 2.0 * two.r3b);
  out.dirac2 = max_abs(four.dirac2 - 2.0 * two.r3a);
  return out;
}

}  // namespace swred
