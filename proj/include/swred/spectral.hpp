#pragma once

// Spectral calculus on the square flat torus [0, side)^2.
//
// Conventions used throughout the library (full table in docs/conventions.md):
//
//   z = x1 + i*x2,   dz = dx1 + i*dx2,   dzbar = dx1 - i*dx2
//   d_z    = (d/dx1 - i*d/dx2) / 2
//   d_zbar = (d/dx1 + i*d/dx2) / 2
//   dz ^ dzbar = -2i dx1 ^ dx2,  area form  omega := i dz ^ dzbar = 2 dx1 ^ dx2
//   Hodge star on 1-forms (flat metric): *(dz) = -i dz,  *(dzbar) = +i dzbar
//   Laplacian:  lap = d1^2 + d2^2 = 4 d_z d_zbar
//
// Fields are point samples on the uniform n x n grid x1 = i*h, x2 = j*h,
// h = side/n, stored row-major (index = i*n + j).  Operators act diagonally
// on Fourier modes e^{i(k1 x1 + k2 x2)}, k_a = 2*pi*m_a/side with integer
// m_a in [-n/2, n/2):
//
//   d_z    ->  (k2 + i k1) / 2
//   d_zbar ->  (i k1 - k2) / 2
//   lap    ->  -(k1^2 + k2^2)
//
// First-order multipliers are zeroed component-wise on the unpaired Nyquist
// line m_a = -n/2 (the usual choice, keeping derivatives of real fields
// real).  The Laplacian and its Green inverse keep the true multiplier, so
// lap(green_invert(t)) == t exactly for every zero-mean input.
//
// A 1-form p dz + q dzbar takes values in iR iff q = -conj(p); a 2-form
// f dz^dzbar takes values in iR iff f is real (dz^dzbar itself is -2i times
// the real area element).

#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace swred {

using Complex = std::complex<double>;

// Tolerance for identities expected to hold to roundoff.
inline constexpr double identity_tol = 1e-12;
// Tolerance for preconditions on inputs that may carry accumulated error.
inline constexpr double precondition_tol = 1e-10;

// Thrown by green_invert: the torus Laplacian is invertible only on
// zero-mean sources.
struct NonZeroMean : std::runtime_error {
  explicit NonZeroMean(double mean_abs);
  double mean_abs;
};

struct TorusGrid {
  int n;        // samples per axis; even and >= 4
  double side;  // period of both axes

  explicit TorusGrid(int n, double side = 2.0 * std::numbers::pi);

  int size() const { return n * n; }
  double spacing() const { return side / n; }
  double x1(int i) const { return spacing() * i; }
  double x2(int j) const { return spacing() * j; }
  int index(int i, int j) const { return i * n + j; }

  // Signed mode for a storage index along one axis: 0..n/2-1, -n/2..-1.
  int signed_mode(int idx) const { return idx < n / 2 ? idx : idx - n; }
  // Storage index for a signed mode in [-n/2, n/2).
  int mode_index(int m) const { return m >= 0 ? m : m + n; }
  // Wavenumber of a signed mode.
  double kappa(int m) const { return 2.0 * std::numbers::pi * m / side; }

  bool operator==(const TorusGrid&) const = default;
};

// Complex-valued function sampled on the grid.
struct ScalarField {
  TorusGrid grid;
  std::vector<Complex> values;  // size n*n, index = i*n + j

  explicit ScalarField(const TorusGrid& g) : grid(g), values(g.size()) {}
  ScalarField(const TorusGrid& g, std::vector<Complex> v);

  Complex& at(int i, int j) { return values[grid.index(i, j)]; }
  const Complex& at(int i, int j) const { return values[grid.index(i, j)]; }
};

// 1-form p dz + q dzbar.
struct OneFormField {
  ScalarField p;
  ScalarField q;

  explicit OneFormField(const TorusGrid& g) : p(g), q(g) {}
  OneFormField(ScalarField p, ScalarField q);

  const TorusGrid& grid() const { return p.grid; }
};

// 2-form f dz^dzbar.
struct TwoFormField {
  ScalarField f;

  explicit TwoFormField(const TorusGrid& g) : f(g) {}
  explicit TwoFormField(ScalarField f) : f(std::move(f)) {}

  const TorusGrid& grid() const { return f.grid; }
};

// Sample a function of (x1, x2).
template <class F>
ScalarField sample(const TorusGrid& g, F&& fn) {
  ScalarField out(g);
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j) out.at(i, j) = fn(g.x1(i), g.x2(j));
  return out;
}

// ---- scalar field arithmetic -------------------------------------------

ScalarField operator+(const ScalarField& a, const ScalarField& b);
ScalarField operator-(const ScalarField& a, const ScalarField& b);
ScalarField operator-(const ScalarField& a);
ScalarField operator*(const ScalarField& a, const ScalarField& b);  // pointwise
ScalarField operator*(Complex c, const ScalarField& a);
ScalarField operator*(const ScalarField& a, Complex c);

ScalarField conj(const ScalarField& a);
ScalarField real_part(const ScalarField& a);
ScalarField imag_part(const ScalarField& a);  // Im(a), real-valued result
ScalarField exp_field(const ScalarField& a);  // pointwise exp

Complex mean(const ScalarField& a);
Complex integral(const ScalarField& a);  // against dx1 dx2
double max_abs(const ScalarField& a);

// L2 against dx1 dx2: <a, b> = h^2 * sum a * conj(b).
Complex l2_inner(const ScalarField& a, const ScalarField& b);
double l2_norm_sq(const ScalarField& a);
double l2_norm(const ScalarField& a);

// ---- form arithmetic -----------------------------------------------------

OneFormField operator+(const OneFormField& a, const OneFormField& b);
OneFormField operator-(const OneFormField& a, const OneFormField& b);
OneFormField operator*(Complex c, const OneFormField& a);
TwoFormField operator+(const TwoFormField& a, const TwoFormField& b);
TwoFormField operator-(const TwoFormField& a, const TwoFormField& b);
TwoFormField operator*(Complex c, const TwoFormField& a);

double l2_norm_sq(const OneFormField& a);  // |p|^2 + |q|^2 route
double l2_norm_sq(const TwoFormField& a);  // on the dz^dzbar coefficient

// The iR-valued 1-form with dz-coefficient p (its dzbar-coefficient is
// forced to -conj(p)).
OneFormField imaginary_one_form(const ScalarField& p);

bool is_imaginary_one_form(const OneFormField& a, double tol = precondition_tol);
bool is_imaginary_two_form(const TwoFormField& a, double tol = precondition_tol);
bool is_real_field(const ScalarField& a, double tol = precondition_tol);
bool is_imaginary_field(const ScalarField& a, double tol = precondition_tol);

// ---- spectral transforms and operators -----------------------------------

// Fourier coefficients c[m1, m2] of f = sum c * e^{i(k1 x1 + k2 x2)},
// stored at [grid.mode_index(m1) * n + grid.mode_index(m2)].
std::vector<Complex> to_modes(const ScalarField& f);
ScalarField from_modes(const TorusGrid& g, const std::vector<Complex>& modes);

ScalarField partial_x1(const ScalarField& f);
ScalarField partial_x2(const ScalarField& f);
ScalarField partial_z(const ScalarField& f);
ScalarField partial_zbar(const ScalarField& f);
ScalarField laplacian(const ScalarField& f);

// Unique zero-mean u with laplacian(u) = source; throws NonZeroMean.
ScalarField green_invert(const ScalarField& source);

// Zero all modes with |m1| > max_abs_mode or |m2| > max_abs_mode.
ScalarField band_limit(const ScalarField& f, int max_abs_mode);

OneFormField exterior_d(const ScalarField& f);   // d_z f dz + d_zbar f dzbar
TwoFormField exterior_d(const OneFormField& a);  // (d_z q - d_zbar p) dz^dzbar
ScalarField codifferential(const OneFormField& a);  // d* = -2(d_z q + d_zbar p)
OneFormField hodge_star(const OneFormField& a);     // -i p dz + i q dzbar

// Integral of the 2-form over the torus: -2i * h^2 * sum f.
Complex integrate_2form(const TwoFormField& t);

void require_same_grid(const TorusGrid& a, const TorusGrid& b);

}  // namespace swred
