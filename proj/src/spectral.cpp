#include "swred/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <string>

namespace swred {

namespace {

// FFTW plans are stateful and plan creation is not thread-safe, so all
// transforms funnel through one cached in-place buffer per grid size,
// guarded by a single mutex.  Grids are small; the copy in/out is noise.
class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  std::vector<Complex> run(int n, const std::vector<Complex>& in, int sign) {
    std::lock_guard<std::mutex> lock(mutex_);
    Entry& e = entry(n);
    std::copy(in.begin(), in.end(), reinterpret_cast<Complex*>(e.buf));
    fftw_execute(sign == FFTW_FORWARD ? e.fwd : e.bwd);
    const Complex* out = reinterpret_cast<const Complex*>(e.buf);
    std::vector<Complex> result(out, out + static_cast<size_t>(n) * n);
    if (sign == FFTW_FORWARD) {
      const double scale = 1.0 / (static_cast<double>(n) * n);
      for (Complex& c : result) c *= scale;
    }
    return result;
  }

 private:
  struct Entry {
    fftw_complex* buf = nullptr;
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
  };

  Entry& entry(int n) {
    auto it = cache_.find(n);
    if (it == cache_.end()) {
      Entry e;
      e.buf = fftw_alloc_complex(static_cast<size_t>(n) * n);
      // Row-major: the first FFTW dimension is the x1 index.
      e.fwd = fftw_plan_dft_2d(n, n, e.buf, e.buf, FFTW_FORWARD, FFTW_ESTIMATE);
      e.bwd = fftw_plan_dft_2d(n, n, e.buf, e.buf, FFTW_BACKWARD, FFTW_ESTIMATE);
      it = cache_.emplace(n, e).first;
    }
    return it->second;
  }

  ~PlanCache() {
    for (auto& [n, e] : cache_) {
      fftw_destroy_plan(e.fwd);
      fftw_destroy_plan(e.bwd);
      fftw_free(e.buf);
    }
  }

  std::mutex mutex_;
  std::map<int, Entry> cache_;
};

// Apply a diagonal operator in mode space; fn receives signed modes.
template <class F>
ScalarField apply_multiplier(const ScalarField& f, F&& fn) {
  std::vector<Complex> modes = to_modes(f);
  const int n = f.grid.n;
  for (int a = 0; a < n; ++a) {
    const int m1 = f.grid.signed_mode(a);
    for (int b = 0; b < n; ++b) {
      const int m2 = f.grid.signed_mode(b);
      modes[static_cast<size_t>(a) * n + b] *= fn(m1, m2);
    }
  }
  return from_modes(f.grid, modes);
}

}  // namespace

NonZeroMean::NonZeroMean(double mean_abs_)
    : std::runtime_error("green_invert: source has nonzero mean " +
                         std::to_string(mean_abs_)),
      mean_abs(mean_abs_) {}

TorusGrid::TorusGrid(int n_, double side_) : n(n_), side(side_) {
  if (n < 4 || n % 2 != 0)
    throw std::invalid_argument("TorusGrid: n must be even and >= 4");
  if (!(side > 0.0)) throw std::invalid_argument("TorusGrid: side must be > 0");
}

ScalarField::ScalarField(const TorusGrid& g, std::vector<Complex> v)
    : grid(g), values(std::move(v)) {
  if (static_cast<int>(values.size()) != g.size())
    throw std::invalid_argument("ScalarField: value count does not match grid");
}

OneFormField::OneFormField(ScalarField p_, ScalarField q_)
    : p(std::move(p_)), q(std::move(q_)) {
  require_same_grid(p.grid, q.grid);
}

void require_same_grid(const TorusGrid& a, const TorusGrid& b) {
  if (!(a == b))
    throw std::invalid_argument("fields live on different grids");
}

// ---- arithmetic -----------------------------------------------------------

ScalarField operator+(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a.grid, b.grid);
  ScalarField out(a.grid);
  for (size_t i = 0; i < out.values.size(); ++i)
    out.values[i] = a.values[i] + b.values[i];
  return out;
}

ScalarField operator-(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a.grid, b.grid);
  ScalarField out(a.grid);
  for (size_t i = 0; i < out.values.size(); ++i)
    out.values[i] = a.values[i] - b.values[i];
  return out;
}

ScalarField operator-(const ScalarField& a) {
  ScalarField out(a.grid);
  for (size_t i = 0; i < out.values.size(); ++i) out.values[i] = -a.values[i];
  return out;
}

ScalarField operator*(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a.grid, b.grid);
  ScalarField out(a.grid);
  for (size_t i = 0; i < out.values.size(); ++i)
    out.values[i] = a.values[i] * b.values[i];
  return out;
}

ScalarField operator*(Complex c, const ScalarField& a) {
  ScalarField out(a.grid);
  for (size_t i = 0; i < out.values.size(); ++i) out.values[i] = c * a.values[i];
  return out;
}

ScalarField operator*(const ScalarField& a, Complex c) { return c * a; }

ScalarField conj(const ScalarField& a) {
  ScalarField out(a.grid);
  for (size_t i = 0; i < out.values.size(); ++i)
    out.values[i] = std::conj(a.values[i]);
  return out;
}

ScalarField real_part(const ScalarField& a) {
  ScalarField out(a.grid);
  for (size_t i = 0; i < out.values.size(); ++i)
    out.values[i] = a.values[i].real();
  return out;
}

ScalarField imag_part(const ScalarField& a) {
  ScalarField out(a.grid);
  for (size_t i = 0; i < out.values.size(); ++i)
    out.values[i] = a.values[i].imag();
  return out;
}

ScalarField exp_field(const ScalarField& a) {
  ScalarField out(a.grid);
  for (size_t i = 0; i < out.values.size(); ++i)
    out.values[i] = std::exp(a.values[i]);
  return out;
}

Complex mean(const ScalarField& a) {
  Complex s{0.0, 0.0};
  for (const Complex& v : a.values) s += v;
  return s / static_cast<double>(a.values.size());
}

Complex integral(const ScalarField& a) {
  const double w = a.grid.spacing() * a.grid.spacing();
  Complex s{0.0, 0.0};
  for (const Complex& v : a.values) s += v;
  return w * s;
}

double max_abs(const ScalarField& a) {
  double m = 0.0;
  for (const Complex& v : a.values) m = std::max(m, std::abs(v));
  return m;
}

Complex l2_inner(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a.grid, b.grid);
  const double w = a.grid.spacing() * a.grid.spacing();
  Complex s{0.0, 0.0};
  for (size_t i = 0; i < a.values.size(); ++i)
    s += a.values[i] * std::conj(b.values[i]);
  return w * s;
}

double l2_norm_sq(const ScalarField& a) {
  const double w = a.grid.spacing() * a.grid.spacing();
  double s = 0.0;
  for (const Complex& v : a.values) s += std::norm(v);
  return w * s;
}

double l2_norm(const ScalarField& a) { return std::sqrt(l2_norm_sq(a)); }

OneFormField operator+(const OneFormField& a, const OneFormField& b) {
  return {a.p + b.p, a.q + b.q};
}

OneFormField operator-(const OneFormField& a, const OneFormField& b) {
  return {a.p - b.p, a.q - b.q};
}

OneFormField operator*(Complex c, const OneFormField& a) {
  return {c * a.p, c * a.q};
}

TwoFormField operator+(const TwoFormField& a, const TwoFormField& b) {
  return TwoFormField(a.f + b.f);
}

TwoFormField operator-(const TwoFormField& a, const TwoFormField& b) {
  return TwoFormField(a.f - b.f);
}

TwoFormField operator*(Complex c, const TwoFormField& a) {
  return TwoFormField(c * a.f);
}

double l2_norm_sq(const OneFormField& a) {
  return l2_norm_sq(a.p) + l2_norm_sq(a.q);
}

double l2_norm_sq(const TwoFormField& a) { return l2_norm_sq(a.f); }

OneFormField imaginary_one_form(const ScalarField& p) {
  return {p, -conj(p)};
}

bool is_imaginary_one_form(const OneFormField& a, double tol) {
  return max_abs(a.q + conj(a.p)) <= tol;
}

bool is_imaginary_two_form(const TwoFormField& a, double tol) {
  return max_abs(imag_part(a.f)) <= tol;
}

bool is_real_field(const ScalarField& a, double tol) {
  return max_abs(imag_part(a)) <= tol;
}

bool is_imaginary_field(const ScalarField& a, double tol) {
  return max_abs(real_part(a)) <= tol;
}

// ---- spectral operators ---------------------------------------------------

std::vector<Complex> to_modes(const ScalarField& f) {
  return PlanCache::instance().run(f.grid.n, f.values, FFTW_FORWARD);
}

ScalarField from_modes(const TorusGrid& g, const std::vector<Complex>& modes) {
  if (static_cast<int>(modes.size()) != g.size())
    throw std::invalid_argument("from_modes: coefficient count does not match grid");
  return ScalarField(g, PlanCache::instance().run(g.n, modes, FFTW_BACKWARD));
}

ScalarField partial_x1(const ScalarField& f) {
  const TorusGrid g = f.grid;
  return apply_multiplier(f, [g](int m1, int) {
    const double k1 = (m1 == -g.n / 2) ? 0.0 : g.kappa(m1);
    return Complex(0.0, k1);
  });
}

ScalarField partial_x2(const ScalarField& f) {
  const TorusGrid g = f.grid;
  return apply_multiplier(f, [g](int, int m2) {
    const double k2 = (m2 == -g.n / 2) ? 0.0 : g.kappa(m2);
    return Complex(0.0, k2);
  });
}

ScalarField partial_z(const ScalarField& f) {
  const TorusGrid g = f.grid;
  return apply_multiplier(f, [g](int m1, int m2) {
    const double k1 = (m1 == -g.n / 2) ? 0.0 : g.kappa(m1);
    const double k2 = (m2 == -g.n / 2) ? 0.0 : g.kappa(m2);
    return Complex(k2 / 2.0, k1 / 2.0);  // (k2 + i k1)/2
  });
}

ScalarField partial_zbar(const ScalarField& f) {
  const TorusGrid g = f.grid;
  return apply_multiplier(f, [g](int m1, int m2) {
    const double k1 = (m1 == -g.n / 2) ? 0.0 : g.kappa(m1);
    const double k2 = (m2 == -g.n / 2) ? 0.0 : g.kappa(m2);
    return Complex(-k2 / 2.0, k1 / 2.0);  // (i k1 - k2)/2
  });
}

ScalarField laplacian(const ScalarField& f) {
  const TorusGrid g = f.grid;
  return apply_multiplier(f, [g](int m1, int m2) {
    const double k1 = g.kappa(m1);
    const double k2 = g.kappa(m2);
    return Complex(-(k1 * k1 + k2 * k2), 0.0);
  });
}

ScalarField green_invert(const ScalarField& source) {
  std::vector<Complex> modes = to_modes(source);
  const double mean_abs = std::abs(modes[0]);
  if (mean_abs > precondition_tol * std::max(1.0, max_abs(source)))
    throw NonZeroMean(mean_abs);
  const TorusGrid& g = source.grid;
  const int n = g.n;
  for (int a = 0; a < n; ++a) {
    const double k1 = g.kappa(g.signed_mode(a));
    for (int b = 0; b < n; ++b) {
      const double k2 = g.kappa(g.signed_mode(b));
      const size_t idx = static_cast<size_t>(a) * n + b;
      if (a == 0 && b == 0)
        modes[idx] = Complex{0.0, 0.0};
      else
        modes[idx] /= -(k1 * k1 + k2 * k2);
    }
  }
  return from_modes(g, modes);
}

ScalarField band_limit(const ScalarField& f, int max_abs_mode) {
  std::vector<Complex> modes = to_modes(f);
  const int n = f.grid.n;
  for (int a = 0; a < n; ++a) {
    const int m1 = f.grid.signed_mode(a);
    for (int b = 0; b < n; ++b) {
      const int m2 = f.grid.signed_mode(b);
      if (std::abs(m1) > max_abs_mode || std::abs(m2) > max_abs_mode)
        modes[static_cast<size_t>(a) * n + b] = Complex{0.0, 0.0};
    }
  }
  return from_modes(f.grid, modes);
}

OneFormField exterior_d(const ScalarField& f) {
  return {partial_z(f), partial_zbar(f)};
}

TwoFormField exterior_d(const OneFormField& a) {
  return TwoFormField(partial_z(a.q) - partial_zbar(a.p));
}

ScalarField codifferential(const OneFormField& a) {
  return Complex{-2.0, 0.0} * (partial_z(a.q) + partial_zbar(a.p));
}

OneFormField hodge_star(const OneFormField& a) {
  return {Complex{0.0, -1.0} * a.p, Complex{0.0, 1.0} * a.q};
}

Complex integrate_2form(const TwoFormField& t) {
  // f dz^dzbar = -2i f dx1^dx2
  return Complex{0.0, -2.0} * integral(t.f);
}

}  // namespace swred
