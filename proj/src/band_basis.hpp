#pragma once

// Internal helpers shared by the deformation analysis and the solver:
// enumeration of the band-limited tangent basis, flattening of residual
// 4-tuples into L2-weighted real vectors, and singular-spectrum splitting.
// Not part of the public headers.

#include <Eigen/Dense>
#include <algorithm>
#include <limits>

#include "swred/linear.hpp"

namespace swred::detail {

inline int resolve_band(const TorusGrid& g, int requested) {
  const int band = requested < 0 ? g.n / 4 : requested;
  if (band < 0 || 2 * band >= g.n)
    throw std::invalid_argument("mode band does not fit on the grid");
  return band;
}

// Real coordinates of the band-limited tangent domain: slot
// (p_alpha, beta1, beta2, p_gamma) x mode in [-mm, mm]^2 x {1, i}.
// Single-mode vectors are g-orthonormal, so coefficient vectors map to
// g-orthonormal tangents.
struct DomainBasis {
  TorusGrid g;
  int mm;

  int axis() const { return 2 * mm + 1; }
  int mode_count() const { return axis() * axis(); }
  int size() const { return 8 * mode_count(); }

  static double slot_weight(int slot) {
    return (slot == 0 || slot == 3) ? 4.0 : 2.0;
  }

  TangentVector synthesize(const Eigen::VectorXd& coef) const {
    std::vector<std::vector<Complex>> modes(
        4, std::vector<Complex>(g.size(), Complex(0.0)));
    int idx = 0;
    for (int slot = 0; slot < 4; ++slot) {
      const double norm = g.side * std::sqrt(slot_weight(slot));
      for (int m1 = -mm; m1 <= mm; ++m1) {
        for (int m2 = -mm; m2 <= mm; ++m2) {
          const Complex v(coef[idx], coef[idx + 1]);
          idx += 2;
          modes[slot][g.index(g.mode_index(m1), g.mode_index(m2))] = v / norm;
        }
      }
    }
    ScalarField pa = from_modes(g, modes[0]);
    ScalarField b1 = from_modes(g, modes[1]);
    ScalarField b2 = from_modes(g, modes[2]);
    ScalarField pg = from_modes(g, modes[3]);
    return tangent_from_coefficients(pa, b1, b2, pg);
  }

  TangentVector unit(int index) const {
    Eigen::VectorXd coef = Eigen::VectorXd::Zero(size());
    coef[index] = 1.0;
    return synthesize(coef);
  }
};

// Samples scaled by the grid spacing and a per-block factor, so Euclidean
// dot products of flattened vectors equal (weighted) real L2 inner products.
inline Eigen::VectorXd flatten4(const ScalarField& f1, const ScalarField& f2,
                                const ScalarField& f3, const ScalarField& f4,
                                const std::array<double, 4>& block_scale = {
                                    1.0, 1.0, 1.0, 1.0}) {
  const TorusGrid& g = f1.grid;
  const double h = g.spacing();
  Eigen::VectorXd out(8 * g.size());
  int pos = 0;
  const ScalarField* fields[4] = {&f1, &f2, &f3, &f4};
  for (int b = 0; b < 4; ++b) {
    const double w = h * block_scale[b];
    for (const Complex& v : fields[b]->values) {
      out[pos++] = w * v.real();
      out[pos++] = w * v.imag();
    }
  }
  return out;
}

inline Eigen::VectorXd flatten_residual(const LinearizedResidual& r) {
  return flatten4(r.dr1.f, r.dr2.f, r.dr3a, r.dr3b);
}

struct SpectrumSplit {
  int null_dim = 0;
  double gap = std::numeric_limits<double>::infinity();
};

// Counts singular values below rel_tol * sigma_max, including implicit
// zeros when the matrix has more columns than rows.
inline SpectrumSplit split_spectrum(const Eigen::VectorXd& sigma, int cols,
                                    double rel_tol) {
  SpectrumSplit s;
  if (sigma.size() == 0) {
    s.null_dim = cols;
    s.gap = 0.0;
    return s;
  }
  const double cut = rel_tol * sigma[0];
  double kept = std::numeric_limits<double>::infinity();
  double discarded = 0.0;
  for (int i = 0; i < sigma.size(); ++i) {
    if (sigma[i] < cut) {
      s.null_dim++;
      discarded = std::max(discarded, sigma[i]);
    } else {
      kept = std::min(kept, sigma[i]);
    }
  }
  s.null_dim += cols - static_cast<int>(sigma.size());
  if (s.null_dim > 0 && s.null_dim < cols)
    s.gap = kept / std::max(discarded, std::numeric_limits<double>::min());
  return s;
}

inline int base_bandwidth(const Configuration& c) {
  return std::max({field_band(c.connection.a), field_band(c.spinor.psi1),
                   field_band(c.spinor.psi2), field_band(c.higgs.phi)});
}

}  // namespace swred::detail
