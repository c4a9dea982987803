#include "swred/solver.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <utility>

#include "band_basis.hpp"

namespace swred {

namespace {

constexpr Complex kI{0.0, 1.0};

double spinor_l2_norm(const Configuration& c) {
  return std::sqrt(l2_norm_sq(c.spinor.psi1) + l2_norm_sq(c.spinor.psi2));
}

// Tangent basis spanning every storage mode of the grid (Nyquist rows
// included), g-orthonormal: index = ((slot * n^2) + mode) * 2 + component.
struct FullBasis {
  TorusGrid g;

  int size() const { return 8 * g.size(); }

  static double slot_norm(const TorusGrid& g, int slot) {
    return g.side * std::sqrt(detail::DomainBasis::slot_weight(slot));
  }

  TangentVector synthesize(const Eigen::VectorXd& coef) const {
    std::vector<ScalarField> out;
    out.reserve(4);
    int idx = 0;
    for (int slot = 0; slot < 4; ++slot) {
      const double norm = slot_norm(g, slot);
      std::vector<Complex> mv(g.size());
      for (int k = 0; k < g.size(); ++k) {
        mv[k] = Complex(coef[idx], coef[idx + 1]) / norm;
        idx += 2;
      }
      out.push_back(from_modes(g, mv));
    }
    return tangent_from_coefficients(out[0], out[1], out[2], out[3]);
  }

  TangentVector unit(int index) const {
    const int comp = index % 2;
    const int k = (index / 2) % g.size();
    const int slot = index / (2 * g.size());
    std::vector<Complex> mv(g.size(), Complex(0.0));
    mv[k] = (comp == 0 ? Complex(1.0) : Complex(0.0, 1.0)) / slot_norm(g, slot);
    const ScalarField f = from_modes(g, mv);
    const ScalarField z(g);
    switch (slot) {
      case 0:
        return tangent_from_coefficients(f, z, z, z);
      case 1:
        return tangent_from_coefficients(z, f, z, z);
      case 2:
        return tangent_from_coefficients(z, z, f, z);
      default:
        return tangent_from_coefficients(z, z, z, f);
    }
  }
};

// Minimum-norm least-squares solution of J delta = -r over the full grid
// tangent basis.  J is the exact Jacobian of the discrete residual map, so
// near a solution the step converges quadratically to the discrete zero
// manifold; the minimum-norm property (rank-revealing complete orthogonal
// decomposition) keeps the step orthogonal to the null directions (gauge
// and moduli), so the iterate does not drift along the orbit.
TangentVector gauss_newton_direction(const Configuration& c,
                                     const SolveOptions& opt) {
  const TorusGrid& g = c.grid();
  const FullBasis dom{g};
  const int D = dom.size();
  const int R = 8 * g.size();

  const std::array<double, 4> scale = {
      std::sqrt(opt.weights.curvature), std::sqrt(opt.weights.higgs),
      std::sqrt(opt.weights.dirac), std::sqrt(opt.weights.dirac)};

  Eigen::MatrixXd J(R, D);
  for (int j = 0; j < D; ++j) {
    const LinearizedResidual lr = linearized_residual(c, dom.unit(j), 1.0);
    J.col(j) = detail::flatten4(lr.dr1.f, lr.dr2.f, lr.dr3a, lr.dr3b, scale);
  }

  const ResidualBundle r = residuals(c);
  const Eigen::VectorXd rhs =
      -detail::flatten4(r.r1.f, r.r2.f, r.r3a, r.r3b, scale);

  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(J);
  cod.setThreshold(1e-10);
  return dom.synthesize(cod.solve(rhs));
}

}  // namespace

StalledLineSearch::StalledLineSearch(const std::string& why, SolveReport rep)
    : std::runtime_error("line search stalled: " + why),
      report(std::move(rep)) {}

MaxItersExceeded::MaxItersExceeded(SolveReport rep)
    : std::runtime_error("iteration limit reached at energy " +
                         std::to_string(rep.final_energy)),
      report(std::move(rep)) {}

TangentVector energy_gradient(const Configuration& c, const EnergyWeights& w) {
  const ResidualBundle r = residuals(c);
  const ScalarField& r1 = r.r1.f;
  const ScalarField& r2 = r.r2.f;
  const ScalarField& r3a = r.r3a;
  const ScalarField& r3b = r.r3b;
  const ScalarField& a = c.connection.a;
  const ScalarField& psi1 = c.spinor.psi1;
  const ScalarField& psi2 = c.spinor.psi2;
  const ScalarField& phi = c.higgs.phi;
  const double wc = w.curvature;
  const double wh = w.higgs;
  const double wd = w.dirac;

  const ScalarField ga = wc * partial_z(r1) +
                         (0.5 * wd) * (r3b * conj(psi1) - conj(r3a) * psi2);
  const ScalarField gb1 =
      wc * (r1 * psi1) - wh * (r2 * psi2) +
      wd * (Complex(-0.5) * (phi * r3a) - partial_zbar(r3b) + conj(a) * r3b);
  const ScalarField gb2 =
      Complex(-wc) * (r1 * psi2) - wh * (conj(r2) * psi1) +
      wd * (Complex(-1.0) * partial_z(r3a) - a * r3a -
            Complex(0.5) * (conj(phi) * r3b));
  const ScalarField gg = wh * partial_z(r2) -
                         (0.25 * wd) * (conj(r3a) * psi1 + r3b * conj(psi2));
  return tangent_from_coefficients(ga, gb1, gb2, gg);
}

namespace {

// Inverse of the operator 4 d_z d_zbar as the discrete derivatives actually
// realise it: each first derivative drops the Nyquist component of its
// frequency, so the symbol is -(k1~^2 + k2~^2) with tilded (dropped)
// components -- NOT the full -(k1^2 + k2^2) of green_invert.  Using the
// latter under-corrects every Nyquist-row mode and the slice equation
// fails for configurations with content there.  Modes where the symbol
// vanishes (the mean and the three doubly-Nyquist slots) carry no source:
// they are annihilated by d_zbar itself.
ScalarField invert_slice_laplacian(const ScalarField& source) {
  std::vector<Complex> modes = to_modes(source);
  const TorusGrid& g = source.grid;
  const int n = g.n;
  for (int a = 0; a < n; ++a) {
    const int m1 = g.signed_mode(a);
    const double k1 = (m1 == -n / 2) ? 0.0 : g.kappa(m1);
    for (int b = 0; b < n; ++b) {
      const int m2 = g.signed_mode(b);
      const double k2 = (m2 == -n / 2) ? 0.0 : g.kappa(m2);
      const double symbol = k1 * k1 + k2 * k2;
      const std::size_t idx = static_cast<std::size_t>(a) * n + b;
      modes[idx] = (symbol == 0.0) ? Complex{0.0, 0.0} : modes[idx] / -symbol;
    }
  }
  return from_modes(g, modes);
}

}  // namespace

GaugeFixResult coulomb_gauge_fix(const Configuration& c,
                                 const Configuration& reference) {
  require_same_grid(c.grid(), reference.grid());
  const ScalarField diff = c.connection.a - reference.connection.a;
  const ScalarField source = Complex(-4.0) * imag_part(partial_zbar(diff));
  GaugeElement u{kI * invert_slice_laplacian(source)};
  Configuration fixed = gauge_apply(u, c);
  return {std::move(fixed), std::move(u)};
}

namespace {

SolveStep step_row(int iter, const ResidualBundle& r, double e, double s) {
  return {iter,          e,
          l2_norm(r.r1.f), l2_norm(r.r2.f),
          l2_norm(r.r3a),  l2_norm(r.r3b),
          s};
}

void finalize(SolveReport& rep, const Configuration& c,
              const Configuration& start) {
  const SolveStep& last = rep.trace.back();
  rep.final_energy = last.energy;
  rep.r1_norm = last.r1;
  rep.r2_norm = last.r2;
  rep.r3a_norm = last.r3a;
  rep.r3b_norm = last.r3b;
  rep.gauge_fix_residual = l2_norm(codifferential(
      imaginary_one_form(c.connection.a - start.connection.a)));
}

}  // namespace

SolveResult solve(const Configuration& start, const SolveOptions& opt) {
  if (spinor_l2_norm(start) <= 1e-8)
    throw std::invalid_argument(
        "starting spinor is (numerically) zero: the decoupled stratum is "
        "excluded");

  Configuration c = start;
  SolveReport rep;
  ResidualBundle r = residuals(c);
  double e = energy(r, opt.weights);
  rep.initial_energy = e;
  rep.trace.push_back(step_row(0, r, e, 0.0));
  if (e <= opt.energy_tol) {
    rep.converged = true;
    if (opt.gauge_fix) c = coulomb_gauge_fix(c, start).configuration;
    finalize(rep, c, start);
    return {c, rep};
  }

  for (int iter = 1; iter <= opt.max_iters; ++iter) {
    if (spinor_l2_norm(c) < opt.psi_floor) {
      finalize(rep, c, start);
      throw StalledLineSearch("spinor norm fell below psi_floor", rep);
    }

    const TangentVector grad = energy_gradient(c, opt.weights);
    const TangentVector dir = opt.method == SolveMethod::gauss_newton
                                  ? gauss_newton_direction(c, opt)
                                  : -1.0 * grad;
    const double slope = tangent_inner(grad, dir);
    if (!(slope < 0.0)) {
      finalize(rep, c, start);
      throw StalledLineSearch("no descent direction", rep);
    }

    double s = 1.0;
    bool accepted = false;
    for (int b = 0; b <= opt.max_backtracks && !accepted; ++b) {
      const Configuration trial = advance(c, dir, s);
      const ResidualBundle rt = residuals(trial);
      const double et = energy(rt, opt.weights);
      if (et <= e + opt.armijo_slope * s * slope) {
        c = trial;
        r = rt;
        e = et;
        accepted = true;
      } else {
        s *= opt.backtrack;
      }
    }
    if (!accepted) {
      finalize(rep, c, start);
      throw StalledLineSearch("backtracking made no progress", rep);
    }

    rep.trace.push_back(step_row(iter, r, e, s));
    rep.iterations = iter;
    if (e <= opt.energy_tol) {
      rep.converged = true;
      break;
    }
  }

  if (rep.converged && opt.gauge_fix)
    c = coulomb_gauge_fix(c, start).configuration;
  finalize(rep, c, start);
  if (!rep.converged) throw MaxItersExceeded(std::move(rep));
  return {c, rep};
}

}  // namespace swred
