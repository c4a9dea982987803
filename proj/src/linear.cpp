#include "swred/linear.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "band_basis.hpp"

namespace swred {

namespace {

constexpr Complex kI{0.0, 1.0};

using detail::resolve_band;

}  // namespace

NotASolution::NotASolution(double rn)
    : std::runtime_error("base configuration is not a solution (|residual| = " +
                         std::to_string(rn) + ")"),
      residual_norm(rn) {}

UntrustworthyGap::UntrustworthyGap(const std::string& where, double g,
                                   double required)
    : std::runtime_error("singular value gap in " + where + " is " +
                         std::to_string(g) + ", below the required " +
                         std::to_string(required)),
      gap(g) {}

LinearizedResidual linearized_residual(const Configuration& c,
                                       const TangentVector& x, double t) {
  require_same_grid(c.grid(), x.grid());
  const ScalarField& a = c.connection.a;
  const ScalarField& psi1 = c.spinor.psi1;
  const ScalarField& psi2 = c.spinor.psi2;
  const ScalarField& phi = c.higgs.phi;
  const ScalarField& pa = x.alpha.p;
  const ScalarField& qa = x.alpha.q;
  const ScalarField& b1 = x.beta1;
  const ScalarField& b2 = x.beta2;
  const ScalarField& pg = x.gamma.p;
  const ScalarField& qg = x.gamma.q;

  ScalarField dr1 = exterior_d(x.alpha).f +
                    t * (real_part(conj(psi1) * b1) - real_part(conj(psi2) * b2));
  ScalarField dr2 =
      Complex(-2.0) * partial_zbar(pg) - t * (b1 * conj(psi2) + psi1 * conj(b2));
  ScalarField dr3a = partial_zbar(b2) - conj(a) * b2 -
                     (0.5 * t) * (conj(phi) * b1) +
                     t * (qa * psi2 + Complex(0.5) * (qg * psi1));
  ScalarField dr3b = partial_z(b1) + a * b1 - (0.5 * t) * (phi * b2) +
                     t * (pa * psi1 - Complex(0.5) * (pg * psi2));
  return {TwoFormField{dr1}, TwoFormField{dr2}, dr3a, dr3b};
}

TangentVector d1(const Configuration& c, const GaugeElement& f, double t) {
  require_same_grid(c.grid(), f.zeta.grid);
  ScalarField mtf = Complex(-t) * f.zeta;
  return TangentVector(exterior_d(f.zeta), mtf * c.spinor.psi1,
                       mtf * c.spinor.psi2, OneFormField(c.grid()));
}

double tangent_inner(const TangentVector& x, const TangentVector& y) {
  require_same_grid(x.grid(), y.grid());
  return 4.0 * l2_inner(x.alpha.p, y.alpha.p).real() +
         2.0 * l2_inner(x.beta1, y.beta1).real() +
         2.0 * l2_inner(x.beta2, y.beta2).real() +
         4.0 * l2_inner(x.gamma.p, y.gamma.p).real();
}

double tangent_norm(const TangentVector& x) {
  return std::sqrt(tangent_inner(x, x));
}

double residual_norm_sq(const LinearizedResidual& r) {
  return l2_norm_sq(r.dr1.f) + l2_norm_sq(r.dr2.f) + l2_norm_sq(r.dr3a) +
         l2_norm_sq(r.dr3b);
}

std::vector<ScalarField> imaginary_function_basis(const TorusGrid& g,
                                                  int band) {
  const int B = resolve_band(g, band);
  std::vector<ScalarField> basis;
  basis.reserve((2 * B + 1) * (2 * B + 1));

  ScalarField constant(g);
  for (Complex& v : constant.values) v = kI / g.side;
  basis.push_back(constant);

  for (int m1 = -B; m1 <= B; ++m1) {
    for (int m2 = -B; m2 <= B; ++m2) {
      // one representative per +-mode pair, skipping the constant
      if (m1 < 0 || (m1 == 0 && m2 <= 0)) continue;
      const double k1 = g.kappa(m1);
      const double k2 = g.kappa(m2);
      ScalarField c(g);
      ScalarField s(g);
      const double amp = std::numbers::sqrt2 / g.side;
      for (int i = 0; i < g.n; ++i) {
        for (int j = 0; j < g.n; ++j) {
          const double phase = k1 * g.x1(i) + k2 * g.x2(j);
          c.values[g.index(i, j)] = kI * (amp * std::cos(phase));
          s.values[g.index(i, j)] = kI * (amp * std::sin(phase));
        }
      }
      basis.push_back(c);
      basis.push_back(s);
    }
  }
  return basis;
}

int field_band(const ScalarField& f, double rel_tol) {
  const std::vector<Complex> modes = to_modes(f);
  const TorusGrid& g = f.grid;
  double peak = 0.0;
  for (const Complex& m : modes) peak = std::max(peak, std::abs(m));
  if (peak == 0.0) return 0;
  int band = 0;
  for (int i = 0; i < g.n; ++i) {
    for (int j = 0; j < g.n; ++j) {
      if (std::abs(modes[g.index(i, j)]) <= rel_tol * peak) continue;
      const int m1 = std::abs(g.signed_mode(i));
      const int m2 = std::abs(g.signed_mode(j));
      band = std::max({band, m1, m2});
    }
  }
  return band;
}

DeformationAnalysis analyze_deformations(const Configuration& c, double t,
                                         const KernelOptions& opt) {
  using detail::DomainBasis;
  using detail::SpectrumSplit;
  using detail::flatten_residual;
  using detail::split_spectrum;

  const TorusGrid& g = c.grid();
  const int mm = resolve_band(g, opt.max_mode);
  const int spread = detail::base_bandwidth(c);

  // Exactness budget: products of basis fields with base fields must be
  // representable (no aliasing past Nyquist) and integrable exactly.
  if (mm + 2 * spread > g.n / 2 || 2 * mm + 3 * spread >= g.n) {
    std::ostringstream msg;
    msg << "band " << mm << " with base bandwidth " << spread
        << " does not fit exactly on an n=" << g.n
        << " grid; raise n or lower max_mode";
    throw std::invalid_argument(msg.str());
  }

  const double rnorm = std::sqrt(energy(c));
  if (!(rnorm <= opt.solution_tol)) throw NotASolution(rnorm);

  // --- kernel: null space of d2^t stacked on the gauge pairings ---
  const DomainBasis dom{g, mm};
  const int D = dom.size();
  const int R = 8 * g.size();

  std::vector<TangentVector> gauge_dirs;
  {
    const auto fb = imaginary_function_basis(g, mm + spread);
    gauge_dirs.reserve(fb.size());
    for (const ScalarField& f : fb) gauge_dirs.push_back(d1(c, GaugeElement{f}, t));
  }
  const int F = static_cast<int>(gauge_dirs.size());

  Eigen::MatrixXd stacked(R + F, D);
  for (int j = 0; j < D; ++j) {
    const TangentVector b = dom.unit(j);
    stacked.col(j).head(R) = flatten_residual(linearized_residual(c, b, t));
    for (int k = 0; k < F; ++k)
      stacked(R + k, j) = tangent_inner(b, gauge_dirs[k]);
  }

  Eigen::BDCSVD<Eigen::MatrixXd> ksvd(stacked, Eigen::ComputeThinV);
  const SpectrumSplit ker = split_spectrum(ksvd.singularValues(), D, opt.svd_rel_tol);
  if (ker.null_dim > 0 && ker.gap < opt.min_gap)
    throw UntrustworthyGap("kernel", ker.gap, opt.min_gap);

  DeformationAnalysis out;
  out.report.kernel_dim = ker.null_dim;
  out.report.kernel_gap = ker.gap;
  out.report.n = g.n;
  out.report.max_mode = mm;
  out.report.t = t;

  const Eigen::MatrixXd& V = ksvd.matrixV();
  for (int k = 0; k < ker.null_dim; ++k)
    out.kernel_basis.push_back(dom.synthesize(V.col(V.cols() - 1 - k)));

  // --- cokernel: pairs (y, f) with <d2 b, y> + <b, d1 f>_g = 0 for every
  // tangent b; testing b over the enlarged band mm + spread is exact ---
  const DomainBasis dom2{g, mm + spread};
  const int D2 = dom2.size();

  Eigen::MatrixXd applied(R, D2);
  for (int j = 0; j < D2; ++j)
    applied.col(j) = flatten_residual(linearized_residual(c, dom2.unit(j), t));

  // y basis: dr1 pairs against real-valued functions (its values are real),
  // the other slots against complex single modes; all L2-normalized.
  const int modes = dom.mode_count();
  const int Cy = modes + 3 * 2 * modes;
  const auto fcols = imaginary_function_basis(g, mm);
  const int Cf = static_cast<int>(fcols.size());

  Eigen::MatrixXd pairings(D2, Cy + Cf);
  {
    Eigen::MatrixXd ymat = Eigen::MatrixXd::Zero(R, Cy);
    int col = 0;
    const double h = g.spacing();
    // real function basis = -i * (imaginary basis)
    for (const ScalarField& f : imaginary_function_basis(g, mm)) {
      int pos = 0;
      for (const Complex& v : f.values) {
        const Complex rv = -kI * v;
        ymat(pos++, col) = h * rv.real();
        ymat(pos++, col) = h * rv.imag();
      }
      ++col;
    }
    for (int slot = 1; slot < 4; ++slot) {
      for (int m1 = -mm; m1 <= mm; ++m1) {
        for (int m2 = -mm; m2 <= mm; ++m2) {
          for (int comp = 0; comp < 2; ++comp) {
            const Complex coef =
                (comp == 0 ? Complex(1.0) : kI) / g.side;
            std::vector<Complex> mv(g.size(), Complex(0.0));
            mv[g.index(g.mode_index(m1), g.mode_index(m2))] = coef;
            const ScalarField y = from_modes(g, mv);
            int pos = 2 * slot * g.size();
            for (const Complex& v : y.values) {
              ymat(pos++, col) = h * v.real();
              ymat(pos++, col) = h * v.imag();
            }
            ++col;
          }
        }
      }
    }
    pairings.leftCols(Cy) = applied.transpose() * ymat;
  }
  for (int k = 0; k < Cf; ++k) {
    const TangentVector gd = d1(c, GaugeElement{fcols[k]}, t);
    for (int j = 0; j < D2; ++j)
      pairings(j, Cy + k) = tangent_inner(dom2.unit(j), gd);
  }

  Eigen::BDCSVD<Eigen::MatrixXd> csvd(pairings);
  const SpectrumSplit cok =
      split_spectrum(csvd.singularValues(), Cy + Cf, opt.svd_rel_tol);
  if (cok.null_dim > 0 && cok.gap < opt.min_gap)
    throw UntrustworthyGap("cokernel", cok.gap, opt.min_gap);

  out.report.cokernel_dim = cok.null_dim;
  out.report.cokernel_gap = cok.gap;
  out.report.index = out.report.kernel_dim - out.report.cokernel_dim;
  return out;
}

DimensionReport kernel_index(const Configuration& c, double t,
                             const KernelOptions& opt) {
  return analyze_deformations(c, t, opt).report;
}

SigmaReport sigma_tangent_dim(const TorusGrid& g, int max_mode) {
  const int mm = resolve_band(g, max_mode);
  const int axis = 2 * mm + 1;
  const int M = axis * axis;
  const double h = g.spacing();

  auto mode_field = [&](int m1, int m2, Complex coef) {
    std::vector<Complex> mv(g.size(), Complex(0.0));
    mv[g.index(g.mode_index(m1), g.mode_index(m2))] = coef / g.side;
    return from_modes(g, mv);
  };

  Eigen::MatrixXd conn(4 * g.size(), 2 * M);
  Eigen::MatrixXd higgs(2 * g.size(), 2 * M);
  int col = 0;
  for (int m1 = -mm; m1 <= mm; ++m1) {
    for (int m2 = -mm; m2 <= mm; ++m2) {
      for (int comp = 0; comp < 2; ++comp) {
        const ScalarField p =
            mode_field(m1, m2, comp == 0 ? Complex(1.0) : kI);
        const OneFormField alpha = imaginary_one_form(p);
        const ScalarField da = exterior_d(alpha).f;
        const ScalarField coda = codifferential(alpha);
        const ScalarField dbar = partial_zbar(p);
        int pos = 0;
        for (const Complex& v : da.values) {
          conn(pos++, col) = h * v.real();
          conn(pos++, col) = h * v.imag();
        }
        for (const Complex& v : coda.values) {
          conn(pos++, col) = h * v.real();
          conn(pos++, col) = h * v.imag();
        }
        pos = 0;
        for (const Complex& v : dbar.values) {
          higgs(pos++, col) = h * v.real();
          higgs(pos++, col) = h * v.imag();
        }
        ++col;
      }
    }
  }

  const double tol = 1e-10;
  Eigen::BDCSVD<Eigen::MatrixXd> csvd(conn);
  Eigen::BDCSVD<Eigen::MatrixXd> hsvd(higgs);
  SigmaReport rep{};
  rep.harmonic_dim =
      detail::split_spectrum(csvd.singularValues(), 2 * M, tol).null_dim;
  rep.dbar_kernel_dim =
      detail::split_spectrum(hsvd.singularValues(), 2 * M, tol).null_dim;
  rep.total = rep.harmonic_dim + rep.dbar_kernel_dim;
  return rep;
}

int dimension_formula(const std::string& name, int genus, int c1) {
  if (name == "N") return 2 * genus + 2;
  if (name == "Sigma") return 4 * genus;
  if (name == "vortex-psi1-zero") return c1 + genus + 1;
  if (name == "vortex-psi2-zero") return -c1 + genus + 1;
  throw std::invalid_argument("dimension_formula: unknown space '" + name + "'");
}

}  // namespace swred
