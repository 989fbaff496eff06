#include "freqcurve/restriction.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "freqcurve/errors.hpp"
#include "freqcurve/geometry.hpp"
#include "freqcurve/quadrature.hpp"

namespace freqcurve {

double TestFunction::operator()(double t) const {
  if (kind == Kind::Zero) return 0.0;
  if (t <= lo || t >= hi) return (kind == Kind::Indicator && t >= lo && t <= hi) ? 1.0 : 0.0;
  if (kind == Kind::Indicator) return 1.0;
  const double len = hi - lo;
  return std::exp(-smoothness * len * len / ((t - lo) * (hi - t)));
}

std::string TestFunction::describe() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::Indicator: os << "indicator"; break;
    case Kind::Bump: os << "bump(s=" << smoothness << ")"; break;
    case Kind::Zero: os << "zero"; break;
  }
  os << "[" << lo << "," << hi << "]";
  return os.str();
}

ExponentPair exponent_pair(double p, int d) {
  if (d < 2 || d > 8) fail(ErrorCode::OutOfRange, "dimension must lie in [2, 8]");
  const double dd = d * d + d;
  const double upper = (dd + 2.0) / dd;
  if (!(p > 1.0 && p < upper)) {
    std::ostringstream os;
    os << "p must lie in (1, " << upper << ") for d = " << d;
    fail(ErrorCode::OutOfRange, os.str());
  }
  ExponentPair pair;
  pair.p = p;
  pair.d = d;
  pair.p_prime = p / (p - 1.0);
  pair.q = 2.0 * pair.p_prime / dd;
  return pair;
}

namespace {

struct PanelNodes {
  std::vector<double> t;
  std::vector<double> w;
  long panels = 0;
  bool degraded = false;
};

// panel length <= (1/8) * 2*pi / omega, at least 4 panels, GL-16 per panel
PanelNodes build_panels(double lo, double hi, double omega, long max_panels) {
  PanelNodes pn;
  const double len = hi - lo;
  long n_panels = 4;
  if (omega > 0.0) {
    const double needed = std::ceil(len * omega * 8.0 / (2.0 * M_PI));
    n_panels = std::max<long>(4, needed > 1e18 ? max_panels + 1 : static_cast<long>(needed));
  }
  if (n_panels > max_panels) {
    n_panels = max_panels;
    pn.degraded = true;
  }
  pn.panels = n_panels;
  const GaussLegendreRule& rule = gauss_legendre(16);
  pn.t.reserve(16 * n_panels);
  pn.w.reserve(16 * n_panels);
  for (long pidx = 0; pidx < n_panels; ++pidx) {
    const double a = lo + len * pidx / n_panels;
    const double b = lo + len * (pidx + 1) / n_panels;
    const double mid = 0.5 * (a + b), hw = 0.5 * (b - a);
    for (int i = 0; i < 16; ++i) {
      pn.t.push_back(mid + hw * rule.nodes[i]);
      pn.w.push_back(hw * rule.weights[i]);
    }
  }
  return pn;
}

double sup_inner_product(const Curve& curve, const Eigen::VectorXd& x, double lo, double hi) {
  double sup = 0.0;
  for (int i = 0; i < 512; ++i) {
    const double t = lo + (i + 0.5) * (hi - lo) / 512.0;
    sup = std::max(sup, std::abs(x.dot(curve.velocity(t))));
  }
  return sup;
}

double sup_oscillation(const Curve& curve, double lo, double hi) {
  double sup = 0.0;
  for (int i = 0; i < 512; ++i) {
    const double t = lo + (i + 0.5) * (hi - lo) / 512.0;
    sup = std::max(sup, curve.oscillation_rate(t));
  }
  return sup / (2.0 * M_PI);
}

void check_grid(const GridSpec& grid, int d) {
  if (grid.d != d) fail(ErrorCode::OutOfRange, "grid dimension mismatch");
  if (grid.n < 8) fail(ErrorCode::OutOfRange, "grid must have n >= 8 points per axis");
  if (!(grid.box > 0.0)) fail(ErrorCode::OutOfRange, "box half-width must be positive");
  if (std::pow(static_cast<double>(grid.n), d) > static_cast<double>(1 << 24))
    fail(ErrorCode::CostGuard, "grid exceeds the total point budget");
}

double source_norm_value(const Curve& curve, const TestFunction& f, double q_prime) {
  const double val =
      adaptive_integrate([&](double t) { return std::pow(std::abs(f(t)), q_prime) *
                                                affine_density(curve, t); },
                         f.lo, f.hi, 1e-9, 44);
  return std::pow(std::max(val, 0.0), 1.0 / q_prime);
}

// Extension values on the tensor grid via separable rank-1 accumulation over
// the shared panel nodes.
std::vector<std::complex<double>> grid_extension(const Curve& curve, const TestFunction& f,
                                                 const GridSpec& grid, bool weighted,
                                                 const PanelNodes& pn) {
  const int d = curve.dim();
  const int n = grid.n;
  long total = 1;
  for (int i = 0; i < d; ++i) total *= n;
  std::vector<std::complex<double>> E(total, {0.0, 0.0});

  const double h = 2.0 * grid.box / (n - 1);
  std::vector<std::vector<std::complex<double>>> axis(d,
                                                      std::vector<std::complex<double>>(n));
  for (size_t k = 0; k < pn.t.size(); ++k) {
    const double t = pn.t[k];
    const double fv = f(t);
    if (fv == 0.0) continue;
    const double coef = pn.w[k] * fv * (weighted ? affine_density(curve, t) : 1.0);
    const Eigen::VectorXd g = curve.point(t);
    for (int i = 0; i < d; ++i) {
      // exp(2*pi*i * x_a * gamma_i); x_a on a uniform grid, so the factors
      // form a geometric progression
      const double step = 2.0 * M_PI * h * g[i];
      const std::complex<double> mult(std::cos(step), std::sin(step));
      const double start = 2.0 * M_PI * (-grid.box) * g[i];
      std::complex<double> cur(std::cos(start), std::sin(start));
      for (int a = 0; a < n; ++a) {
        axis[i][a] = cur;
        cur *= mult;
      }
    }
    // rank-1 update: E[a0,...,a_{d-1}] += coef * prod axis[i][a_i]
    if (d == 2) {
      for (int a = 0; a < n; ++a) {
        const std::complex<double> pre = coef * axis[0][a];
        std::complex<double>* row = E.data() + static_cast<long>(a) * n;
        for (int b = 0; b < n; ++b) row[b] += pre * axis[1][b];
      }
    } else if (d == 3) {
      for (int a = 0; a < n; ++a) {
        const std::complex<double> pa = coef * axis[0][a];
        for (int b = 0; b < n; ++b) {
          const std::complex<double> pb = pa * axis[1][b];
          std::complex<double>* row = E.data() + (static_cast<long>(a) * n + b) * n;
          for (int c = 0; c < n; ++c) row[c] += pb * axis[2][c];
        }
      }
    } else if (d == 4) {
      for (int a = 0; a < n; ++a) {
        const std::complex<double> pa = coef * axis[0][a];
        for (int b = 0; b < n; ++b) {
          const std::complex<double> pb = pa * axis[1][b];
          for (int c = 0; c < n; ++c) {
            const std::complex<double> pc = pb * axis[2][c];
            std::complex<double>* row =
                E.data() + ((static_cast<long>(a) * n + b) * n + c) * n;
            for (int e = 0; e < n; ++e) row[e] += pc * axis[3][e];
          }
        }
      }
    } else {
      fail(ErrorCode::CostGuard, "grid norms limited to 2 <= d <= 4");
    }
  }
  return E;
}

double grid_norm(const std::vector<double>& mags, const GridSpec& grid, double expo) {
  const int n = grid.n;
  const int d = grid.d;
  const double h = 2.0 * grid.box / (n - 1);
  double sum = 0.0;
  // trapezoid weights: 1/2 on each box face, accumulated in fixed index order
  for (long idx = 0; idx < static_cast<long>(mags.size()); ++idx) {
    double w = 1.0;
    long rem = idx;
    for (int i = 0; i < d; ++i) {
      const int a = static_cast<int>(rem % n);
      rem /= n;
      if (a == 0 || a == n - 1) w *= 0.5;
    }
    sum += w * std::pow(mags[idx], expo);
  }
  return std::pow(sum * std::pow(h, d), 1.0 / expo);
}

}  // namespace

std::complex<double> extension_eval(const Curve& curve, const TestFunction& f,
                                    const Eigen::VectorXd& x, bool weighted, bool* degraded,
                                    long max_panels) {
  if (x.size() != curve.dim()) fail(ErrorCode::OutOfRange, "point dimension mismatch");
  if (!(f.lo < f.hi)) fail(ErrorCode::OutOfRange, "empty support");
  double omega = sup_inner_product(curve, x, f.lo, f.hi);
  if (weighted) omega += sup_oscillation(curve, f.lo, f.hi);
  const PanelNodes pn = build_panels(f.lo, f.hi, omega, max_panels);
  if (pn.degraded && !degraded)
    fail(ErrorCode::BudgetExceeded, "oscillation rule exceeds the panel budget");
  if (degraded) *degraded = pn.degraded;

  std::complex<double> acc(0.0, 0.0);
  for (size_t k = 0; k < pn.t.size(); ++k) {
    const double t = pn.t[k];
    const double fv = f(t);
    if (fv == 0.0) continue;
    const double coef = pn.w[k] * fv * (weighted ? affine_density(curve, t) : 1.0);
    const double phase = 2.0 * M_PI * x.dot(curve.point(t));
    acc += coef * std::complex<double>(std::cos(phase), std::sin(phase));
  }
  return acc;
}

NormReport extension_norm(const Curve& curve, const TestFunction& f, const ExponentPair& pair,
                          const GridSpec& grid, bool weighted, long max_panels) {
  const int d = curve.dim();
  check_grid(grid, d);
  if (pair.d != d) fail(ErrorCode::OutOfRange, "exponent pair dimension mismatch");

  NormReport rep;
  rep.curve_id = curve.id();
  rep.test_function = f.describe();
  rep.pair = pair;
  rep.grid = grid;
  rep.weighted = weighted;
  if (f.kind == TestFunction::Kind::Zero || !(f.lo < f.hi)) {
    rep.zero_input = true;
    return rep;
  }

  // worst-case corner of the box: sup_x |<x, gamma'>| = box * ||gamma'||_1
  double omega = 0.0;
  for (int i = 0; i < 512; ++i) {
    const double t = f.lo + (i + 0.5) * (f.hi - f.lo) / 512.0;
    omega = std::max(omega, grid.box * curve.velocity(t).cwiseAbs().sum());
  }
  if (weighted) omega += sup_oscillation(curve, f.lo, f.hi);
  const PanelNodes pn = build_panels(f.lo, f.hi, omega, max_panels);
  rep.panel_count = pn.panels;
  rep.degraded = pn.degraded;

  const std::vector<std::complex<double>> E = grid_extension(curve, f, grid, weighted, pn);
  std::vector<double> mags(E.size());
  for (size_t i = 0; i < E.size(); ++i) mags[i] = std::abs(E[i]);
  rep.extension_norm_value = grid_norm(mags, grid, pair.p_prime);

  const double q_prime = pair.q / (pair.q - 1.0);
  if (!(pair.q > 1.0)) fail(ErrorCode::OutOfRange, "q must exceed 1 for the source norm");
  rep.source_norm = source_norm_value(curve, f, q_prime);
  if (rep.source_norm == 0.0) {
    rep.zero_input = true;
    return rep;
  }
  rep.ratio = rep.extension_norm_value / rep.source_norm;
  return rep;
}

std::vector<std::tuple<int, double, double>> dyadic_partition(double lo, double hi,
                                                              double center) {
  if (!(lo < hi)) fail(ErrorCode::OutOfRange, "empty interval");
  if (center > lo && center < hi) fail(ErrorCode::CenterInside, "centre inside the interval");
  const double wmin = std::min(std::abs(lo - center), std::abs(hi - center));
  const double wmax = std::max(std::abs(lo - center), std::abs(hi - center));
  const double width_min = 1e-12 * (hi - lo);

  const int n_hi = static_cast<int>(std::ceil(std::log2(wmax)));
  int n_lo = n_hi - 60;
  if (wmin > 0.0) n_lo = static_cast<int>(std::ceil(std::log2(wmin)));

  std::vector<std::tuple<int, double, double>> out;
  for (int n = n_lo; n <= n_hi; ++n) {
    const double r0 = std::ldexp(1.0, n - 1), r1 = std::ldexp(1.0, n);
    double a, b;
    if (center <= lo) {
      a = std::max(lo, center + r0);
      b = std::min(hi, center + r1);
    } else {
      a = std::max(lo, center - r1);
      b = std::min(hi, center - r0);
    }
    if (b - a > width_min) out.push_back({n, a, b});
  }
  std::sort(out.begin(), out.end(),
            [](const auto& x, const auto& y) { return std::get<1>(x) < std::get<1>(y); });
  return out;
}

std::vector<NormReport> counterexample_scan(double alpha, double beta, int d, int m_max,
                                            const ExponentPair& pair, const GridSpec& grid) {
  const SjolinChenCurve curve(d, alpha, beta);
  if (m_max < 1) fail(ErrorCode::OutOfRange, "need at least one scale");
  std::vector<NormReport> out;
  for (int m = 1; m <= m_max; ++m) {
    TestFunction f;
    f.kind = TestFunction::Kind::Indicator;
    f.lo = std::ldexp(1.0, -m - 1);
    f.hi = std::ldexp(1.0, -m);
    NormReport rep = extension_norm(curve, f, pair, grid, /*weighted=*/true);
    rep.label = m;
    out.push_back(std::move(rep));
  }
  return out;
}

MultilinearResult multilinear_decay_experiment(const Curve& curve, const DecompositionPiece& piece,
                                               const std::vector<int>& gaps,
                                               const ExponentPair& pair, const GridSpec& grid) {
  const int d = curve.dim();
  if (d != 3) fail(ErrorCode::OutOfRange, "multilinear experiment fixed at d = 3");
  check_grid(grid, d);
  std::vector<int> distinct = gaps;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  if (distinct.size() < 3)
    fail(ErrorCode::InsufficientGaps, "need at least 3 distinct gap values");

  const auto annuli = dyadic_partition(piece.lo, piece.hi, piece.center);
  std::vector<int> levels;
  for (const auto& [n, a, b] : annuli) levels.push_back(n);
  std::sort(levels.begin(), levels.end());
  auto interval_of = [&](int n) -> std::pair<double, double> {
    for (const auto& [m, a, b] : annuli)
      if (m == n) return {a, b};
    fail(ErrorCode::OutOfRange, "dyadic level missing from the piece");
  };

  const double q_prime = pair.q / (pair.q - 1.0);
  MultilinearResult res;
  for (int gap : distinct) {
    const int n3 = levels.back();
    const int n1 = n3 - gap;
    const int n2 = n3 - gap / 2;
    if (std::find(levels.begin(), levels.end(), n1) == levels.end() ||
        std::find(levels.begin(), levels.end(), n2) == levels.end())
      fail(ErrorCode::OutOfRange, "gap exceeds the dyadic range of the piece");

    long total = 1;
    for (int i = 0; i < d; ++i) total *= grid.n;
    std::vector<double> prod(total, 1.0);
    double source = 1.0;
    for (int level : {n1, n2, n3}) {
      const auto [a, b] = interval_of(level);
      TestFunction f;
      f.lo = a;
      f.hi = b;
      double omega = 0.0;
      for (int i = 0; i < 512; ++i) {
        const double t = a + (i + 0.5) * (b - a) / 512.0;
        omega = std::max(omega, grid.box * curve.velocity(t).cwiseAbs().sum());
      }
      omega += sup_oscillation(curve, a, b);
      const PanelNodes pn = build_panels(a, b, omega, 1L << 16);
      const auto E = grid_extension(curve, f, grid, /*weighted=*/true, pn);
      for (long i = 0; i < total; ++i) prod[i] *= std::abs(E[i]);
      source *= source_norm_value(curve, f, q_prime);
    }
    const double norm = grid_norm(prod, grid, pair.p_prime / d);
    res.gap_ratios.push_back({gap, norm / source});
  }

  // least-squares slope of log2(ratio) against gap
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const int m = static_cast<int>(res.gap_ratios.size());
  for (const auto& [g, r] : res.gap_ratios) {
    const double y = std::log2(std::max(r, 1e-300));
    sx += g;
    sy += y;
    sxx += static_cast<double>(g) * g;
    sxy += g * y;
  }
  const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  res.k_fit = -slope;
  bool monotone = true;
  for (size_t i = 1; i < res.gap_ratios.size(); ++i)
    monotone = monotone && res.gap_ratios[i].second <= res.gap_ratios[i - 1].second;
  res.unstable = !(res.k_fit > 0.0) || !monotone;
  return res;
}

}  // namespace freqcurve
