#include "freqcurve/geometry.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "freqcurve/errors.hpp"
#include "freqcurve/quadrature.hpp"

namespace freqcurve {

namespace {

// k-th derivative of t^m
double mono_deriv(int m, int k, double t) {
  if (k > m) return 0.0;
  double c = 1.0;
  for (int j = 0; j < k; ++j) c *= (m - j);
  return c * std::pow(t, static_cast<double>(m - k));
}

double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

// Cofactor expansion in extended precision for the small determinants that
// feed relative-accuracy certificates; Vandermonde-like cancellation makes
// plain double LU too lossy near coincident nodes.
long double det_rec(const Eigen::MatrixXd& M, std::vector<int>& cols, int row) {
  const int n = static_cast<int>(cols.size());
  if (row == M.rows() - 1) return static_cast<long double>(M(row, cols[0]));
  long double acc = 0.0L;
  for (int i = 0; i < n; ++i) {
    const int c = cols[i];
    cols.erase(cols.begin() + i);
    const long double sub = det_rec(M, cols, row + 1);
    cols.insert(cols.begin() + i, c);
    const long double term = static_cast<long double>(M(row, c)) * sub;
    acc += (i % 2 == 0) ? term : -term;
  }
  return acc;
}

double det_small(const Eigen::MatrixXd& M) {
  if (M.rows() > 5) return M.determinant();
  std::vector<int> cols(M.cols());
  for (int i = 0; i < M.cols(); ++i) cols[i] = i;
  return static_cast<double>(det_rec(M, cols, 0));
}

}  // namespace

double torsion_constant(int d) {
  if (d < 2 || d > 8) fail(ErrorCode::OutOfRange, "dimension must lie in [2, 8]");
  // det(gamma', ..., gamma^(d)) at t = 0 for phi = t^d, divided by d!
  Eigen::MatrixXd M(d, d);
  for (int row = 0; row < d; ++row) {
    const int m = (row + 1 < d) ? row + 1 : d;  // coordinate exponent
    for (int k = 1; k <= d; ++k) M(row, k - 1) = mono_deriv(m, k, 0.0);
  }
  const double c = M.determinant() / factorial(d);
  if (d <= 6) {
    double closed = 1.0;
    for (int j = 1; j < d; ++j) closed *= factorial(j);
    if (std::abs(c - closed) > 1e-9 * closed)
      fail(ErrorCode::CalibrationInconsistent, "probe determinant disagrees with the closed form");
  }
  return c;
}

double minor_constant(int i, int d) {
  if (d < 2 || d > 8) fail(ErrorCode::OutOfRange, "dimension must lie in [2, 8]");
  if (i < 1 || i > d - 1) fail(ErrorCode::OutOfRange, "minor index must lie in [1, d-1]");
  std::mt19937 gen(424242u);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  double value = 0.0;
  for (int probe = 0; probe < 8; ++probe) {
    const double t = uni(gen);
    Eigen::MatrixXd M(i, i);
    for (int row = 1; row <= i; ++row)
      for (int k = 1; k <= i; ++k) M(row - 1, k - 1) = mono_deriv(row, k, t);
    const double det = M.determinant();
    if (probe == 0)
      value = det;
    else if (std::abs(det - value) > 1e-6 * std::abs(value))
      fail(ErrorCode::CalibrationInconsistent, "minor determinant is not constant in t");
  }
  return value;
}

double affine_density(const Curve& curve, double t) {
  const int d = curve.dim();
  const double L = torsion_constant(d) * curve.phi_deriv(d, t);
  return std::pow(std::abs(L), 2.0 / (d * d + d));
}

double jacobian_direct(const Curve& curve, const Eigen::VectorXd& t) {
  const int d = curve.dim();
  if (t.size() != d) fail(ErrorCode::OutOfRange, "tuple size must equal the dimension");
  Eigen::MatrixXd M(d, d);
  for (int i = 0; i < d; ++i) M.row(i) = curve.velocity(t[i]).transpose();
  return det_small(M);
}

namespace {

struct RecursionEval {
  const Curve& curve;
  int d;
  double cd;
  const GaussLegendreRule& rule;

  double lambda(int j, const Eigen::VectorXd& s) const {
    if (j == 1) return cd * curve.phi_deriv(d, s[0]);
    Eigen::VectorXd u(j - 1);
    return box(0, j, s, u);
  }

  // integrates lambda(j-1, u) over the box u_i in [s_i, s_{i+1}]
  double box(int axis, int j, const Eigen::VectorXd& s, Eigen::VectorXd& u) const {
    if (axis == j - 1) return lambda(j - 1, u);
    const double a = s[axis], b = s[axis + 1];
    const double mid = 0.5 * (a + b), hw = 0.5 * (b - a);
    double sum = 0.0;
    for (int q = 0; q < rule.nodes.size(); ++q) {
      u[axis] = mid + hw * rule.nodes[q];
      sum += rule.weights[q] * box(axis + 1, j, s, u);
    }
    return hw * sum;
  }
};

void check_recursion_budget(int d, int quad_order) {
  if (d > 4) fail(ErrorCode::CostGuard, "recursive evaluation limited to d <= 4");
  if (quad_order < 4) fail(ErrorCode::OutOfRange, "quad order must be >= 4");
  const double cost = std::pow(static_cast<double>(quad_order), d * (d - 1) / 2);
  if (cost > 2e7) fail(ErrorCode::CostGuard, "nested quadrature cost exceeds the budget");
}

}  // namespace

double lambda_recursive(const Curve& curve, const Eigen::VectorXd& t,
                        const RecursiveEvalConfig& cfg) {
  const int d = curve.dim();
  if (t.size() != d) fail(ErrorCode::OutOfRange, "tuple size must equal the dimension");
  for (int i = 0; i + 1 < d; ++i)
    if (t[i] > t[i + 1]) fail(ErrorCode::OutOfRange, "tuple must be nondecreasing");
  check_recursion_budget(d, cfg.quad_order);
  const RecursionEval ev{curve, d, torsion_constant(d), gauss_legendre(cfg.quad_order)};
  return cfg.calibration * ev.lambda(d, t);
}

RecursiveEvalConfig calibrate_recursion(int d, RecursiveEvalConfig cfg) {
  check_recursion_budget(d, cfg.quad_order);
  const SimpleCurve moment = make_moment_curve(d, 64.0);
  RecursiveEvalConfig raw = cfg;
  raw.calibration = 1.0;

  std::mt19937_64 gen(987654321ULL);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  double scale = 0.0;
  std::vector<double> ratios;
  for (int trial = 0; static_cast<int>(ratios.size()) < 16 && trial < 1000; ++trial) {
    Eigen::VectorXd t(d);
    for (int i = 0; i < d; ++i) t[i] = uni(gen);
    std::sort(t.data(), t.data() + d);
    bool ok = true;
    for (int i = 0; i + 1 < d; ++i) ok = ok && (t[i + 1] - t[i] > 1e-3);
    if (!ok) continue;
    ratios.push_back(jacobian_direct(moment, t) / lambda_recursive(moment, t, raw));
  }
  if (ratios.size() < 16)
    fail(ErrorCode::CalibrationInconsistent, "could not draw enough calibration tuples");
  for (double r : ratios) scale += r;
  scale /= ratios.size();
  for (double r : ratios)
    if (std::abs(r - scale) > 1e-8 * std::abs(scale))
      fail(ErrorCode::CalibrationInconsistent, "calibration ratio varies across tuples");
  cfg.calibration = scale;
  return cfg;
}

IntegralBoundResult integral_bound_check(double t, double tau, double a, double alpha) {
  if (!(t < tau)) fail(ErrorCode::OutOfRange, "t < tau required");
  if (!(alpha >= 0.0)) fail(ErrorCode::OutOfRange, "alpha must be nonnegative");
  if (a >= t && a <= tau) fail(ErrorCode::CenterInside, "centre inside the integration interval");
  auto integrand = [&](double s) { return std::pow(std::abs(s - a), alpha); };
  IntegralBoundResult res;
  const bool integral_exponent = alpha == std::floor(alpha) && alpha <= 63.0;
  res.lhs = integral_exponent ? gl_integrate(integrand, t, tau, 64)
                              : adaptive_integrate(integrand, t, tau);
  const double c_alpha = std::min(1.0 / (alpha + 2.0), std::pow(2.0, -alpha));
  res.rhs = c_alpha * std::pow(std::abs(t - a), 0.5 * alpha) *
            std::pow(std::abs(tau - a), 0.5 * alpha) * (tau - t);
  res.pass = res.lhs >= res.rhs;
  return res;
}

namespace {

Eigen::VectorXd derivative_row(const Curve& curve, double t) {
  const int d = curve.dim();
  Eigen::VectorXd r(d);
  for (int i = 1; i < d; ++i) r[i - 1] = mono_deriv(i, 2, t);
  r[d - 1] = curve.phi_deriv(2, t);
  return r;
}

struct CoordGroup {
  double value = 0.0;
  int size = 0;
};

std::vector<CoordGroup> group_coords(const Eigen::VectorXd& sorted, double conf_tol) {
  std::vector<CoordGroup> groups;
  double last = 0.0;
  for (int i = 0; i < sorted.size(); ++i) {
    if (!groups.empty() && sorted[i] - last <= conf_tol) {
      auto& g = groups.back();
      g.value = (g.value * g.size + sorted[i]) / (g.size + 1);
      g.size += 1;
    } else {
      groups.push_back({sorted[i], 1});
    }
    last = sorted[i];
  }
  return groups;
}

}  // namespace

double geometric_ratio(const Curve& curve, Eigen::VectorXd t, double conf_tol) {
  const int d = curve.dim();
  if (t.size() != d) fail(ErrorCode::OutOfRange, "tuple size must equal the dimension");
  std::sort(t.data(), t.data() + d);
  const std::vector<CoordGroup> groups = group_coords(t, conf_tol);
  for (const auto& g : groups)
    if (g.size > 2)
      fail(ErrorCode::OutOfRange, "higher-order coordinate confluence is outside the domain");

  Eigen::MatrixXd M(d, d);
  int row = 0;
  for (const auto& g : groups) {
    M.row(row++) = curve.velocity(g.value).transpose();
    if (g.size == 2) M.row(row++) = derivative_row(curve, g.value).transpose();
  }
  const double num = std::abs(det_small(M));

  double den = 1.0;
  for (const auto& g : groups) {
    const double phid = std::abs(curve.phi_deriv(d, g.value));
    if (phid == 0.0) fail(ErrorCode::DegeneratePiece, "phi^(d) vanishes at a sample coordinate");
    den *= std::pow(phid, static_cast<double>(g.size) / d);
  }
  for (size_t gi = 0; gi < groups.size(); ++gi)
    for (size_t gj = gi + 1; gj < groups.size(); ++gj)
      den *= std::pow(std::abs(groups[gj].value - groups[gi].value),
                      static_cast<double>(groups[gi].size * groups[gj].size));
  if (den == 0.0) fail(ErrorCode::DegeneratePiece, "degenerate denominator");
  return num / den;
}

GeometricCertificate certify_piece(const Curve& curve, const DecompositionPiece& piece,
                                   long budget, std::uint64_t seed) {
  const int d = curve.dim();
  if (d > 4) fail(ErrorCode::OutOfRange, "certification limited to d <= 4");
  const double width = piece.hi - piece.lo;
  if (!(width > 0.0)) fail(ErrorCode::OutOfRange, "empty piece");
  double lo = piece.lo, hi = piece.hi;
  // a centre sitting exactly on an endpoint may carry a zero of phi^(d)
  if (std::abs(piece.center - lo) <= 1e-12 * width) lo += 1e-9 * width;
  if (std::abs(piece.center - hi) <= 1e-12 * width) hi -= 1e-9 * width;
  for (int i = 0; i < 64; ++i) {
    const double t = lo + (i + 0.5) * (hi - lo) / 64.0;
    if (curve.phi_deriv(d, t) == 0.0)
      fail(ErrorCode::DegeneratePiece, "phi^(d) vanishes on the piece");
  }
  const double conf_tol = 1e-6 * width;
  // Below this gap the plain determinant loses too many digits to cancellation;
  // such pairs are snapped onto the confluent boundary, which is evaluated
  // exactly via the derivative-row extension.
  const double snap_tol = 2e-3 * width;

  // Snaps near-coincident pairs to exact equality; returns false for clusters
  // of three or more, which lie outside the certified domain.
  auto regularize = [&](Eigen::VectorXd& t) {
    std::sort(t.data(), t.data() + t.size());
    for (int i = 0; i + 1 < t.size(); ++i) {
      if (t[i + 1] - t[i] >= snap_tol) continue;
      if (i + 2 < t.size() && t[i + 2] - t[i + 1] < snap_tol) return false;
      if (i > 0 && t[i] - t[i - 1] < snap_tol) return false;
      const double m = 0.5 * (t[i] + t[i + 1]);
      t[i] = m;
      t[i + 1] = m;
      ++i;
    }
    return true;
  };

  const int strata = 32;
  const long per_stratum = std::max<long>(1, budget / strata);
  double best = std::numeric_limits<double>::infinity();
  Eigen::VectorXd best_t;
  long samples = 0;
  for (int s = 0; s < strata; ++s) {
    std::mt19937_64 gen(seed + static_cast<std::uint64_t>(s));
    std::uniform_real_distribution<double> uni(lo, hi);
    for (long i = 0; i < per_stratum; ++i) {
      Eigen::VectorXd t(d);
      for (int j = 0; j < d; ++j) t[j] = uni(gen);
      if (!regularize(t)) continue;
      ++samples;
      const double v = geometric_ratio(curve, t, conf_tol);
      if (v < best) {
        best = v;
        best_t = t;
      }
    }
  }
  if (!std::isfinite(best)) fail(ErrorCode::DegeneratePiece, "no admissible sample found");

  int rounds = 0;
  for (; rounds < 40; ++rounds) {
    bool improved = false;
    for (int j = 0; j < d; ++j) {
      const double lb = (j == 0) ? lo : best_t[j - 1];
      const double ub = (j == d - 1) ? hi : best_t[j + 1];
      for (int g = 0; g <= 32; ++g) {
        Eigen::VectorXd cand = best_t;
        cand[j] = lb + g * (ub - lb) / 32.0;
        if (!regularize(cand)) continue;
        const double v = geometric_ratio(curve, cand, conf_tol);
        if (v < best * (1.0 - 1e-12)) {
          best = v;
          best_t = cand;
          improved = true;
        }
      }
    }
    if (!improved) break;
  }

  GeometricCertificate cert;
  cert.piece = piece;
  cert.k_est = 0.9 * best;
  cert.argmin = best_t;
  cert.samples = samples;
  cert.refinement_rounds = rounds;
  return cert;
}

}  // namespace freqcurve
