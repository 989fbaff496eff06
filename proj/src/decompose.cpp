#include "freqcurve/decompose.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

#include "freqcurve/errors.hpp"

namespace freqcurve {

namespace {

double poly_eval_abs(const Eigen::VectorXd& c, double w) {
  double acc = 0.0;
  for (int n = static_cast<int>(c.size()) - 1; n >= 0; --n) acc = acc * w + c[n];
  return std::abs(acc);
}

std::vector<std::complex<double>> poly_roots(const Eigen::VectorXd& coeffs) {
  int deg = static_cast<int>(coeffs.size()) - 1;
  while (deg > 0 && coeffs[deg] == 0.0) --deg;
  if (deg == 0) return {};
  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(deg, deg);
  for (int i = 1; i < deg; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < deg; ++i) comp(i, deg - 1) = -coeffs[i] / coeffs[deg];
  Eigen::EigenSolver<Eigen::MatrixXd> es(comp, /*computeEigenvectors=*/false);
  std::vector<std::complex<double>> roots;
  roots.reserve(deg);
  for (int i = 0; i < deg; ++i) {
    std::complex<double> z = es.eigenvalues()[i];
    for (int it = 0; it < 8; ++it) {  // light Newton polish
      std::complex<double> f(0.0, 0.0), df(0.0, 0.0);
      for (int n = deg; n >= 0; --n) {
        df = df * z + f;
        f = f * z + coeffs[n];
      }
      if (std::abs(df) == 0.0) break;
      z -= f / df;
    }
    roots.push_back(z);
  }
  return roots;
}

struct CenterCandidate {
  double a = 0.0;
  int mult = 0;
};

std::vector<CenterCandidate> cluster_real_parts(const std::vector<std::complex<double>>& roots) {
  std::vector<double> res;
  res.reserve(roots.size());
  for (const auto& z : roots) res.push_back(z.real());
  std::sort(res.begin(), res.end());
  std::vector<CenterCandidate> out;
  for (double re : res) {
    if (!out.empty() && std::abs(re - out.back().a) <= 1e-9 * (1.0 + std::abs(re))) {
      out.back().a = (out.back().a * out.back().mult + re) / (out.back().mult + 1);
      out.back().mult += 1;
    } else {
      out.push_back({re, 1});
    }
  }
  return out;
}

struct PairFit {
  bool found = false;
  double a = 0.0;
  int k = 0;
  double m = 0.0;
  double M = 0.0;
};

// Sampled two-sided fit of |p| against |t - a|^k on a midpoint-offset grid.
bool fit_ratio(const Eigen::VectorXd& coeffs, double poly_center, double a, int k, double lo,
               double hi, int grid_n, double theta_eff, double& m_out, double& M_out) {
  double m = std::numeric_limits<double>::infinity(), M = 0.0;
  for (int i = 0; i < grid_n; ++i) {
    const double t = lo + (i + 0.5) * (hi - lo) / grid_n;
    const double w = std::abs(t - a);
    const double denom = std::pow(w, static_cast<double>(k));
    if (denom == 0.0) return false;
    const double v = poly_eval_abs(coeffs, t - poly_center) / denom;
    m = std::min(m, v);
    M = std::max(M, v);
  }
  if (!(m > 0.0) || !std::isfinite(M)) return false;
  if (M / m > theta_eff) return false;
  m_out = m;
  M_out = M;
  return true;
}

struct PolySplitContext {
  const Eigen::VectorXd& coeffs;
  double poly_center;
  const std::vector<CenterCandidate>& candidates;
  int degree;
  double full_lo, full_hi;
  const DecomposeConfig& cfg;
  double theta_eff;
  std::vector<DecompositionPiece>* out;
  int max_depth = 0;
};

double segment_distance(double a, double lo, double hi) {
  if (a <= lo) return lo - a;
  if (a >= hi) return a - hi;
  return 0.0;
}

void decompose_segment(PolySplitContext& ctx, double lo, double hi, int depth) {
  ctx.max_depth = std::max(ctx.max_depth, depth);
  if (hi - lo < ctx.cfg.width_min_rel * (ctx.full_hi - ctx.full_lo))
    fail(ErrorCode::DegenerateSegment, "segment collapsed; root on or near the interval boundary");

  PairFit best;
  // first preference: a root centre with its own multiplicity as exponent
  for (const auto& cand : ctx.candidates) {
    if (cand.a > lo && cand.a < hi) continue;
    double m, M;
    if (!fit_ratio(ctx.coeffs, ctx.poly_center, cand.a, cand.mult, lo, hi, ctx.cfg.search_grid,
                   ctx.theta_eff, m, M))
      continue;
    if (!best.found || segment_distance(cand.a, lo, hi) < segment_distance(best.a, lo, hi))
      best = {true, cand.a, cand.mult, m, M};
  }
  // fallback: smallest exponent over root centres and segment endpoints
  if (!best.found) {
    std::vector<double> fallback;
    for (const auto& cand : ctx.candidates) fallback.push_back(cand.a);
    fallback.push_back(lo);
    fallback.push_back(hi);
    for (int k = 0; k <= ctx.degree && !best.found; ++k) {
      for (double a : fallback) {
        if (a > lo && a < hi) continue;
        double m, M;
        if (!fit_ratio(ctx.coeffs, ctx.poly_center, a, k, lo, hi, ctx.cfg.search_grid,
                       ctx.theta_eff, m, M))
          continue;
        if (!best.found || segment_distance(a, lo, hi) < segment_distance(best.a, lo, hi))
          best = {true, a, k, m, M};
      }
    }
  }
  if (best.found) {
    DecompositionPiece piece;
    piece.lo = lo;
    piece.hi = hi;
    piece.center = best.a;
    piece.exponent = best.k;
    piece.lower_const = best.m * (1.0 - ctx.cfg.margin);
    piece.upper_const = best.M * (1.0 + ctx.cfg.margin);
    ctx.out->push_back(piece);
    return;
  }
  if (depth >= ctx.cfg.depth_max)
    fail(ErrorCode::DepthExceeded, "comparability bisection hit the depth cap");
  const double mid = 0.5 * (lo + hi);
  decompose_segment(ctx, lo, mid, depth + 1);
  decompose_segment(ctx, mid, hi, depth + 1);
}

}  // namespace

OscillationResult oscillation_decompose(const AnalyticFunction& psi, double lo, double hi,
                                        double eps, const DecomposeConfig& cfg) {
  if (!(lo < hi)) fail(ErrorCode::OutOfRange, "empty interval");
  if (!(eps > 0.0 && eps < 1.0)) fail(ErrorCode::OutOfRange, "eps must lie in (0, 1)");
  const double mid = 0.5 * (lo + hi);
  const double hl = 0.5 * (hi - lo);
  try {
    if (zero_count(psi, Disc({mid, 0.0}, 4.0 * hl)) != 0)
      fail(ErrorCode::VanishingFactor, "factor vanishes on the working disc");
  } catch (const Error& e) {
    if (e.code() == ErrorCode::BoundaryZero)
      fail(ErrorCode::VanishingFactor, "factor vanishes on the working contour");
    throw;
  }

  OscillationResult res;
  struct Seg {
    double lo, hi;
    int depth;
  };
  std::vector<Seg> stack{{lo, hi, 0}};
  while (!stack.empty()) {
    const Seg s = stack.back();
    stack.pop_back();
    res.max_depth = std::max(res.max_depth, s.depth);
    double vmin = std::numeric_limits<double>::infinity(), vmax = 0.0;
    for (int i = 0; i < 64; ++i) {
      const double t = s.lo + (i + 0.5) * (s.hi - s.lo) / 64.0;
      const double v = std::abs(evaluate_real(psi, t));
      vmin = std::min(vmin, v);
      vmax = std::max(vmax, v);
    }
    if (!(vmin > 0.0)) fail(ErrorCode::VanishingFactor, "factor vanishes on a sample grid");
    if (vmax / vmin - 1.0 < 0.5 * eps) {
      res.intervals.push_back({s.lo, s.hi});
      continue;
    }
    if (s.depth >= cfg.depth_max)
      fail(ErrorCode::DepthExceeded, "oscillation subdivision hit the depth cap");
    const double m = 0.5 * (s.lo + s.hi);
    stack.push_back({m, s.hi, s.depth + 1});
    stack.push_back({s.lo, m, s.depth + 1});
  }
  std::sort(res.intervals.begin(), res.intervals.end());
  return res;
}

std::vector<DecompositionPiece> polynomial_decompose(const Eigen::VectorXd& coeffs, double center,
                                                     double lo, double hi,
                                                     const DecomposeConfig& cfg, int* max_depth) {
  if (!(lo < hi)) fail(ErrorCode::OutOfRange, "empty interval");
  int deg = static_cast<int>(coeffs.size()) - 1;
  while (deg > 0 && coeffs[deg] == 0.0) --deg;
  bool all_zero = true;
  for (int n = 0; n <= deg; ++n) all_zero = all_zero && coeffs[n] == 0.0;
  if (all_zero) fail(ErrorCode::ZeroInput, "polynomial is identically zero");
  if (deg > cfg.degree_cap) fail(ErrorCode::OutOfRange, "polynomial degree exceeds the cap");

  std::vector<std::complex<double>> local_roots = poly_roots(coeffs.head(deg + 1));
  for (auto& z : local_roots) z += center;
  const std::vector<CenterCandidate> candidates = cluster_real_parts(local_roots);

  const double theta_eff = cfg.theta * (1.0 - cfg.margin) / (1.0 + cfg.margin);
  std::vector<DecompositionPiece> pieces;
  PolySplitContext ctx{coeffs, center, candidates, deg, lo, hi, cfg, theta_eff, &pieces};

  std::vector<double> cuts{lo, hi};
  for (const auto& cand : candidates)
    if (cand.a > lo && cand.a < hi) cuts.push_back(cand.a);
  std::sort(cuts.begin(), cuts.end());
  for (size_t i = 0; i + 1 < cuts.size(); ++i)
    if (cuts[i + 1] - cuts[i] > 1e-15 * (hi - lo)) decompose_segment(ctx, cuts[i], cuts[i + 1], 0);

  std::sort(pieces.begin(), pieces.end(),
            [](const DecompositionPiece& a, const DecompositionPiece& b) { return a.lo < b.lo; });
  if (max_depth) *max_depth = std::max(*max_depth, ctx.max_depth);
  return pieces;
}

namespace {

// Sampled extremes of |phi(t)| / |t - center|^exponent on the piece.
void sample_bounds(const AnalyticFunction& phi, const DecompositionPiece& piece, int grid_n,
                   double& m, double& M) {
  m = std::numeric_limits<double>::infinity();
  M = 0.0;
  for (int i = 0; i < grid_n; ++i) {
    const double t = piece.lo + (i + 0.5) * (piece.hi - piece.lo) / grid_n;
    const double denom = std::pow(std::abs(t - piece.center), static_cast<double>(piece.exponent));
    const double v = std::abs(evaluate_real(phi, t)) / denom;
    m = std::min(m, v);
    M = std::max(M, v);
  }
}

// Recomputes the constants of a piece directly against phi, splitting the
// piece when the sampled ratio exceeds the cap.
void tighten_against(const AnalyticFunction& phi, DecompositionPiece piece,
                     const DecomposeConfig& cfg, int depth, int* max_depth,
                     std::vector<DecompositionPiece>* out) {
  if (max_depth) *max_depth = std::max(*max_depth, depth);
  const double theta_eff = cfg.theta * (1.0 - cfg.margin) / (1.0 + cfg.margin);
  double m, M;
  sample_bounds(phi, piece, cfg.search_grid, m, M);
  if (m > 0.0 && std::isfinite(M) && M / m <= theta_eff) {
    piece.lower_const = m * (1.0 - cfg.margin);
    piece.upper_const = M * (1.0 + cfg.margin);
    out->push_back(piece);
    return;
  }
  if (depth >= cfg.depth_max)
    fail(ErrorCode::DepthExceeded, "constant tightening hit the depth cap");
  DecompositionPiece left = piece, right = piece;
  left.hi = right.lo = 0.5 * (piece.lo + piece.hi);
  tighten_against(phi, left, cfg, depth + 1, max_depth, out);
  tighten_against(phi, right, cfg, depth + 1, max_depth, out);
}

}  // namespace

std::vector<DecompositionPiece> monomial_decompose(const AnalyticFunction& phi, double lo,
                                                   double hi, const DecomposeConfig& cfg,
                                                   int* max_depth) {
  if (!(lo < hi)) fail(ErrorCode::OutOfRange, "empty interval");
  const double a = 0.5 * (lo + hi);
  const double r = 0.5 * (hi - lo);
  const AnalyticFunction phi_c =
      std::abs(phi.center() - a) > 1e-12 * std::max(1.0, r) ? recenter(phi, a) : phi;
  if (phi_c.radius() < 8.0 * r * (1.0 - 1e-12))
    fail(ErrorCode::RadiusTooSmall,
         "decomposition requires validity radius >= " + std::to_string(8.0 * r) +
             " about the interval midpoint");

  const Factorization fac = factor_out_zeros(phi_c, Disc({a, 0.0}, 4.0 * r));
  const OscillationResult osc = oscillation_decompose(fac.residual, lo, hi, 0.5, cfg);
  if (max_depth) *max_depth = std::max(*max_depth, osc.max_depth);

  DecomposeConfig tight = cfg;
  tight.theta = cfg.theta / 3.5;  // headroom for the residual envelope and margins

  std::vector<DecompositionPiece> pieces;
  for (const auto& [u, v] : osc.intervals) {
    const std::vector<DecompositionPiece> raw =
        polynomial_decompose(fac.poly.coeffs(), a, u, v, tight, max_depth);
    for (const auto& piece : raw) tighten_against(phi_c, piece, cfg, 0, max_depth, &pieces);
  }
  std::sort(pieces.begin(), pieces.end(),
            [](const DecompositionPiece& x, const DecompositionPiece& y) { return x.lo < y.lo; });

  // re-merge adjacent pieces that one comparability bound covers
  const double theta_eff = cfg.theta * (1.0 - cfg.margin) / (1.0 + cfg.margin);
  std::vector<DecompositionPiece> merged;
  for (const auto& piece : pieces) {
    // exponent-0 pieces compare against a constant, so their centres need not agree
    const bool centers_ok =
        !merged.empty() && (merged.back().center == piece.center ||
                            (merged.back().exponent == 0 && piece.exponent == 0));
    if (centers_ok && merged.back().exponent == piece.exponent &&
        std::abs(merged.back().hi - piece.lo) <= 1e-12 * (hi - lo)) {
      DecompositionPiece joined = merged.back();
      joined.hi = piece.hi;
      if (joined.exponent == 0) joined.center = joined.lo;
      double m, M;
      sample_bounds(phi_c, joined, cfg.search_grid, m, M);
      if (m > 0.0 && std::isfinite(M) && M / m <= theta_eff) {
        joined.lower_const = m * (1.0 - cfg.margin);
        joined.upper_const = M * (1.0 + cfg.margin);
        merged.back() = joined;
        continue;
      }
    }
    merged.push_back(piece);
  }
  return merged;
}

std::vector<SignComponent> sign_components(const AnalyticFunction& f, double lo, double hi) {
  if (!(lo < hi)) fail(ErrorCode::OutOfRange, "empty interval");
  const double mid = 0.5 * (lo + hi);
  const double hl = 0.5 * (hi - lo);
  std::vector<std::pair<std::complex<double>, int>> roots;
  const double factors[] = {1.25, 1.31, 1.37};
  for (int i = 0; i < 3; ++i) {
    try {
      roots = roots_in_disc(f, Disc({mid, 0.0}, factors[i] * hl));
      break;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::BoundaryZero || i == 2) throw;
    }
  }
  std::vector<double> cuts{lo, hi};
  for (const auto& [z, mult] : roots)
    if (z.imag() == 0.0 && z.real() > lo && z.real() < hi) cuts.push_back(z.real());
  std::sort(cuts.begin(), cuts.end());

  std::vector<SignComponent> out;
  for (size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (cuts[i + 1] - cuts[i] <= 1e-15 * (hi - lo)) continue;
    const double v = evaluate_real(f, 0.5 * (cuts[i] + cuts[i + 1]));
    out.push_back({cuts[i], cuts[i + 1], v >= 0.0 ? 1 : -1});
  }
  return out;
}

Decomposition full_decompose(const AnalyticFunction& phi, int d, double lo, double hi,
                             const DecomposeConfig& cfg, const std::string& source) {
  if (d < 2 || d > 8) fail(ErrorCode::OutOfRange, "dimension must lie in [2, 8]");
  if (!(lo < hi)) fail(ErrorCode::OutOfRange, "empty interval");
  const double a = 0.5 * (lo + hi);
  const double r = 0.5 * (hi - lo);
  const double required = std::ldexp(r, d + 3);

  AnalyticFunction phi_c =
      std::abs(phi.center() - a) > 1e-12 * std::max(1.0, r) ? recenter(phi, a) : phi;
  if (phi_c.radius() < required * (1.0 - 1e-12))
    fail(ErrorCode::RadiusTooSmall, "decomposition requires validity radius >= " +
                                        std::to_string(required) +
                                        " about the interval midpoint");

  double sup_phi = 0.0;
  for (int i = 0; i < 256; ++i)
    sup_phi = std::max(sup_phi, std::abs(evaluate_real(phi_c, lo + (i + 0.5) * (hi - lo) / 256)));

  AnalyticFunction djf = phi_c;
  for (int j = 0; j < d; ++j) {
    if (std::abs(evaluate_real(djf, a)) > 1e-9 * (1.0 + sup_phi))
      fail(ErrorCode::NotInClass,
           "derivative of order " + std::to_string(j) + " does not vanish at the centre");
    djf = derivative(djf);
  }
  const AnalyticFunction phid = djf;  // radius phi_c.radius / 2^d >= 8r

  const std::vector<SignComponent> signs = sign_components(phid, lo, hi);
  int depth = 0;
  const std::vector<DecompositionPiece> mono = monomial_decompose(phid, lo, hi, cfg, &depth);
  const double n_eff = frequency(phid, std::min(8.0 * r, phid.radius()));

  std::vector<double> cuts{lo, hi};
  for (const auto& s : signs) {
    cuts.push_back(s.lo);
    cuts.push_back(s.hi);
  }
  for (const auto& p : mono) {
    cuts.push_back(p.lo);
    cuts.push_back(p.hi);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end(),
                         [&](double x, double y) { return std::abs(x - y) <= 1e-12 * (hi - lo); }),
             cuts.end());

  Decomposition dec;
  dec.source = source;
  for (size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double u = std::max(cuts[i], lo), v = std::min(cuts[i + 1], hi);
    if (v - u <= 1e-15 * (hi - lo)) continue;
    const double m = 0.5 * (u + v);
    const DecompositionPiece* host = nullptr;
    for (const auto& p : mono)
      if (m >= p.lo && m <= p.hi) {
        host = &p;
        break;
      }
    const SignComponent* sc = nullptr;
    for (const auto& s : signs)
      if (m >= s.lo && m <= s.hi) {
        sc = &s;
        break;
      }
    if (!host || !sc) fail(ErrorCode::FactorMismatch, "partition intersection left a gap");
    DecompositionPiece piece = *host;
    piece.lo = u;
    piece.hi = v;
    piece.sign = sc->sign;
    dec.pieces.push_back(piece);
  }
  dec.stats.piece_count = static_cast<int>(dec.pieces.size());
  dec.stats.max_depth = depth;
  dec.stats.n_effective = n_eff;
  return dec;
}

PieceCheck verify_piece(const AnalyticFunction& f, const DecompositionPiece& piece, int grid_n) {
  PieceCheck chk;
  chk.grid_n = grid_n;
  double lower_slack = std::numeric_limits<double>::infinity();
  double upper_slack = std::numeric_limits<double>::infinity();
  for (int i = 0; i < grid_n; ++i) {
    const double t = piece.lo + (i + 0.5) * (piece.hi - piece.lo) / grid_n;
    const double w = std::pow(std::abs(t - piece.center), static_cast<double>(piece.exponent));
    const double v = std::abs(evaluate_real(f, t));
    if (v > 0.0) upper_slack = std::min(upper_slack, piece.upper_const * w / v);
    lower_slack = std::min(lower_slack, v / (piece.lower_const * w));
  }
  chk.lower_slack = lower_slack;
  chk.upper_slack = upper_slack;
  chk.pass = lower_slack >= 1.0 && upper_slack >= 1.0;
  return chk;
}

}  // namespace freqcurve
