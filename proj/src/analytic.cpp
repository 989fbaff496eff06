#include "freqcurve/analytic.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>

#include "freqcurve/errors.hpp"

namespace freqcurve {

namespace {

// Certified decay requires a geometric rate strictly below 1, with a small
// margin so the extrapolated tail model is meaningful.
constexpr double kDecayRhoCap = 1.0 - 1e-6;

std::complex<double> horner(const Eigen::VectorXd& c, std::complex<double> w) {
  std::complex<double> acc(0.0, 0.0);
  for (int n = static_cast<int>(c.size()) - 1; n >= 0; --n) acc = acc * w + c[n];
  return acc;
}

double horner_real(const Eigen::VectorXd& c, double w) {
  double acc = 0.0;
  for (int n = static_cast<int>(c.size()) - 1; n >= 0; --n) acc = acc * w + c[n];
  return acc;
}

Eigen::VectorXd shifted_derivative_coeffs(const Eigen::VectorXd& c) {
  const int n = static_cast<int>(c.size());
  if (n <= 1) return Eigen::VectorXd::Zero(1);
  Eigen::VectorXd d(n - 1);
  for (int k = 0; k + 1 < n; ++k) d[k] = (k + 1) * c[k + 1];
  return d;
}

// Fits the geometric decay model for |c_n| radius^n past its peak index and
// returns the extrapolated truncation bound on the half-radius disc.
double fit_tail_bound(double radius, const Eigen::VectorXd& coeffs) {
  const int T = static_cast<int>(coeffs.size()) - 1;
  std::vector<double> logu(T + 1, -std::numeric_limits<double>::infinity());
  const double logr = std::log(radius);
  int peak = -1;
  for (int n = 0; n <= T; ++n) {
    if (coeffs[n] == 0.0) continue;
    logu[n] = std::log(std::abs(coeffs[n])) + n * logr;
    if (peak < 0 || logu[n] >= logu[peak]) peak = n;
  }
  if (peak < 0) return 0.0;  // identically zero

  double log_rho = -std::numeric_limits<double>::infinity();
  for (int n = peak + 1; n <= T; ++n) {
    if (!std::isfinite(logu[n])) continue;
    log_rho = std::max(log_rho, (logu[n] - logu[peak]) / (n - peak));
  }
  if (!std::isfinite(log_rho)) return 0.0;  // nothing past the peak: exact polynomial
  const double rho = std::exp(log_rho);
  if (!(rho <= kDecayRhoCap))
    fail(ErrorCode::TailTooLarge, "coefficients do not decay geometrically at the stated radius");
  // sum_{n>T} u_peak rho^{n-peak} 2^{-n}
  const double log_tail = logu[peak] + (T + 1 - peak) * log_rho - (T + 1) * std::log(2.0) -
                          std::log1p(-0.5 * rho);
  return std::exp(log_tail);
}

void check_in_half_disc(const AnalyticFunction& f, std::complex<double> z) {
  const double dist = std::abs(z - std::complex<double>(f.center(), 0.0));
  if (dist > 0.5 * f.radius() * (1.0 + 1e-12))
    fail(ErrorCode::OutOfDisc, "evaluation point outside the certified half-radius disc");
}

}  // namespace

Disc::Disc(std::complex<double> c, double r) : center(c), radius(r) {
  if (!(r > 0.0)) fail(ErrorCode::OutOfRange, "disc radius must be positive");
}

AnalyticFunction::AnalyticFunction(double center, double radius, Eigen::VectorXd coeffs)
    : center_(center), radius_(radius), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() == 0) fail(ErrorCode::OutOfRange, "coefficient vector must be nonempty");
  if (!(radius_ > 0.0)) fail(ErrorCode::OutOfRange, "radius must be positive");
  tail_bound_ = fit_tail_bound(radius_, coeffs_);
}

AnalyticFunction::AnalyticFunction(double center, double radius, Eigen::VectorXd coeffs,
                                   double tail_bound)
    : AnalyticFunction(center, radius, std::move(coeffs)) {
  if (!(tail_bound >= 0.0)) fail(ErrorCode::OutOfRange, "tail bound must be nonnegative");
  if (tail_bound < tail_bound_ * (1.0 - 1e-12))
    fail(ErrorCode::TailTooLarge, "stated tail bound is tighter than the certified decay allows");
  tail_bound_ = tail_bound;
}

bool AnalyticFunction::is_zero() const {
  for (int n = 0; n < coeffs_.size(); ++n)
    if (coeffs_[n] != 0.0) return false;
  return true;
}

AnalyticFunction AnalyticFunction::with_radius(double radius) const {
  if (!(radius > 0.0 && radius <= radius_))
    fail(ErrorCode::RadiusExceeded, "restricted radius must lie in (0, radius]");
  return AnalyticFunction(center_, radius, coeffs_);
}

std::complex<double> evaluate(const AnalyticFunction& f, std::complex<double> z) {
  check_in_half_disc(f, z);
  return horner(f.coeffs(), z - f.center());
}

double evaluate_real(const AnalyticFunction& f, double t) {
  check_in_half_disc(f, std::complex<double>(t, 0.0));
  return horner_real(f.coeffs(), t - f.center());
}

AnalyticFunction derivative(const AnalyticFunction& f) {
  return AnalyticFunction(f.center(), 0.5 * f.radius(), shifted_derivative_coeffs(f.coeffs()));
}

AnalyticFunction antiderivative(const AnalyticFunction& f) {
  const int n = static_cast<int>(f.coeffs().size());
  Eigen::VectorXd c(n + 1);
  c[0] = 0.0;
  for (int k = 0; k < n; ++k) c[k + 1] = f.coeffs()[k] / (k + 1);
  return AnalyticFunction(f.center(), f.radius(), c);
}

AnalyticFunction recenter(const AnalyticFunction& f, double new_center) {
  const double delta = new_center - f.center();
  if (std::abs(delta) >= f.radius())
    fail(ErrorCode::OutOfDisc, "new centre outside the validity disc");
  Eigen::VectorXd c = f.coeffs();
  const int T = static_cast<int>(c.size()) - 1;
  // Ruffini-Horner Taylor shift
  for (int k = 0; k < T; ++k)
    for (int j = T - 1; j >= k; --j) c[j] += delta * c[j + 1];
  return AnalyticFunction(new_center, f.radius() - std::abs(delta), c);
}

double frequency(const AnalyticFunction& f, double R) {
  if (!(R > 0.0)) fail(ErrorCode::OutOfRange, "frequency radius must be positive");
  if (R > f.radius() * (1.0 + 1e-12)) fail(ErrorCode::RadiusExceeded, "R exceeds validity radius");
  if (f.is_zero()) fail(ErrorCode::ZeroFunction, "frequency undefined for the zero function");
  const Eigen::VectorXd& c = f.coeffs();
  // work in the log domain: R^{2n} overflows double for long series
  const double logR = std::log(R);
  double log_max = -std::numeric_limits<double>::infinity();
  for (int n = 0; n < c.size(); ++n)
    if (c[n] != 0.0) log_max = std::max(log_max, std::log(std::abs(c[n])) + n * logR);
  // accumulate from the largest index downward
  double num = 0.0, den = 0.0;
  for (int n = static_cast<int>(c.size()) - 1; n >= 0; --n) {
    if (c[n] == 0.0) continue;
    const double v = std::exp(std::log(std::abs(c[n])) + n * logR - log_max);
    const double term = v * v;
    num += n * term;
    den += term;
  }
  return 2.0 * num / den;
}

std::vector<std::pair<double, double>> frequency_monotone_scan(const AnalyticFunction& f,
                                                               const std::vector<double>& r_grid) {
  std::vector<std::pair<double, double>> out;
  out.reserve(r_grid.size());
  double prev = -std::numeric_limits<double>::infinity();
  for (double r : r_grid) {
    if (r < prev) fail(ErrorCode::OutOfRange, "radius grid must be increasing");
    prev = r;
    out.emplace_back(r, frequency(f, r));
  }
  return out;
}

namespace {

struct ContourEval {
  double winding = 0.0;
  double min_abs = 0.0;
  double max_abs = 0.0;
};

ContourEval contour_winding(const Eigen::VectorXd& c, const Eigen::VectorXd& dc,
                            std::complex<double> center_local, double radius, int nodes) {
  ContourEval ev;
  ev.min_abs = std::numeric_limits<double>::infinity();
  std::complex<double> sum(0.0, 0.0);
  for (int k = 0; k < nodes; ++k) {
    const double theta = 2.0 * M_PI * k / nodes;
    const std::complex<double> dir(std::cos(theta), std::sin(theta));
    const std::complex<double> w = center_local + radius * dir;
    const std::complex<double> fv = horner(c, w);
    const double a = std::abs(fv);
    ev.min_abs = std::min(ev.min_abs, a);
    ev.max_abs = std::max(ev.max_abs, a);
    if (a > 0.0) sum += horner(dc, w) / fv * (radius * dir);
  }
  ev.winding = (sum / static_cast<double>(nodes)).real();
  return ev;
}

void check_disc_in_scope(const AnalyticFunction& f, const Disc& d) {
  const double off = std::abs(d.center - std::complex<double>(f.center(), 0.0));
  if (off + d.radius > 0.5 * f.radius() * (1.0 + 1e-9))
    fail(ErrorCode::OutOfDisc, "disc not contained in the certified half-radius disc");
}

}  // namespace

int zero_count(const AnalyticFunction& f, const Disc& d, const ContourConfig& cfg) {
  check_disc_in_scope(f, d);
  if (f.is_zero()) fail(ErrorCode::ZeroFunction, "zero count undefined for the zero function");
  const Eigen::VectorXd dc = shifted_derivative_coeffs(f.coeffs());
  const std::complex<double> center_local = d.center - std::complex<double>(f.center(), 0.0);

  int nodes = cfg.start_nodes;
  bool have_prev = false;
  long prev_round = 0;
  double prev_err = 0.0;
  while (nodes <= cfg.max_nodes) {
    const ContourEval ev = contour_winding(f.coeffs(), dc, center_local, d.radius, nodes);
    if (ev.max_abs == 0.0 || ev.min_abs < cfg.boundary_rel_tol * ev.max_abs)
      fail(ErrorCode::BoundaryZero, "function nearly vanishes on the contour");
    const long rounded = std::lround(ev.winding);
    const double err = std::abs(ev.winding - rounded);
    if (have_prev && prev_round == rounded && err < cfg.integer_tol && prev_err < cfg.integer_tol) {
      if (rounded < 0) fail(ErrorCode::NoConvergence, "negative winding number");
      return static_cast<int>(rounded);
    }
    have_prev = true;
    prev_round = rounded;
    prev_err = err;
    nodes *= 2;
  }
  fail(ErrorCode::NoConvergence, "contour quadrature did not stabilize within the node cap");
}

namespace {

// Companion-matrix eigenvalues of the series truncated to the degree that
// matters inside |w| <= bound, in the scaled variable w / bound.
std::vector<std::complex<double>> companion_candidates(const Eigen::VectorXd& coeffs,
                                                       double bound) {
  const int T = static_cast<int>(coeffs.size()) - 1;
  // effective degree: drop top terms that are negligible at 1.5 * bound
  std::vector<double> u(T + 1);
  double umax = 0.0;
  for (int n = 0; n <= T; ++n) {
    u[n] = std::abs(coeffs[n]) * std::pow(1.5 * bound, n);
    umax = std::max(umax, u[n]);
  }
  if (umax == 0.0) return {};
  int deg = T;
  double tail = 0.0;
  while (deg > 0 && tail + u[deg] <= 1e-14 * umax) {
    tail += u[deg];
    --deg;
  }
  if (deg == 0) return {};
  Eigen::VectorXd a(deg + 1);
  for (int n = 0; n <= deg; ++n) a[n] = coeffs[n] * std::pow(bound, n);
  while (deg > 0 && a[deg] == 0.0) --deg;
  if (deg == 0) return {};

  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(deg, deg);
  for (int i = 1; i < deg; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < deg; ++i) comp(i, deg - 1) = -a[i] / a[deg];
  Eigen::EigenSolver<Eigen::MatrixXd> es(comp, /*computeEigenvectors=*/false);
  std::vector<std::complex<double>> out;
  out.reserve(deg);
  for (int i = 0; i < deg; ++i) out.push_back(es.eigenvalues()[i] * bound);
  return out;
}

std::complex<double> newton_polish(const Eigen::VectorXd& c, const Eigen::VectorXd& dc,
                                   std::complex<double> w, int multiplicity) {
  double fabs_cur = std::abs(horner(c, w));
  for (int it = 0; it < 60; ++it) {
    const std::complex<double> fv = horner(c, w);
    const std::complex<double> dv = horner(dc, w);
    if (std::abs(dv) == 0.0) break;
    std::complex<double> step = static_cast<double>(multiplicity) * fv / dv;
    std::complex<double> next = w - step;
    double fabs_next = std::abs(horner(c, next));
    int halvings = 0;
    while (fabs_next > fabs_cur && halvings < 25) {
      step *= 0.5;
      next = w - step;
      fabs_next = std::abs(horner(c, next));
      ++halvings;
    }
    if (std::abs(step) <= 1e-14 * std::max(1.0, std::abs(w))) {
      w = next;
      break;
    }
    w = next;
    fabs_cur = fabs_next;
  }
  return w;
}

}  // namespace

std::vector<std::pair<std::complex<double>, int>> roots_in_disc(const AnalyticFunction& f,
                                                                const Disc& d,
                                                                const ContourConfig& cfg) {
  const int count = zero_count(f, d, cfg);
  if (count == 0) return {};

  const std::complex<double> center_local = d.center - std::complex<double>(f.center(), 0.0);
  const double bound = std::abs(center_local) + d.radius;
  const Eigen::VectorXd dc = shifted_derivative_coeffs(f.coeffs());

  std::vector<std::complex<double>> polished;
  for (const auto& cand : companion_candidates(f.coeffs(), bound)) {
    if (std::abs(cand - center_local) > 1.1 * d.radius) continue;
    const std::complex<double> w = newton_polish(f.coeffs(), dc, cand, 1);
    if (std::abs(w - center_local) <= d.radius * (1.0 + 1e-9)) polished.push_back(w);
  }

  // cluster into multiplicities
  const double ctol = 1e-6 * d.radius;
  std::sort(polished.begin(), polished.end(), [](const auto& a, const auto& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  std::vector<std::pair<std::complex<double>, int>> clusters;
  for (const auto& w : polished) {
    bool merged = false;
    for (auto& cl : clusters) {
      if (std::abs(w - cl.first) <= ctol * std::max(1, cl.second)) {
        cl.first = (cl.first * static_cast<double>(cl.second) + w) / (cl.second + 1.0);
        cl.second += 1;
        merged = true;
        break;
      }
    }
    if (!merged) clusters.push_back({w, 1});
  }
  for (auto& cl : clusters)
    if (cl.second > 1) cl.first = newton_polish(f.coeffs(), dc, cl.first, cl.second);

  // realify and enforce conjugate symmetry (the source series is real)
  const double axis_tol = 1e-10 * f.radius();
  std::vector<std::pair<std::complex<double>, int>> result;
  std::vector<std::pair<std::complex<double>, int>> upper;
  for (auto& cl : clusters) {
    if (std::abs(cl.first.imag()) <= axis_tol) {
      result.push_back({std::complex<double>(cl.first.real(), 0.0), cl.second});
    } else if (cl.first.imag() > 0.0) {
      upper.push_back(cl);
    }
  }
  for (auto& cl : clusters) {
    if (cl.first.imag() < -axis_tol) {
      // match with the closest upper-half cluster
      int best = -1;
      double best_dist = std::numeric_limits<double>::infinity();
      for (int i = 0; i < static_cast<int>(upper.size()); ++i) {
        const double dist = std::abs(std::conj(cl.first) - upper[i].first);
        if (dist < best_dist) {
          best_dist = dist;
          best = i;
        }
      }
      if (best < 0 || best_dist > 1e-6 * d.radius || upper[best].second != cl.second)
        fail(ErrorCode::RootPolishFailure, "conjugate pairing of complex roots failed");
      const std::complex<double> z = 0.5 * (upper[best].first + std::conj(cl.first));
      result.push_back({z, upper[best].second});
      result.push_back({std::conj(z), cl.second});
      upper.erase(upper.begin() + best);
    }
  }
  if (!upper.empty()) fail(ErrorCode::RootPolishFailure, "unpaired complex root");

  int total = 0;
  for (const auto& r : result) total += r.second;
  if (total != count)
    fail(ErrorCode::RootPolishFailure, "located multiplicities do not add up to the zero count");

  // roots were located in series-local coordinates; report them globally
  for (auto& r : result) r.first += std::complex<double>(f.center(), 0.0);

  // residual tolerance relative to the contour scale
  double scale = 0.0;
  for (int k = 0; k < 128; ++k) {
    const double theta = 2.0 * M_PI * k / 128;
    scale = std::max(scale, std::abs(horner(
                                f.coeffs(),
                                center_local + d.radius * std::complex<double>(std::cos(theta),
                                                                               std::sin(theta)))));
  }
  for (const auto& r : result) {
    const std::complex<double> w = r.first - std::complex<double>(f.center(), 0.0);
    if (std::abs(horner(f.coeffs(), w)) > 1e-6 * scale)
      fail(ErrorCode::RootPolishFailure, "polished root has a large residual");
  }

  std::sort(result.begin(), result.end(), [](const auto& a, const auto& b) {
    if (a.first.real() != b.first.real()) return a.first.real() < b.first.real();
    return a.first.imag() < b.first.imag();
  });
  return result;
}

namespace {

Eigen::VectorXd deflate_linear(const Eigen::VectorXd& c, double r) {
  const int T = static_cast<int>(c.size()) - 1;
  Eigen::VectorXd b = Eigen::VectorXd::Zero(std::max(1, T));
  if (T >= 1) {
    b[T - 1] = c[T];
    for (int k = T - 1; k >= 1; --k) b[k - 1] = c[k] + r * b[k];
  }
  return b;
}

Eigen::VectorXd deflate_quadratic(const Eigen::VectorXd& c, double p, double q) {
  // divide by w^2 + p w + q
  const int T = static_cast<int>(c.size()) - 1;
  Eigen::VectorXd b = Eigen::VectorXd::Zero(std::max(1, T - 1));
  if (T >= 2) {
    b[T - 2] = c[T];
    if (T >= 3) b[T - 3] = c[T - 1] - p * b[T - 2];
    for (int k = T - 2; k >= 2; --k) b[k - 2] = c[k] - p * b[k - 1] - q * b[k];
  }
  return b;
}

Eigen::VectorXd poly_mul(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(a.size() + b.size() - 1);
  for (int i = 0; i < a.size(); ++i)
    for (int j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

}  // namespace

Factorization factor_out_zeros(const AnalyticFunction& f, const Disc& d,
                               const ContourConfig& cfg) {
  auto zeros = roots_in_disc(f, d, cfg);

  Eigen::VectorXd poly_c = Eigen::VectorXd::Ones(1);
  Eigen::VectorXd resid_c = f.coeffs();
  const double fc = f.center();
  for (const auto& [z, mult] : zeros) {
    const std::complex<double> w = z - fc;
    if (w.imag() == 0.0) {
      Eigen::VectorXd lin(2);
      lin << -w.real(), 1.0;
      for (int m = 0; m < mult; ++m) {
        poly_c = poly_mul(poly_c, lin);
        resid_c = deflate_linear(resid_c, w.real());
      }
    } else if (w.imag() > 0.0) {
      Eigen::VectorXd quad(3);
      const double p = -2.0 * w.real();
      const double q = std::norm(w);
      quad << q, p, 1.0;
      for (int m = 0; m < mult; ++m) {
        poly_c = poly_mul(poly_c, quad);
        resid_c = deflate_quadratic(resid_c, p, q);
      }
    }
  }

  Factorization fac{AnalyticFunction(fc, f.radius(), poly_c),
                    [&]() -> AnalyticFunction {
                      try {
                        return AnalyticFunction(fc, f.radius(), resid_c);
                      } catch (const Error&) {
                        fail(ErrorCode::FactorMismatch, "deflated residual fails the decay fit");
                      }
                    }(),
                    zeros};

  if (!zeros.empty() && zero_count(fac.residual, d, cfg) != 0)
    fail(ErrorCode::FactorMismatch, "residual still vanishes inside the disc");

  // reconstruction check on the half-radius contour
  const std::complex<double> center_local = d.center - std::complex<double>(fc, 0.0);
  double max_abs = 0.0, max_err = 0.0;
  for (int k = 0; k < 64; ++k) {
    const double theta = 2.0 * M_PI * k / 64;
    const std::complex<double> w =
        center_local + 0.5 * d.radius * std::complex<double>(std::cos(theta), std::sin(theta));
    const std::complex<double> fv = horner(f.coeffs(), w);
    const std::complex<double> pv = horner(poly_c, w) * horner(resid_c, w);
    max_abs = std::max(max_abs, std::abs(fv));
    max_err = std::max(max_err, std::abs(fv - pv));
  }
  if (max_abs > 0.0 && max_err > 1e-8 * max_abs)
    fail(ErrorCode::FactorMismatch, "poly * residual does not reconstruct the input");
  return fac;
}

double doubling_ratio(const AnalyticFunction& f, std::complex<double> z, double r,
                      int boundary_samples) {
  const double off = std::abs(z - std::complex<double>(f.center(), 0.0));
  if (off + r > 0.5 * f.radius() * (1.0 + 1e-9))
    fail(ErrorCode::OutOfDisc, "doubling disc not contained in the half-radius disc");
  const std::complex<double> center_local = z - std::complex<double>(f.center(), 0.0);
  auto boundary_sup = [&](double rad) {
    double sup = 0.0;
    for (int k = 0; k < boundary_samples; ++k) {
      const double theta = 2.0 * M_PI * k / boundary_samples;
      sup = std::max(sup, std::abs(horner(f.coeffs(),
                                          center_local + rad * std::complex<double>(
                                                                   std::cos(theta),
                                                                   std::sin(theta)))));
    }
    return sup;
  };
  const double outer = boundary_sup(r);
  const double inner = boundary_sup(0.5 * r);
  if (inner == 0.0) return 1.0;  // zero function
  return outer / inner;
}

}  // namespace freqcurve
