#include "freqcurve/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include "freqcurve/errors.hpp"

namespace freqcurve {

namespace {

// Newton iteration on Legendre polynomials, symmetric-half construction.
GaussLegendreRule build_rule(int n) {
  GaussLegendreRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (x * p0 - p1) / (x * x - 1.0);
      double dx = p0 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    double w = 2.0 / ((1.0 - x * x) * pp * pp);
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

}  // namespace

const GaussLegendreRule& gauss_legendre(int order) {
  if (order < 1 || order > 4096) fail(ErrorCode::OutOfRange, "Gauss-Legendre order out of range");
  static std::mutex mtx;
  static std::map<int, GaussLegendreRule> cache;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, build_rule(order)).first;
  return it->second;
}

double gl_integrate(const std::function<double(double)>& fn, double a, double b, int order) {
  const GaussLegendreRule& rule = gauss_legendre(order);
  const double mid = 0.5 * (a + b);
  const double hw = 0.5 * (b - a);
  double sum = 0.0;
  for (int i = 0; i < order; ++i) sum += rule.weights[i] * fn(mid + hw * rule.nodes[i]);
  return hw * sum;
}

namespace {

double adaptive_rec(const std::function<double(double)>& fn, double a, double b, double coarse,
                    double tol_abs, int depth, int max_depth, int order) {
  const double mid = 0.5 * (a + b);
  const double left = gl_integrate(fn, a, mid, order);
  const double right = gl_integrate(fn, mid, b, order);
  const double fine = left + right;
  if (depth >= max_depth || std::abs(fine - coarse) <= tol_abs) return fine;
  return adaptive_rec(fn, a, mid, left, 0.5 * tol_abs, depth + 1, max_depth, order) +
         adaptive_rec(fn, mid, b, right, 0.5 * tol_abs, depth + 1, max_depth, order);
}

}  // namespace

double adaptive_integrate(const std::function<double(double)>& fn, double a, double b,
                          double rel_tol, int max_depth, int base_order) {
  const double coarse = gl_integrate(fn, a, b, base_order);
  const double scale = std::max(std::abs(coarse), 1e-300);
  return adaptive_rec(fn, a, b, coarse, rel_tol * scale, 0, max_depth, base_order);
}

}  // namespace freqcurve
