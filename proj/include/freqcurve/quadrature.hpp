#pragma once

#include <Eigen/Core>
#include <functional>

namespace freqcurve {

// Gauss-Legendre rule on [-1, 1]. Nodes/weights are cached per order.
struct GaussLegendreRule {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
};

const GaussLegendreRule& gauss_legendre(int order);

// Integrates fn over [a, b] with a single Gauss-Legendre rule.
double gl_integrate(const std::function<double(double)>& fn, double a, double b, int order);

// Adaptive bisection driven by comparing an order-n rule against order-2n on
// each segment. Intended for smooth integrands with localized sharp features.
double adaptive_integrate(const std::function<double(double)>& fn, double a, double b,
                          double rel_tol = 1e-12, int max_depth = 40, int base_order = 16);

}  // namespace freqcurve
