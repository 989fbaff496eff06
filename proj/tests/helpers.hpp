#pragma once

#include <Eigen/Core>
#include <cmath>

#include "freqcurve/analytic.hpp"

namespace testutil {

// exp(t) as a series about `center` (coefficients exp(center)/n!)
inline freqcurve::AnalyticFunction exp_series(double center, double radius, int terms = 48) {
  Eigen::VectorXd c(terms);
  double coef = std::exp(center);
  for (int n = 0; n < terms; ++n) {
    c[n] = coef;
    coef /= (n + 1);
  }
  return freqcurve::AnalyticFunction(center, radius, c);
}

inline freqcurve::AnalyticFunction monomial(int n, double radius) {
  Eigen::VectorXd c = Eigen::VectorXd::Zero(n + 1);
  c[n] = 1.0;
  return freqcurve::AnalyticFunction(0.0, radius, c);
}

// coefficients of p(z) * (z - r)
inline Eigen::VectorXd mul_linear(const Eigen::VectorXd& p, double r) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(p.size() + 1);
  for (int i = 0; i < p.size(); ++i) {
    out[i + 1] += p[i];
    out[i] -= r * p[i];
  }
  return out;
}

// coefficients of p(z) * (z^2 + b z + c)
inline Eigen::VectorXd mul_quadratic(const Eigen::VectorXd& p, double b, double c) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(p.size() + 2);
  for (int i = 0; i < p.size(); ++i) {
    out[i + 2] += p[i];
    out[i + 1] += b * p[i];
    out[i] += c * p[i];
  }
  return out;
}

}  // namespace testutil
