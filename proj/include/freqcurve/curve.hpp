#pragma once

#include <Eigen/Core>
#include <memory>
#include <string>
#include <vector>

#include "freqcurve/analytic.hpp"

namespace freqcurve {

// Curve gamma(t) = (t, t^2, ..., t^{d-1}, phi(t)); only the last coordinate is
// curve-specific.
class Curve {
 public:
  virtual ~Curve() = default;

  virtual int dim() const = 0;
  virtual double phi_deriv(int order, double t) const = 0;  // order 0..dim
  virtual std::string id() const = 0;

  // Lower bound a quadrature rule must resolve beyond <x, gamma'>: internal
  // phase rate of the last coordinate (nonzero only for oscillatory
  // closed-form curves).
  virtual double oscillation_rate(double) const { return 0.0; }

  Eigen::VectorXd point(double t) const;
  Eigen::VectorXd velocity(double t) const;
};

// Curve whose last coordinate is a certified power series; derivatives up to
// order d are cached at construction.
class SimpleCurve : public Curve {
 public:
  SimpleCurve(int d, AnalyticFunction phi, std::string id = "series");

  int dim() const override { return d_; }
  double phi_deriv(int order, double t) const override;
  std::string id() const override { return id_; }

  const AnalyticFunction& phi() const { return derivs_[0]; }
  const AnalyticFunction& phi_derivative(int order) const;

 private:
  int d_;
  std::string id_;
  std::vector<AnalyticFunction> derivs_;  // orders 0..d
};

// Closed-form last coordinate exp(-t^{-alpha}) sin(t^{-beta}) for t > 0;
// derivatives by truncated Taylor arithmetic. Deliberately not representable
// as a bounded-frequency series.
class SjolinChenCurve : public Curve {
 public:
  SjolinChenCurve(int d, double alpha, double beta);

  int dim() const override { return d_; }
  double phi_deriv(int order, double t) const override;
  std::string id() const override;

  double alpha() const { return alpha_; }
  double beta() const { return beta_; }

  // d/dt of the sin phase t^{-beta} plus the damping phase t^{-alpha}
  double oscillation_rate(double t) const override;

 private:
  int d_;
  double alpha_;
  double beta_;
};

// phi = t^d on D(0, radius).
SimpleCurve make_moment_curve(int d, double radius = 72.0);

// phi^(d) = q(t) e^t with q the given polynomial (coefficients about 0),
// antidifferentiated d times with vanishing constants; series about 0.
SimpleCurve make_planted_zero_curve(int d, const Eigen::VectorXd& q, double radius = 72.0);

// Curve with phi replaced by scale * phi (same dimension and radius).
SimpleCurve scale_phi(const SimpleCurve& curve, double scale);

}  // namespace freqcurve
