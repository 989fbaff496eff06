#include "freqcurve/curve.hpp"

#include <cmath>
#include <sstream>

#include "freqcurve/errors.hpp"

namespace freqcurve {

Eigen::VectorXd Curve::point(double t) const {
  const int d = dim();
  Eigen::VectorXd p(d);
  double power = t;
  for (int i = 0; i + 1 < d; ++i) {
    p[i] = power;
    power *= t;
  }
  p[d - 1] = phi_deriv(0, t);
  return p;
}

Eigen::VectorXd Curve::velocity(double t) const {
  const int d = dim();
  Eigen::VectorXd v(d);
  double power = 1.0;
  for (int i = 0; i + 1 < d; ++i) {
    v[i] = (i + 1) * power;
    power *= t;
  }
  v[d - 1] = phi_deriv(1, t);
  return v;
}

SimpleCurve::SimpleCurve(int d, AnalyticFunction phi, std::string id)
    : d_(d), id_(std::move(id)) {
  if (d < 2 || d > 8) fail(ErrorCode::OutOfRange, "dimension must lie in [2, 8]");
  derivs_.push_back(std::move(phi));
  for (int order = 1; order <= d; ++order) derivs_.push_back(derivative(derivs_.back()));
}

const AnalyticFunction& SimpleCurve::phi_derivative(int order) const {
  if (order < 0 || order > d_) fail(ErrorCode::OutOfRange, "derivative order out of range");
  return derivs_[order];
}

double SimpleCurve::phi_deriv(int order, double t) const {
  return evaluate_real(phi_derivative(order), t);
}

namespace {

// Truncated Taylor (jet) arithmetic: a[k] = f^(k)(t) / k!.
using Jet = std::vector<double>;

Jet jet_power(double t, double expo, int K) {
  // s^expo expanded about s = t (t > 0)
  Jet a(K);
  double coeff = std::pow(t, expo);
  for (int k = 0; k < K; ++k) {
    a[k] = coeff;
    coeff *= (expo - k) / (k + 1) / t;
  }
  return a;
}

Jet jet_exp(const Jet& a) {
  const int K = static_cast<int>(a.size());
  Jet e(K);
  e[0] = std::exp(a[0]);
  for (int k = 1; k < K; ++k) {
    double s = 0.0;
    for (int j = 1; j <= k; ++j) s += j * a[j] * e[k - j];
    e[k] = s / k;
  }
  return e;
}

Jet jet_sin(const Jet& a) {
  const int K = static_cast<int>(a.size());
  Jet s(K), c(K);
  s[0] = std::sin(a[0]);
  c[0] = std::cos(a[0]);
  for (int k = 1; k < K; ++k) {
    double ds = 0.0, dc = 0.0;
    for (int j = 1; j <= k; ++j) {
      ds += j * a[j] * c[k - j];
      dc += j * a[j] * s[k - j];
    }
    s[k] = ds / k;
    c[k] = -dc / k;
  }
  return s;
}

Jet jet_mul(const Jet& a, const Jet& b) {
  const int K = static_cast<int>(a.size());
  Jet p(K, 0.0);
  for (int i = 0; i < K; ++i)
    for (int j = 0; i + j < K; ++j) p[i + j] += a[i] * b[j];
  return p;
}

}  // namespace

SjolinChenCurve::SjolinChenCurve(int d, double alpha, double beta)
    : d_(d), alpha_(alpha), beta_(beta) {
  if (d < 2 || d > 8) fail(ErrorCode::OutOfRange, "dimension must lie in [2, 8]");
  if (!(alpha > 0.0) || !(beta > 0.0)) fail(ErrorCode::OutOfRange, "alpha, beta must be positive");
  if (!(2.0 * beta > (d + 1) * alpha))
    fail(ErrorCode::OutOfRange, "oscillation condition 2*beta > (d+1)*alpha fails");
}

double SjolinChenCurve::phi_deriv(int order, double t) const {
  if (order < 0 || order > 8) fail(ErrorCode::OutOfRange, "derivative order out of range");
  if (!(t > 0.0)) fail(ErrorCode::OutOfRange, "curve defined for t > 0");
  const int K = order + 1;
  Jet u = jet_power(t, -alpha_, K);
  for (double& x : u) x = -x;
  const Jet damp = jet_exp(u);
  const Jet osc = jet_sin(jet_power(t, -beta_, K));
  const Jet phi = jet_mul(damp, osc);
  double fact = 1.0;
  for (int k = 2; k <= order; ++k) fact *= k;
  return phi[order] * fact;
}

double SjolinChenCurve::oscillation_rate(double t) const {
  if (!(t > 0.0)) fail(ErrorCode::OutOfRange, "curve defined for t > 0");
  return beta_ * std::pow(t, -beta_ - 1.0) + alpha_ * std::pow(t, -alpha_ - 1.0);
}

std::string SjolinChenCurve::id() const {
  std::ostringstream os;
  os << "sjolin_chen(alpha=" << alpha_ << ",beta=" << beta_ << ")";
  return os.str();
}

SimpleCurve make_moment_curve(int d, double radius) {
  Eigen::VectorXd c = Eigen::VectorXd::Zero(d + 1);
  c[d] = 1.0;
  return SimpleCurve(d, AnalyticFunction(0.0, radius, c), "moment");
}

SimpleCurve make_planted_zero_curve(int d, const Eigen::VectorXd& q, double radius) {
  if (radius > 80.0) fail(ErrorCode::OutOfRange, "radius too large for the exp-series fit");
  const int T = static_cast<int>(std::ceil(3.2 * radius)) + 16;
  Eigen::VectorXd expc(T + 1);
  double inv_fact = 1.0;
  for (int n = 0; n <= T; ++n) {
    expc[n] = inv_fact;
    inv_fact /= (n + 1);
  }
  Eigen::VectorXd prod = Eigen::VectorXd::Zero(T + 1 + q.size() - 1);
  for (int i = 0; i < q.size(); ++i)
    for (int n = 0; n <= T; ++n) prod[i + n] += q[i] * expc[n];
  AnalyticFunction phi_d(0.0, radius, prod);
  for (int j = 0; j < d; ++j) phi_d = antiderivative(phi_d);
  return SimpleCurve(d, phi_d, "planted_zero");
}

SimpleCurve scale_phi(const SimpleCurve& curve, double scale) {
  if (scale == 0.0) fail(ErrorCode::ZeroInput, "scale must be nonzero");
  const AnalyticFunction& phi = curve.phi();
  return SimpleCurve(curve.dim(), AnalyticFunction(phi.center(), phi.radius(), phi.coeffs() * scale),
                     curve.id() + "*scale");
}

}  // namespace freqcurve
