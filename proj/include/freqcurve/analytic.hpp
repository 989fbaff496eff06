#pragma once

#include <Eigen/Core>
#include <complex>
#include <optional>
#include <utility>
#include <vector>

namespace freqcurve {

struct Disc {
  std::complex<double> center;
  double radius = 0.0;

  Disc(std::complex<double> c, double r);
  bool contains(std::complex<double> z) const { return std::abs(z - center) <= radius; }
};

// Truncated real power series about a real centre, valid on D(center, radius).
// The constructor certifies geometric decay of |c_n| radius^n beyond some
// index and derives a truncation bound valid on the half-radius disc, so
// every downstream evaluation carries a known error.
class AnalyticFunction {
 public:
  AnalyticFunction(double center, double radius, Eigen::VectorXd coeffs);
  AnalyticFunction(double center, double radius, Eigen::VectorXd coeffs, double tail_bound);

  double center() const { return center_; }
  double radius() const { return radius_; }
  const Eigen::VectorXd& coeffs() const { return coeffs_; }
  double tail_bound() const { return tail_bound_; }
  int truncation_order() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const;

  // Restriction to a smaller validity radius; coefficients are unchanged.
  AnalyticFunction with_radius(double radius) const;

 private:
  double center_;
  double radius_;
  Eigen::VectorXd coeffs_;
  double tail_bound_;
};

struct Factorization {
  AnalyticFunction poly;      // monic polynomial with the extracted zeros
  AnalyticFunction residual;  // non-vanishing factor on the half disc
  std::vector<std::pair<std::complex<double>, int>> zeros;  // root, multiplicity
};

struct ContourConfig {
  int start_nodes = 64;
  int max_nodes = 1 << 15;
  double integer_tol = 1e-3;
  double boundary_rel_tol = 1e-9;  // min |f| on the contour, relative to max |f|
};

std::complex<double> evaluate(const AnalyticFunction& f, std::complex<double> z);
double evaluate_real(const AnalyticFunction& f, double t);

AnalyticFunction derivative(const AnalyticFunction& f);
AnalyticFunction antiderivative(const AnalyticFunction& f);

// Re-expands the series about a new real centre inside the disc; the radius
// shrinks by the shift distance.
AnalyticFunction recenter(const AnalyticFunction& f, double new_center);

// Frequency of the series at radius R: 2 * sum n|c_n|^2 R^{2n} / sum |c_k|^2 R^{2k}.
double frequency(const AnalyticFunction& f, double R);

std::vector<std::pair<double, double>> frequency_monotone_scan(const AnalyticFunction& f,
                                                               const std::vector<double>& r_grid);

// Winding number of f around 0 along the contour boundary of d, i.e. the
// number of zeros inside with multiplicity. Trapezoid contour quadrature with
// node doubling until the value pins an integer.
int zero_count(const AnalyticFunction& f, const Disc& d, const ContourConfig& cfg = {});

std::vector<std::pair<std::complex<double>, int>> roots_in_disc(const AnalyticFunction& f,
                                                                const Disc& d,
                                                                const ContourConfig& cfg = {});

Factorization factor_out_zeros(const AnalyticFunction& f, const Disc& d,
                               const ContourConfig& cfg = {});

double doubling_ratio(const AnalyticFunction& f, std::complex<double> z, double r,
                      int boundary_samples = 512);

}  // namespace freqcurve
