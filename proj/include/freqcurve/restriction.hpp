#pragma once

#include <Eigen/Core>
#include <complex>
#include <string>
#include <tuple>
#include <vector>

#include "freqcurve/curve.hpp"
#include "freqcurve/decompose.hpp"

namespace freqcurve {

struct TestFunction {
  enum class Kind { Indicator, Bump, Zero };
  Kind kind = Kind::Indicator;
  double lo = 0.0;
  double hi = 1.0;
  double smoothness = 1.0;  // bump only

  double operator()(double t) const;
  std::string describe() const;
};

// Tensor grid on [-box, box]^d used for truncated L^p norms.
struct GridSpec {
  double box = 8.0;
  int n = 64;
  int d = 3;
};

struct ExponentPair {
  double p = 0.0;
  double q = 0.0;
  double p_prime = 0.0;
  int d = 0;
};

// Critical-line pair: q = 2 p' / (d^2 + d).
ExponentPair exponent_pair(double p, int d);

struct NormReport {
  std::string curve_id;
  std::string test_function;
  ExponentPair pair;
  GridSpec grid;
  bool weighted = true;
  double extension_norm_value = 0.0;  // truncated-box lower estimate
  double source_norm = 0.0;           // ||f||_{q'} against the affine density
  double ratio = 0.0;
  long panel_count = 0;
  bool degraded = false;   // panel budget hit; estimate under-resolved
  bool zero_input = false;
  double label = 0.0;  // scale or gap index in scan outputs
};

// E f(x) (weighted by the affine density) or F f(x) (weighted = false) by
// oscillation-aware panel quadrature.
std::complex<double> extension_eval(const Curve& curve, const TestFunction& f,
                                    const Eigen::VectorXd& x, bool weighted,
                                    bool* degraded = nullptr, long max_panels = 1L << 16);

// Truncated L^{p'} norm of the extension over the grid box, with the source
// norm and their ratio.
NormReport extension_norm(const Curve& curve, const TestFunction& f, const ExponentPair& pair,
                          const GridSpec& grid, bool weighted, long max_panels = 1L << 16);

// Nonempty dyadic annuli {t : 2^{n-1} < |t - center| <= 2^n} within [lo, hi].
std::vector<std::tuple<int, double, double>> dyadic_partition(double lo, double hi, double center);

// Weighted norm ratios for indicators of the dyadic intervals
// [2^{-m-1}, 2^{-m}], m = 1..m_max, on the oscillatory counterexample curve.
std::vector<NormReport> counterexample_scan(double alpha, double beta, int d, int m_max,
                                            const ExponentPair& pair, const GridSpec& grid);

struct MultilinearResult {
  double k_fit = 0.0;  // fitted decay exponent (positive = decay)
  std::vector<std::pair<int, double>> gap_ratios;
  bool unstable = false;
};

// Fits the decay of ||prod_l E f_l|| against the dyadic gap n_D - n_1.
MultilinearResult multilinear_decay_experiment(const Curve& curve, const DecompositionPiece& piece,
                                               const std::vector<int>& gaps,
                                               const ExponentPair& pair, const GridSpec& grid);

}  // namespace freqcurve
