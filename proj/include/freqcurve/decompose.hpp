#pragma once

#include <Eigen/Core>
#include <string>
#include <utility>
#include <vector>

#include "freqcurve/analytic.hpp"

namespace freqcurve {

// One interval I_j = [lo, hi] on which |f(t)| is comparable to
// |t - center|^exponent with two-sided constants of bounded ratio, and f is
// single-signed. The center never lies in the open interval.
struct DecompositionPiece {
  double lo = 0.0;
  double hi = 0.0;
  double center = 0.0;
  int exponent = 0;
  double lower_const = 0.0;
  double upper_const = 0.0;
  int sign = 0;  // 0 while unset
};

struct DecompositionStats {
  int piece_count = 0;
  int max_depth = 0;
  double n_effective = 0.0;  // frequency budget of the decomposed derivative
};

struct Decomposition {
  std::vector<DecompositionPiece> pieces;
  std::string source;
  DecompositionStats stats;
};

struct DecomposeConfig {
  double theta = 16.0;        // cap on upper_const / lower_const
  double margin = 0.05;       // safety margin folded into the constants
  int depth_max = 24;
  int degree_cap = 64;
  double width_min_rel = 1e-10;  // relative to the input interval length
  int search_grid = 256;
};

struct OscillationResult {
  std::vector<std::pair<double, double>> intervals;
  int max_depth = 0;
};

// Subdivides [lo, hi] until |psi(x)/psi(y) - 1| < eps on each part, sampled on
// a 64-point grid with a 1/2 safety factor. psi must be non-vanishing on
// D(midpoint, 4 * half-length).
OscillationResult oscillation_decompose(const AnalyticFunction& psi, double lo, double hi,
                                        double eps, const DecomposeConfig& cfg = {});

// Comparability decomposition of the polynomial p(t) = sum c_n (t - center)^n
// on [lo, hi]: pieces whose centers are real parts of roots of p (or an
// endpoint for the exponent-0 fallback), with sampled two-sided constants.
// Sign fields are left unset.
std::vector<DecompositionPiece> polynomial_decompose(const Eigen::VectorXd& coeffs, double center,
                                                     double lo, double hi,
                                                     const DecomposeConfig& cfg = {},
                                                     int* max_depth = nullptr);

// Thm-style composition: factor zeros out of phi on D(a, 4r), oscillation-
// subdivide the residual at eps = 1/2, polynomial-decompose the zero factor on
// each part, then tighten the constants against phi itself.
std::vector<DecompositionPiece> monomial_decompose(const AnalyticFunction& phi, double lo,
                                                   double hi, const DecomposeConfig& cfg = {},
                                                   int* max_depth = nullptr);

struct SignComponent {
  double lo = 0.0;
  double hi = 0.0;
  int sign = 0;
};

// Splits [lo, hi] at the real zeros of f; sign per component from the midpoint.
std::vector<SignComponent> sign_components(const AnalyticFunction& f, double lo, double hi);

// Full decomposition of phi^(d) on [lo, hi]: class membership checks, d-fold
// differentiation, monomial pieces intersected with sign components.
Decomposition full_decompose(const AnalyticFunction& phi, int d, double lo, double hi,
                             const DecomposeConfig& cfg = {},
                             const std::string& source = std::string());

struct PieceCheck {
  bool pass = false;
  double lower_slack = 0.0;  // min |f| / (lower_const |t-a|^k); >= 1 iff the lower bound holds
  double upper_slack = 0.0;  // min upper_const |t-a|^k / |f|; >= 1 iff the upper bound holds
  int grid_n = 0;
};

// Re-verifies the two-sided comparability bound for one piece on a fresh
// midpoint-offset grid.
PieceCheck verify_piece(const AnalyticFunction& f, const DecompositionPiece& piece, int grid_n);

}  // namespace freqcurve
