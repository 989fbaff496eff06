#pragma once

#include <Eigen/Core>
#include <cstdint>

#include "freqcurve/curve.hpp"
#include "freqcurve/decompose.hpp"

namespace freqcurve {

struct RecursiveEvalConfig {
  int quad_order = 24;      // Gauss-Legendre nodes per axis
  double calibration = 1.0; // overall constant fitted by calibrate_recursion
};

struct GeometricCertificate {
  DecompositionPiece piece;
  double k_est = 0.0;        // 0.9 * sampled minimum of the ratio
  Eigen::VectorXd argmin;
  long samples = 0;
  int refinement_rounds = 0;
};

// C_d with torsion L = C_d * phi^(d); computed from the probe determinant and
// cross-checked against the closed form prod_{j<d} j!.
double torsion_constant(int d);

// Constant value of the i x i minor determinant of the moment coordinates.
double minor_constant(int i, int d);

// |C_d phi^(d)(t)|^{2/(d^2+d)}
double affine_density(const Curve& curve, double t);

// det of the d x d matrix with rows gamma'(t_i).
double jacobian_direct(const Curve& curve, const Eigen::VectorXd& t);

// Nested Gauss-Legendre evaluation of the recursive integral formula for
// Lambda_d; equals jacobian_direct after calibration.
double lambda_recursive(const Curve& curve, const Eigen::VectorXd& t,
                        const RecursiveEvalConfig& cfg);

// Fits cfg.calibration on the moment curve where both sides are exact.
RecursiveEvalConfig calibrate_recursion(int d, RecursiveEvalConfig cfg = {});

struct IntegralBoundResult {
  double lhs = 0.0;
  double rhs = 0.0;
  bool pass = false;
};

// Checks int_t^tau |s-a|^alpha ds >= C_alpha |t-a|^{alpha/2} |tau-a|^{alpha/2}
// (tau-t) with C_alpha = min{1/(alpha+2), 2^{-alpha}}.
IntegralBoundResult integral_bound_check(double t, double tau, double a, double alpha);

// R(t) = |J(t)| / (prod |phi^(d)(t_j)|^{1/d} * prod_{l<k} |t_k - t_l|), with
// the continuous divided-difference extension at pairwise-coincident
// coordinates (gap below conf_tol).
double geometric_ratio(const Curve& curve, Eigen::VectorXd t, double conf_tol);

// Sampled lower bound for R over the ordered simplex of the piece: stratified
// random search plus coordinate descent; K_est = 0.9 * minimum found.
GeometricCertificate certify_piece(const Curve& curve, const DecompositionPiece& piece,
                                   long budget = 20000, std::uint64_t seed = 20240901ULL);

}  // namespace freqcurve
