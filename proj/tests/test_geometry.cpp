#include <doctest.h>

#include <cmath>

#include "freqcurve/curve.hpp"
#include "freqcurve/errors.hpp"
#include "freqcurve/geometry.hpp"
#include "helpers.hpp"

using namespace freqcurve;

TEST_CASE("torsion and minor constants") {
  CHECK(torsion_constant(2) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(torsion_constant(3) == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(torsion_constant(4) == doctest::Approx(12.0).epsilon(1e-12));
  CHECK(minor_constant(1, 4) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(minor_constant(2, 4) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(minor_constant(3, 4) == doctest::Approx(12.0).epsilon(1e-12));
}

TEST_CASE("affine density") {
  SUBCASE("d = 3 moment curve: phi''' = 6, C_3 = 2, so (12)^{1/6}") {
    const SimpleCurve c = make_moment_curve(3);
    CHECK(affine_density(c, 0.4) == doctest::Approx(std::pow(12.0, 1.0 / 6.0)).epsilon(1e-12));
  }
  SUBCASE("d = 2 parabola: phi'' = 2, C_2 = 1, so 2^{1/3}") {
    const SimpleCurve c = make_moment_curve(2);
    CHECK(affine_density(c, -0.3) == doctest::Approx(std::pow(2.0, 1.0 / 3.0)).epsilon(1e-12));
  }
}

TEST_CASE("direct Jacobian determinant") {
  const SimpleCurve c = make_moment_curve(3);
  SUBCASE("hand value at (0, 1, 2)") {
    Eigen::Vector3d t(0.0, 1.0, 2.0);
    // rows (1, 2t, 3t^2): det = 12
    CHECK(jacobian_direct(c, t) == doctest::Approx(12.0).epsilon(1e-12));
  }
  SUBCASE("repeated coordinate vanishes") {
    Eigen::Vector3d t(0.5, 0.5, 1.0);
    CHECK(jacobian_direct(c, t) == doctest::Approx(0.0));
  }
  SUBCASE("hand value at (0, 1, 3)") {
    Eigen::Vector3d t(0.0, 1.0, 3.0);
    CHECK(jacobian_direct(c, t) == doctest::Approx(36.0).epsilon(1e-12));
  }
  SUBCASE("antisymmetric under swapping rows") {
    Eigen::Vector3d t(0.1, 0.7, 0.4);
    Eigen::Vector3d s(0.7, 0.1, 0.4);
    CHECK(jacobian_direct(c, t) == doctest::Approx(-jacobian_direct(c, s)).epsilon(1e-12));
  }
}

TEST_CASE("recursive evaluation of the Jacobian") {
  const RecursiveEvalConfig cal = calibrate_recursion(3);
  SUBCASE("calibration is deterministic") {
    const RecursiveEvalConfig again = calibrate_recursion(3);
    CHECK(cal.calibration == again.calibration);
  }
  SUBCASE("coincident leading coordinates give zero") {
    const SimpleCurve c = make_moment_curve(3);
    Eigen::Vector3d t(0.2, 0.2, 0.9);
    CHECK(std::abs(lambda_recursive(c, t, cal)) < 1e-12);
  }
  SUBCASE("matches the direct determinant on the moment curve") {
    const SimpleCurve c = make_moment_curve(3);
    Eigen::Vector3d t(0.1, 0.45, 0.8);
    const double direct = jacobian_direct(c, t);
    const double rec = lambda_recursive(c, t, cal);
    CHECK(rec == doctest::Approx(direct).epsilon(1e-10));
  }
  SUBCASE("matches the direct determinant on a planted-zero curve") {
    Eigen::VectorXd q(2);
    q << -5.0, 1.0;  // phi''' = (t - 5) e^t, nonzero on [0, 1]
    const SimpleCurve c = make_planted_zero_curve(3, q);
    Eigen::Vector3d t(0.15, 0.5, 0.85);
    const double direct = jacobian_direct(c, t);
    const double rec = lambda_recursive(c, t, cal);
    CHECK(std::abs(rec - direct) < 1e-6 * std::abs(direct));
  }
  SUBCASE("nondecreasing tuple required") {
    const SimpleCurve c = make_moment_curve(3);
    Eigen::Vector3d t(0.8, 0.1, 0.4);
    CHECK_THROWS_AS(lambda_recursive(c, t, cal), Error);
  }
}

TEST_CASE("one-dimensional integral lower bound") {
  SUBCASE("alpha = 2, a = 0, [1, 1.5]") {
    // lhs = (1.5^3 - 1)/3; rhs = (1/4) * 1 * 1.5 * 0.5
    const auto r = integral_bound_check(1.0, 1.5, 0.0, 2.0);
    CHECK(r.lhs == doctest::Approx((std::pow(1.5, 3) - 1.0) / 3.0).epsilon(1e-12));
    CHECK(r.rhs == doctest::Approx(0.25 * std::sqrt(1.0) * std::sqrt(1.5 * 1.5) * 0.5)
                       .epsilon(1e-12));
    CHECK(r.pass);
  }
  SUBCASE("alpha = 0 reduces to equality up to the constant 1/2") {
    const auto r = integral_bound_check(2.0, 3.0, 0.0, 0.0);
    CHECK(r.lhs == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.rhs == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(r.pass);
  }
  SUBCASE("fractional alpha via adaptive quadrature") {
    const auto r = integral_bound_check(1.0, 2.0, 0.5, 1.5);
    const double exact = (std::pow(1.5, 2.5) - std::pow(0.5, 2.5)) / 2.5;
    CHECK(r.lhs == doctest::Approx(exact).epsilon(1e-10));
    CHECK(r.pass);
  }
  SUBCASE("center inside the interval is refused") {
    CHECK_THROWS_AS(integral_bound_check(1.0, 2.0, 1.5, 2.0), Error);
  }
}

TEST_CASE("geometric ratio") {
  const SimpleCurve c = make_moment_curve(3);
  SUBCASE("identically the torsion-free normalization on the moment curve") {
    // phi''' = 6, so R = |J| / (6 * Vandermonde) = 1 for all tuples
    Eigen::Vector3d t(0.1, 0.35, 0.8);
    CHECK(geometric_ratio(c, t, 1e-9) == doctest::Approx(1.0).epsilon(1e-11));
    Eigen::Vector3d s(-0.4, 0.2, 0.9);
    CHECK(geometric_ratio(c, s, 1e-9) == doctest::Approx(1.0).epsilon(1e-11));
  }
  SUBCASE("confluent pair handled by the derivative-row extension") {
    Eigen::Vector3d t(0.3, 0.3 + 1e-12, 0.7);
    CHECK(geometric_ratio(c, t, 1e-9) == doctest::Approx(1.0).epsilon(1e-9));
  }
  SUBCASE("triple coincidence is out of range") {
    Eigen::Vector3d t(0.3, 0.3, 0.3);
    CHECK_THROWS_AS(geometric_ratio(c, t, 1e-9), Error);
  }
}

TEST_CASE("piece certification") {
  SUBCASE("parabola: the ratio is identically 1, so K_est = 0.9") {
    const SimpleCurve c = make_moment_curve(2);
    DecompositionPiece piece;
    piece.lo = 0.0;
    piece.hi = 1.0;
    piece.center = 0.0;
    piece.exponent = 0;
    piece.lower_const = 2.0;
    piece.upper_const = 2.0;
    piece.sign = 1;
    const GeometricCertificate cert = certify_piece(c, piece, 5000);
    CHECK(cert.k_est == doctest::Approx(0.9).epsilon(1e-9));
    CHECK(cert.samples > 0);
    // the reported argmin re-evaluates to the certified minimum
    const double at_argmin = geometric_ratio(c, cert.argmin, 1e-6);
    CHECK(0.9 * at_argmin == doctest::Approx(cert.k_est).epsilon(1e-9));
  }
  SUBCASE("d = 3 moment piece") {
    const SimpleCurve c = make_moment_curve(3);
    DecompositionPiece piece;
    piece.lo = 0.25;
    piece.hi = 1.0;
    piece.center = 0.0;
    piece.exponent = 0;
    piece.lower_const = 6.0;
    piece.upper_const = 6.0;
    piece.sign = 1;
    const GeometricCertificate cert = certify_piece(c, piece, 5000, 77u);
    CHECK(cert.k_est == doctest::Approx(0.9).epsilon(1e-8));
  }
  SUBCASE("determinism under a fixed seed") {
    const SimpleCurve c = make_moment_curve(3);
    DecompositionPiece piece{0.1, 0.9, 0.0, 0, 6.0, 6.0, 1};
    const auto a = certify_piece(c, piece, 3000, 13u);
    const auto b = certify_piece(c, piece, 3000, 13u);
    CHECK(a.k_est == b.k_est);
    CHECK(a.argmin == b.argmin);
  }
}
