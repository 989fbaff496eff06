#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <iostream>

#include "freqcurve/errors.hpp"
#include "freqcurve/geometry.hpp"
#include "freqcurve/io.hpp"

namespace fc = freqcurve;
namespace fs = std::filesystem;

namespace {

struct CommonOpts {
  std::string spec_path;
  std::string out_dir = ".";
  double p = 12.0 / 11.0;
  int grid_n = 64;
  double box = 8.0;
  std::uint64_t seed = 20240901ULL;
  int quad_order = 24;
  double theta = 16.0;
};

fc::AnalyticFunction require_series(const fc::LoadedSpec& spec) {
  if (!spec.phi)
    fc::fail(fc::ErrorCode::ParseError, "this command needs a series-backed curve");
  return *spec.phi;
}

// the decomposition works on phi re-expanded about the interval midpoint
fc::AnalyticFunction derivative_at_midpoint(const fc::AnalyticFunction& phi, int d, double lo,
                                            double hi) {
  const double a = 0.5 * (lo + hi);
  fc::AnalyticFunction f = std::abs(phi.center() - a) > 1e-12 * std::max(1.0, 0.5 * (hi - lo))
                               ? fc::recenter(phi, a)
                               : phi;
  for (int j = 0; j < d; ++j) f = fc::derivative(f);
  return f;
}

int cmd_freq(const CommonOpts& opts, double R, int scan_count) {
  const fc::LoadedSpec spec = fc::load_curve_spec(opts.spec_path);
  const fc::AnalyticFunction phi = require_series(spec);
  const double r_top = std::min(R, phi.radius());
  std::printf("frequency(R=%.17g) = %.17g\n", r_top, fc::frequency(phi, r_top));
  std::vector<double> grid;
  for (int i = 1; i <= scan_count; ++i) grid.push_back(r_top * i / scan_count);
  std::printf("# R frequency\n");
  for (const auto& [r, nu] : fc::frequency_monotone_scan(phi, grid))
    std::printf("%.17g %.17g\n", r, nu);
  return 0;
}

int cmd_decompose(const CommonOpts& opts) {
  const fc::LoadedSpec spec = fc::load_curve_spec(opts.spec_path);
  const fc::AnalyticFunction phi = require_series(spec);
  fc::DecomposeConfig cfg;
  cfg.theta = opts.theta;
  const fc::Decomposition dec = fc::full_decompose(phi, spec.d, spec.lo, spec.hi, cfg, spec.kind);
  const fc::AnalyticFunction phid = derivative_at_midpoint(phi, spec.d, spec.lo, spec.hi);
  fs::create_directories(opts.out_dir);
  fc::atomic_write(fs::path(opts.out_dir) / "decomposition.csv", fc::decomposition_to_csv(dec));
  fc::atomic_write(fs::path(opts.out_dir) / "decomposition_cert.json",
                   fc::decomposition_certificate_json(dec, phid, 1024, cfg));
  std::printf("pieces=%d max_depth=%d n_effective=%.17g\n", dec.stats.piece_count,
              dec.stats.max_depth, dec.stats.n_effective);
  return 0;
}

int cmd_certify(const CommonOpts& opts, long budget) {
  const fc::LoadedSpec spec = fc::load_curve_spec(opts.spec_path);
  const fc::AnalyticFunction phi = require_series(spec);
  fc::DecomposeConfig cfg;
  cfg.theta = opts.theta;
  const fc::Decomposition dec = fc::full_decompose(phi, spec.d, spec.lo, spec.hi, cfg, spec.kind);
  const fc::SimpleCurve curve(spec.d, phi, spec.kind);
  std::vector<fc::GeometricCertificate> certs;
  for (const auto& piece : dec.pieces)
    certs.push_back(fc::certify_piece(curve, piece, budget, opts.seed));
  fs::create_directories(opts.out_dir);
  fc::atomic_write(fs::path(opts.out_dir) / "certificates.json",
                   fc::certificates_to_json(certs, budget, opts.seed));
  for (size_t i = 0; i < certs.size(); ++i)
    std::printf("piece %zu: K_est=%.17g samples=%ld rounds=%d\n", i, certs[i].k_est,
                certs[i].samples, certs[i].refinement_rounds);
  return 0;
}

int cmd_restrict(const CommonOpts& opts, bool unweighted) {
  const fc::LoadedSpec spec = fc::load_curve_spec(opts.spec_path);
  const fc::ExponentPair pair = fc::exponent_pair(opts.p, spec.d);
  fc::GridSpec grid{opts.box, opts.grid_n, spec.d};
  fc::TestFunction f;
  f.lo = spec.lo;
  f.hi = spec.hi;
  const fc::NormReport rep =
      fc::extension_norm(*spec.curve, f, pair, grid, /*weighted=*/!unweighted);
  fs::create_directories(opts.out_dir);
  fc::atomic_write(fs::path(opts.out_dir) / "norm_report.json", fc::norm_report_to_json(rep));
  std::printf("extension_norm=%.17g source_norm=%.17g ratio=%.17g degraded=%d\n",
              rep.extension_norm_value, rep.source_norm, rep.ratio, rep.degraded ? 1 : 0);
  return 0;
}

int cmd_counterexample(const CommonOpts& opts, double alpha, double beta, int scales) {
  const int d = 3;
  const fc::ExponentPair pair = fc::exponent_pair(opts.p, d);
  fc::GridSpec grid{opts.box, opts.grid_n, d};
  const std::vector<fc::NormReport> reports =
      fc::counterexample_scan(alpha, beta, d, scales, pair, grid);
  fs::create_directories(opts.out_dir);
  fc::atomic_write(fs::path(opts.out_dir) / "counterexample_scan.csv",
                   fc::reports_to_csv(reports));
  fc::atomic_write(fs::path(opts.out_dir) / "counterexample_scan.dat",
                   fc::reports_to_plot_data(reports));
  for (const auto& r : reports)
    std::printf("m=%g ratio=%.17g degraded=%d\n", r.label, r.ratio, r.degraded ? 1 : 0);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical toolkit for bounded-frequency simple curves"};
  app.require_subcommand(1);

  CommonOpts opts;
  double freq_R = 1.0;
  int scan_count = 5;
  long budget = 20000;
  bool unweighted = false;
  double alpha = 1.0, beta = 3.0;
  int scales = 5;

  auto add_common = [&](CLI::App* sub, bool needs_spec) {
    if (needs_spec) sub->add_option("--spec", opts.spec_path, "curve spec file")->required();
    sub->add_option("--out", opts.out_dir, "output directory");
    sub->add_option("--seed", opts.seed, "deterministic seed");
  };

  CLI::App* freq = app.add_subcommand("freq", "frequency and monotone scan");
  add_common(freq, true);
  freq->add_option("--R", freq_R, "evaluation radius");
  freq->add_option("--scan", scan_count, "number of scan radii");

  CLI::App* dec = app.add_subcommand("decompose", "comparability decomposition");
  add_common(dec, true);
  dec->add_option("--theta", opts.theta, "comparability ratio cap");

  CLI::App* cert = app.add_subcommand("certify", "geometric certificates per piece");
  add_common(cert, true);
  cert->add_option("--theta", opts.theta, "comparability ratio cap");
  cert->add_option("--budget", budget, "sample budget per piece");
  cert->add_option("--quad-order", opts.quad_order, "Gauss-Legendre order");

  CLI::App* res = app.add_subcommand("restrict", "extension norm report");
  add_common(res, true);
  res->add_option("--p", opts.p, "Lebesgue exponent p");
  res->add_option("--grid-n", opts.grid_n, "grid points per axis");
  res->add_option("--box", opts.box, "box half-width");
  res->add_flag("--unweighted", unweighted, "drop the affine density weight");

  CLI::App* cex = app.add_subcommand("counterexample", "oscillatory blow-up scan");
  add_common(cex, false);
  cex->add_option("--alpha", alpha, "damping exponent");
  cex->add_option("--beta", beta, "oscillation exponent");
  cex->add_option("--scales", scales, "number of dyadic scales");
  cex->add_option("--p", opts.p, "Lebesgue exponent p");
  cex->add_option("--grid-n", opts.grid_n, "grid points per axis");
  cex->add_option("--box", opts.box, "box half-width");

  CLI11_PARSE(app, argc, argv);

  try {
    if (freq->parsed()) return cmd_freq(opts, freq_R, scan_count);
    if (dec->parsed()) return cmd_decompose(opts);
    if (cert->parsed()) return cmd_certify(opts, budget);
    if (res->parsed()) return cmd_restrict(opts, unweighted);
    if (cex->parsed()) return cmd_counterexample(opts, alpha, beta, scales);
  } catch (const fc::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    switch (e.category()) {
      case fc::ErrorCategory::Validation: return 2;
      case fc::ErrorCategory::Budget: return 3;
      case fc::ErrorCategory::Internal: return 4;
    }
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 4;
  }
  return 0;
}
