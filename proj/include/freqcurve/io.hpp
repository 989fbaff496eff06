#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "freqcurve/analytic.hpp"
#include "freqcurve/curve.hpp"
#include "freqcurve/decompose.hpp"
#include "freqcurve/geometry.hpp"
#include "freqcurve/restriction.hpp"

namespace freqcurve {

// AnalyticFunction <-> JSON text record {center, radius, coeffs, tail_bound};
// decimal round-trip is exact (shortest-round-trip double formatting).
std::string analytic_to_text(const AnalyticFunction& f);
AnalyticFunction analytic_from_text(const std::string& text);

// Curve specification file: {"d": ..., "phi": {...}, "interval": [lo, hi]}
// phi is {"type": "series", center, radius, coeffs[, tail_bound]} or
// {"type": "builtin", "name": moment|planted_zero|sjolin_chen, "params": {..}}
struct LoadedSpec {
  int d = 0;
  double lo = 0.0;
  double hi = 0.0;
  std::shared_ptr<Curve> curve;
  std::optional<AnalyticFunction> phi;  // set for series-backed curves
  std::string kind;                     // "series" or the builtin name
};

LoadedSpec load_curve_spec(const std::filesystem::path& path);
LoadedSpec parse_curve_spec(const std::string& text);

// Export helpers; all writes are atomic (temp file + rename).
void atomic_write(const std::filesystem::path& path, const std::string& content);

std::string decomposition_to_csv(const Decomposition& dec);
std::string decomposition_certificate_json(const Decomposition& dec, const AnalyticFunction& phid,
                                           int grid_n, const DecomposeConfig& cfg);
std::string certificates_to_json(const std::vector<GeometricCertificate>& certs, long budget,
                                 std::uint64_t seed);
std::string norm_report_to_json(const NormReport& rep);
std::string reports_to_csv(const std::vector<NormReport>& reports);
std::string reports_to_plot_data(const std::vector<NormReport>& reports);

}  // namespace freqcurve
