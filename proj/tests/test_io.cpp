#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "freqcurve/errors.hpp"
#include "freqcurve/io.hpp"
#include "helpers.hpp"

using namespace freqcurve;
namespace fs = std::filesystem;

TEST_CASE("analytic record round-trips bitwise") {
  const AnalyticFunction f = testutil::exp_series(0.125, 3.5);
  const AnalyticFunction g = analytic_from_text(analytic_to_text(f));
  CHECK(g.center() == f.center());
  CHECK(g.radius() == f.radius());
  REQUIRE(g.coeffs().size() == f.coeffs().size());
  for (int i = 0; i < f.coeffs().size(); ++i) CHECK(g.coeffs()[i] == f.coeffs()[i]);
  CHECK(g.tail_bound() == f.tail_bound());
}

TEST_CASE("curve specification parsing") {
  SUBCASE("series-backed curve") {
    const std::string text = R"({
      "d": 3,
      "interval": [-1.0, 1.0],
      "phi": {"type": "series", "center": 0.0, "radius": 64.0,
              "coeffs": [0.0, 0.0, 0.0, 1.0]}
    })";
    const LoadedSpec spec = parse_curve_spec(text);
    CHECK(spec.d == 3);
    CHECK(spec.lo == -1.0);
    CHECK(spec.hi == 1.0);
    CHECK(spec.kind == "series");
    REQUIRE(spec.phi.has_value());
    CHECK(spec.curve->phi_deriv(3, 0.5) == doctest::Approx(6.0));
  }
  SUBCASE("builtin moment curve") {
    const std::string text = R"({
      "d": 3, "interval": [0.0, 1.0],
      "phi": {"type": "builtin", "name": "moment", "params": {}}
    })";
    const LoadedSpec spec = parse_curve_spec(text);
    CHECK(spec.kind == "moment");
    CHECK(spec.curve->phi_deriv(0, 0.5) == doctest::Approx(0.125));
  }
  SUBCASE("builtin oscillatory curve") {
    const std::string text = R"({
      "d": 3, "interval": [0.25, 1.0],
      "phi": {"type": "builtin", "name": "sjolin_chen",
              "params": {"alpha": 1.0, "beta": 3.0}}
    })";
    const LoadedSpec spec = parse_curve_spec(text);
    CHECK(spec.kind == "sjolin_chen");
    CHECK(!spec.phi.has_value());
  }
  SUBCASE("malformed input is a parse error") {
    CHECK_THROWS_AS(parse_curve_spec("{ not json"), Error);
    CHECK_THROWS_AS(parse_curve_spec(R"({"d": 3})"), Error);
    CHECK_THROWS_AS(parse_curve_spec(R"({
      "d": 3, "interval": [0, 1],
      "phi": {"type": "builtin", "name": "no_such_curve", "params": {}}
    })"),
                    Error);
  }
}

TEST_CASE("decomposition exports") {
  Decomposition dec;
  dec.source = "unit";
  dec.pieces.push_back({0.0, 0.5, 0.0, 1, 1.0, 1.5, 1});
  dec.pieces.push_back({0.5, 1.0, 0.0, 1, 0.9, 1.4, 1});
  dec.stats.piece_count = 2;
  dec.stats.n_effective = 2.0;

  SUBCASE("csv has a header and one row per piece") {
    std::istringstream csv(decomposition_to_csv(dec));
    std::string line;
    REQUIRE(std::getline(csv, line));
    CHECK(line == "lo,hi,center,exponent,lower_const,upper_const,sign");
    int rows = 0;
    while (std::getline(csv, line))
      if (!line.empty()) ++rows;
    CHECK(rows == 2);
  }
  SUBCASE("certificate json echoes the configuration and verifies pieces") {
    const AnalyticFunction f = testutil::monomial(1, 16.0);
    DecomposeConfig cfg;
    const auto j = nlohmann::json::parse(decomposition_certificate_json(dec, f, 256, cfg));
    CHECK(j["config"]["theta"] == cfg.theta);
    CHECK(j["stats"]["piece_count"] == 2);
    REQUIRE(j["pieces"].size() == 2);
    for (const auto& p : j["pieces"]) {
      CHECK(p.contains("verified"));
      CHECK(p.contains("lower_slack"));
    }
  }
}

TEST_CASE("norm report exports") {
  NormReport rep;
  rep.curve_id = "moment-3";
  rep.test_function = "indicator[0,1]";
  rep.extension_norm_value = 2.0;
  rep.source_norm = 1.0;
  rep.ratio = 2.0;
  rep.label = 3.0;
  const auto j = nlohmann::json::parse(norm_report_to_json(rep));
  CHECK(j["curve_id"] == "moment-3");
  CHECK(j["ratio"] == 2.0);

  std::istringstream csv(reports_to_csv({rep, rep}));
  std::string line;
  REQUIRE(std::getline(csv, line));
  CHECK(line.find("label") != std::string::npos);
  CHECK(line.find("ratio") != std::string::npos);

  std::istringstream plot(reports_to_plot_data({rep}));
  double a = 0.0, b = 0.0;
  plot >> a >> b;
  CHECK(a == 3.0);
  CHECK(b == 2.0);
}

TEST_CASE("atomic writes") {
  const fs::path dir = fs::temp_directory_path() / "freqcurve_io_test";
  fs::create_directories(dir);
  const fs::path target = dir / "out.txt";
  atomic_write(target, "hello\n");
  std::ifstream in(target);
  std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CHECK(content == "hello\n");
  atomic_write(target, "replaced\n");
  std::ifstream in2(target);
  std::string content2((std::istreambuf_iterator<char>(in2)), std::istreambuf_iterator<char>());
  CHECK(content2 == "replaced\n");
  // no stray temporaries left behind
  int entries = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir)) ++entries;
  CHECK(entries == 1);
  fs::remove_all(dir);
}

TEST_CASE("spec round-trip through a file") {
  const fs::path dir = fs::temp_directory_path() / "freqcurve_spec_test";
  fs::create_directories(dir);
  const fs::path path = dir / "curve.json";
  atomic_write(path, R"({
    "d": 2, "interval": [0.0, 1.0],
    "phi": {"type": "builtin", "name": "moment", "params": {}}
  })");
  const LoadedSpec spec = load_curve_spec(path);
  CHECK(spec.d == 2);
  CHECK(spec.curve->phi_deriv(2, 0.3) == doctest::Approx(2.0));
  fs::remove_all(dir);
}
