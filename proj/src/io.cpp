#include "freqcurve/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "freqcurve/errors.hpp"

namespace freqcurve {

namespace {

using nlohmann::json;

json analytic_to_json(const AnalyticFunction& f) {
  json j;
  j["center"] = f.center();
  j["radius"] = f.radius();
  std::vector<double> coeffs(f.coeffs().data(), f.coeffs().data() + f.coeffs().size());
  j["coeffs"] = coeffs;
  j["tail_bound"] = f.tail_bound();
  return j;
}

AnalyticFunction analytic_from_json(const json& j) {
  if (!j.contains("center") || !j.contains("radius") || !j.contains("coeffs"))
    fail(ErrorCode::ParseError, "series record needs center, radius, coeffs");
  const std::vector<double> coeffs = j.at("coeffs").get<std::vector<double>>();
  Eigen::VectorXd c = Eigen::Map<const Eigen::VectorXd>(coeffs.data(), coeffs.size());
  const double center = j.at("center").get<double>();
  const double radius = j.at("radius").get<double>();
  if (j.contains("tail_bound"))
    return AnalyticFunction(center, radius, c, j.at("tail_bound").get<double>());
  return AnalyticFunction(center, radius, c);
}

json parse_json(const std::string& text) {
  json j = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) fail(ErrorCode::ParseError, "malformed JSON");
  return j;
}

}  // namespace

std::string analytic_to_text(const AnalyticFunction& f) { return analytic_to_json(f).dump(2); }

AnalyticFunction analytic_from_text(const std::string& text) {
  return analytic_from_json(parse_json(text));
}

LoadedSpec parse_curve_spec(const std::string& text) {
  const json j = parse_json(text);
  LoadedSpec spec;
  if (!j.contains("d") || !j.contains("phi") || !j.contains("interval"))
    fail(ErrorCode::ParseError, "spec needs d, phi, interval");
  spec.d = j.at("d").get<int>();
  const auto& interval = j.at("interval");
  if (!interval.is_array() || interval.size() != 2)
    fail(ErrorCode::ParseError, "interval must be [lo, hi]");
  spec.lo = interval[0].get<double>();
  spec.hi = interval[1].get<double>();
  if (!(spec.lo < spec.hi)) fail(ErrorCode::ParseError, "interval must be nonempty");

  const json& phi = j.at("phi");
  const std::string type = phi.value("type", "series");
  if (type == "series") {
    spec.phi = analytic_from_json(phi);
    spec.curve = std::make_shared<SimpleCurve>(spec.d, *spec.phi, "series");
    spec.kind = "series";
  } else if (type == "builtin") {
    const std::string name = phi.value("name", "");
    const json params = phi.value("params", json::object());
    if (name == "moment") {
      auto c = std::make_shared<SimpleCurve>(
          make_moment_curve(spec.d, params.value("radius", 72.0)));
      spec.phi = c->phi();
      spec.curve = c;
    } else if (name == "planted_zero") {
      std::vector<double> q = params.value("q", std::vector<double>{-2.0, 1.0});
      Eigen::VectorXd qv = Eigen::Map<const Eigen::VectorXd>(q.data(), q.size());
      auto c = std::make_shared<SimpleCurve>(
          make_planted_zero_curve(spec.d, qv, params.value("radius", 72.0)));
      spec.phi = c->phi();
      spec.curve = c;
    } else if (name == "sjolin_chen") {
      if (!params.contains("alpha") || !params.contains("beta"))
        fail(ErrorCode::ParseError, "sjolin_chen needs alpha and beta");
      spec.curve = std::make_shared<SjolinChenCurve>(spec.d, params.at("alpha").get<double>(),
                                                     params.at("beta").get<double>());
    } else {
      fail(ErrorCode::ParseError, "unknown builtin curve: " + name);
    }
    spec.kind = name;
  } else {
    fail(ErrorCode::ParseError, "phi.type must be series or builtin");
  }
  return spec;
}

LoadedSpec load_curve_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::ParseError, "cannot open spec file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_curve_spec(buf.str());
}

void atomic_write(const std::filesystem::path& path, const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) fail(ErrorCode::ParseError, "cannot write " + tmp.string());
    out << content;
  }
  std::filesystem::rename(tmp, path);
}

std::string decomposition_to_csv(const Decomposition& dec) {
  std::ostringstream os;
  os.precision(17);
  os << "lo,hi,center,exponent,lower_const,upper_const,sign\n";
  for (const auto& p : dec.pieces)
    os << p.lo << "," << p.hi << "," << p.center << "," << p.exponent << "," << p.lower_const
       << "," << p.upper_const << "," << p.sign << "\n";
  return os.str();
}

std::string decomposition_certificate_json(const Decomposition& dec, const AnalyticFunction& phid,
                                           int grid_n, const DecomposeConfig& cfg) {
  json j;
  j["source"] = dec.source;
  j["config"] = {{"theta", cfg.theta},
                 {"margin", cfg.margin},
                 {"depth_max", cfg.depth_max},
                 {"degree_cap", cfg.degree_cap},
                 {"width_min_rel", cfg.width_min_rel},
                 {"search_grid", cfg.search_grid}};
  j["stats"] = {{"piece_count", dec.stats.piece_count},
                {"max_depth", dec.stats.max_depth},
                {"n_effective", dec.stats.n_effective}};
  j["verification_grid_n"] = grid_n;
  json pieces = json::array();
  for (const auto& p : dec.pieces) {
    const PieceCheck chk = verify_piece(phid, p, grid_n);
    pieces.push_back({{"lo", p.lo},
                      {"hi", p.hi},
                      {"center", p.center},
                      {"exponent", p.exponent},
                      {"lower_const", p.lower_const},
                      {"upper_const", p.upper_const},
                      {"sign", p.sign},
                      {"verified", chk.pass},
                      {"lower_slack", chk.lower_slack},
                      {"upper_slack", chk.upper_slack}});
  }
  j["pieces"] = pieces;
  return j.dump(2) + "\n";
}

std::string certificates_to_json(const std::vector<GeometricCertificate>& certs, long budget,
                                 std::uint64_t seed) {
  json arr = json::array();
  for (size_t i = 0; i < certs.size(); ++i) {
    const auto& c = certs[i];
    std::vector<double> argmin(c.argmin.data(), c.argmin.data() + c.argmin.size());
    arr.push_back({{"piece_id", i},
                   {"piece",
                    {{"lo", c.piece.lo},
                     {"hi", c.piece.hi},
                     {"center", c.piece.center},
                     {"exponent", c.piece.exponent},
                     {"sign", c.piece.sign}}},
                   {"k_est", c.k_est},
                   {"argmin", argmin},
                   {"samples", c.samples},
                   {"refinement_rounds", c.refinement_rounds}});
  }
  json j;
  j["budget"] = budget;
  j["seed"] = seed;
  j["certificates"] = arr;
  return j.dump(2) + "\n";
}

namespace {

json report_to_json_obj(const NormReport& rep) {
  return json{{"curve_id", rep.curve_id},
              {"test_function", rep.test_function},
              {"p", rep.pair.p},
              {"q", rep.pair.q},
              {"p_prime", rep.pair.p_prime},
              {"d", rep.pair.d},
              {"grid", {{"box", rep.grid.box}, {"n", rep.grid.n}, {"d", rep.grid.d}}},
              {"weighted", rep.weighted},
              {"extension_norm", rep.extension_norm_value},
              {"source_norm", rep.source_norm},
              {"ratio", rep.ratio},
              {"panel_count", rep.panel_count},
              {"degraded", rep.degraded},
              {"zero_input", rep.zero_input},
              {"label", rep.label}};
}

}  // namespace

std::string norm_report_to_json(const NormReport& rep) {
  return report_to_json_obj(rep).dump(2) + "\n";
}

std::string reports_to_csv(const std::vector<NormReport>& reports) {
  std::ostringstream os;
  os.precision(17);
  os << "label,ratio,extension_norm,source_norm,degraded,zero_input\n";
  for (const auto& r : reports)
    os << r.label << "," << r.ratio << "," << r.extension_norm_value << "," << r.source_norm
       << "," << (r.degraded ? 1 : 0) << "," << (r.zero_input ? 1 : 0) << "\n";
  return os.str();
}

std::string reports_to_plot_data(const std::vector<NormReport>& reports) {
  std::ostringstream os;
  os.precision(17);
  for (const auto& r : reports) os << r.label << " " << r.ratio << "\n";
  return os.str();
}

}  // namespace freqcurve
