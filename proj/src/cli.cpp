#include "capt/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <memory>
#include <optional>
#include <sstream>

#include "capt/abpe.hpp"
#include "capt/cauchy.hpp"
#include "capt/coloring.hpp"
#include "capt/harmonic.hpp"
#include "capt/scene.hpp"
#include "capt/svg.hpp"

namespace capt {

namespace {

using nlohmann::json;

std::string fmtg(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::vector<cplx> read_points_csv(const std::string& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), errc::invalid_input, "cannot open points file: " + path);
  std::string line;
  require(static_cast<bool>(std::getline(in, line)), errc::invalid_input,
          "points file is empty: " + path);
  auto strip = [](std::string s) {
    s.erase(0, s.find_first_not_of(" \t\r"));
    s.erase(s.find_last_not_of(" \t\r") + 1);
    return s;
  };
  require(strip(line) == "re,im", errc::invalid_input,
          "points file must start with the header 're,im'");
  std::vector<cplx> pts;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (strip(line).empty()) continue;
    auto comma = line.find(',');
    require(comma != std::string::npos, errc::invalid_input,
            "points file line " + std::to_string(lineno) + ": expected 're,im'");
    try {
      pts.push_back({std::stod(line.substr(0, comma)), std::stod(line.substr(comma + 1))});
    } catch (const std::exception&) {
      fail(errc::invalid_input, "points file line " + std::to_string(lineno) + ": bad number");
    }
  }
  return pts;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), errc::invalid_input, "cannot write file: " + path);
  out << content;
}

std::vector<double> split_nums(const std::string& s, std::size_t expect, const char* what) {
  std::vector<double> out;
  std::string tok;
  std::istringstream ss(s);
  while (std::getline(ss, tok, ',')) {
    try {
      out.push_back(std::stod(tok));
    } catch (const std::exception&) {
      fail(errc::invalid_input, std::string(what) + ": bad number '" + tok + "'");
    }
  }
  require(out.size() == expect, errc::invalid_input,
          std::string(what) + ": expected " + std::to_string(expect) + " comma-separated numbers");
  return out;
}

// ── color rendering ──────────────────────────────────────────────────

void render_scheme(const ColoredScheme& scheme, SvgWriter& svg) {
  auto draw = [&](const SquareSet& set, const std::string& fill) {
    for (const auto& s : set.sorted())
      svg.rect(s.x0(), s.y0(), s.x1(), s.y1(), fill, "#ffffff", s.side() * 0.015);
  };
  for (const auto& gen : scheme.generations) {
    svg.comment("generation " + std::to_string(gen.g));
    draw(gen.yellow, "#f2d388");
    draw(gen.red, "#e4574c");
    draw(gen.green, "#7fc97f");
  }
  for (const auto& gen : scheme.generations) {
    double h = std::ldexp(1.0, -gen.g);
    for (const auto& loop : gen.barrier.loops) {
      std::vector<std::pair<double, double>> pts;
      pts.reserve(loop.size());
      for (auto [i, j] : loop) pts.push_back({i * h, j * h});
      svg.polyline(pts, "#333333", 0.2 * h, true);
    }
  }
}

Window colored_bbox(const ColoredScheme& scheme) {
  double x0 = 1e300, y0 = 1e300, x1 = -1e300, y1 = -1e300;
  for (const auto& gen : scheme.generations)
    for (const auto* set : {&gen.yellow, &gen.red, &gen.green})
      for (const auto& s : set->sorted()) {
        x0 = std::min(x0, s.x0());
        y0 = std::min(y0, s.y0());
        x1 = std::max(x1, s.x1());
        y1 = std::max(y1, s.y1());
      }
  if (x0 > x1) return {-1, -1, 1, 1};
  double pad = 0.05 * std::max(x1 - x0, y1 - y0);
  return {x0 - pad, y0 - pad, x1 + pad, y1 + pad};
}

// ── subcommand bodies ────────────────────────────────────────────────

int cmd_cauchy(const std::string& scene_path, const std::string& points_path,
               const std::string& out_path, std::ostream& out) {
  Scene scene = Scene::parse_file(scene_path);
  PlanarMeasure mu = scene.measure();
  auto pts = read_points_csv(points_path);
  auto vals = cauchy_transform_many(mu, pts);
  std::string csv = "re,im,mu_re,mu_im\n";
  for (std::size_t i = 0; i < pts.size(); ++i)
    csv += fmtg(pts[i].real()) + "," + fmtg(pts[i].imag()) + "," + fmtg(vals[i].real()) + "," +
           fmtg(vals[i].imag()) + "\n";
  if (out_path.empty())
    out << csv;
  else
    write_file(out_path, csv);
  return 0;
}

SquareIntegrand make_phi(const std::string& spec, const Scene& scene) {
  if (spec == "cauchy")
    return SquareIntegrand::abs_cauchy(std::make_shared<PlanarMeasure>(scene.measure()));
  if (spec.rfind("const:", 0) == 0) {
    try {
      return SquareIntegrand::constant(std::stod(spec.substr(6)));
    } catch (const std::exception&) {
      fail(errc::invalid_input, "--phi const: bad number");
    }
  }
  fail(errc::invalid_input, "--phi must be 'cauchy' or 'const:<value>'");
}

int cmd_color(const std::string& scene_path, const std::string& phi_spec, const std::string& a_str,
              int k, int gens, const std::string& window_str, const std::string& out_path,
              std::ostream& out) {
  Scene scene = Scene::parse_file(scene_path);
  auto a_nums = split_nums(a_str, 2, "--a");
  cplx a{a_nums[0], a_nums[1]};
  SquareIntegrand phi = make_phi(phi_spec, scene);

  Window window;
  if (!window_str.empty()) {
    auto w = split_nums(window_str, 4, "--window");
    window = {w[0], w[1], w[2], w[3]};
  } else if (scene.window) {
    window = *scene.window;
  } else {
    window = {a.real() - 8, a.imag() - 8, a.real() + 8, a.imag() + 8};
  }

  LightCache cache;
  ColoredScheme scheme = run_scheme(phi, a, k, gens, window, &cache);
  SvgWriter svg(colored_bbox(scheme));
  render_scheme(scheme, svg);
  svg.text(colored_bbox(scheme).x0 + 0.02, colored_bbox(scheme).y0 + 0.02,
           scheme.terminated_with_unbounded_green ? "green-terminated" : "completed");
  write_file(out_path, svg.str());
  out << (scheme.terminated_with_unbounded_green ? "green-terminated" : "completed") << " after "
      << (scheme.generations.size() - 1) << " generation(s)\n";
  return scheme.terminated_with_unbounded_green ? 1 : 0;
}

int cmd_classify(const std::string& scene_path, const std::string& points_path,
                 const std::string& out_path, std::ostream& out) {
  Scene scene = Scene::parse_file(scene_path);
  auto pts = read_points_csv(points_path);
  SquareIntegrand phi =
      SquareIntegrand::abs_cauchy(std::make_shared<PlanarMeasure>(scene.measure()));
  LightCache cache;
  std::string csv = "re,im,verdict,confidence,witness_delta,decided_k\n";
  for (cplx z : pts) {
    PointClass pc = classify_point(phi, z, {}, &cache);
    csv += fmtg(z.real()) + "," + fmtg(z.imag()) + ",";
    csv += pc.verdict == PointClass::Verdict::Light ? "light" : "heavy";
    csv += ",";
    csv += pc.confidence == PointClass::Confidence::proved_at_resolution ? "proved-at-resolution"
                                                                         : "resolution-limited";
    csv += "," + fmtg(pc.witness_delta) + "," + std::to_string(pc.decided_at_k) + "\n";
  }
  if (out_path.empty())
    out << csv;
  else
    write_file(out_path, csv);
  return 0;
}

json scan_report_json(const ScanResult& scan) {
  json rep;
  rep["window"] = {scan.window.x0, scan.window.y0, scan.window.x1, scan.window.y1};
  rep["res"] = scan.res;
  rep["grid"] = {scan.nx, scan.ny};
  int detected = 0;
  for (auto d : scan.detected) detected += d;
  rep["detected_cells"] = detected;
  rep["component_count"] = scan.components.size();
  json comps = json::array();
  for (const auto& sc : scan.components) {
    json c;
    c["id"] = sc.id;
    c["cells"] = sc.cells.size();
    c["bbox"] = {sc.bbox.x0, sc.bbox.y0, sc.bbox.x1, sc.bbox.y1};
    c["sample_point"] = {sc.sample_point.real(), sc.sample_point.imag()};
    c["connectivity"] = sc.connectivity;
    comps.push_back(c);
  }
  rep["components"] = comps;
  return rep;
}

int cmd_abpe_scan(const std::string& scene_path, const std::string& window_str, double res,
                  int degree, const std::string& out_path, const std::string& report_path,
                  std::ostream& out) {
  Scene scene = Scene::parse_file(scene_path);
  PlanarMeasure mu = scene.measure();
  if (degree <= 0) degree = scene.degree;
  Window window;
  if (!window_str.empty()) {
    auto w = split_nums(window_str, 4, "--window");
    window = {w[0], w[1], w[2], w[3]};
  } else if (scene.window) {
    window = *scene.window;
  } else {
    window = mu.support_bbox(0.25);
  }
  FunctionBasis basis = basis_for(mu, scene.K, degree);
  ScanResult scan = scan_abpe(mu, basis, window, res);

  double bmax = 0;
  for (std::size_t t = 0; t < scan.b_final.size(); ++t)
    if (scan.convergent[t]) bmax = std::max(bmax, scan.b_final[t]);
  if (bmax <= 0) bmax = 1;
  SvgWriter svg(window);
  for (int iy = 0; iy < scan.ny; ++iy)
    for (int ix = 0; ix < scan.nx; ++ix) {
      std::size_t t = static_cast<std::size_t>(iy) * scan.nx + ix;
      cplx c = scan.grid_point(ix, iy);
      std::string color = "#d9d9d9";  // unresolved / divergent
      if (scan.convergent[t])
        color = heat_color(std::log1p(scan.b_final[t]) / std::log1p(bmax));
      svg.rect(c.real() - scan.res / 2, c.imag() - scan.res / 2, c.real() + scan.res / 2,
               c.imag() + scan.res / 2, color);
    }
  for (const auto& sc : scan.components)
    svg.rect(sc.bbox.x0, sc.bbox.y0, sc.bbox.x1, sc.bbox.y1, "", "#000000", scan.res * 0.1);
  svg.text(window.x0 + 2 * scan.res, window.y0 + 2 * scan.res,
           "components: " + std::to_string(scan.components.size()));
  write_file(out_path, svg.str());

  json rep = scan_report_json(scan);
  rep["degree"] = degree;
  if (!report_path.empty()) write_file(report_path, rep.dump(2) + "\n");
  out << "components: " << scan.components.size() << "\n";
  return 0;
}

int cmd_sweep(const std::string& scene_path, const std::string& domain_str, int samples,
              const std::string& out_path, std::ostream& out) {
  Scene scene = Scene::parse_file(scene_path);
  PlanarMeasure mu = scene.measure();
  CircularDomain domain;
  if (domain_str.rfind("disk:", 0) == 0) {
    auto v = split_nums(domain_str.substr(5), 3, "--domain disk");
    domain = CircularDomain::disk({v[0], v[1]}, v[2]);
  } else if (domain_str.rfind("annulus:", 0) == 0) {
    auto v = split_nums(domain_str.substr(8), 4, "--domain annulus");
    domain = CircularDomain::annulus({v[0], v[1]}, v[2], v[3]);
  } else {
    fail(errc::invalid_input, "--domain must be disk:cx,cy,r or annulus:cx,cy,rin,rout");
  }
  BoundaryMeasure swept = sweep(mu, domain, samples);
  std::string table;
  table += "# circle_index theta density\n";
  for (std::size_t ci = 0; ci < swept.circles.size(); ++ci) {
    const auto& part = swept.circles[ci];
    table += "# circle " + std::to_string(ci) + ": center " + fmtg(part.circle.c.real()) + "," +
             fmtg(part.circle.c.imag()) + " radius " + fmtg(part.circle.r) + " mass " +
             fmtg(part.mass) + "\n";
    for (std::size_t t = 0; t < part.density.size(); ++t)
      table += std::to_string(ci) + " " + fmtg(kTwoPi * t / part.density.size()) + " " +
               fmtg(part.density[t]) + "\n";
  }
  for (const auto& a : swept.atoms)
    table += "# atom " + fmtg(a.point.real()) + "," + fmtg(a.point.imag()) + " mass " +
             fmtg(a.mass) + "\n";
  if (out_path.empty())
    out << table;
  else
    write_file(out_path, table);
  return 0;
}

int cmd_decompose(const std::string& scene_path, double res, int degree,
                  const std::string& out_path, std::ostream& out) {
  Scene scene = Scene::parse_file(scene_path);
  PlanarMeasure mu = scene.measure();
  require(!scene.K.empty(), errc::invalid_input, "decompose: scene declares no K shapes");
  DecomposeBudget budget;
  budget.res = res;
  budget.degree = degree > 0 ? degree : scene.degree;
  if (scene.window) budget.window = *scene.window;
  Decomposition dec = decompose(mu, scene.K, budget);

  json rep;
  rep["delta0"] = dec.delta0;
  rep["harmonic_measures_singular"] = dec.harmonic_measures_singular;
  json parts = json::array();
  for (const auto& p : dec.parts) {
    json jp;
    jp["n"] = p.n;
    jp["labels"] = p.labels;
    jp["cells"] = p.region.cells.size();
    jp["bbox"] = {p.region.bbox.x0, p.region.bbox.y0, p.region.bbox.x1, p.region.bbox.y1};
    jp["connectivity"] = p.region.connectivity;
    jp["k_component"] = p.k_component;
    jp["k_connectivity"] = p.k_connectivity;
    jp["connectivity_ok"] = p.connectivity_ok;
    jp["closure_contains_support"] = p.closure_contains_support;
    jp["closure_margin"] = p.closure_margin;
    jp["boundary_ac"] = p.boundary_ac;
    parts.push_back(jp);
  }
  rep["parts"] = parts;
  rep["failures"] = dec.failures;
  rep["diagnostics"] = dec.diagnostics;
  if (!out_path.empty()) write_file(out_path, rep.dump(2) + "\n");

  out << "delta0: ";
  if (dec.delta0.empty()) out << "(empty)";
  for (const auto& l : dec.delta0) out << l << " ";
  out << "\n";
  for (const auto& p : dec.parts) {
    out << "part " << p.n << ": labels [";
    for (std::size_t i = 0; i < p.labels.size(); ++i) out << (i ? " " : "") << p.labels[i];
    out << "] connectivity " << p.region.connectivity << " <= " << p.k_connectivity
        << (p.connectivity_ok ? "" : " VIOLATED") << "\n";
  }
  for (const auto& f : dec.failures) out << "FAILURE: " << f << "\n";
  return dec.ok() ? 0 : 3;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"planar measure toolkit: Cauchy transforms, coloring schemes, harmonic sweeps, "
               "bounded point evaluations"};
  app.require_subcommand(1);

  std::string scene_path, points_path, out_path, report_path, phi_spec = "cauchy";
  std::string a_str = "0,0", window_str, domain_str;
  int k = 1, gens = 3, degree = 0, samples = 4096;
  double res = 1.0 / 32;

  auto* c_cauchy = app.add_subcommand("cauchy", "Cauchy transform at points from a CSV");
  c_cauchy->add_option("--scene", scene_path)->required();
  c_cauchy->add_option("--points", points_path)->required();
  c_cauchy->add_option("--out", out_path);

  auto* c_color = app.add_subcommand("color", "run the coloring scheme and emit an SVG");
  c_color->add_option("--scene", scene_path)->required();
  c_color->add_option("--phi", phi_spec);
  c_color->add_option("--a", a_str);
  c_color->add_option("--k", k);
  c_color->add_option("--gens", gens);
  c_color->add_option("--window", window_str);
  c_color->add_option("--out", out_path)->required();

  auto* c_classify = app.add_subcommand("classify", "light/heavy classification at points");
  c_classify->add_option("--scene", scene_path)->required();
  c_classify->add_option("--points", points_path)->required();
  c_classify->add_option("--out", out_path);

  auto* c_scan = app.add_subcommand("abpe-scan", "scan for analytic bounded point evaluations");
  c_scan->add_option("--scene", scene_path)->required();
  c_scan->add_option("--window", window_str);
  c_scan->add_option("--res", res);
  c_scan->add_option("--degree", degree);
  c_scan->add_option("--out", out_path)->required();
  c_scan->add_option("--report", report_path);

  auto* c_sweep = app.add_subcommand("sweep", "sweep the measure onto a domain boundary");
  c_sweep->add_option("--scene", scene_path)->required();
  c_sweep->add_option("--domain", domain_str)->required();
  c_sweep->add_option("--samples", samples);
  c_sweep->add_option("--out", out_path);

  auto* c_dec = app.add_subcommand("decompose", "structure decomposition of a labeled scene");
  c_dec->add_option("--scene", scene_path)->required();
  c_dec->add_option("--res", res);
  c_dec->add_option("--degree", degree);
  c_dec->add_option("--out", out_path);

  std::vector<std::string> argv_rev(args.rbegin(), args.rend());
  try {
    app.parse(argv_rev);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (app.got_subcommand(c_cauchy)) return cmd_cauchy(scene_path, points_path, out_path, out);
    if (app.got_subcommand(c_color))
      return cmd_color(scene_path, phi_spec, a_str, k, gens, window_str, out_path, out);
    if (app.got_subcommand(c_classify))
      return cmd_classify(scene_path, points_path, out_path, out);
    if (app.got_subcommand(c_scan))
      return cmd_abpe_scan(scene_path, window_str, res, degree, out_path, report_path, out);
    if (app.got_subcommand(c_sweep)) return cmd_sweep(scene_path, domain_str, samples, out_path, out);
    if (app.got_subcommand(c_dec)) return cmd_decompose(scene_path, res, degree, out_path, out);
  } catch (const error& e) {
    err << "error: " << e.what() << "\n";
    switch (e.code()) {
      case errc::window_infeasible:
        return 4;
      case errc::decomposition_failure:
        return 3;
      default:
        return 2;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace capt
