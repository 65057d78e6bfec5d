#include <cmath>
#include <limits>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "heisring/capacity.hpp"
#include "heisring/coords.hpp"
#include "heisring/fields.hpp"
#include "heisring/flow.hpp"

namespace {

using nlohmann::json;
using namespace heisring;

constexpr double kE = 2.71828182845904523536028747135;
constexpr double kPi = 3.141592653589793238462643383279;

// Fixed 17-significant-digit scientific notation keeps CSV output
// byte-identical across runs.
std::string fmt17(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

std::string csv_row(const std::vector<std::string>& cells) {
  std::string row;
  for (size_t i = 0; i < cells.size(); ++i) {
    if (i) row += ',';
    row += cells[i];
  }
  row += '\n';
  return row;
}

void write_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream os(out_path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open output file: " + out_path);
  os << text;
}

struct RingOptions {
  double B = 1.0;
  double A = kE;
  double a = 1.0;
  double b = 1.0;
  double ratio = 0.0;
  double K = 0.0;

  RingSpec resolve() const {
    double B_ = B, A_ = A, a_ = a, b_ = b;
    if (ratio > 0.0) {
      if (!(ratio > 1.0)) throw std::invalid_argument("--ratio must exceed 1");
      B_ = 1.0;
      A_ = ratio;
    }
    if (K > 0.0) {
      if (!(K >= 1.0)) throw std::invalid_argument("--K must be >= 1");
      a_ = K;
      b_ = 1.0;
    }
    return RingSpec(B_, A_, a_, b_);
  }
};

struct QuadOptions {
  int nr = 8;
  int nphi = 8;
  int ntheta = 8;
  int nodes = 4;
  QuadratureSpec resolve() const { return QuadratureSpec(nr, nphi, ntheta, nodes); }
};

void add_ring_options(CLI::App* cmd, RingOptions& ring) {
  auto* ob = cmd->add_option("--B", ring.B, "inner radius");
  auto* oa = cmd->add_option("--A", ring.A, "outer radius");
  auto* oma = cmd->add_option("--a", ring.a, "first semi-axis");
  auto* omb = cmd->add_option("--b", ring.b, "second semi-axis");
  auto* orat = cmd->add_option("--ratio", ring.ratio, "radius ratio A/B (sets B=1, A=ratio)");
  auto* ok = cmd->add_option("--K", ring.K, "distortion (sets a=K, b=1)");
  orat->excludes(ob)->excludes(oa);
  ok->excludes(oma)->excludes(omb);
}

void add_quad_options(CLI::App* cmd, QuadOptions& quad) {
  cmd->add_option("--nr", quad.nr, "radial panels");
  cmd->add_option("--nphi", quad.nphi, "polar panels");
  cmd->add_option("--ntheta", quad.ntheta, "azimuthal panels");
  cmd->add_option("--nodes", quad.nodes, "Gauss nodes per panel");
}

json ring_json(const RingSpec& spec) {
  return {{"B", spec.B}, {"A", spec.A}, {"a", spec.a}, {"b", spec.b}};
}

json quad_json(const QuadratureSpec& q) {
  return {{"nr", q.n_r}, {"nphi", q.n_phi}, {"ntheta", q.n_theta}, {"nodes", q.nodes_per_panel}};
}

// Scales the u0 gradient so the quartic integrand picks up r^(power-3); the
// stock power 3 leaves the field untouched. Verification-harness hook.
ScalarField u0_with_jacobian_power(const RingSpec& spec, double power) {
  ScalarField f = u0_field(spec);
  if (power == 3.0) return f;
  const double quarter = 0.25 * (power - 3.0);
  auto base = f.chart_gradient;
  f.chart_gradient = [base, quarter](const EllipsoidalCoords& c) {
    const HorizontalVector g = base(c);
    const double scale = std::pow(c.r, quarter);
    return HorizontalVector{g.cx * scale, g.cy * scale};
  };
  f.horizontal_gradient = nullptr;  // quadrature uses the chart path
  return f;
}

int cmd_modulus(const RingOptions& ring, const QuadOptions& quad,
                const std::string& format, const std::string& out) {
  const RingSpec spec = ring.resolve();
  const QuadratureSpec q = quad.resolve();
  const EnergyReport report = energy_quadrature(spec, u0_field(spec), q);

  if (format == "json") {
    json doc;
    doc["config"] = {{"command", "modulus"}, {"ring", ring_json(spec)}, {"quadrature", quad_json(q)}};
    doc["results"] = {{"B", spec.B},
                      {"A", spec.A},
                      {"a", spec.a},
                      {"b", spec.b},
                      {"K", spec.distortion()},
                      {"closed_form", report.closed_form},
                      {"quadrature_value", report.value},
                      {"relative_error", report.relative_error},
                      {"node_count", report.node_count}};
    write_output(doc.dump(2) + "\n", out);
  } else {
    std::string text = csv_row({"B", "A", "a", "b", "K", "closed_form", "quadrature_value",
                                "relative_error", "node_count"});
    text += csv_row({fmt17(spec.B), fmt17(spec.A), fmt17(spec.a), fmt17(spec.b),
                     fmt17(spec.distortion()), fmt17(report.closed_form), fmt17(report.value),
                     fmt17(report.relative_error), std::to_string(report.node_count)});
    write_output(text, out);
  }
  return 0;
}

int cmd_sweep(const std::vector<double>& Ks, const std::vector<double>& ratios,
              bool with_quadrature, const QuadOptions& quad, const std::string& format,
              const std::string& out) {
  if (Ks.empty() || ratios.empty())
    throw std::invalid_argument("sweep requires nonempty --K and --ratio lists");
  for (double K : Ks)
    if (!(K >= 1.0)) throw std::invalid_argument("sweep: every K must be >= 1");
  for (double r : ratios)
    if (!(r > 1.0)) throw std::invalid_argument("sweep: every ratio must exceed 1");

  const QuadratureSpec q = quad.resolve();
  json rows = json::array();
  std::string csv = with_quadrature
                        ? csv_row({"K", "ratio", "closed_form", "quadrature_value",
                                   "relative_error", "node_count"})
                        : csv_row({"K", "ratio", "closed_form"});
  for (double K : Ks) {
    for (double ratio : ratios) {
      const RingSpec spec(1.0, ratio, K, 1.0);
      const double closed = closed_form_modulus(spec);
      json row = {{"K", K}, {"ratio", ratio}, {"closed_form", closed}};
      if (with_quadrature) {
        const EnergyReport rep = energy_quadrature(spec, u0_field(spec), q);
        row["quadrature_value"] = rep.value;
        row["relative_error"] = rep.relative_error;
        row["node_count"] = rep.node_count;
        csv += csv_row({fmt17(K), fmt17(ratio), fmt17(closed), fmt17(rep.value),
                        fmt17(rep.relative_error), std::to_string(rep.node_count)});
      } else {
        csv += csv_row({fmt17(K), fmt17(ratio), fmt17(closed)});
      }
      rows.push_back(row);
    }
  }

  if (format == "json") {
    json doc;
    doc["config"] = {{"command", "sweep"},
                     {"K", Ks},
                     {"ratio", ratios},
                     {"with_quadrature", with_quadrature},
                     {"quadrature", quad_json(q)}};
    doc["results"] = rows;
    write_output(doc.dump(2) + "\n", out);
  } else {
    write_output(csv, out);
  }
  return 0;
}

std::string trajectory_csv(const Trajectory& traj) {
  std::string text = csv_row({"tau", "x", "y", "t", "r", "phi", "theta", "u", "speed_h",
                              "rr_residual", "eq8_residual"});
  for (const FlowState& s : traj.states) {
    text += csv_row({fmt17(s.tau), fmt17(s.point.x), fmt17(s.point.y), fmt17(s.point.t),
                     fmt17(s.coords.r), fmt17(s.coords.phi), fmt17(s.coords.theta),
                     fmt17(s.u_value), fmt17(s.speed_h), fmt17(s.rr_residual),
                     fmt17(s.eq8_residual)});
  }
  return text;
}

int cmd_flow(const RingOptions& ring, int seeds_phi, int seeds_theta,
             const StepControl& control, const std::string& format, const std::string& out) {
  if (seeds_phi < 1 || seeds_theta < 1)
    throw std::invalid_argument("flow: seed grid must be nonempty");
  const RingSpec spec = ring.resolve();
  const Density rho0 = extremal_density(spec);

  json seeds = json::array();
  std::string summary_csv =
      csv_row({"phi0", "theta0", "status", "states", "r_end", "u_end", "horizontal_length",
               "line_integral_rho0", "max_rr_residual", "max_eq8_residual",
               "max_horizontality", "max_speed_law_residual"});
  bool any_failure = false;

  for (int i = 0; i < seeds_phi; ++i) {
    const double phi0 = kPi * (i + 0.5) / seeds_phi;
    for (int j = 0; j < seeds_theta; ++j) {
      const double theta0 = 2.0 * kPi * j / seeds_theta;
      json entry = {{"phi0", phi0}, {"theta0", theta0}};
      try {
        const Trajectory traj = integrate_trajectory(spec, phi0, theta0, control);
        const double li = line_integral(traj, rho0);
        const FlowState& last = traj.states.back();
        entry["status"] = "ok";
        entry["states"] = traj.states.size();
        entry["r_end"] = last.coords.r;
        entry["u_end"] = last.u_value;
        entry["horizontal_length"] = traj.horizontal_length;
        entry["line_integral_rho0"] = li;
        entry["max_rr_residual"] = traj.max_rr_residual;
        entry["max_eq8_residual"] = traj.max_eq8_residual;
        entry["max_horizontality"] = traj.max_horizontality;
        entry["max_speed_law_residual"] = traj.max_speed_law_residual;
        summary_csv += csv_row({fmt17(phi0), fmt17(theta0), "ok",
                                std::to_string(traj.states.size()), fmt17(last.coords.r),
                                fmt17(last.u_value), fmt17(traj.horizontal_length), fmt17(li),
                                fmt17(traj.max_rr_residual), fmt17(traj.max_eq8_residual),
                                fmt17(traj.max_horizontality),
                                fmt17(traj.max_speed_law_residual)});
        if (!out.empty()) {
          std::ostringstream name;
          name << out << "_phi" << i << "_theta" << j << ".csv";
          write_output(trajectory_csv(traj), name.str());
        }
      } catch (const std::exception& e) {
        any_failure = true;
        entry["status"] = "error";
        entry["error"] = e.what();
        summary_csv += csv_row({fmt17(phi0), fmt17(theta0), "error", "0", "nan", "nan", "nan",
                                "nan", "nan", "nan", "nan", "nan"});
        std::cerr << "flow seed (" << phi0 << ", " << theta0 << ") failed: " << e.what()
                  << "\n";
      }
      seeds.push_back(entry);
    }
  }

  const std::string summary_path = out.empty() ? std::string() : out + "_summary." + format;
  if (format == "json") {
    json doc;
    doc["config"] = {{"command", "flow"},
                     {"ring", ring_json(spec)},
                     {"seeds_phi", seeds_phi},
                     {"seeds_theta", seeds_theta},
                     {"rel_tol", control.rel_tol},
                     {"abs_tol", control.abs_tol}};
    doc["results"] = seeds;
    write_output(doc.dump(2) + "\n", summary_path);
  } else {
    write_output(summary_csv, summary_path);
  }
  return any_failure ? 2 : 0;
}

struct Check {
  std::string name;
  bool pass = false;
  double measured = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;
};

int cmd_verify(const RingOptions& ring, const QuadOptions& quad, int seeds_phi,
               int seeds_theta, const StepControl& control, double jacobian_power,
               const std::string& format, const std::string& out) {
  const RingSpec spec = ring.resolve();
  const QuadratureSpec q = quad.resolve();
  std::vector<Check> checks;
  auto push = [&checks](const std::string& name, double measured, double expected,
                        double tol) {
    checks.push_back({name, std::abs(measured - expected) <= tol, measured, expected, tol});
  };

  const JIntegrals js = j_integrals(q);
  push("j1", js.j1, 3.0 * kPi * kPi / 8.0, 1e-10);
  push("j2", js.j2, 3.0 * kPi * kPi / 8.0, 1e-10);
  push("j3", js.j3, kPi * kPi / 4.0, 1e-10);

  const double closed = closed_form_modulus(spec);
  const EnergyReport energy =
      energy_quadrature(spec, u0_with_jacobian_power(spec, jacobian_power), q);
  push("energy_vs_closed_form", energy.value / closed, 1.0, 1e-6);

  for (double K : {1.0, 2.0}) {
    const RingSpec pspec(spec.B, spec.A, K, 1.0);
    double worst = std::numeric_limits<double>::infinity();
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const auto [e0, e1] = perturbation_extremality(pspec, seed, 0.05, q);
      (void)e0;
      worst = std::min(worst, e1 - closed_form_modulus(pspec));
    }
    // worst margin must stay above -1e-8
    std::string name = "extremality_K" + std::to_string(static_cast<int>(K));
    checks.push_back({name, worst >= -1e-8, worst, 0.0, 1e-8});
  }

  double max_rr = 0.0, max_eq8 = 0.0, max_horiz = 0.0, max_law = 0.0, worst_li = 0.0;
  const Density rho0 = extremal_density(spec);
  for (int i = 0; i < seeds_phi; ++i) {
    const double phi0 = kPi * (i + 0.5) / seeds_phi;
    for (int j = 0; j < seeds_theta; ++j) {
      const double theta0 = 2.0 * kPi * j / seeds_theta;
      const Trajectory traj = integrate_trajectory(spec, phi0, theta0, control);
      max_rr = std::max(max_rr, traj.max_rr_residual);
      max_eq8 = std::max(max_eq8, traj.max_eq8_residual);
      max_horiz = std::max(max_horiz, traj.max_horizontality);
      max_law = std::max(max_law, traj.max_speed_law_residual);
      worst_li = std::max(worst_li, std::abs(line_integral(traj, rho0) - 1.0));
    }
  }
  push("flow_rr_residual", max_rr, 0.0, 1e-8);
  push("flow_eq8_residual", max_eq8, 0.0, 1e-8);
  push("flow_horizontality", max_horiz, 0.0, 1e-10);
  push("flow_speed_law", max_law, 0.0, 1e-8);
  push("line_integral_rho0", 1.0 + worst_li, 1.0, 1e-6);

  const HolderReport holder = holder_lower_bound(spec, rho0, q);
  push("holder_equality", holder.rho4_integral / holder.lower_bound, 1.0, 1e-6);
  push("holder_pointwise_violations", static_cast<double>(holder.pointwise_violations), 0.0,
       0.5);

  const RingSpec scaled(2.5 * spec.B, 2.5 * spec.A, spec.a, spec.b);
  push("scale_invariance", closed_form_modulus(scaled) / closed, 1.0, 1e-13);

  bool all_pass = true;
  for (const Check& c : checks) all_pass = all_pass && c.pass;

  if (format == "json") {
    json rows = json::array();
    for (const Check& c : checks)
      rows.push_back({{"name", c.name},
                      {"status", c.pass ? "pass" : "fail"},
                      {"measured", c.measured},
                      {"expected", c.expected},
                      {"tolerance", c.tolerance}});
    json doc;
    doc["config"] = {{"command", "verify"},
                     {"ring", ring_json(spec)},
                     {"quadrature", quad_json(q)},
                     {"seeds_phi", seeds_phi},
                     {"seeds_theta", seeds_theta}};
    doc["results"] = {{"checks", rows}, {"overall", all_pass ? "pass" : "fail"}};
    write_output(doc.dump(2) + "\n", out);
  } else {
    std::string text = csv_row({"name", "status", "measured", "expected", "tolerance"});
    for (const Check& c : checks)
      text += csv_row({c.name, c.pass ? "pass" : "fail", fmt17(c.measured),
                       fmt17(c.expected), fmt17(c.tolerance)});
    write_output(text, out);
  }
  return all_pass ? 0 : 3;
}

int cmd_field_eval(const RingOptions& ring, double x, double y, double t,
                   const std::string& format, const std::string& out) {
  const RingSpec spec = ring.resolve();
  const Point p{x, y, t};
  const double q4 = spec.gauge4(p);
  const RingRegion region = ring_classify(spec, p);
  const double u = u0_value(spec, p);

  bool on_axis = false;
  EllipsoidalCoords coords;
  HorizontalVector grad;
  try {
    coords = from_cartesian(p, spec.a, spec.b);
    grad = u0_gradient(spec, p);
  } catch (const std::domain_error&) {
    on_axis = true;
  }

  if (format == "json") {
    json doc;
    doc["config"] = {{"command", "field-eval"},
                     {"ring", ring_json(spec)},
                     {"point", {{"x", x}, {"y", y}, {"t", t}}}};
    json res = {{"q", q4},
                {"r", std::pow(q4, 0.25)},
                {"u0", u},
                {"region", to_string(region)},
                {"on_axis", on_axis}};
    if (!on_axis) {
      res["phi"] = coords.phi;
      res["theta"] = coords.theta;
      res["grad_x"] = grad.cx;
      res["grad_y"] = grad.cy;
      res["grad_norm"] = horizontal_norm(grad);
    }
    doc["results"] = res;
    write_output(doc.dump(2) + "\n", out);
  } else {
    std::string text = csv_row(
        {"x", "y", "t", "q", "r", "u0", "region", "phi", "theta", "grad_x", "grad_y",
         "grad_norm"});
    const double nan = std::nan("");
    text += csv_row({fmt17(x), fmt17(y), fmt17(t), fmt17(q4), fmt17(std::pow(q4, 0.25)),
                     fmt17(u), to_string(region), fmt17(on_axis ? nan : coords.phi),
                     fmt17(on_axis ? nan : coords.theta), fmt17(on_axis ? nan : grad.cx),
                     fmt17(on_axis ? nan : grad.cy),
                     fmt17(on_axis ? nan : horizontal_norm(grad))});
    write_output(text, out);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Koranyi ellipsoidal ring modulus toolkit for the Heisenberg group"};
  app.require_subcommand(1);

  std::string format = "csv";
  std::string out;
  app.add_option("--format", format, "output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  app.add_option("--out", out, "output path (flow: path prefix)");

  RingOptions ring;
  QuadOptions quad;
  StepControl control;
  int seeds_phi = 4, seeds_theta = 4;
  std::vector<double> sweep_K, sweep_ratio;
  bool with_quadrature = false;
  double jacobian_power = 3.0;
  double px = 0.0, py = 0.0, pt = 0.0;

  CLI::App* modulus = app.add_subcommand("modulus", "closed-form and quadrature modulus");
  modulus->fallthrough();
  add_ring_options(modulus, ring);
  add_quad_options(modulus, quad);

  CLI::App* sweep = app.add_subcommand("sweep", "tabulate the modulus over (K, A/B)");
  sweep->fallthrough();
  sweep->add_option("--K", sweep_K, "distortion values")->required()->delimiter(',');
  sweep->add_option("--ratio", sweep_ratio, "radius ratios A/B")->required()->delimiter(',');
  sweep->add_flag("--with-quadrature", with_quadrature, "add a quadrature column");
  add_quad_options(sweep, quad);

  CLI::App* flow = app.add_subcommand("flow", "integrate extremal flow trajectories");
  flow->fallthrough();
  add_ring_options(flow, ring);
  flow->add_option("--seeds-phi", seeds_phi, "phi seed count");
  flow->add_option("--seeds-theta", seeds_theta, "theta seed count");
  flow->add_option("--rel-tol", control.rel_tol, "integrator relative tolerance");
  flow->add_option("--abs-tol", control.abs_tol, "integrator absolute tolerance");
  flow->add_option("--max-steps", control.max_steps, "integrator step limit");

  CLI::App* verify = app.add_subcommand("verify", "run the full verification suite");
  verify->fallthrough();
  add_ring_options(verify, ring);
  add_quad_options(verify, quad);
  verify->add_option("--seeds-phi", seeds_phi, "phi seed count");
  verify->add_option("--seeds-theta", seeds_theta, "theta seed count");
  verify->add_option("--rel-tol", control.rel_tol, "integrator relative tolerance");
  verify->add_option("--abs-tol", control.abs_tol, "integrator absolute tolerance");
  verify->add_option("--inject-jacobian-power", jacobian_power)->group("");

  CLI::App* field_eval = app.add_subcommand("field-eval", "evaluate u0 at a point");
  field_eval->fallthrough();
  add_ring_options(field_eval, ring);
  field_eval->add_option("--x", px, "x coordinate")->required();
  field_eval->add_option("--y", py, "y coordinate")->required();
  field_eval->add_option("--t", pt, "t coordinate")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (modulus->parsed()) return cmd_modulus(ring, quad, format, out);
    if (sweep->parsed()) return cmd_sweep(sweep_K, sweep_ratio, with_quadrature, quad, format, out);
    if (flow->parsed()) return cmd_flow(ring, seeds_phi, seeds_theta, control, format, out);
    if (verify->parsed())
      return cmd_verify(ring, quad, seeds_phi, seeds_theta, control, jacobian_power, format, out);
    if (field_eval->parsed()) return cmd_field_eval(ring, px, py, pt, format, out);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
