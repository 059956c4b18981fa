// Batch front end: cabinet and quadcopter pipelines, exporters, inverse
// design problems, claw planning and the sketch DSL.
//
// Exit codes: 0 ok, 2 validation, 3 fabrication, 4 solver, 5 plan budget.

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "cdm/design_space.hpp"
#include "cdm/detail/format.hpp"
#include "cdm/error.hpp"
#include "cdm/fabricate.hpp"
#include "cdm/inverse.hpp"
#include "cdm/io.hpp"
#include "cdm/performance.hpp"
#include "cdm/qcontrol.hpp"
#include "cdm/robotics.hpp"
#include "cdm/sketchcad.hpp"
#include "cdm/solids.hpp"

namespace {

using cdm::io::json;
namespace fs = std::filesystem;

int exit_code(cdm::ErrorCategory c) {
  switch (c) {
    case cdm::ErrorCategory::validation: return 2;
    case cdm::ErrorCategory::fabrication: return 3;
    case cdm::ErrorCategory::solver: return 4;
    case cdm::ErrorCategory::budget: return 5;
  }
  return 1;
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("CDM_SEED")) {
    try {
      std::size_t used = 0;
      const long long v = std::stoll(env, &used);
      if (used == std::string(env).size() && v >= 0) return static_cast<std::uint64_t>(v);
    } catch (const std::exception&) {
    }
    throw cdm::InvalidArgument("CDM_SEED must be a nonnegative integer");
  }
  return 0;
}

cdm::Vec3 parse_triple(const std::string& text, const char* what) {
  std::stringstream ss(text);
  std::string part;
  std::vector<double> v;
  while (std::getline(ss, part, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(part, &used));
      if (used != part.size()) throw std::invalid_argument(part);
    } catch (const std::exception&) {
      throw cdm::InvalidArgument(std::string(what) + " must be three comma-separated numbers");
    }
  }
  if (v.size() != 3) throw cdm::InvalidArgument(std::string(what) + " must be three comma-separated numbers");
  return {v[0], v[1], v[2]};
}

cdm::fab::Sheet parse_sheet(const std::string& text) {
  const auto x = text.find_first_of("xX");
  try {
    if (x == std::string::npos) throw std::invalid_argument(text);
    std::size_t a = 0, b = 0;
    const double w = std::stod(text.substr(0, x), &a);
    const double h = std::stod(text.substr(x + 1), &b);
    if (a != x || b != text.size() - x - 1) throw std::invalid_argument(text);
    return {w, h};
  } catch (const std::exception&) {
    throw cdm::InvalidArgument("--sheet must look like WxH, e.g. 12x24");
  }
}

void write(const std::string& path, const std::string& text) {
  const fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  cdm::io::write_file(path, text);
}

// ---------------------------------------------------------------------------

struct CabinetArgs {
  double height = 72, width = 48, depth = 12, thickness = 0.5;
  int shelves = 3;
  std::string out = ".";
};

int cmd_cabinet(const CabinetArgs& a) {
  cdm::detail::require(a.thickness > 0, "--thickness must be positive");
  const cdm::perf::CabinetSpec spec{a.height, a.width, a.depth, a.thickness, a.shelves};
  const auto panels = cdm::fab::cabinet_panels(spec);
  fs::create_directories(a.out);
  write((fs::path(a.out) / "cabinet.json").string(), cdm::io::dump(cdm::io::cabinet_assembly_json(spec)));
  write((fs::path(a.out) / "panels.json").string(), cdm::io::dump(cdm::io::panels_json(panels)));
  std::cout << "panels " << panels.size() << "\n"
            << "storage_in3 " << cdm::detail::general(cdm::perf::cabinet_storage(spec)) << "\n"
            << "material_in3 " << cdm::detail::general(cdm::perf::cabinet_material_volume(spec)) << "\n";
  return 0;
}

struct ExportArgs {
  std::string format, in, out, sheet, name = "robot";
  double spacing = 6;
  bool spacing_thickness = false;
};

int export_layout(const ExportArgs& a, const json& doc) {
  std::vector<cdm::fab::Panel> panels;
  std::optional<cdm::perf::CabinetSpec> spec;
  if (doc.contains("cabinet")) {
    spec = cdm::io::parse_cabinet_spec(doc.at("cabinet"));
    panels = cdm::fab::cabinet_panels(*spec);
  } else {
    panels = cdm::io::parse_panels(doc);
  }
  double spacing = a.spacing;
  if (a.spacing_thickness) {
    if (!spec) throw cdm::InvalidArgument("--spacing-thickness needs a cabinet file");
    spacing = spec->board_thickness;
  }
  if (!a.sheet.empty()) {
    const auto sheet = parse_sheet(a.sheet);
    if (!cdm::fab::check_sheet_fit(panels, sheet).empty()) {
      if (!spec) throw cdm::FabricationError("panels do not fit the sheet and the input has no cabinet to scale");
      const auto scaled = cdm::fab::scale_to_sheet(*spec, sheet, true);
      panels = cdm::fab::split_back(cdm::fab::cabinet_panels(scaled.spec));
      const auto bad = cdm::fab::check_sheet_fit(panels, sheet);
      if (!bad.empty()) throw cdm::FabricationError("panel '" + bad.front() + "' still does not fit the sheet");
      std::cout << "scale " << cdm::detail::general(scaled.scale) << "\n";
    }
  }
  const auto layout = cdm::fab::layout_rows(panels, spacing);
  write(a.out, a.format == "svg" ? cdm::fab::write_svg(layout) : cdm::fab::write_dxf(layout));
  std::cout << "panels " << layout.placements.size() << "\n";
  return 0;
}

int cmd_export(const ExportArgs& a) {
  const json doc = cdm::io::parse_json(cdm::io::read_file(a.in), a.in);
  if (a.format == "svg" || a.format == "dxf") return export_layout(a, doc);
  const auto file = cdm::io::parse_assembly(doc);
  if (a.format == "stl") {
    const auto mesh = cdm::triangulate(cdm::io::to_solid(file));
    write(a.out, cdm::write_stl_ascii(mesh, fs::path(a.in).stem().string()));
    std::cout << "triangles " << mesh.triangles.size() << "\n"
              << "watertight " << (cdm::is_watertight(mesh) ? "yes" : "no") << "\n";
    return 0;
  }
  const auto assembly = cdm::io::to_robot(file);
  write(a.out, cdm::robot::to_urdf(assembly, a.name));
  std::cout << "links " << assembly.components().size() << "\n"
            << "joints " << assembly.components().size() - 1 << "\n";
  return 0;
}

struct QuadArgs {
  double bar1 = 130, bar2 = 130, bar_mass = 0.01;
  std::string out;
};

int cmd_quadcopter(const QuadArgs& a) {
  cdm::robot::QuadcopterOptions opt;
  opt.frame_bar_mass = a.bar_mass;
  const auto assembly = cdm::robot::build_quadcopter(a.bar1, a.bar2, opt);
  write(a.out, cdm::io::dump(cdm::io::assembly_json(assembly, "mm")));
  const auto mp = cdm::robot::assembly_mass_properties(assembly);
  std::cout << "components " << assembly.components().size() << "\n"
            << "mass_kg " << cdm::detail::general(mp.mass) << "\n";
  return 0;
}

// ---------------------------------------------------------------------------

struct OptArgs {
  std::string problem, out, front;
  std::optional<std::uint64_t> seed;
  double r = 0.1, R = 1;
  double target = 5000, thickness = 0.5, cost = 0.05;
  int shelves = 0;
  int pop = 40, gens = 30;
  double x = 0, y = 0.5, lower = 0.05, upper = 1;
  double bar_lower = 100, bar_upper = 500;
  int divisions = 5;
  int jobs = 1;
};

int finish_opt(const std::string& out, const json& result, bool converged) {
  write(out, cdm::io::dump(result));
  std::cout << result.dump() << "\n";
  if (!converged) {
    std::cerr << "error: solver did not converge (" << result.value("message", "") << ")\n";
    return 4;
  }
  return 0;
}

std::string csv_number(double v) { return cdm::detail::general(v, 12); }

int cmd_opt(const OptArgs& a) {
  const std::uint64_t seed = resolve_seed(a.seed);
  namespace inv = cdm::inverse;
  if (a.problem == "table") {
    inv::TableProblem p;
    p.r = a.r;
    p.R = a.R;
    const auto r = inv::optimize_table(p);
    return finish_opt(a.out, cdm::io::result_json("table", r, seed), r.converged);
  }
  if (a.problem == "cabinet") {
    inv::CabinetProblem p;
    p.target_storage = a.target;
    p.thickness = a.thickness;
    p.cost_per_cubic_inch = a.cost;
    p.n_shelves = a.shelves;
    const auto r = inv::optimize_cabinet(p);
    json j = cdm::io::result_json("cabinet", r, seed);
    j["storage"] = p.storage(r.x);
    j["cost_x0"] = p.cost(p.x0);
    return finish_opt(a.out, j, r.converged);
  }
  if (a.problem == "arm") {
    const inv::Bounds b{{a.lower, a.upper}, {a.lower, a.upper}};
    const auto r = inv::arm_min_material(a.x, a.y, b);
    json j = cdm::io::result_json("arm", r, seed);
    const auto angles = inv::ik_2link_nearest(a.x, a.y, r.x[0], r.x[1]);
    const auto tip = inv::fk_2link(angles.theta1, angles.theta2, r.x[0], r.x[1]);
    j["theta"] = {angles.theta1, angles.theta2};
    j["reach_error"] = std::hypot(tip.x() - a.x, tip.y() - a.y);
    return finish_opt(a.out, j, r.converged);
  }
  if (a.problem == "framebars") {
    inv::CodesignConfig cfg;
    cfg.lower = a.bar_lower;
    cfg.upper = a.bar_upper;
    cfg.divisions = a.divisions;
    cfg.jobs = a.jobs;
    const auto r = inv::codesign_framebars(cfg);
    json j = cdm::io::result_json("framebars", r.best, seed);
    j["steps"] = r.best_steps;
    json grid = json::array();
    for (const auto& pt : r.points) {
      grid.push_back({{"L1", pt.L1}, {"L2", pt.L2}, {"steps", pt.steps ? json(*pt.steps) : json(nullptr)},
                      {"note", pt.note}});
    }
    j["grid"] = grid;
    return finish_opt(a.out, j, r.best.converged);
  }
  // chair
  const auto space = inv::chair_space();
  const auto front = inv::nsga2(inv::chair_objectives(), space, a.pop, a.gens, seed);
  json rows = json::array();
  std::ostringstream csv;
  for (const auto& p : space.parameters()) csv << p.name << ',';
  csv << "volume,tipping_angle,rank\n";
  for (const auto& ind : front.population) {
    for (const auto& p : space.parameters()) csv << csv_number(ind.x.at(p.name)) << ',';
    csv << csv_number(ind.f[0]) << ',' << csv_number(-ind.f[1]) << ',' << ind.rank << '\n';
    if (ind.rank != 0) continue;
    json row(ind.x);
    row["volume"] = ind.f[0];
    row["tipping_angle"] = -ind.f[1];
    rows.push_back(row);
  }
  if (!a.front.empty()) write(a.front, csv.str());
  json j{{"problem", "chair"}, {"seed", seed},          {"pop", a.pop},
         {"gens", a.gens},     {"iterations", a.gens}, {"converged", true},
         {"front", rows},      {"archive_size", front.archive.size()},
         {"reference", front.reference}, {"hypervolume", front.hypervolume}};
  return finish_opt(a.out, j, true);
}

struct PlanArgs {
  std::string instance, method = "optimal", out;
};

int cmd_plan(const PlanArgs& a) {
  const auto inst = cdm::io::parse_claw_instance(cdm::io::parse_json(cdm::io::read_file(a.instance), a.instance));
  const auto plan = a.method == "greedy" ? cdm::inverse::claw_greedy(inst) : cdm::inverse::claw_optimal(inst);
  cdm::inverse::check_plan(inst, plan);
  write(a.out, cdm::io::dump(cdm::io::plan_json(plan, a.method)));
  std::cout << "cost " << plan.cost << "\nactions " << plan.actions.size() << "\n";
  return 0;
}

struct DslArgs {
  std::string program, dialect = "local", out, units = "in";
};

int cmd_dsl(const DslArgs& a) {
  const auto dialect = a.dialect == "global" ? cdm::sketch::Dialect::global : cdm::sketch::Dialect::local;
  cdm::io::unit_to_mm(a.units);
  const auto solids = cdm::sketch::run(cdm::io::read_file(a.program), dialect);
  write(a.out, cdm::io::dump(cdm::io::sketch_assembly_json(solids, a.units)));
  std::cout << "solids " << solids.size() << "\n";
  return 0;
}

struct LqrArgs {
  double bar1 = 130, bar2 = 130, dt = 0.002, horizon = 10, tol = 0.01;
  double bar_mass = 0.01;
  std::string target = "0,0,1", traj, out;
};

int cmd_lqr(const LqrArgs& a) {
  namespace q = cdm::quad;
  cdm::detail::require(a.bar1 > 0 && a.bar2 > 0, "bar lengths must be positive");
  cdm::detail::require(a.dt > 0 && a.horizon > 0, "--dt and --horizon must be positive");
  const cdm::Vec3 target = parse_triple(a.target, "--target");
  cdm::robot::QuadcopterOptions opt;
  opt.frame_bar_mass = a.bar_mass;
  const auto mp = cdm::robot::assembly_mass_properties(cdm::robot::build_quadcopter(a.bar1, a.bar2, opt));
  const q::PhysParams p = cdm::inverse::hover_params(mp);
  const q::LinearModel model = q::linearize(p);
  const q::LqrWeights w;
  const q::Gain gain = q::lqr_gain(model, w);
  const double residual = q::care_residual(model.A, model.B, w.Q, w.R, gain.P).cwiseAbs().maxCoeff();
  const auto steps = static_cast<std::size_t>(std::llround(a.horizon / a.dt));
  const auto traj = q::simulate(p, gain.K, q::State::Zero(), q::hover(p, target).x_star, a.dt, steps);
  const auto settle = q::time_to_setpoint(traj, target, a.tol);
  if (!a.traj.empty()) write(a.traj, traj.to_csv());
  json j{{"bar1", a.bar1},
         {"bar2", a.bar2},
         {"mass", p.m},
         {"inertia", {p.Ix, p.Iy, p.Iz}},
         {"target", {target.x(), target.y(), target.z()}},
         {"dt", a.dt},
         {"horizon", a.horizon},
         {"rows", traj.states.size()},
         {"Q", "identity"},
         {"R", "identity"},
         {"care_residual", residual},
         {"settle_tolerance", a.tol},
         {"settle_step", settle ? json(*settle) : json(nullptr)},
         {"time_to_setpoint", settle ? json(static_cast<double>(*settle) * a.dt) : json(nullptr)},
         {"final_error", (traj.states.back().head<3>() - target).norm()}};
  write(a.out, cdm::io::dump(j));
  std::cout << j.dump() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Computational design toolkit"};
  app.require_subcommand(1);

  CabinetArgs cab;
  auto* c_cab = app.add_subcommand("cabinet", "Cabinet model and flat panels");
  c_cab->add_option("--height", cab.height, "Height, in")->capture_default_str();
  c_cab->add_option("--width", cab.width, "Width, in")->capture_default_str();
  c_cab->add_option("--depth", cab.depth, "Depth, in")->capture_default_str();
  c_cab->add_option("--thickness", cab.thickness, "Board thickness, in")->capture_default_str();
  c_cab->add_option("--shelves", cab.shelves, "Shelf count")->capture_default_str();
  c_cab->add_option("--out", cab.out, "Output directory")->required();

  ExportArgs ex;
  auto* c_ex = app.add_subcommand("export", "Write SVG, DXF, STL or URDF");
  c_ex->add_option("format", ex.format)->required()->check(CLI::IsMember({"svg", "dxf", "stl", "urdf"}));
  c_ex->add_option("--in", ex.in, "Cabinet, panel or assembly JSON")->required();
  c_ex->add_option("--out", ex.out, "Output file")->required();
  c_ex->add_option("--sheet", ex.sheet, "Stock sheet WxH, in");
  c_ex->add_option("--spacing", ex.spacing, "Gap between panels, in")->capture_default_str();
  c_ex->add_flag("--spacing-thickness", ex.spacing_thickness, "Use the board thickness as the gap");
  c_ex->add_option("--name", ex.name, "URDF robot name")->capture_default_str();

  QuadArgs qa;
  auto* c_quad = app.add_subcommand("quadcopter", "Quadcopter assembly JSON");
  c_quad->add_option("--bar1", qa.bar1, "Frame bar 1 length parameter, mm")->capture_default_str();
  c_quad->add_option("--bar2", qa.bar2, "Frame bar 2 length parameter, mm")->capture_default_str();
  c_quad->add_option("--bar-mass", qa.bar_mass, "Mass of each frame bar, kg")->capture_default_str();
  c_quad->add_option("--out", qa.out, "Output file")->required();

  OptArgs oa;
  auto* c_opt = app.add_subcommand("opt", "Inverse design problems");
  c_opt->add_option("problem", oa.problem)
      ->required()
      ->check(CLI::IsMember({"table", "cabinet", "chair", "arm", "framebars"}));
  c_opt->add_option("--out", oa.out, "Result JSON")->required();
  c_opt->add_option("--seed", oa.seed, "RNG seed (falls back to CDM_SEED, then 0)");
  c_opt->add_option("--r", oa.r, "table: leg radius")->capture_default_str();
  c_opt->add_option("--R", oa.R, "table: top radius")->capture_default_str();
  c_opt->add_option("--target", oa.target, "cabinet: storage, in^3")->capture_default_str();
  c_opt->add_option("--thickness", oa.thickness, "cabinet: board thickness, in")->capture_default_str();
  c_opt->add_option("--cost", oa.cost, "cabinet: cost per in^3")->capture_default_str();
  c_opt->add_option("--shelves", oa.shelves, "cabinet: shelf count")->capture_default_str();
  c_opt->add_option("--pop", oa.pop, "chair: population")->capture_default_str();
  c_opt->add_option("--gens", oa.gens, "chair: generations")->capture_default_str();
  c_opt->add_option("--front", oa.front, "chair: Pareto front CSV");
  c_opt->add_option("--x", oa.x, "arm: target x")->capture_default_str();
  c_opt->add_option("--y", oa.y, "arm: target y")->capture_default_str();
  c_opt->add_option("--lower", oa.lower, "arm: link length lower bound")->capture_default_str();
  c_opt->add_option("--upper", oa.upper, "arm: link length upper bound")->capture_default_str();
  c_opt->add_option("--bar-lower", oa.bar_lower, "framebars: lower bound, mm")->capture_default_str();
  c_opt->add_option("--bar-upper", oa.bar_upper, "framebars: upper bound, mm")->capture_default_str();
  c_opt->add_option("--divisions", oa.divisions, "framebars: grid points per axis")->capture_default_str();
  c_opt->add_option("--jobs", oa.jobs, "framebars: parallel grid evaluations")->capture_default_str();

  PlanArgs pa;
  auto* c_plan = app.add_subcommand("plan", "Claw pick-and-place planning");
  c_plan->add_option("task", "Planning task")->required()->check(CLI::IsMember({"claw"}));
  c_plan->add_option("--instance", pa.instance, "Instance JSON")->required();
  c_plan->add_option("--method", pa.method, "greedy or optimal")
      ->capture_default_str()
      ->check(CLI::IsMember({"greedy", "optimal"}));
  c_plan->add_option("--out", pa.out, "Plan JSON")->required();

  DslArgs da;
  auto* c_dsl = app.add_subcommand("dsl", "Sketch-extrude programs");
  c_dsl->add_option("action", "Action")->required()->check(CLI::IsMember({"run"}));
  c_dsl->add_option("program", da.program, "Program file")->required();
  c_dsl->add_option("--dialect", da.dialect, "local or global")
      ->capture_default_str()
      ->check(CLI::IsMember({"local", "global"}));
  c_dsl->add_option("--units", da.units, "Units recorded in the output")->capture_default_str();
  c_dsl->add_option("--out", da.out, "Assembly JSON")->required();

  LqrArgs la;
  auto* c_lqr = app.add_subcommand("lqr", "Quadcopter LQR take-off simulation");
  c_lqr->add_option("--bar1", la.bar1, "Frame bar 1 length parameter, mm")->capture_default_str();
  c_lqr->add_option("--bar2", la.bar2, "Frame bar 2 length parameter, mm")->capture_default_str();
  c_lqr->add_option("--bar-mass", la.bar_mass, "Mass of each frame bar, kg")->capture_default_str();
  c_lqr->add_option("--target", la.target, "Set point x,y,z, m")->capture_default_str();
  c_lqr->add_option("--dt", la.dt, "Step, s")->capture_default_str();
  c_lqr->add_option("--horizon", la.horizon, "Duration, s")->capture_default_str();
  c_lqr->add_option("--tol", la.tol, "Settling radius, m")->capture_default_str();
  c_lqr->add_option("--traj", la.traj, "Trajectory CSV");
  c_lqr->add_option("--out", la.out, "Summary JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (c_cab->parsed()) return cmd_cabinet(cab);
    if (c_ex->parsed()) return cmd_export(ex);
    if (c_quad->parsed()) return cmd_quadcopter(qa);
    if (c_opt->parsed()) return cmd_opt(oa);
    if (c_plan->parsed()) return cmd_plan(pa);
    if (c_dsl->parsed()) return cmd_dsl(da);
    if (c_lqr->parsed()) return cmd_lqr(la);
  } catch (const cdm::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.category());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
