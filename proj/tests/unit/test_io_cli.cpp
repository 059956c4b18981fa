#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <string>
#include <sys/wait.h>

#include "cdm/io.hpp"

using namespace cdm;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "cdm_cli_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

// Runs the CLI with stdout and stderr discarded; returns its exit status.
int cli(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " + std::string(CDM_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string data(const std::string& name) { return std::string(CDM_DATA_DIR) + "/" + name; }

io::json load(const fs::path& p) { return io::parse_json(io::read_file(p.string()), p.string()); }

}  // namespace

// ---------------------------------------------------------------------------
// JSON documents

TEST(Io, QuadcopterAssemblyRoundTrip) {
  const auto a = robot::build_quadcopter();
  const auto j = io::assembly_json(a);
  const auto back = io::to_robot(io::parse_assembly(j));
  ASSERT_EQ(back.components().size(), a.components().size());
  EXPECT_EQ(io::assembly_json(back), j);
  const auto m0 = robot::assembly_mass_properties(a), m1 = robot::assembly_mass_properties(back);
  EXPECT_DOUBLE_EQ(m0.mass, m1.mass);
  EXPECT_LE((m0.inertia - m1.inertia).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_EQ(robot::to_urdf(back), robot::to_urdf(a));
}

TEST(Io, UnitsScaleToMillimetres) {
  const io::json j = io::json::parse(R"({"units": "m", "components": [
      {"name": "base", "kind": "box", "dims": [0.1, 0.2, 0.3], "mass": 1, "translation": [0, 0, 0]},
      {"name": "arm", "kind": "cylinder", "dims": [0.01, 0.5], "mass": 0.5, "translation": [0, 0, 0.25],
       "rotation_deg": 90, "parent": "base", "joint": {"type": "revolute", "axis": [0, 1, 0],
       "lower": -1, "upper": 1}}]})");
  const auto a = io::to_robot(io::parse_assembly(j));
  const auto& base = std::get<robot::Cuboid>(a.component("base").geometry);
  EXPECT_DOUBLE_EQ(base.w, 100);
  EXPECT_DOUBLE_EQ(base.d, 300);
  EXPECT_DOUBLE_EQ(a.component("arm").translation.z(), 250);
  EXPECT_NEAR(a.component("arm").rpy.z(), std::numbers::pi / 2, 1e-15);
  EXPECT_EQ(a.joint("arm").type, robot::JointType::revolute);
  EXPECT_DOUBLE_EQ(io::unit_to_mm("in"), 25.4);
}

TEST(Io, SchemaErrors) {
  auto bad = [](const char* text) { return io::parse_assembly(io::json::parse(text)); };
  EXPECT_THROW(bad(R"({"components": []})"), InvalidArgument);
  EXPECT_THROW(bad(R"({"units": "ft", "components": []})"), InvalidArgument);
  EXPECT_THROW(bad(R"({"units": "mm", "components": [{"name": "a", "kind": "cone", "dims": [1],
      "translation": [0,0,0]}]})"),
               InvalidArgument);
  EXPECT_THROW(bad(R"({"units": "mm", "components": [{"name": "a", "kind": "box", "dims": [1, 2],
      "translation": [0,0,0]}]})"),
               InvalidArgument);
  EXPECT_THROW(bad(R"({"units": "mm", "components": [
      {"name": "a", "kind": "box", "dims": [1,1,1], "translation": [0,0,0]},
      {"name": "a", "kind": "box", "dims": [1,1,1], "translation": [0,0,0]}]})"),
               InvalidArgument);
  EXPECT_THROW(io::parse_json("{", "x"), InvalidArgument);
}

TEST(Io, CabinetAndPanels) {
  const perf::CabinetSpec s{72, 48, 12, 0.5, 3};
  EXPECT_EQ(io::parse_cabinet_spec(io::cabinet_spec_json(s)).n_shelves, 3);
  const auto j = io::cabinet_assembly_json(s);
  const auto file = io::parse_assembly(j);
  EXPECT_EQ(file.units, "in");
  EXPECT_EQ(file.components.size(), 8u);
  // One board per flat panel.
  const auto panels = fab::cabinet_panels(s);
  const auto mesh = triangulate(io::to_solid(file));
  EXPECT_TRUE(is_watertight(mesh));
  EXPECT_NEAR(mesh_volume(mesh), fab::total_area(panels) * s.board_thickness, 1e-6);
  const auto back = io::parse_panels(io::panels_json(panels));
  ASSERT_EQ(back.size(), panels.size());
  for (std::size_t i = 0; i < panels.size(); ++i) {
    EXPECT_EQ(back[i].id, panels[i].id);
    EXPECT_EQ(back[i].kind, panels[i].kind);
    EXPECT_DOUBLE_EQ(back[i].width, panels[i].width);
  }
}

TEST(Io, ClawInstanceAndPlan) {
  const auto inst = io::parse_claw_instance(load(data("claw_single.json")));
  EXPECT_EQ(inst.objects.size(), 1u);
  const auto j = io::plan_json(inverse::claw_optimal(inst), "optimal");
  EXPECT_EQ(j.at("cost"), 2);
  EXPECT_EQ(j.at("actions")[0].at("action"), "translate_x");
  EXPECT_EQ(j.at("actions")[1].at("action"), "grasp");
  EXPECT_THROW(io::parse_claw_instance(io::json::parse(R"({"claw": [0,0,60], "objects": [], "bins": []})")),
               InvalidArgument);
}

// ---------------------------------------------------------------------------
// Command line

TEST(Cli, CabinetPipeline) {
  const auto dir = scratch("cabinet");
  const std::string out = dir.string();
  ASSERT_EQ(cli("cabinet --out " + out + "/a"), 0);
  ASSERT_EQ(cli("cabinet --out " + out + "/b"), 0);
  EXPECT_EQ(io::read_file(out + "/a/cabinet.json"), io::read_file(out + "/b/cabinet.json"));
  EXPECT_EQ(io::read_file(out + "/a/panels.json"), io::read_file(out + "/b/panels.json"));
  EXPECT_EQ(load(dir / "a" / "panels.json").at("panels").size(), 8u);
  EXPECT_EQ(cli("cabinet --thickness 0 --out " + out + "/c"), 2);
  EXPECT_EQ(cli("cabinet --height -3 --out " + out + "/c"), 2);

  ASSERT_EQ(cli("export svg --in " + out + "/a/cabinet.json --out " + out + "/cab.svg"), 0);
  const std::string svg = io::read_file(out + "/cab.svg");
  std::size_t rects = 0;
  for (auto p = svg.find("<rect"); p != std::string::npos; p = svg.find("<rect", p + 1)) ++rects;
  EXPECT_EQ(rects, 8u);
  ASSERT_EQ(cli("export dxf --sheet 12x24 --in " + out + "/a/cabinet.json --out " + out + "/cab.dxf"), 0);
  EXPECT_NE(io::read_file(out + "/cab.dxf").find("back b"), std::string::npos);
  EXPECT_EQ(cli("export dxf --sheet 1x1 --in " + out + "/a/cabinet.json --out " + out + "/x.dxf"), 3);
  EXPECT_EQ(cli("export dxf --sheet 12by24 --in " + out + "/a/cabinet.json --out " + out + "/x.dxf"), 2);
  ASSERT_EQ(cli("export stl --in " + out + "/a/cabinet.json --out " + out + "/cab.stl"), 0);
  EXPECT_EQ(io::read_file(out + "/cab.stl").rfind("solid cabinet", 0), 0u);
}

TEST(Cli, QuadcopterUrdf) {
  const auto dir = scratch("quad");
  const std::string out = dir.string();
  ASSERT_EQ(cli("quadcopter --out " + out + "/q.json"), 0);
  ASSERT_EQ(cli("export urdf --in " + out + "/q.json --out " + out + "/q.urdf"), 0);
  const std::string urdf = io::read_file(out + "/q.urdf");
  std::size_t links = 0, joints = 0;
  for (auto p = urdf.find("<link "); p != std::string::npos; p = urdf.find("<link ", p + 1)) ++links;
  for (auto p = urdf.find("<joint "); p != std::string::npos; p = urdf.find("<joint ", p + 1)) ++joints;
  EXPECT_EQ(links, 22u);
  EXPECT_EQ(joints, 21u);
  EXPECT_EQ(cli("export urdf --in " + out + "/missing.json --out " + out + "/x.urdf"), 2);
}

TEST(Cli, OptimizationResults) {
  const auto dir = scratch("opt");
  const std::string out = dir.string();
  ASSERT_EQ(cli("opt table --out " + out + "/t.json"), 0);
  const auto t = load(dir / "t.json");
  EXPECT_NEAR(t.at("x")[0].get<double>(), 1, 1e-6);
  EXPECT_NEAR(t.at("x")[1].get<double>(), 1, 1e-6);
  EXPECT_TRUE(t.at("converged").get<bool>());
  ASSERT_EQ(cli("opt framebars --out " + out + "/f.json"), 0);
  const auto f = load(dir / "f.json");
  EXPECT_EQ(f.at("x")[0], 100.0);
  EXPECT_EQ(f.at("x")[1], 100.0);
  ASSERT_EQ(cli("opt arm --out " + out + "/a.json"), 0);
  EXPECT_NEAR(load(dir / "a.json").at("f").get<double>(), 0.5, 1e-6);
  // Unreachable storage target: result is written and flagged.
  EXPECT_EQ(cli("opt cabinet --target 2000000 --out " + out + "/c.json"), 4);
  EXPECT_FALSE(load(dir / "c.json").at("converged").get<bool>());
  EXPECT_EQ(cli("opt sofa --out " + out + "/x.json"), 2);
}

TEST(Cli, ChairIsReproducibleAndSeedFallsBackToEnv) {
  const auto dir = scratch("chair");
  const std::string out = dir.string();
  ASSERT_EQ(cli("opt chair --pop 40 --gens 30 --seed 7 --out " + out + "/a.json --front " + out + "/a.csv"), 0);
  ASSERT_EQ(cli("opt chair --pop 40 --gens 30 --out " + out + "/b.json --front " + out + "/b.csv", "CDM_SEED=7"), 0);
  ASSERT_EQ(cli("opt chair --pop 40 --gens 30 --seed 8 --out " + out + "/c.json --front " + out + "/c.csv"), 0);
  EXPECT_EQ(io::read_file(out + "/a.json"), io::read_file(out + "/b.json"));
  EXPECT_EQ(io::read_file(out + "/a.csv"), io::read_file(out + "/b.csv"));
  EXPECT_NE(io::read_file(out + "/a.csv"), io::read_file(out + "/c.csv"));
  EXPECT_EQ(load(dir / "a.json").at("seed"), 7);
  EXPECT_EQ(io::read_file(out + "/a.csv").substr(0, 11), "leg_height,");
  EXPECT_EQ(cli("opt chair --pop 41 --gens 3 --out " + out + "/x.json"), 2);
  EXPECT_EQ(cli("opt table --out " + out + "/x.json", "CDM_SEED=-4"), 2);
}

TEST(Cli, ClawPlans) {
  const auto dir = scratch("claw");
  const std::string out = dir.string();
  for (const std::string name : {"claw_single", "claw_three"}) {
    ASSERT_EQ(cli("plan claw --method greedy --instance " + data(name + ".json") + " --out " + out + "/g.json"), 0);
    ASSERT_EQ(cli("plan claw --method optimal --instance " + data(name + ".json") + " --out " + out + "/o.json"), 0);
    const auto g = load(dir / "g.json"), o = load(dir / "o.json");
    EXPECT_LE(o.at("cost").get<int>(), g.at("cost").get<int>());
    if (name == "claw_single") EXPECT_EQ(g.at("actions"), o.at("actions"));
  }
  EXPECT_EQ(cli("plan claw --instance " + data("claw_over_budget.json") + " --out " + out + "/x.json"), 5);
  EXPECT_EQ(cli("plan claw --method greedy --instance " + data("claw_over_budget.json") + " --out " + out + "/x.json"),
            5);
}

TEST(Cli, DslPrograms) {
  const auto dir = scratch("dsl");
  const std::string out = dir.string();
  ASSERT_EQ(cli("dsl run --dialect local " + data("round_table_local.dsl") + " --out " + out + "/l.json"), 0);
  ASSERT_EQ(cli("dsl run --dialect global " + data("round_table_global.dsl") + " --out " + out + "/g.json"), 0);
  const auto l = load(dir / "l.json"), g = load(dir / "g.json");
  ASSERT_EQ(l.at("components").size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    const auto &a = l.at("components")[i].at("aabb"), &b = g.at("components")[i].at("aabb");
    for (const char* k : {"min", "max"}) {
      for (std::size_t m = 0; m < 3; ++m) EXPECT_NEAR(a[k][m].get<double>(), b[k][m].get<double>(), 1e-9);
    }
  }
  ASSERT_EQ(cli("export stl --in " + out + "/l.json --out " + out + "/t.stl"), 0);
  EXPECT_EQ(cli("dsl run --dialect global " + data("round_table_local.dsl") + " --out " + out + "/x.json"), 2);
  io::write_file(out + "/broken.dsl", "a = circle(0, 0, 1\n");
  EXPECT_EQ(cli("dsl run " + out + "/broken.dsl --out " + out + "/x.json"), 2);
}

TEST(Cli, LqrSummary) {
  const auto dir = scratch("lqr");
  const std::string out = dir.string();
  ASSERT_EQ(cli("lqr --target 0,0,1 --traj " + out + "/t.csv --out " + out + "/s.json"), 0);
  const auto s = load(dir / "s.json");
  EXPECT_EQ(s.at("Q"), "identity");
  EXPECT_EQ(s.at("rows"), 5001);
  EXPECT_FALSE(s.at("time_to_setpoint").is_null());
  EXPECT_LT(s.at("final_error").get<double>(), 0.01);
  EXPECT_LE(s.at("care_residual").get<double>(), 1e-8);
  const std::string csv = io::read_file(out + "/t.csv");
  EXPECT_EQ(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')), 5002u);
  EXPECT_EQ(cli("lqr --bar1 0 --out " + out + "/x.json"), 2);
  EXPECT_EQ(cli("lqr --target 0,1 --out " + out + "/x.json"), 2);
}
