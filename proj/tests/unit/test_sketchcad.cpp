#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "cdm/sketchcad.hpp"

using namespace cdm;
using namespace cdm::sketch;

namespace {

std::string slurp(const std::string& name) {
  std::ifstream in(std::string(CDM_DATA_DIR) + "/" + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

DslError::Kind error_kind(const std::string& src, Dialect d) {
  try {
    run(src, d);
  } catch (const DslError& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected DslError for: " << src;
  return DslError::Kind::syntax;
}

std::size_t error_line(const std::string& src, Dialect d) {
  try {
    run(src, d);
  } catch (const DslError& e) {
    return e.line();
  }
  return 0;
}

}  // namespace

TEST(SketchParse, RoundTableHasSixStatements) {
  const Program p = parse(slurp("round_table_local.dsl"), Dialect::local);
  EXPECT_EQ(p.statements.size(), 6u);
  EXPECT_EQ(p.statements.front().name, "legBase_sketch");
  EXPECT_EQ(p.statements.back().line, 9u);
}

TEST(SketchParse, ArityDependsOnDialect) {
  EXPECT_EQ(error_kind("x = circle(0,0)", Dialect::local), DslError::Kind::arity);
  EXPECT_EQ(error_kind(slurp("round_table_local.dsl"), Dialect::global), DslError::Kind::arity);
  EXPECT_EQ(error_line(slurp("round_table_local.dsl"), Dialect::global), 2u);
  EXPECT_EQ(error_kind(slurp("round_table_global.dsl"), Dialect::local), DslError::Kind::arity);
}

TEST(SketchParse, RejectsUnknownNamesReassignmentAndControlFlow) {
  EXPECT_EQ(error_kind("a = b + 1", Dialect::local), DslError::Kind::unknown_identifier);
  EXPECT_EQ(error_kind("a = sphere(1)", Dialect::local), DslError::Kind::unknown_identifier);
  EXPECT_EQ(error_kind("a = 1\na = 2", Dialect::local), DslError::Kind::reassignment);
  EXPECT_EQ(error_line("a = 1\n\n# c\na = 2", Dialect::local), 4u);
  EXPECT_EQ(error_kind("XY_PLANE = 3", Dialect::local), DslError::Kind::reassignment);
  EXPECT_EQ(error_kind("for i in range(3):", Dialect::local), DslError::Kind::unsupported);
  EXPECT_EQ(error_kind("if a > 1:", Dialect::local), DslError::Kind::unsupported);
  EXPECT_EQ(error_kind("a = 2 ** 3", Dialect::local), DslError::Kind::unsupported);
  EXPECT_EQ(error_kind("a = (1 + 2", Dialect::local), DslError::Kind::syntax);
}

TEST(SketchParse, ArithmeticAndComments) {
  const auto solids = run(
      "w = 2 * (3 + 1) - 4 / 2  # 6\n"
      "s = createSketch(rectangle(0, 0, w, -w / -3), XY_PLANE)\n"
      "b = extrude(s, w - 1)\n",
      Dialect::local);
  ASSERT_EQ(solids.size(), 1u);
  EXPECT_EQ(solids[0].name, "b");
  EXPECT_TRUE(aabb(solids[0].solid).approx_equal(Aabb{Vec3(-3, -1, 0), Vec3(3, 1, 5)}, 1e-12));
}

TEST(SketchEval, RoundTableStacksAlongZ) {
  const auto solids = run(slurp("round_table_local.dsl"), Dialect::local);
  ASSERT_EQ(solids.size(), 3u);
  EXPECT_EQ(solids[2].name, "top_solid");
  const Aabb top = aabb(solids[2].solid);
  EXPECT_NEAR(top.min.z(), 11, 1e-12);
  EXPECT_NEAR(top.max.z(), 12, 1e-12);
  EXPECT_NEAR(top.max.x(), 8, 1e-12);
  const Plane c = cap(solids[0], Side::max_z);
  EXPECT_LT((c.origin - Vec3(0, 0, 1)).norm(), 1e-12);
}

TEST(SketchEval, LocalAndGlobalRoundTablesAgree) {
  const auto local = run(slurp("round_table_local.dsl"), Dialect::local);
  const auto global = run(slurp("round_table_global.dsl"), Dialect::global);
  ASSERT_EQ(local.size(), global.size());
  for (std::size_t i = 0; i < local.size(); ++i) {
    EXPECT_TRUE(aabb(local[i].solid).approx_equal(aabb(global[i].solid), 1e-9)) << i;
  }
}

TEST(SketchEval, ChairLegsHangFromSeat) {
  const auto solids = run(slurp("chair_local.dsl"), Dialect::local);
  ASSERT_EQ(solids.size(), 6u);
  for (int i = 1; i <= 4; ++i) {
    const Aabb leg = aabb(solids[i].solid);
    EXPECT_NEAR(leg.max.z(), 0, 1e-12);
    EXPECT_NEAR(leg.min.z(), -9, 1e-12);
    EXPECT_NEAR(std::abs(leg.center().x()), 3.5, 1e-12);
    EXPECT_NEAR(std::abs(leg.center().y()), 3.5, 1e-12);
  }
  const Aabb back = aabb(solids[5].solid);
  EXPECT_NEAR(back.min.z(), 1, 1e-12);
  EXPECT_NEAR(back.max.z(), 9, 1e-12);
}

TEST(SketchEval, GlobalCarWheelsExtrudeOutward) {
  const auto solids = run(slurp("car_global.dsl"), Dialect::global);
  ASSERT_EQ(solids.size(), 5u);
  const Aabb w1 = aabb(solids[1].solid);
  EXPECT_NEAR(w1.max.y(), -1, 1e-12);
  EXPECT_NEAR(w1.min.y(), -1.3, 1e-12);
  EXPECT_NEAR(w1.center().x(), -1, 1e-12);
  EXPECT_NEAR(w1.center().z(), 0, 1e-12);
  EXPECT_LT((solids[1].sketch.plane.normal - Vec3(0, -1, 0)).norm(), 1e-15);
  const Aabb w3 = aabb(solids[3].solid);
  EXPECT_NEAR(w3.min.y(), 1, 1e-12);
  EXPECT_NEAR(w3.max.y(), 1.3, 1e-12);
}

TEST(SketchEval, PlacementOffFaceRejected) {
  const std::string src =
      "b = extrude(createSketch(rectangle(0, 0, 0, 2, 2), XY_PLANE), 1)\n"
      "s = createSketch(circle(5, 0, 1, 0.5), cap(b, \"max_z\"))\n";
  EXPECT_EQ(error_kind(src, Dialect::global), DslError::Kind::placement);
  EXPECT_EQ(error_line(src, Dialect::global), 2u);
  // Edge of the face is allowed.
  EXPECT_NO_THROW(run("b = extrude(createSketch(rectangle(0, 0, 0, 2, 2), XY_PLANE), 1)\n"
                      "s = createSketch(circle(1, 1, 1, 0.5), cap(b, \"max_z\"))\n",
                      Dialect::global));
}

TEST(SketchEval, CapErrors) {
  EXPECT_EQ(error_kind("c = extrude(createSketch(circle(0, 0, 1), XY_PLANE), 2)\n"
                       "p = cap(c, \"min_x\")\n",
                       Dialect::local),
            DslError::Kind::face_selection);
  EXPECT_EQ(error_kind("c = extrude(createSketch(circle(0, 0, 1), XY_PLANE), 2)\n"
                       "p = cap(c, \"top\")\n",
                       Dialect::local),
            DslError::Kind::domain);
  EXPECT_EQ(error_kind("c = extrude(createSketch(circle(0, 0, 1), XY_PLANE), -2)\n", Dialect::local),
            DslError::Kind::domain);
  EXPECT_EQ(error_kind("c = extrude(3, 2)\n", Dialect::local), DslError::Kind::type);
}

TEST(SketchEval, DefaultPlaneFramesAreRightHanded) {
  for (const Plane& p : {xy_plane(), xz_plane(), zy_plane()}) {
    EXPECT_NEAR(p.normal.norm(), 1, 1e-12);
    EXPECT_NEAR(p.u_axis.norm(), 1, 1e-12);
    EXPECT_NEAR(p.normal.dot(p.u_axis), 0, 1e-12);
  }
  const auto s = run("r = extrude(createSketch(rectangle(1, 2, 4, 2), XZ_PLANE), 3)", Dialect::local);
  // XZ: normal +y, u=+x, v = y x x = -z.
  EXPECT_TRUE(aabb(s[0].solid).approx_equal(Aabb{Vec3(-1, 0, -3), Vec3(3, 3, -1)}, 1e-12));
}

TEST(SketchProperties, ExtentAlongNormalEqualsLengthAndCapOrdering) {
  const char* planes[] = {"XY_PLANE", "XZ_PLANE", "ZY_PLANE"};
  const char* sides[] = {"x", "y", "z"};
  int n = 0;
  for (const char* plane : planes) {
    for (double len : {0.5, 1.0, 7.25}) {
      for (const char* prim : {"circle(0.3, -0.2, 1.1)", "rectangle(0.3, -0.2, 2, 0.7)"}) {
        std::string src = "s = extrude(createSketch(" + std::string(prim) + ", " + plane + "), " +
                          std::to_string(len) + ")\n";
        const auto solids = run(src, Dialect::local);
        const Vec3 nrm = solids[0].sketch.plane.normal;
        const Vec3 ext = aabb(solids[0].solid).extent();
        EXPECT_NEAR(std::abs(ext.dot(nrm)), len, 1e-12);
        for (int k = 0; k < 3; ++k) {
          const auto lo = parse_side(std::string("min_") + sides[k]);
          const auto hi = parse_side(std::string("max_") + sides[k]);
          try {
            EXPECT_GE(cap(solids[0], *hi).origin[k], cap(solids[0], *lo).origin[k]);
            ++n;
          } catch (const DslError& e) {
            EXPECT_EQ(e.kind(), DslError::Kind::face_selection);
          }
        }
      }
    }
  }
  EXPECT_GT(n, 0);
}

TEST(SketchProperties, EvaluationIsDeterministic) {
  const std::string src = slurp("chair_local.dsl");
  const auto a = run(src, Dialect::local);
  const auto b = run(src, Dialect::local);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].name, b[i].name);
    EXPECT_TRUE(aabb(a[i].solid).approx_equal(aabb(b[i].solid), 0));
  }
}
