#include <gtest/gtest.h>

#include <random>

#include "cdm/performance.hpp"

using namespace cdm;
using namespace cdm::perf;

TEST(Stress, LegCompressionReferenceValue) {
  const auto r = leg_compression(100, 4, 0.00258064, 37e6);
  EXPECT_NEAR(r.stress, 94937.7, 0.05);
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(leg_compression(0, 4, 0.001, 37e6).stress, 0);
  EXPECT_NEAR(leg_compression(100, 4, 0.002, 1).stress, 2 * leg_compression(100, 4, 0.004, 1).stress, 1e-9);
  EXPECT_THROW(leg_compression(100, 4, 0, 1), InvalidArgument);
  EXPECT_NEAR(leg_compression(100, 4, 0.001, 1, 20).stress, leg_compression(120, 4, 0.001, 1).stress, 1e-9);
}

TEST(Stress, SeatBending) {
  const auto r = seat_bending(80, 0.45, 0.40, 0.02, 20e6);
  EXPECT_NEAR(r.stress, 3.0 * 80 * 9.8 * 0.45 / (2 * 0.40 * 0.0004), 1e-6);
  EXPECT_NEAR(r.stress, 3307500, 1e-6);
  EXPECT_TRUE(r.pass);
  EXPECT_NEAR(seat_bending(80, 0.45, 0.4, 0.04, 1).stress * 4, r.stress, 1e-6);
  EXPECT_EQ(seat_bending(0, 0.45, 0.4, 0.02, 1).stress, 0);
  EXPECT_THROW(seat_bending(80, 0.45, 0.4, 0, 1), InvalidArgument);
}

TEST(Stress, BackStress) {
  EXPECT_NEAR(back_stress(90, 0.003, 1e6).stress, 98000, 1e-8);
  EXPECT_EQ(back_stress(0, 0.003, 1).stress, 0);
  EXPECT_FALSE(back_stress(90, 0.003, 97999).pass);
  EXPECT_TRUE(back_stress(90, 0.003, 98000.001).pass);
  EXPECT_THROW(back_stress(90, 0, 1), InvalidArgument);
}

TEST(Stress, SpoonNeck) {
  const auto r = spoon_neck_bending(20, 0.05, 0.01, 0.002, 2e8);
  EXPECT_NEAR(r.stress, 1.5e8, 1e-4);
  const double M = 20 * 0.05, y = 0.001, I = 0.01 * 8e-9 / 12;
  EXPECT_NEAR(r.stress, M * y / I, 1e-12 * r.stress);
  EXPECT_NEAR(spoon_neck_bending(40, 0.05, 0.01, 0.002, 1).stress, 2 * r.stress, 1e-4);
  EXPECT_THROW(spoon_neck_bending(20, 0.05, 0.01, 0, 1), InvalidArgument);
}

TEST(Stress, PassMatchesComparisonAndScaleConsistent) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.1, 10);
  for (int i = 0; i < 200; ++i) {
    const double w = u(rng) * 20, span = u(rng) / 10, b = u(rng) / 10, t = u(rng) / 100, s = u(rng) * 1e6;
    const auto r = seat_bending(w, span, b, t, s);
    EXPECT_EQ(r.pass, r.stress <= r.capacity);
    // Same geometry in millimetres with strength in N/mm^2 (MPa).
    const auto mm = seat_bending(w, span * 1e3, b * 1e3, t * 1e3, s * 1e-6);
    EXPECT_EQ(mm.pass, r.pass);
  }
}

TEST(Stress, ChairEvaluation) {
  ChairSpec c{0.0016, 4, 0.45, 0.4, 0.02, 0.4, 0.4, 0.02, 0.004};
  const auto reports = evaluate_chair(c, 100);
  ASSERT_EQ(reports.size(), 3u);
  EXPECT_EQ(reports[0].mode, StressMode::leg_compression);
  const auto heavier = evaluate_chair(c, 100, true);
  EXPECT_GT(heavier[0].stress, reports[0].stress);
  c.n_legs = 2;
  EXPECT_THROW(evaluate_chair(c, 100), InvalidArgument);
}

TEST(Stability, SquareHull) {
  const auto poly = support_polygon({{0.2, 0.2}, {-0.2, 0.2}, {0.2, -0.2}, {-0.2, -0.2}, {0.05, 0.0}});
  EXPECT_EQ(poly.vertices.size(), 4u);
  EXPECT_NEAR(poly.area(), 0.16, 1e-12);
  EXPECT_THROW(support_polygon({{0, 0}, {1, 1}, {2, 2}}), InvalidArgument);
  EXPECT_THROW(support_polygon({{0, 0}, {1, 1}}), InvalidArgument);
}

TEST(Stability, HullContainsRandomInputs) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> n(0, 1);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Vec2> pts;
    for (int i = 0; i < 3 + trial % 30; ++i) pts.emplace_back(n(rng), n(rng));
    const auto poly = support_polygon(pts);
    EXPECT_GT(poly.area(), 0);
    for (const auto& p : pts) EXPECT_GE(poly.min_edge_distance(p), -1e-12);
    // Convexity: every vertex triple turns left.
    const auto& v = poly.vertices;
    for (std::size_t i = 0; i < v.size(); ++i) {
      const Vec2 a = v[(i + 1) % v.size()] - v[i], b = v[(i + 2) % v.size()] - v[(i + 1) % v.size()];
      EXPECT_GT(a.x() * b.y() - a.y() * b.x(), 0);
    }
  }
}

TEST(Stability, StableAndTipping) {
  const auto poly = support_polygon({{0.2, 0.2}, {-0.2, 0.2}, {0.2, -0.2}, {-0.2, -0.2}});
  EXPECT_TRUE(is_statically_stable({0, 0, 0.4}, poly, 0));
  EXPECT_FALSE(is_statically_stable({0.3, 0, 0.4}, poly, 0));
  EXPECT_FALSE(is_statically_stable({0.2, 0, 0.4}, poly, 0));
  EXPECT_NEAR(tipping_angle({0, 0, 0.4}, poly), std::atan(0.5), 1e-12);
  EXPECT_NEAR(tipping_angle({0, 0, 0.4}, poly), 0.46365, 1e-5);
  EXPECT_EQ(tipping_angle({0.2, 0, 0.4}, poly), 0);
  EXPECT_EQ(tipping_angle({0.5, 0, 0.4}, poly), 0);
  EXPECT_LT(tipping_angle({0, 0, 0.5}, poly), tipping_angle({0, 0, 0.4}, poly));
}

TEST(Stability, TippingPositiveIffStable) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-1, 1);
  const auto poly = support_polygon({{0.5, 0.1}, {-0.3, 0.4}, {-0.4, -0.3}, {0.2, -0.5}});
  for (int i = 0; i < 2000; ++i) {
    const Vec3 com(u(rng), u(rng), 0.1 + std::abs(u(rng)));
    EXPECT_EQ(tipping_angle(com, poly) > 0, is_statically_stable(com, poly, 0));
  }
}

TEST(Cabinet, Formulas) {
  CabinetSpec s{55, 55, 55, 0.5, 0};
  EXPECT_NEAR(cabinet_storage(s), 54.0 * 54.0 * 54.5, 1e-9);
  EXPECT_NEAR(cabinet_storage(s), 158922, 1e-9);
  CabinetSpec z{10, 20, 30, 0, 0};
  EXPECT_EQ(cabinet_storage(z), 6000);
  EXPECT_EQ(cabinet_material_volume(z), 0);
  EXPECT_NEAR(cabinet_material_cost(s, 2), 2 * cabinet_material_volume(s), 1e-12);
  EXPECT_THROW(cabinet_storage(CabinetSpec{10, 10, 10, 5, 0}), InvalidArgument);
}

TEST(Cabinet, StorageDecreasesInThickness) {
  double prev = cabinet_storage(CabinetSpec{40, 30, 20, 0, 2});
  for (double t = 0.25; t < 9.9; t += 0.25) {
    const double cur = cabinet_storage(CabinetSpec{40, 30, 20, t, 2});
    EXPECT_LT(cur, prev);
    prev = cur;
  }
}

TEST(Cabinet, StoragePlusMaterialInvariantInShelfCount) {
  // Each shelf moves the same volume from storage into material.
  const double base = cabinet_storage(CabinetSpec{60, 36, 24, 0.75, 0}) +
                      cabinet_material_volume(CabinetSpec{60, 36, 24, 0.75, 0});
  for (int n = 1; n < 10; ++n) {
    const CabinetSpec s{60, 36, 24, 0.75, n};
    EXPECT_NEAR(cabinet_storage(s) + cabinet_material_volume(s), base, 1e-9);
  }
}
