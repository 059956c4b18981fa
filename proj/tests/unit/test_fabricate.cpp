#include <gtest/gtest.h>

#include <map>
#include <random>
#include <regex>
#include <sstream>

#include "cdm/fabricate.hpp"

using namespace cdm;
using namespace cdm::fab;

namespace {

const perf::CabinetSpec kSixByFour{72, 48, 12, 0.5, 3};

struct Rect {
  std::string id;
  double x, y, w, h;
};

std::vector<Rect> read_svg_rects(const std::string& svg) {
  std::vector<Rect> out;
  const std::regex rect(R"re(<rect id="([^"]*)" x="([^"]*)" y="([^"]*)" width="([^"]*)" height="([^"]*)")re");
  for (auto it = std::sregex_iterator(svg.begin(), svg.end(), rect); it != std::sregex_iterator(); ++it) {
    const auto& m = *it;
    out.push_back({m[1], std::stod(m[2]), std::stod(m[3]), std::stod(m[4]), std::stod(m[5])});
  }
  return out;
}

struct DxfEntity {
  std::string type;
  std::vector<std::pair<int, std::string>> groups;
};

std::vector<DxfEntity> read_dxf(const std::string& dxf) {
  std::istringstream in(dxf);
  std::string code, value;
  std::vector<DxfEntity> out;
  while (std::getline(in, code) && std::getline(in, value)) {
    const int c = std::stoi(code);
    if (c == 0) {
      out.push_back({value, {}});
    } else if (!out.empty()) {
      out.back().groups.emplace_back(c, value);
    }
  }
  return out;
}

}  // namespace

TEST(Panels, SixByFourCabinet) {
  const auto panels = cabinet_panels(kSixByFour);
  ASSERT_EQ(panels.size(), 8u);
  std::map<std::string, std::pair<double, double>> dims;
  for (const auto& p : panels) dims[p.id] = {p.width, p.height};
  EXPECT_EQ(dims["side_1"], std::make_pair(12.0, 72.0));
  EXPECT_EQ(dims["side_2"], std::make_pair(12.0, 72.0));
  EXPECT_EQ(dims["top"], std::make_pair(47.0, 12.0));
  EXPECT_EQ(dims["bottom"], std::make_pair(47.0, 12.0));
  EXPECT_EQ(dims["shelf_3"], std::make_pair(47.0, 12.0));
  EXPECT_EQ(dims["back"], std::make_pair(48.0, 72.0));
}

TEST(Panels, CountAndAreaFollowShelves) {
  for (int n = 0; n <= 6; ++n) {
    perf::CabinetSpec s = kSixByFour;
    s.n_shelves = n;
    const auto panels = cabinet_panels(s);
    EXPECT_EQ(panels.size(), static_cast<std::size_t>(5 + n));
    const double expected = 2 * 12 * 72 + (2 + n) * 47 * 12 + 48 * 72;
    EXPECT_DOUBLE_EQ(total_area(panels), expected);
  }
  EXPECT_THROW(cabinet_panels({72, 48, 12, 24, 0}), InvalidArgument);
}

TEST(Panels, SplitHalves) {
  const Panel back{"back", PanelKind::back, 48, 72, "back"};
  const auto [a, b] = split_panel(back, SplitAxis::vertical);
  EXPECT_EQ(a.id, "back_a");
  EXPECT_EQ(b.id, "back_b");
  EXPECT_DOUBLE_EQ(a.width, 24);
  EXPECT_DOUBLE_EQ(a.height, 72);
  const auto [c, d] = split_panel(back, SplitAxis::horizontal);
  EXPECT_DOUBLE_EQ(c.height + d.height, 72);
  const auto split = split_back(cabinet_panels(kSixByFour));
  EXPECT_EQ(split.size(), 9u);
  EXPECT_DOUBLE_EQ(total_area(split), total_area(cabinet_panels(kSixByFour)));
}

TEST(Layout, SpacingHeldBetweenAllPanels) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(10, 90);
  for (int i = 0; i < 50; ++i) {
    const perf::CabinetSpec s{u(rng), u(rng), u(rng) / 3, 0.5, i % 5};
    for (double spacing : {0.5, 6.0}) {
      const auto layout = layout_rows(cabinet_panels(s), spacing);
      EXPECT_EQ(layout.placements.size(), static_cast<std::size_t>(5 + i % 5));
      EXPECT_GE(min_separation(layout), spacing - 1e-12);
      for (const auto& p : layout.placements) {
        EXPECT_GE(p.x, 0);
        EXPECT_GE(p.y, 0);
      }
    }
  }
}

TEST(Layout, RowsByKind) {
  const auto layout = layout_rows(cabinet_panels(kSixByFour));
  // Sides row, then top/bottom, then shelves, then back.
  EXPECT_DOUBLE_EQ(layout.placements[0].y, 0);
  EXPECT_DOUBLE_EQ(layout.placements[1].x, 18);
  EXPECT_DOUBLE_EQ(layout.placements[2].y, 78);
  EXPECT_DOUBLE_EQ(layout.placements[4].y, 96);
  EXPECT_DOUBLE_EQ(layout.placements.back().y, 114);
  EXPECT_THROW(layout_rows(cabinet_panels(kSixByFour), -1), InvalidArgument);
}

TEST(Sheet, FitAllowsRotation) {
  const std::vector<Panel> panels{{"a", PanelKind::shelf, 20, 10, ""}, {"b", PanelKind::shelf, 30, 10, ""}};
  EXPECT_TRUE(check_sheet_fit(panels, {10, 25}).size() == 1);
  EXPECT_EQ(check_sheet_fit(panels, {10, 25}).front(), "b");
  EXPECT_TRUE(check_sheet_fit(panels, {30, 10}).empty());
}

TEST(Sheet, ScaleToTwelveByTwentyFour) {
  const auto r = scale_to_sheet(kSixByFour, {12, 24}, true);
  EXPECT_NEAR(r.scale, 1.0 / 3, 1e-12);
  EXPECT_DOUBLE_EQ(r.spec.board_thickness, 0.5);
  EXPECT_NEAR(r.spec.height, 24, 1e-12);
  const auto panels = split_back(cabinet_panels(r.spec));
  EXPECT_TRUE(check_sheet_fit(panels, {12, 24}).empty());
  // Without splitting the 48 x 72 back limits the scale to 12/48.
  EXPECT_NEAR(scale_to_sheet(kSixByFour, {12, 24}).scale, 0.25, 1e-12);
}

TEST(Sheet, ScaleIsMaximalAndIdempotent) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(10, 100);
  for (int i = 0; i < 100; ++i) {
    const perf::CabinetSpec s{u(rng), u(rng), u(rng) / 2, 0.25, i % 4};
    const Sheet sheet{u(rng) / 2, u(rng) / 2};
    ScaledCabinet r{};
    try {
      r = scale_to_sheet(s, sheet);
    } catch (const FabricationError&) {
      continue;
    }
    const auto fits = [&](double k) {
      perf::CabinetSpec t = s;
      t.height *= k, t.width *= k, t.depth *= k;
      return check_sheet_fit(cabinet_panels(t), sheet).empty();
    };
    EXPECT_LE(r.scale, 1);
    EXPECT_TRUE(fits(r.scale * (1 - 1e-12)));
    if (r.scale < 1) {
      EXPECT_FALSE(fits(r.scale * (1 + 1e-6)));
    }
    EXPECT_NEAR(scale_to_sheet(r.spec, sheet).scale, 1, 1e-9);
  }
}

TEST(Sheet, AreaScalesQuadraticallyAtZeroThickness) {
  const perf::CabinetSpec s{72, 48, 12, 0, 2};
  const auto r = scale_to_sheet(s, {12, 24});
  EXPECT_NEAR(total_area(cabinet_panels(r.spec)), r.scale * r.scale * total_area(cabinet_panels(s)), 1e-9);
}

TEST(Sheet, InfeasibleSheetRaises) {
  EXPECT_THROW(scale_to_sheet(kSixByFour, {0.9, 0.9}), FabricationError);
  EXPECT_THROW(scale_to_sheet(kSixByFour, {0, 10}), InvalidArgument);
}

TEST(Export, SvgRoundTrip) {
  const auto layout = layout_rows(cabinet_panels(kSixByFour));
  const std::string svg = write_svg(layout);
  EXPECT_EQ(svg.rfind("<?xml", 0), 0u);
  EXPECT_NE(svg.find("10.0000 per inch"), std::string::npos);
  const auto rects = read_svg_rects(svg);
  ASSERT_EQ(rects.size(), layout.placements.size());
  for (std::size_t i = 0; i < rects.size(); ++i) {
    const auto& p = layout.placements[i];
    EXPECT_EQ(rects[i].id, p.panel.id);
    EXPECT_NEAR(rects[i].x, 10 * p.x, 1e-4);
    EXPECT_NEAR(rects[i].y, 10 * p.y, 1e-4);
    EXPECT_NEAR(rects[i].w, 10 * p.panel.width, 1e-4);
    EXPECT_NEAR(rects[i].h, 10 * p.panel.height, 1e-4);
  }
  EXPECT_EQ(write_svg(layout), svg);
}

TEST(Export, DxfRoundTrip) {
  const auto layout = layout_rows(split_back(cabinet_panels(kSixByFour)));
  const auto entities = read_dxf(write_dxf(layout));
  ASSERT_GE(entities.size(), 3u);
  EXPECT_EQ(entities.front().type, "SECTION");
  EXPECT_EQ(entities.back().type, "EOF");
  std::size_t polys = 0, texts = 0;
  for (const auto& e : entities) {
    if (e.type == "LWPOLYLINE") {
      const auto& p = layout.placements[polys++];
      std::vector<double> xs, ys;
      for (const auto& [c, v] : e.groups) {
        if (c == 10) xs.push_back(std::stod(v));
        if (c == 20) ys.push_back(std::stod(v));
        if (c == 70) EXPECT_EQ(v, "1");
      }
      ASSERT_EQ(xs.size(), 5u);
      EXPECT_EQ(xs.front(), xs.back());
      EXPECT_EQ(ys.front(), ys.back());
      EXPECT_NEAR(*std::max_element(xs.begin(), xs.end()) - *std::min_element(xs.begin(), xs.end()),
                  p.panel.width, 1e-4);
      EXPECT_NEAR(*std::max_element(ys.begin(), ys.end()) - *std::min_element(ys.begin(), ys.end()),
                  p.panel.height, 1e-4);
    } else if (e.type == "TEXT") {
      ++texts;
    }
  }
  EXPECT_EQ(polys, 9u);
  EXPECT_EQ(texts, 9u);
}
