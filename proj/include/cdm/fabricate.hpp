#pragma once

// Flat-pack fabrication for box cabinets: panel extraction, row layout,
// sheet fitting and SVG/DXF output. Lengths are inches.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cdm/detail/format.hpp"
#include "cdm/error.hpp"
#include "cdm/performance.hpp"

namespace cdm::fab {

enum class PanelKind { side, top_bottom, shelf, back };

struct Panel {
  std::string id;
  PanelKind kind;
  double width, height;
  std::string label;  // engraved when non-empty
};

struct Sheet {
  double width, height;
};

struct Placement {
  Panel panel;
  double x, y;  // lower-left corner
};

struct Layout {
  std::vector<Placement> placements;
  double spacing = 6;
};

namespace detail {

inline std::vector<Panel> panels_unchecked(double H, double W, double D, double t, int n_shelves) {
  std::vector<Panel> out;
  out.push_back({"side_1", PanelKind::side, D, H, "side 1"});
  out.push_back({"side_2", PanelKind::side, D, H, "side 2"});
  out.push_back({"top", PanelKind::top_bottom, W - 2 * t, D, "top"});
  out.push_back({"bottom", PanelKind::top_bottom, W - 2 * t, D, "bottom"});
  for (int i = 1; i <= n_shelves; ++i) {
    out.push_back({"shelf_" + std::to_string(i), PanelKind::shelf, W - 2 * t, D, "shelf " + std::to_string(i)});
  }
  out.push_back({"back", PanelKind::back, W, H, "back"});
  return out;
}

inline bool fits(double w, double h, const Sheet& s) {
  return (w <= s.width && h <= s.height) || (h <= s.width && w <= s.height);
}

}  // namespace detail

/// Two sides (depth x height), top and bottom and n shelves between the
/// sides ((width - 2t) x depth), one full back (width x height).
inline std::vector<Panel> cabinet_panels(const perf::CabinetSpec& spec) {
  spec.validate();
  return detail::panels_unchecked(spec.height, spec.width, spec.depth, spec.board_thickness, spec.n_shelves);
}

enum class SplitAxis { vertical, horizontal };

namespace detail {

inline std::pair<Panel, Panel> split_unchecked(const Panel& p, SplitAxis axis) {
  Panel a = p, b = p;
  a.id += "_a";
  b.id += "_b";
  if (!p.label.empty()) {
    a.label += " a";
    b.label += " b";
  }
  if (axis == SplitAxis::vertical) {
    a.width = b.width = p.width / 2;
  } else {
    a.height = b.height = p.height / 2;
  }
  return {a, b};
}

inline std::vector<Panel> split_back_unchecked(const std::vector<Panel>& panels) {
  std::vector<Panel> out;
  for (const auto& p : panels) {
    if (p.kind == PanelKind::back) {
      auto [a, b] = split_unchecked(p, SplitAxis::vertical);
      out.push_back(a);
      out.push_back(b);
    } else {
      out.push_back(p);
    }
  }
  return out;
}

}  // namespace detail

/// Vertical halves the width, horizontal halves the height.
inline std::pair<Panel, Panel> split_panel(const Panel& p, SplitAxis axis) {
  cdm::detail::require(p.width > 0 && p.height > 0, "panel dimensions must be positive");
  return detail::split_unchecked(p, axis);
}

/// Replaces the back panel by its two vertical halves.
inline std::vector<Panel> split_back(const std::vector<Panel>& panels) {
  for (const auto& p : panels) {
    cdm::detail::require(p.width > 0 && p.height > 0, "panel '" + p.id + "' has non-positive dimensions");
  }
  return detail::split_back_unchecked(panels);
}

/// Panels that fit the sheet in neither orientation.
inline std::vector<std::string> check_sheet_fit(const std::vector<Panel>& panels, const Sheet& sheet) {
  std::vector<std::string> bad;
  for (const auto& p : panels) {
    if (!detail::fits(p.width, p.height, sheet)) bad.push_back(p.id);
  }
  return bad;
}

struct ScaledCabinet {
  perf::CabinetSpec spec;
  double scale;
};

/// Largest s <= 1 such that scaling height, width and depth by s (board
/// thickness held) makes every panel fit the sheet. Panel sides are affine
/// in s, so each orientation gives a closed-form limit.
inline ScaledCabinet scale_to_sheet(const perf::CabinetSpec& spec, const Sheet& sheet, bool split_back_panel = false) {
  spec.validate();
  cdm::detail::require(sheet.width > 0 && sheet.height > 0, "sheet dimensions must be positive");
  auto panels_at = [&](double s) {
    auto p = detail::panels_unchecked(s * spec.height, s * spec.width, s * spec.depth, spec.board_thickness,
                                      spec.n_shelves);
    return split_back_panel ? detail::split_back_unchecked(p) : p;
  };
  const auto p0 = panels_at(0), p1 = panels_at(1);
  auto limit = [](double at0, double at1, double cap) {
    const double slope = at1 - at0;
    if (slope <= 0) return at0 <= cap ? std::numeric_limits<double>::infinity() : 0.0;
    return (cap - at0) / slope;
  };
  double s = 1;
  for (std::size_t i = 0; i < p0.size(); ++i) {
    const double upright = std::min(limit(p0[i].width, p1[i].width, sheet.width),
                                    limit(p0[i].height, p1[i].height, sheet.height));
    const double turned = std::min(limit(p0[i].width, p1[i].width, sheet.height),
                                   limit(p0[i].height, p1[i].height, sheet.width));
    s = std::min(s, std::max(upright, turned));
  }
  perf::CabinetSpec out = spec;
  out.height *= s;
  out.width *= s;
  out.depth *= s;
  bool valid = s > 0;
  if (valid) {
    try {
      out.validate();
      for (const auto& p : panels_at(s)) valid = valid && p.width > 0 && p.height > 0;
    } catch (const InvalidArgument&) {
      valid = false;
    }
  }
  if (!valid) {
    throw FabricationError("no positive scale fits every panel on a " + cdm::detail::general(sheet.width) + " x " +
                           cdm::detail::general(sheet.height) + " sheet at board thickness " +
                           cdm::detail::general(spec.board_thickness));
  }
  return {out, s};
}

/// One row per panel kind in the order sides, top/bottom, shelves, back.
/// Rows start at x = 0; the next row starts `spacing` above the tallest
/// panel of the previous one.
inline Layout layout_rows(const std::vector<Panel>& panels, double spacing = 6) {
  cdm::detail::require(spacing >= 0 && std::isfinite(spacing), "spacing must be nonnegative");
  Layout out;
  out.spacing = spacing;
  double y = 0;
  for (PanelKind kind : {PanelKind::side, PanelKind::top_bottom, PanelKind::shelf, PanelKind::back}) {
    double x = 0, row_height = 0;
    bool any = false;
    for (const auto& p : panels) {
      if (p.kind != kind) continue;
      cdm::detail::require(p.width > 0 && p.height > 0, "panel '" + p.id + "' has non-positive dimensions");
      out.placements.push_back({p, x, y});
      x += p.width + spacing;
      row_height = std::max(row_height, p.height);
      any = true;
    }
    if (any) y += row_height + spacing;
  }
  return out;
}

/// Smallest axis-separated gap between any two placed rectangles
/// (infinity for fewer than two). Overlapping rectangles give a negative value.
inline double min_separation(const Layout& layout) {
  double best = std::numeric_limits<double>::infinity();
  const auto& pl = layout.placements;
  for (std::size_t i = 0; i < pl.size(); ++i) {
    for (std::size_t j = i + 1; j < pl.size(); ++j) {
      const auto &a = pl[i], &b = pl[j];
      const double gx = std::max(b.x - (a.x + a.panel.width), a.x - (b.x + b.panel.width));
      const double gy = std::max(b.y - (a.y + a.panel.height), a.y - (b.y + b.panel.height));
      best = std::min(best, std::max(gx, gy));
    }
  }
  return best;
}

inline double total_area(const std::vector<Panel>& panels) {
  double a = 0;
  for (const auto& p : panels) a += p.width * p.height;
  return a;
}

// ---------------------------------------------------------------------------
// Writers

inline constexpr double kSvgUnitsPerInch = 10;

namespace detail {

inline std::string num(double v) { return cdm::detail::fixed(v, 4); }

inline std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

inline double label_height(const Panel& p) { return std::min(1.0, 0.25 * std::min(p.width, p.height)); }

}  // namespace detail

inline std::string write_svg(const Layout& layout) {
  double w = 0, h = 0;
  for (const auto& p : layout.placements) {
    w = std::max(w, p.x + p.panel.width);
    h = std::max(h, p.y + p.panel.height);
  }
  const double k = kSvgUnitsPerInch;
  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<!-- user units: " << detail::num(k) << " per inch -->\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << detail::num(w * k)
      << "\" height=\"" << detail::num(h * k) << "\" viewBox=\"0 0 " << detail::num(w * k) << ' '
      << detail::num(h * k) << "\">\n";
  for (const auto& p : layout.placements) {
    out << "  <rect id=\"" << detail::xml_escape(p.panel.id) << "\" x=\"" << detail::num(p.x * k) << "\" y=\""
        << detail::num(p.y * k) << "\" width=\"" << detail::num(p.panel.width * k) << "\" height=\""
        << detail::num(p.panel.height * k) << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";
  }
  for (const auto& p : layout.placements) {
    if (p.panel.label.empty()) continue;
    const double th = detail::label_height(p.panel);
    out << "  <text x=\"" << detail::num((p.x + th) * k) << "\" y=\"" << detail::num((p.y + 2 * th) * k)
        << "\" font-size=\"" << detail::num(th * k) << "\">" << detail::xml_escape(p.panel.label) << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

/// ENTITIES-only ASCII DXF: a closed five-vertex LWPOLYLINE per panel and a
/// TEXT entity per label.
inline std::string write_dxf(const Layout& layout) {
  std::ostringstream out;
  auto group = [&](int code, const std::string& value) { out << code << '\n' << value << '\n'; };
  group(0, "SECTION");
  group(2, "ENTITIES");
  for (const auto& p : layout.placements) {
    const double x0 = p.x, y0 = p.y, x1 = p.x + p.panel.width, y1 = p.y + p.panel.height;
    const double xs[5] = {x0, x0, x1, x1, x0}, ys[5] = {y0, y1, y1, y0, y0};
    group(0, "LWPOLYLINE");
    group(8, "0");
    group(90, "5");
    group(70, "1");
    for (int i = 0; i < 5; ++i) {
      group(10, detail::num(xs[i]));
      group(20, detail::num(ys[i]));
    }
  }
  for (const auto& p : layout.placements) {
    if (p.panel.label.empty()) continue;
    const double th = detail::label_height(p.panel);
    group(0, "TEXT");
    group(8, "0");
    group(10, detail::num(p.x + th));
    group(20, detail::num(p.y + th));
    group(40, detail::num(th));
    group(1, p.panel.label);
  }
  group(0, "ENDSEC");
  group(0, "EOF");
  return out.str();
}

}  // namespace cdm::fab
