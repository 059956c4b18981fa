#pragma once

// JSON interchange for assemblies, panels, plans and optimizer results.

#include <cmath>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "cdm/error.hpp"
#include "cdm/fabricate.hpp"
#include "cdm/inverse.hpp"
#include "cdm/performance.hpp"
#include "cdm/robotics.hpp"
#include "cdm/sketchcad.hpp"
#include "cdm/solids.hpp"

namespace cdm::io {

using nlohmann::json;

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw InvalidArgument("failed writing '" + path + "'");
}

inline json parse_json(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidArgument(what + " is not valid JSON: " + e.what());
  }
}

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

namespace detail {

inline json vec(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

inline const json& field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw InvalidArgument(where + ": missing field '" + key + "'");
  return j.at(key);
}

inline double number(const json& j, const std::string& where) {
  if (!j.is_number()) throw InvalidArgument(where + " must be a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw InvalidArgument(where + " must be finite");
  return v;
}

inline std::vector<double> numbers(const json& j, std::size_t n, const std::string& where) {
  if (!j.is_array() || j.size() != n) {
    throw InvalidArgument(where + " must be an array of " + std::to_string(n) + " numbers");
  }
  std::vector<double> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(number(j[i], where));
  return out;
}

inline Vec3 vec3(const json& j, const std::string& where) {
  const auto v = numbers(j, 3, where);
  return {v[0], v[1], v[2]};
}

inline std::string text(const json& j, const std::string& where) {
  if (!j.is_string()) throw InvalidArgument(where + " must be a string");
  return j.get<std::string>();
}

}  // namespace detail

/// Millimetres per declared unit.
inline double unit_to_mm(const std::string& units) {
  if (units == "mm") return 1;
  if (units == "m") return 1000;
  if (units == "in") return 25.4;
  throw InvalidArgument("unknown units '" + units + "' (expected mm, m or in)");
}

// ---------------------------------------------------------------------------
// Assembly files: {units, components: [{name, kind, dims, mass?, translation,
// rotation_deg? | rpy?, parent?, joint?, visual_offset?}]}

inline json component_json(const robot::Component& c, std::optional<robot::JointSpec> joint = {}) {
  json j;
  j["name"] = c.name;
  if (const auto* b = std::get_if<robot::Cuboid>(&c.geometry)) {
    j["kind"] = "box";
    j["dims"] = json::array({b->w, b->h, b->d});
  } else {
    const auto& cy = std::get<robot::CylinderGeom>(c.geometry);
    j["kind"] = "cylinder";
    j["dims"] = json::array({cy.r, cy.h});
  }
  j["mass"] = c.mass;
  j["translation"] = detail::vec(c.translation);
  j["rpy"] = detail::vec(c.rpy);
  if (c.visual_offset != Vec3::Zero()) j["visual_offset"] = detail::vec(c.visual_offset);
  if (c.parent) j["parent"] = *c.parent;
  if (joint && joint->type != robot::JointType::fixed) {
    json jj{{"type", std::string(robot::to_string(joint->type))}, {"axis", detail::vec(joint->axis)}};
    if (joint->type == robot::JointType::revolute) {
      jj["lower"] = joint->lower;
      jj["upper"] = joint->upper;
    }
    j["joint"] = jj;
  }
  return j;
}

inline json assembly_json(const robot::Assembly& a, const std::string& units = "mm") {
  json comps = json::array();
  for (const auto& c : a.components()) comps.push_back(component_json(c, a.joint(c.name)));
  return {{"units", units}, {"components", comps}};
}

struct ParsedComponent {
  robot::Component component;
  std::optional<robot::JointSpec> joint;
};

inline ParsedComponent parse_component(const json& j, std::size_t index) {
  const std::string where = "component " + std::to_string(index);
  ParsedComponent out;
  robot::Component& c = out.component;
  c.name = detail::text(detail::field(j, "name", where), where + ".name");
  cdm::detail::require(!c.name.empty(), where + ": name must be non-empty");
  const std::string kind = detail::text(detail::field(j, "kind", where), where + ".kind");
  const double mass = j.contains("mass") ? detail::number(j.at("mass"), where + ".mass") : 0.0;
  if (kind == "box") {
    const auto d = detail::numbers(detail::field(j, "dims", where), 3, where + ".dims");
    c = robot::create_box(c.name, mass, d[0], d[1], d[2]);
  } else if (kind == "cylinder") {
    const auto d = detail::numbers(detail::field(j, "dims", where), 2, where + ".dims");
    c = robot::create_cylinder(c.name, mass, d[0], d[1]);
  } else {
    throw InvalidArgument(where + ": unknown kind '" + kind + "' (expected box or cylinder)");
  }
  c.translation = detail::vec3(detail::field(j, "translation", where), where + ".translation");
  if (j.contains("rotation_deg") && j.contains("rpy")) {
    throw InvalidArgument(where + ": give either rotation_deg or rpy, not both");
  }
  if (j.contains("rotation_deg")) {
    c.rpy = Vec3(0, 0, deg_to_rad(detail::number(j.at("rotation_deg"), where + ".rotation_deg")));
  } else if (j.contains("rpy")) {
    c.rpy = detail::vec3(j.at("rpy"), where + ".rpy");
  }
  if (j.contains("visual_offset")) c.visual_offset = detail::vec3(j.at("visual_offset"), where + ".visual_offset");
  if (j.contains("parent") && !j.at("parent").is_null()) {
    c.parent = detail::text(j.at("parent"), where + ".parent");
  }
  if (j.contains("joint")) {
    const json& jj = j.at("joint");
    const std::string type = detail::text(detail::field(jj, "type", where + ".joint"), where + ".joint.type");
    const Vec3 axis = jj.contains("axis") ? detail::vec3(jj.at("axis"), where + ".joint.axis") : Vec3::UnitZ();
    if (type == "fixed") {
      out.joint = robot::JointSpec{};
    } else if (type == "continuous") {
      out.joint = robot::continuous(axis);
    } else if (type == "revolute") {
      out.joint = robot::revolute(axis, detail::number(detail::field(jj, "lower", where), where + ".joint.lower"),
                                  detail::number(detail::field(jj, "upper", where), where + ".joint.upper"));
    } else {
      throw InvalidArgument(where + ": unknown joint type '" + type + "'");
    }
  }
  return out;
}

struct AssemblyFile {
  std::string units;
  std::vector<ParsedComponent> components;
};

inline AssemblyFile parse_assembly(const json& j) {
  AssemblyFile out;
  out.units = detail::text(detail::field(j, "units", "assembly"), "assembly.units");
  unit_to_mm(out.units);
  const json& comps = detail::field(j, "components", "assembly");
  if (!comps.is_array()) throw InvalidArgument("assembly.components must be an array");
  std::set<std::string> names;
  for (std::size_t i = 0; i < comps.size(); ++i) {
    out.components.push_back(parse_component(comps[i], i));
    if (!names.insert(out.components.back().component.name).second) {
      throw InvalidArgument("duplicate component name '" + out.components.back().component.name + "'");
    }
  }
  return out;
}

/// Robot assembly in millimetres, finalized.
inline robot::Assembly to_robot(const AssemblyFile& f) {
  const double k = unit_to_mm(f.units);
  robot::Assembly a;
  for (const auto& pc : f.components) {
    robot::Component c = pc.component;
    c.translation *= k;
    c.visual_offset *= k;
    if (auto* b = std::get_if<robot::Cuboid>(&c.geometry)) {
      *b = {b->w * k, b->h * k, b->d * k};
    } else {
      auto& cy = std::get<robot::CylinderGeom>(c.geometry);
      cy = {cy.r * k, cy.h * k};
    }
    a.add(std::move(c));
  }
  for (const auto& pc : f.components) {
    if (pc.joint) a.set_joint(pc.component.name, *pc.joint);
  }
  a.finalize();
  return a;
}

/// Geometry in the file's own units; no parent structure required.
inline SolidNode to_solid(const AssemblyFile& f) {
  cdm::detail::require(!f.components.empty(), "assembly has no components");
  std::vector<SolidNode> parts;
  for (const auto& pc : f.components) parts.push_back(robot::to_solid(pc.component));
  return make_union(std::move(parts));
}

/// Extruded DSL solids as box/cylinder components (centered frames).
inline json sketch_assembly_json(const std::vector<sketch::ExtrudedSolid>& solids, const std::string& units) {
  json comps = json::array();
  for (const auto& s : solids) {
    const LeafNode* leaf = s.solid.leaf();
    if (!leaf) throw InvalidArgument("solid '" + s.name + "' is not a single primitive");
    json j{{"name", s.name}};
    if (const auto* b = std::get_if<Box>(&leaf->primitive)) {
      j["kind"] = "box";
      j["dims"] = json::array({b->w, b->h, b->d});
    } else {
      const auto& cy = std::get<Cylinder>(leaf->primitive);
      j["kind"] = "cylinder";
      j["dims"] = json::array({cy.r, cy.h});
    }
    j["translation"] = detail::vec(leaf->transform.translation);
    j["rpy"] = detail::vec(robot::matrix_to_rpy(leaf->transform.rotation));
    const Aabb box = aabb(s.solid);
    j["aabb"] = {{"min", detail::vec(box.min)}, {"max", detail::vec(box.max)}};
    comps.push_back(j);
  }
  return {{"units", units}, {"components", comps}};
}

// ---------------------------------------------------------------------------
// Cabinet

inline json cabinet_spec_json(const perf::CabinetSpec& s) {
  return {{"height", s.height},
          {"width", s.width},
          {"depth", s.depth},
          {"thickness", s.board_thickness},
          {"shelves", s.n_shelves}};
}

inline perf::CabinetSpec parse_cabinet_spec(const json& j) {
  const std::string w = "cabinet";
  perf::CabinetSpec s{detail::number(detail::field(j, "height", w), "cabinet.height"),
                      detail::number(detail::field(j, "width", w), "cabinet.width"),
                      detail::number(detail::field(j, "depth", w), "cabinet.depth"),
                      detail::number(detail::field(j, "thickness", w), "cabinet.thickness"), 0};
  const json& n = detail::field(j, "shelves", w);
  if (!n.is_number_integer()) throw InvalidArgument("cabinet.shelves must be an integer");
  s.n_shelves = n.get<int>();
  s.validate();
  return s;
}

/// Boards as boxes: x across the width, y front to back, z up; the back
/// board sits behind the sides.
inline json cabinet_assembly_json(const perf::CabinetSpec& s) {
  s.validate();
  cdm::detail::require(s.board_thickness > 0, "board thickness must be positive for a cabinet model");
  const double H = s.height, W = s.width, D = s.depth, t = s.board_thickness;
  json comps = json::array();
  auto board = [&](const std::string& name, double w, double h, double d, double x, double y, double z) {
    comps.push_back({{"name", name},
                     {"kind", "box"},
                     {"dims", json::array({w, h, d})},
                     {"translation", json::array({x, y, z})}});
  };
  board("side_1", t, D, H, -W / 2 + t / 2, D / 2, H / 2);
  board("side_2", t, D, H, W / 2 - t / 2, D / 2, H / 2);
  board("top", W - 2 * t, D, t, 0, D / 2, H - t / 2);
  board("bottom", W - 2 * t, D, t, 0, D / 2, t / 2);
  for (int i = 1; i <= s.n_shelves; ++i) {
    board("shelf_" + std::to_string(i), W - 2 * t, D, t, 0, D / 2, t + (H - 2 * t) * i / (s.n_shelves + 1));
  }
  board("back", W, t, H, 0, D + t / 2, H / 2);
  return {{"units", "in"}, {"cabinet", cabinet_spec_json(s)}, {"components", comps}};
}

inline std::string_view to_string(fab::PanelKind k) {
  switch (k) {
    case fab::PanelKind::side: return "side";
    case fab::PanelKind::top_bottom: return "top_bottom";
    case fab::PanelKind::shelf: return "shelf";
    case fab::PanelKind::back: return "back";
  }
  return "?";
}

inline fab::PanelKind parse_panel_kind(const std::string& s) {
  for (auto k : {fab::PanelKind::side, fab::PanelKind::top_bottom, fab::PanelKind::shelf, fab::PanelKind::back}) {
    if (to_string(k) == s) return k;
  }
  throw InvalidArgument("unknown panel kind '" + s + "'");
}

inline json panels_json(const std::vector<fab::Panel>& panels, const std::string& units = "in") {
  json arr = json::array();
  for (const auto& p : panels) {
    arr.push_back({{"id", p.id},
                   {"kind", std::string(to_string(p.kind))},
                   {"width", p.width},
                   {"height", p.height},
                   {"label", p.label}});
  }
  return {{"units", units}, {"panels", arr}};
}

inline std::vector<fab::Panel> parse_panels(const json& j) {
  const json& arr = detail::field(j, "panels", "panel file");
  if (!arr.is_array()) throw InvalidArgument("panels must be an array");
  std::vector<fab::Panel> out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string w = "panel " + std::to_string(i);
    fab::Panel p{detail::text(detail::field(arr[i], "id", w), w + ".id"),
                 parse_panel_kind(detail::text(detail::field(arr[i], "kind", w), w + ".kind")),
                 detail::number(detail::field(arr[i], "width", w), w + ".width"),
                 detail::number(detail::field(arr[i], "height", w), w + ".height"),
                 arr[i].contains("label") ? detail::text(arr[i].at("label"), w + ".label") : ""};
    cdm::detail::require(p.width > 0 && p.height > 0, w + ": dimensions must be positive");
    out.push_back(std::move(p));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Claw instances and plans: {claw: [x,y,z], objects: [[...]], bins: [[...]], t_max}

inline inverse::GridPoint grid_point(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 3) throw InvalidArgument(where + " must be an array of 3 integers");
  inverse::GridPoint p{};
  for (int i = 0; i < 3; ++i) {
    if (!j[i].is_number_integer()) throw InvalidArgument(where + " must hold integers");
    p[i] = j[i].get<int>();
  }
  return p;
}

inline inverse::ClawInstance parse_claw_instance(const json& j) {
  inverse::ClawInstance inst;
  inst.claw0 = grid_point(detail::field(j, "claw", "instance"), "instance.claw");
  for (const char* key : {"objects", "bins"}) {
    const json& arr = detail::field(j, key, "instance");
    if (!arr.is_array()) throw InvalidArgument(std::string("instance.") + key + " must be an array");
    auto& dst = std::string(key) == "objects" ? inst.objects : inst.bins;
    for (std::size_t i = 0; i < arr.size(); ++i) {
      dst.push_back(grid_point(arr[i], std::string("instance.") + key + "[" + std::to_string(i) + "]"));
    }
  }
  if (j.contains("t_max")) inst.t_max = detail::number(j.at("t_max"), "instance.t_max");
  inst.validate();
  return inst;
}

inline json plan_json(const inverse::Plan& plan, const std::string& method) {
  json actions = json::array();
  for (const auto& a : plan.actions) {
    json j{{"action", std::string(inverse::to_string(a.kind))}};
    if (a.kind != inverse::ActionKind::grasp && a.kind != inverse::ActionKind::release) j["amount"] = a.amount;
    actions.push_back(j);
  }
  return {{"method", method}, {"cost", plan.cost}, {"actions", actions}};
}

// ---------------------------------------------------------------------------
// Optimizer results: {problem, x, f, iterations, converged, seed}

inline json result_json(const std::string& problem, const inverse::OptResult& r, std::uint64_t seed) {
  json x = json::array();
  for (Eigen::Index i = 0; i < r.x.size(); ++i) x.push_back(r.x[i]);
  return {{"problem", problem},
          {"x", x},
          {"f", std::isfinite(r.f) ? json(r.f) : json(nullptr)},
          {"iterations", r.iterations},
          {"converged", r.converged},
          {"message", r.message},
          {"seed", seed}};
}

}  // namespace cdm::io
