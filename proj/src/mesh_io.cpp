#include "mesh_io.hpp"

#include <fstream>
#include <sstream>

#include "errors.hpp"

namespace crackwave {

using nlohmann::json;

namespace {

[[noreturn]] void field_error(const std::string& path, const std::string& what) {
  fail(ErrorKind::parse, "field " + path + ": " + what);
}

const json& member(const json& j, const char* key) {
  if (!j.is_object()) field_error("<root>", "expected an object");
  auto it = j.find(key);
  if (it == j.end()) field_error(key, "missing");
  return *it;
}

template <int N>
std::vector<std::array<double, N>> number_rows(const json& j, const std::string& name) {
  if (!j.is_array()) field_error(name, "expected an array");
  std::vector<std::array<double, N>> rows;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string at = name + "[" + std::to_string(i) + "]";
    if (!j[i].is_array() || j[i].size() != N) field_error(at, "expected " + std::to_string(N) + " numbers");
    std::array<double, N> r;
    for (int k = 0; k < N; ++k) {
      if (!j[i][k].is_number()) field_error(at + "[" + std::to_string(k) + "]", "expected a number");
      r[k] = j[i][k].get<double>();
    }
    rows.push_back(r);
  }
  return rows;
}

template <int N>
std::vector<std::array<int, N>> index_rows(const json& j, const std::string& name, std::size_t bound) {
  if (!j.is_array()) field_error(name, "expected an array");
  std::vector<std::array<int, N>> rows;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string at = name + "[" + std::to_string(i) + "]";
    if (!j[i].is_array() || j[i].size() != N) field_error(at, "expected " + std::to_string(N) + " indices");
    std::array<int, N> r;
    for (int k = 0; k < N; ++k) {
      const json& v = j[i][k];
      if (!v.is_number_integer() || v.get<long long>() < 0 || v.get<long long>() >= static_cast<long long>(bound))
        field_error(at + "[" + std::to_string(k) + "]", "expected a vertex index below " + std::to_string(bound));
      r[k] = v.get<int>();
    }
    rows.push_back(r);
  }
  return rows;
}

}  // namespace

json mesh_to_json(const CrackMesh& mesh) {
  json v = json::array(), c = json::array();
  for (const Vec3& p : mesh.vertices) v.push_back({p[0], p[1], p[2]});
  for (const Tri& t : mesh.triangles) c.push_back({t[0], t[1], t[2]});
  return {{"dim", 3}, {"vertices", v}, {"cells", c}, {"tags", {{"closed", mesh.closed}}},
          {"orientation", mesh.closed ? "closed" : "up"}};
}

json mesh_to_json(const Mesh2D& mesh) {
  json v = json::array(), c = json::array(), sym = json::array(), fr = json::array();
  for (const Vec2& p : mesh.nodes) v.push_back({p[0], p[1]});
  for (const Tri& t : mesh.triangles) c.push_back({t[0], t[1], t[2]});
  for (const TaggedEdge& e : mesh.boundary) (e.tag == EdgeTag::symmetry ? sym : fr).push_back({e.nodes[0], e.nodes[1]});
  json tags = {{"symmetry_edges", sym}, {"free_edges", fr}, {"radial_weight", mesh.radial_weight},
               {"top_nodes", mesh.top_nodes}};
  return {{"dim", 2}, {"vertices", v}, {"cells", c}, {"tags", tags}, {"orientation", "ccw"}};
}

CrackMesh crack_mesh_from_json(const json& j, const CrackMeshChecks& checks) {
  const json& dim = member(j, "dim");
  if (!dim.is_number_integer() || dim.get<int>() != 3) field_error("dim", "expected 3 for a crack mesh");
  const auto verts = number_rows<3>(member(j, "vertices"), "vertices");
  const auto cells = index_rows<3>(member(j, "cells"), "cells", verts.size());
  bool closed = false;
  if (j.contains("tags")) {
    const json& tags = j["tags"];
    if (!tags.is_object()) field_error("tags", "expected an object");
    if (tags.contains("closed")) {
      if (!tags["closed"].is_boolean()) field_error("tags.closed", "expected a boolean");
      closed = tags["closed"].get<bool>();
    }
  }
  if (j.contains("orientation")) {
    const json& o = j["orientation"];
    if (!o.is_string() || (o != "up" && o != "closed")) field_error("orientation", "expected \"up\" or \"closed\"");
  }
  std::vector<Vec3> v;
  for (const auto& r : verts) v.push_back({r[0], r[1], r[2]});
  std::vector<Tri> t(cells.begin(), cells.end());
  CrackMesh m = CrackMesh::from_cells(std::move(v), std::move(t), closed);
  CrackMeshChecks c = checks;
  if (closed) c.require_up = false;
  validate(m, c);
  return m;
}

Mesh2D mesh2d_from_json(const json& j) {
  const json& dim = member(j, "dim");
  if (!dim.is_number_integer() || dim.get<int>() != 2) field_error("dim", "expected 2 for a planar mesh");
  const auto verts = number_rows<2>(member(j, "vertices"), "vertices");
  const auto cells = index_rows<3>(member(j, "cells"), "cells", verts.size());
  Mesh2D m;
  for (const auto& r : verts) m.nodes.push_back({r[0], r[1]});
  m.triangles.assign(cells.begin(), cells.end());
  if (j.contains("tags")) {
    const json& tags = j["tags"];
    if (!tags.is_object()) field_error("tags", "expected an object");
    if (tags.contains("radial_weight")) {
      if (!tags["radial_weight"].is_boolean()) field_error("tags.radial_weight", "expected a boolean");
      m.radial_weight = tags["radial_weight"].get<bool>();
    }
    for (const char* key : {"symmetry_edges", "free_edges"}) {
      if (!tags.contains(key)) continue;
      const auto edges = index_rows<2>(tags[key], std::string("tags.") + key, verts.size());
      for (const auto& e : edges)
        m.boundary.push_back({{e[0], e[1]}, std::string(key) == "symmetry_edges" ? EdgeTag::symmetry : EdgeTag::free});
    }
    if (tags.contains("top_nodes")) {
      const json& tn = tags["top_nodes"];
      if (!tn.is_array()) field_error("tags.top_nodes", "expected an array");
      for (std::size_t i = 0; i < tn.size(); ++i) {
        if (!tn[i].is_number_integer() || tn[i].get<long long>() < 0 ||
            tn[i].get<long long>() >= static_cast<long long>(verts.size()))
          field_error("tags.top_nodes[" + std::to_string(i) + "]", "expected a vertex index");
        m.top_nodes.push_back(tn[i].get<int>());
      }
    }
  }
  validate(m);
  return m;
}

AnyMesh parse_mesh(const std::string& text, const CrackMeshChecks& checks) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::ostringstream os;
    os << "malformed mesh JSON at line " << line << ", column " << col;
    fail(ErrorKind::parse, os.str());
  }
  const json& dim = member(j, "dim");
  if (!dim.is_number_integer()) field_error("dim", "expected 2 or 3");
  if (dim.get<int>() == 3) return crack_mesh_from_json(j, checks);
  if (dim.get<int>() == 2) return mesh2d_from_json(j);
  field_error("dim", "expected 2 or 3");
}

AnyMesh read_mesh(const std::string& path, const CrackMeshChecks& checks) {
  std::ifstream in(path);
  require(in.good(), ErrorKind::io, "cannot open mesh file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_mesh(ss.str(), checks);
}

void write_mesh(const std::string& path, const AnyMesh& mesh) {
  std::ofstream out(path);
  require(out.good(), ErrorKind::io, "cannot write mesh file " + path);
  std::visit([&](const auto& m) { out << mesh_to_json(m).dump() << '\n'; }, mesh);
  require(out.good(), ErrorKind::io, "write failed for " + path);
}

}  // namespace crackwave
