#include "io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "errors.hpp"
#include "mesh_io.hpp"

namespace crackwave {

using nlohmann::json;

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_field_csv(std::ostream& os, const FieldSamples& f) {
  const bool grad = f.has_gradients();
  os << "x1,x2,x3,re_u,im_u";
  if (grad) os << ",re_ux,im_ux,re_uy,im_uy,re_uz,im_uz";
  os << '\n';
  for (std::size_t i = 0; i < f.points.size(); ++i) {
    const Vec3& p = f.points[i];
    os << fmt17(p[0]) << ',' << fmt17(p[1]) << ',' << fmt17(p[2]) << ',' << fmt17(f.values[i].real()) << ','
       << fmt17(f.values[i].imag());
    if (grad)
      for (int c = 0; c < 3; ++c) os << ',' << fmt17(f.gradients[i][c].real()) << ',' << fmt17(f.gradients[i][c].imag());
    os << '\n';
  }
}

void write_sweep_csv(std::ostream& os, const SweepResult& r) {
  os << "t,iota,predicted_bad_nearest,dist_to_predicted";
  for (std::size_t c = 0; c < r.channel.size(); ++c) os << ",iota_" << c;
  os << '\n';
  for (std::size_t i = 0; i < r.t.size(); ++i) {
    os << fmt17(r.t[i]) << ',' << fmt17(r.iota[i]) << ',' << fmt17(r.nearest_predicted[i]) << ','
       << fmt17(r.dist_to_predicted[i]);
    for (const auto& ch : r.channel) os << ',' << fmt17(ch[i]);
    os << '\n';
  }
}

json complex_list(const std::vector<cplx>& v) {
  json out = json::array();
  for (const cplx& z : v) out.push_back({z.real(), z.imag()});
  return out;
}

std::vector<cplx> complex_list_from_json(const json& j, const std::string& path) {
  if (!j.is_array()) fail(ErrorKind::parse, "field " + path + ": expected an array of [re, im] pairs");
  std::vector<cplx> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const json& z = j[i];
    const std::string at = path + "[" + std::to_string(i) + "]";
    if (z.is_number()) {
      out.emplace_back(z.get<double>(), 0.0);
    } else if (z.is_array() && z.size() == 2 && z[0].is_number() && z[1].is_number()) {
      out.emplace_back(z[0].get<double>(), z[1].get<double>());
    } else {
      fail(ErrorKind::parse, "field " + at + ": expected a number or [re, im]");
    }
  }
  return out;
}

namespace {

// NaN and inf have no JSON form
json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

json to_json(const GapReport& g) {
  json j = {{"instance", g.instance},
            {"rel_gap_u", num(g.rel_gap_u)},
            {"rel_gap_grad", num(g.rel_gap_grad)},
            {"interior_residual", num(g.interior_residual)},
            {"exterior_residual", num(g.exterior_residual)},
            {"refinement", g.refinement},
            {"sup_u", num(g.sup_u)},
            {"degenerate", g.degenerate}};
  if (g.h > 0) j["h"] = g.h;
  return j;
}

json to_json(const EigenPair& e) {
  return {{"mu2", e.mu2},
          {"mu", e.mu()},
          {"weight", e.mesh.radial_weight ? "r" : "1"},
          {"err_estimate", e.err_estimate},
          {"residual", num(e.residual)},
          {"iterations", e.iterations},
          {"phi", std::vector<double>(e.phi.data(), e.phi.data() + e.phi.size())},
          {"mesh", mesh_to_json(e.mesh)}};
}

json to_json(const DecayReport& d) {
  return {{"radii", d.radii}, {"integrals", d.integrals}, {"slope", num(d.slope)}, {"alphas", d.alphas},
          {"weighted", d.weighted}};
}

json to_json(const PlanarCrackParams& p) {
  return {{"center", {p.center[0], p.center[1], p.center[2]}},
          {"tilt1", p.tilt1},
          {"tilt2", p.tilt2},
          {"a", p.a},
          {"b", p.b},
          {"m", p.m},
          {"n1", p.n1},
          {"n2", p.n2},
          {"coeffs", complex_list(p.coeffs)}};
}

json to_json(const GeometryFit& f) {
  json coeffs = json::array();
  for (const auto& c : f.coeffs) coeffs.push_back(complex_list(c));
  return {{"params", to_json(f.params)},
          {"coeffs_per_frequency", coeffs},
          {"misfit", f.misfit},
          {"misfit_trace", f.history},
          {"evals", f.evals},
          {"budget_exhausted", f.budget_exhausted},
          {"seed", f.seed},
          {"budget", f.budget}};
}

json to_json(const SweepResult& r) {
  json dips = json::array();
  for (const SweepDip& d : r.dips) dips.push_back({{"t", d.t}, {"iota", d.iota}, {"channel", d.channel}});
  json channels = json::array();
  for (const auto& c : r.channel) {
    json row = json::array();
    for (double v : c) row.push_back(num(v));
    channels.push_back(row);
  }
  json iota = json::array();
  for (double v : r.iota) iota.push_back(num(v));
  return {{"t", r.t}, {"iota", iota}, {"channels", channels}, {"dips", dips}, {"predicted", r.predicted},
          {"degenerate", r.degenerate}};
}

PlanarCrackParams params_from_json(const json& j, const PlanarCrackParams& base) {
  if (!j.is_object()) fail(ErrorKind::parse, "field params: expected an object");
  PlanarCrackParams p = base;
  auto number = [&](const std::string& key) {
    const json& v = j.at(key);
    if (!v.is_number()) fail(ErrorKind::parse, "field params." + key + ": expected a number");
    return v.get<double>();
  };
  auto integer = [&](const std::string& key) {
    const json& v = j.at(key);
    if (!v.is_number_integer()) fail(ErrorKind::parse, "field params." + key + ": expected an integer");
    return v.get<int>();
  };
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& key = it.key();
    if (key == "center") {
      if (!it->is_array() || it->size() != 3) fail(ErrorKind::parse, "field params.center: expected 3 numbers");
      for (int c = 0; c < 3; ++c) {
        if (!(*it)[c].is_number())
          fail(ErrorKind::parse, "field params.center[" + std::to_string(c) + "]: expected a number");
        p.center[c] = (*it)[c].get<double>();
      }
    } else if (key == "tilt1") {
      p.tilt1 = number(key);
    } else if (key == "tilt2") {
      p.tilt2 = number(key);
    } else if (key == "a") {
      p.a = number(key);
    } else if (key == "b") {
      p.b = number(key);
    } else if (key == "m") {
      p.m = integer(key);
    } else if (key == "n1") {
      p.n1 = integer(key);
    } else if (key == "n2") {
      p.n2 = integer(key);
    } else if (key == "coeffs") {
      p.coeffs = complex_list_from_json(*it, "params.coeffs");
    } else {
      fail(ErrorKind::parse, "field params." + key + ": unknown key");
    }
  }
  return p;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  require(out.good(), ErrorKind::io, "cannot write " + path);
  out << text;
  out.close();
  require(!out.fail(), ErrorKind::io, "write failed for " + path);
}

}  // namespace crackwave
