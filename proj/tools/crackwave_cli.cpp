// crackwave command line: one experiment per invocation, artifacts + manifest in --out.
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <openssl/evp.h>

#include <CLI11.hpp>
#include <json.hpp>

#include "crackwave/crackwave.h"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr int kExitSchema = 2;
constexpr int kExitNumerical = 3;

// Exit code carried out of a subcommand body.
struct Exit {
  int code;
};

[[noreturn]] void schema_error(const std::string& msg) {
  std::cerr << "crackwave: " << msg << '\n';
  throw Exit{kExitSchema};
}

void check(cw_status s) {
  if (s == CW_OK) return;
  std::cerr << "crackwave: " << cw_status_name(s) << " error: " << cw_last_error() << '\n';
  const bool bad_input = s == CW_ERR_INVALID_ARGUMENT || s == CW_ERR_VALIDATION || s == CW_ERR_PARSE;
  throw Exit{bad_input ? kExitSchema : kExitNumerical};
}

std::string take(char* s) {
  std::string out(s);
  cw_string_free(s);
  return out;
}

enum class Kind { integer, number, boolean, string, array, object, number_list };

struct Key {
  Kind kind;
  json fallback;  // null: optional without default
};

using Schema = std::map<std::string, Key>;

const char* kind_name(Kind k) {
  switch (k) {
    case Kind::integer: return "an integer";
    case Kind::number: return "a number";
    case Kind::boolean: return "a boolean";
    case Kind::string: return "a string";
    case Kind::array: return "an array";
    case Kind::object: return "an object";
    case Kind::number_list: return "a list of numbers";
  }
  return "?";
}

bool matches(Kind k, const json& v) {
  switch (k) {
    case Kind::integer: return v.is_number_integer();
    case Kind::number: return v.is_number();
    case Kind::boolean: return v.is_boolean();
    case Kind::string: return v.is_string();
    case Kind::array: return v.is_array();
    case Kind::object: return v.is_object();
    case Kind::number_list:
      if (!v.is_array()) return false;
      for (const json& x : v)
        if (!x.is_number()) return false;
      return true;
  }
  return false;
}

Schema schema_for(const std::string& cmd) {
  Schema s = {{"out", {Kind::string, "out"}}, {"seed", {Kind::integer, 42}}};
  auto add = [&](const std::string& k, Kind kind, json v) { s[k] = Key{kind, std::move(v)}; };
  if (cmd == "forward") {
    add("k", Kind::number, 1.0);
    add("t", Kind::number, 1.0);
    add("grid", Kind::integer, 41);
    add("half_width", Kind::number, 3.0);
    add("params", Kind::object, nullptr);
    add("mesh", Kind::string, nullptr);
    add("density", Kind::array, nullptr);
  } else if (cmd == "counterexample-sphere") {
    add("refine", Kind::integer, 4);
    add("grid", Kind::integer, 41);
    add("k", Kind::number, nullptr);
    add("control_fraction", Kind::number, 0.0);
    add("control_cell", Kind::integer, 0);
  } else if (cmd == "counterexample-cusp2d") {
    add("a", Kind::number, 1.0);
    add("h", Kind::number, 0.04);
    add("grid", Kind::integer, 201);
    add("control_fraction", Kind::number, 0.0);
    add("control_cell", Kind::integer, 0);
  } else if (cmd == "counterexample-axisym") {
    add("h", Kind::number, 0.08);
    add("n_theta", Kind::integer, 64);
    add("grid", Kind::integer, 41);
    add("control_fraction", Kind::number, 0.0);
    add("control_cell", Kind::integer, 0);
  } else if (cmd == "eigen-cusp") {
    add("a", Kind::number, 1.0);
    add("h", Kind::number, 0.02);
    add("axisymmetric", Kind::boolean, false);
    add("radii", Kind::number_list, json::array({0.05, 0.07, 0.1, 0.14, 0.2, 0.28, 0.4, 0.5}));
    add("alphas", Kind::number_list, json::array({1.0, 2.0, 2.5}));
  } else if (cmd == "invert") {
    add("k", Kind::number, 1.0);
    add("grid", Kind::integer, 11);
    add("half_width", Kind::number, 3.0);
    add("budget", Kind::integer, 4000);
    add("noise", Kind::number, 0.0);
    add("perturbation", Kind::number, 0.1);
    add("truth", Kind::object, nullptr);
  } else if (cmd == "sweep") {
    add("k", Kind::number, 1.0);
    add("refine", Kind::integer, 3);
    add("grid", Kind::integer, 21);
    add("half_width", Kind::number, 4.0);
    add("t_min", Kind::number, 1.5);
    add("t_max", Kind::number, 5.0);
    add("t_step", Kind::number, 0.01);
    add("lmax", Kind::integer, 3);
  }
  return s;
}

// Defaults, then the config file, then flags.
json effective_config(const std::string& cmd, const std::string& config_path, const json& flags) {
  const Schema schema = schema_for(cmd);
  json cfg = json::object();
  for (const auto& [k, key] : schema)
    if (!key.fallback.is_null()) cfg[k] = key.fallback;
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) schema_error("cannot read config file " + config_path);
    json file;
    try {
      file = json::parse(in);
    } catch (const json::parse_error& e) {
      schema_error("config " + config_path + " is not valid JSON: " + e.what());
    }
    if (!file.is_object()) schema_error("config " + config_path + ": top level must be an object");
    for (auto it = file.begin(); it != file.end(); ++it) {
      auto k = schema.find(it.key());
      if (k == schema.end()) schema_error("config field " + it.key() + ": not a key of " + cmd);
      if (!matches(k->second.kind, *it))
        schema_error("config field " + it.key() + ": expected " + kind_name(k->second.kind));
      cfg[it.key()] = *it;
    }
  }
  for (auto it = flags.begin(); it != flags.end(); ++it) cfg[it.key()] = *it;
  return cfg;
}

void require_positive(const json& cfg, const std::string& key) {
  if (cfg.contains(key) && !(cfg[key].get<double>() > 0)) schema_error("field " + key + ": must be positive");
}

void validate_ranges(const std::string& cmd, const json& cfg) {
  for (const char* k : {"grid", "h", "a", "half_width", "t_step", "t_min", "t_max", "budget", "n_theta"})
    require_positive(cfg, k);
  if (cfg.contains("grid") && cfg["grid"].get<int>() < 2) schema_error("field grid: needs at least 2 points");
  if (cfg.contains("refine") && (cfg["refine"].get<int>() < 0 || cfg["refine"].get<int>() > 6))
    schema_error("field refine: expected 0..6");
  if (cfg.contains("k") && !cfg["k"].is_null() && !(cfg["k"].get<double>() > 0)) schema_error("field k: must be positive");
  if (cmd == "sweep" && cfg["t_max"].get<double>() < cfg["t_min"].get<double>())
    schema_error("field t_max: must not be below t_min");
  if (cmd == "forward" && cfg.contains("mesh") != cfg.contains("density"))
    schema_error("field density: mesh and density go together");
  if (cmd == "forward" && cfg.contains("mesh") && cfg.contains("params"))
    schema_error("field params: give either params or mesh, not both");
  if (cfg.contains("control_fraction") && cfg["control_fraction"].get<double>() < 0)
    schema_error("field control_fraction: must not be negative");
}

std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr);
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

struct Artifacts {
  std::vector<std::pair<std::string, std::string>> files;  // name, content
  void add(const std::string& name, std::string content) { files.emplace_back(name, std::move(content)); }
};

json run_forward(const json& cfg, Artifacts& art) {
  const double k = cfg["k"], t = cfg["t"], w = cfg["half_width"];
  const int n = cfg["grid"];
  char* csv = nullptr;
  if (cfg.contains("mesh")) {
    cw_mesh* mesh = nullptr;
    check(cw_mesh_read(cfg["mesh"].get<std::string>().c_str(), &mesh));
    size_t nv = 0;
    cw_mesh_counts(mesh, &nv, nullptr);
    const json& d = cfg["density"];
    if (d.size() != nv) {
      cw_mesh_free(mesh);
      schema_error("field density: expected " + std::to_string(nv) + " entries, one per vertex");
    }
    std::vector<double> g;
    for (std::size_t i = 0; i < d.size(); ++i) {
      if (d[i].is_number()) {
        g.push_back(d[i]);
        g.push_back(0.0);
      } else if (d[i].is_array() && d[i].size() == 2 && d[i][0].is_number() && d[i][1].is_number()) {
        g.push_back(d[i][0]);
        g.push_back(d[i][1]);
      } else {
        cw_mesh_free(mesh);
        schema_error("field density[" + std::to_string(i) + "]: expected a number or [re, im]");
      }
    }
    const cw_status s = cw_forward_mesh_csv(mesh, g.data(), k, 1.0 * t, n, w, &csv);
    cw_mesh_free(mesh);
    check(s);
  } else {
    const std::string params = cfg.contains("params") ? cfg["params"].dump() : std::string();
    check(cw_forward_planar_csv(params.c_str(), k, t, n, w, &csv));
  }
  art.add("field.csv", take(csv));
  return json::object();
}

json run_counterexample(const std::string& cmd, const json& cfg, Artifacts& art) {
  cw_instance* inst = nullptr;
  if (cmd == "counterexample-sphere") {
    const double k = cfg.contains("k") ? cfg["k"].get<double>() : 0.0;
    check(cw_instance_sphere(cfg["refine"], k, &inst));
  } else if (cmd == "counterexample-cusp2d") {
    check(cw_instance_cusp2d(cfg["a"], cfg["h"], &inst));
  } else {
    check(cw_instance_axisym(cfg["h"], cfg["n_theta"], &inst));
  }
  std::unique_ptr<cw_instance, void (*)(cw_instance*)> guard(inst, cw_instance_free);
  char* gap = nullptr;
  check(cw_instance_gap_json(inst, cfg["grid"], &gap));
  json report = json::parse(take(gap));
  const double fraction = cfg["control_fraction"];
  if (fraction > 0) {
    double perturbed = 0;
    check(cw_instance_perturbed_gap(inst, cfg["control_cell"], fraction, cfg["grid"], &perturbed));
    report["control"] = {{"fraction", fraction}, {"cell", cfg["control_cell"]}, {"rel_gap_u", perturbed}};
  }
  char* u1 = nullptr;
  char* u2 = nullptr;
  check(cw_instance_top_field_csv(inst, 1, &u1));
  art.add("field_u1.csv", take(u1));
  check(cw_instance_top_field_csv(inst, 2, &u2));
  art.add("field_u2.csv", take(u2));
  art.add("gap.json", report.dump(2) + "\n");
  return {{"rel_gap_u", report["rel_gap_u"]}};
}

json run_eigen(const json& cfg, Artifacts& art) {
  cw_eigenpair* e = nullptr;
  check(cw_eigen_cusp(cfg["a"], cfg["h"], cfg["axisymmetric"].get<bool>() ? 1 : 0, &e));
  std::unique_ptr<cw_eigenpair, void (*)(cw_eigenpair*)> guard(e, cw_eigenpair_free);
  char* pair = nullptr;
  check(cw_eigenpair_json(e, &pair));
  art.add("eigenpair.json", take(pair) + "\n");
  const auto radii = cfg["radii"].get<std::vector<double>>();
  const auto alphas = cfg["alphas"].get<std::vector<double>>();
  char* decay = nullptr;
  check(cw_eigenpair_decay_json(e, radii.data(), radii.size(), alphas.data(), alphas.size(), &decay));
  art.add("decay.json", take(decay) + "\n");
  double mu2 = 0, err = 0;
  cw_eigenpair_mu2(e, &mu2, &err);
  return {{"mu2", mu2}, {"err_estimate", err}};
}

json run_invert(const json& cfg, Artifacts& art) {
  json req = {{"k", cfg["k"]},       {"grid", cfg["grid"]},   {"half_width", cfg["half_width"]},
              {"budget", cfg["budget"]}, {"seed", cfg["seed"]}, {"noise", cfg["noise"]},
              {"perturbation", cfg["perturbation"]}};
  if (cfg.contains("truth")) req["truth"] = cfg["truth"];
  char* out = nullptr;
  check(cw_invert_json(req.dump().c_str(), &out));
  json fit = json::parse(take(out));
  art.add("fit.json", fit.dump(2) + "\n");
  return {{"misfit", fit["fit"]["misfit"]}, {"errors", fit["errors"]}};
}

json run_sweep(const json& cfg, Artifacts& art) {
  cw_sweep* s = nullptr;
  check(cw_sweep_sphere(cfg["k"], cfg["refine"], cfg["t_min"], cfg["t_max"], cfg["t_step"], cfg["grid"],
                        cfg["half_width"], cfg["lmax"], &s));
  std::unique_ptr<cw_sweep, void (*)(cw_sweep*)> guard(s, cw_sweep_free);
  char* csv = nullptr;
  char* js = nullptr;
  check(cw_sweep_csv(s, &csv));
  art.add("sweep.csv", take(csv));
  check(cw_sweep_json(s, &js));
  json j = json::parse(take(js));
  art.add("sweep.json", j.dump(2) + "\n");
  return {{"dips", j["dips"]}};
}

void write_all(const fs::path& dir, const std::string& cmd, const json& cfg, const Artifacts& art, double seconds,
               const json& summary) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    std::cerr << "crackwave: cannot create " << dir << ": " << ec.message() << '\n';
    throw Exit{kExitNumerical};
  }
  json files = json::array();
  for (const auto& [name, content] : art.files) {
    std::ofstream out(dir / name, std::ios::binary);
    out << content;
    if (!out) {
      std::cerr << "crackwave: cannot write " << (dir / name) << '\n';
      throw Exit{kExitNumerical};
    }
    files.push_back({{"name", name}, {"sha256", sha256_hex(content)}, {"bytes", content.size()}});
  }
  json manifest = {{"subcommand", cmd},
                   {"config", cfg},
                   {"versions", json::parse(cw_build_info())},
                   {"wall_time_s", seconds},
                   {"float_format", "%.17g"},
                   {"files", files},
                   {"summary", summary}};
  std::ofstream out(dir / "manifest.json");
  out << manifest.dump(2) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"crackwave: half-space crack experiments"};
  app.require_subcommand(1);

  struct Flags {
    std::string out, config;
    long long seed = 0;
    int refine = 0, grid = 0;
    double a = 0, h = 0, k = 0, t_min = 0, t_max = 0, t_step = 0;
  };
  std::map<std::string, Flags> flags;
  std::map<std::string, CLI::App*> subs;

  const std::vector<std::string> names = {"forward",    "counterexample-sphere", "counterexample-cusp2d",
                                          "counterexample-axisym", "eigen-cusp", "invert", "sweep"};
  const std::map<std::string, std::string> help = {
      {"forward", "double-layer field of a planar crack or a mesh file on the top plane"},
      {"counterexample-sphere", "hemisphere pair with identical top-plane data"},
      {"counterexample-cusp2d", "2D cusp curve pair"},
      {"counterexample-axisym", "axisymmetric cusp surface pair"},
      {"eigen-cusp", "odd Neumann eigenpair of the cusp domain"},
      {"invert", "synthetic planar crack round trip"},
      {"sweep", "frequency sweep of the sphere pair"}};
  for (const std::string& n : names) {
    CLI::App* sub = app.add_subcommand(n, help.at(n));
    sub->set_help_flag("--help", "show this help");  // -h would clash with --h
    Flags& f = flags[n];
    sub->add_option("--out", f.out, "output directory");
    sub->add_option("--seed", f.seed, "random seed");
    sub->add_option("--config", f.config, "JSON config file")->check(CLI::ExistingFile);
    const bool sphere = n == "counterexample-sphere";
    if (sphere || n == "sweep") sub->add_option("--refine", f.refine, "hemisphere refinement level");
    if (n != "eigen-cusp") sub->add_option("--grid", f.grid, "observation grid points per axis");
    if (n == "counterexample-cusp2d" || n == "eigen-cusp") sub->add_option("--a", f.a, "cusp flattening");
    if (n == "counterexample-cusp2d" || n == "counterexample-axisym" || n == "eigen-cusp")
      sub->add_option("--h", f.h, "eigen mesh size");
    if (n == "forward" || sphere || n == "invert" || n == "sweep") sub->add_option("--k", f.k, "wavenumber");
    if (n == "sweep") {
      sub->add_option("--t-min", f.t_min, "first scaling");
      sub->add_option("--t-max", f.t_max, "last scaling");
      sub->add_option("--t-step", f.t_step, "scaling step");
    }
    subs[n] = sub;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitSchema;
  }

  std::string cmd;
  for (const auto& [n, sub] : subs)
    if (sub->parsed()) cmd = n;
  CLI::App* sub = subs[cmd];
  const Flags& f = flags[cmd];

  json given = json::object();
  auto flag = [&](const char* opt, const char* key, const json& v) {
    CLI::Option* o = sub->get_option_no_throw(opt);
    if (o && o->count() > 0) given[key] = v;
  };
  flag("--out", "out", f.out);
  flag("--seed", "seed", f.seed);
  flag("--refine", "refine", f.refine);
  flag("--grid", "grid", f.grid);
  flag("--a", "a", f.a);
  flag("--h", "h", f.h);
  flag("--k", "k", f.k);
  flag("--t-min", "t_min", f.t_min);
  flag("--t-max", "t_max", f.t_max);
  flag("--t-step", "t_step", f.t_step);

  try {
    const json cfg = effective_config(cmd, f.config, given);
    validate_ranges(cmd, cfg);

    const auto start = std::chrono::steady_clock::now();
    Artifacts art;
    json summary;
    if (cmd == "forward") {
      summary = run_forward(cfg, art);
    } else if (cmd.rfind("counterexample-", 0) == 0) {
      summary = run_counterexample(cmd, cfg, art);
    } else if (cmd == "eigen-cusp") {
      summary = run_eigen(cfg, art);
    } else if (cmd == "invert") {
      summary = run_invert(cfg, art);
    } else {
      summary = run_sweep(cfg, art);
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_all(cfg["out"].get<std::string>(), cmd, cfg, art, seconds, summary);
    std::cout << summary.dump() << '\n';
  } catch (const Exit& e) {
    return e.code;
  } catch (const json::exception& e) {
    std::cerr << "crackwave: " << e.what() << '\n';
    return kExitSchema;
  }
  return 0;
}
