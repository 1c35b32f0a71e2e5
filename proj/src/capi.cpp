#include "crackwave/crackwave.h"

#include <cstring>
#include <memory>
#include <sstream>

#include "counterexamples.hpp"
#include "errors.hpp"
#include "inversion.hpp"
#include "io.hpp"
#include "mesh_io.hpp"

using namespace crackwave;
using nlohmann::json;

struct cw_mesh {
  CrackMesh mesh;
};

struct cw_instance {
  CounterexampleInstance inst;
  std::optional<TopFields> top;
};

struct cw_eigenpair {
  EigenPair pair;
};

struct cw_sweep {
  SweepResult result;
};

namespace {

thread_local std::string last_error;

cw_status status_of(ErrorKind k) {
  switch (k) {
    case ErrorKind::invalid_argument: return CW_ERR_INVALID_ARGUMENT;
    case ErrorKind::domain: return CW_ERR_DOMAIN;
    case ErrorKind::validation: return CW_ERR_VALIDATION;
    case ErrorKind::parse: return CW_ERR_PARSE;
    case ErrorKind::precision: return CW_ERR_PRECISION;
    case ErrorKind::numerical: return CW_ERR_NUMERICAL;
    case ErrorKind::io: return CW_ERR_IO;
    case ErrorKind::internal: return CW_ERR_INTERNAL;
  }
  return CW_ERR_INTERNAL;
}

template <class F>
cw_status guarded(F&& f) {
  try {
    f();
    last_error.clear();
    return CW_OK;
  } catch (const Error& e) {
    last_error = e.what();
    return status_of(e.kind());
  } catch (const json::exception& e) {
    last_error = e.what();
    return CW_ERR_PARSE;
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return CW_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return CW_ERR_INTERNAL;
  }
}

void need(const void* p, const char* name) {
  require(p != nullptr, ErrorKind::invalid_argument, std::string(name) + " is null");
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

Vec3 vec(const double* p) { return {p[0], p[1], p[2]}; }

DensityField density_of(const double* d, std::size_t n) {
  DensityField g;
  for (std::size_t i = 0; i < n; ++i) g.values.emplace_back(d[2 * i], d[2 * i + 1]);
  return g;
}

std::string field_csv(const FieldSamples& f) {
  std::ostringstream os;
  write_field_csv(os, f);
  return os.str();
}

PlanarCrackParams default_truth() {
  PlanarCrackParams p;
  p.coeffs = {cplx(1, 0), cplx(0, 0.5), cplx(-0.3, 0), cplx(0.2, 0.1)};
  return p;
}

}  // namespace

extern "C" {

const char* cw_version(void) { return "0.1.0"; }

const char* cw_build_info(void) {
  static const std::string info = json{{"crackwave", cw_version()},
                                       {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." +
                                                     std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                                     std::to_string(EIGEN_MINOR_VERSION)},
                                       {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                                             std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                                             std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
                                       {"compiler", __VERSION__}}
                                      .dump();
  return info.c_str();
}

const char* cw_last_error(void) { return last_error.c_str(); }

const char* cw_status_name(cw_status s) {
  switch (s) {
    case CW_OK: return "ok";
    case CW_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case CW_ERR_DOMAIN: return "domain";
    case CW_ERR_VALIDATION: return "validation";
    case CW_ERR_PARSE: return "parse";
    case CW_ERR_PRECISION: return "precision";
    case CW_ERR_NUMERICAL: return "numerical";
    case CW_ERR_IO: return "io";
    case CW_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

void cw_string_free(char* s) { std::free(s); }

cw_status cw_sph_j(int l, double x, double* out) {
  return guarded([&] { need(out, "out"); *out = sph_j(l, x); });
}

cw_status cw_sph_dj(int l, double x, double* out) {
  return guarded([&] { need(out, "out"); *out = sph_dj(l, x); });
}

cw_status cw_zeros_of_dj(int l, int count, double* out) {
  return guarded([&] {
    need(out, "out");
    const auto z = zeros_of_dj(l, count);
    std::copy(z.begin(), z.end(), out);
  });
}

cw_status cw_hankel01(double x, double out[4]) {
  return guarded([&] {
    need(out, "out");
    const Hankel01 h = hankel01(x);
    out[0] = h.h0.real();
    out[1] = h.h0.imag();
    out[2] = h.h1.real();
    out[3] = h.h1.imag();
  });
}

cw_status cw_greens_halfspace(double k0, double t, const double x[3], const double y[3], double out[2]) {
  return guarded([&] {
    need(x, "x");
    need(y, "y");
    need(out, "out");
    const cplx g = greens_halfspace(WaveContext{k0, t}, vec(x), vec(y));
    out[0] = g.real();
    out[1] = g.imag();
  });
}

cw_status cw_mesh_hemisphere(const double center[3], double radius, int upper, int n_refine, cw_mesh** out) {
  return guarded([&] {
    need(center, "center");
    need(out, "out");
    *out = new cw_mesh{make_hemisphere(vec(center), radius, upper != 0, n_refine)};
  });
}

cw_status cw_mesh_planar(const double center[3], const double e1[3], const double e2[3], double a, double b, int n1,
                         int n2, cw_mesh** out) {
  return guarded([&] {
    need(center, "center");
    need(e1, "e1");
    need(e2, "e2");
    need(out, "out");
    *out = new cw_mesh{make_planar_crack(vec(center), vec(e1), vec(e2), a, b, n1, n2)};
  });
}

cw_status cw_mesh_read(const char* path, cw_mesh** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    AnyMesh m = read_mesh(path);
    require(std::holds_alternative<CrackMesh>(m), ErrorKind::validation, "expected a 3D crack mesh (dim 3)");
    *out = new cw_mesh{std::get<CrackMesh>(std::move(m))};
  });
}

cw_status cw_mesh_write(const cw_mesh* mesh, const char* path) {
  return guarded([&] {
    need(mesh, "mesh");
    need(path, "path");
    write_mesh(path, mesh->mesh);
  });
}

cw_status cw_mesh_counts(const cw_mesh* mesh, size_t* vertices, size_t* cells) {
  return guarded([&] {
    need(mesh, "mesh");
    if (vertices) *vertices = mesh->mesh.vertices.size();
    if (cells) *cells = mesh->mesh.triangles.size();
  });
}

void cw_mesh_free(cw_mesh* mesh) { delete mesh; }

cw_status cw_eval_double_layer(const cw_mesh* mesh, const double* density, double k0, double t, const double* pts,
                               size_t npts, double* values, double* gradients) {
  return guarded([&] {
    need(mesh, "mesh");
    need(density, "density");
    need(pts, "pts");
    need(values, "values");
    const DensityField g = density_of(density, mesh->mesh.vertices.size());
    std::vector<Vec3> p;
    for (size_t i = 0; i < npts; ++i) p.push_back(vec(pts + 3 * i));
    const WaveContext ctx{k0, t};
    const FieldSamples f = gradients ? eval_double_layer_grad_3d(mesh->mesh, g, ctx, p)
                                     : eval_double_layer_3d(mesh->mesh, g, ctx, p);
    for (size_t i = 0; i < npts; ++i) {
      values[2 * i] = f.values[i].real();
      values[2 * i + 1] = f.values[i].imag();
      if (!gradients) continue;
      for (int c = 0; c < 3; ++c) {
        gradients[6 * i + 2 * c] = f.gradients[i][c].real();
        gradients[6 * i + 2 * c + 1] = f.gradients[i][c].imag();
      }
    }
  });
}

cw_status cw_forward_mesh_csv(const cw_mesh* mesh, const double* density, double k0, double t, int grid_n,
                              double half_width, char** csv) {
  return guarded([&] {
    need(mesh, "mesh");
    need(density, "density");
    need(csv, "csv");
    require(grid_n >= 2 && half_width > 0, ErrorKind::invalid_argument, "grid needs n >= 2 and positive half-width");
    const DensityField g = density_of(density, mesh->mesh.vertices.size());
    *csv = dup(field_csv(eval_double_layer_grad_3d(mesh->mesh, g, WaveContext{k0, t}, plane_grid(grid_n, half_width))));
  });
}

cw_status cw_forward_planar_csv(const char* params_json, double k0, double t, int grid_n, double half_width,
                                char** csv) {
  return guarded([&] {
    need(csv, "csv");
    require(grid_n >= 2 && half_width > 0, ErrorKind::invalid_argument, "grid needs n >= 2 and positive half-width");
    PlanarCrackParams p = default_truth();
    if (params_json && *params_json) p = params_from_json(json::parse(params_json), p);
    require(p.coeffs.size() == static_cast<std::size_t>(p.m * p.m), ErrorKind::validation,
            "coefficient count must be m * m");
    const WaveContext ctx{k0, t};
    ctx.validate();
    const FieldSamples f = eval_double_layer_grad_3d(p.mesh(), p.density(), ctx, plane_grid(grid_n, half_width));
    *csv = dup(field_csv(f));
  });
}

cw_status cw_instance_sphere(int n_refine, double k, cw_instance** out) {
  return guarded([&] {
    need(out, "out");
    std::optional<double> target;
    if (k > 0) target = k;
    *out = new cw_instance{build_sphere_instance(target, n_refine), std::nullopt};
  });
}

cw_status cw_instance_cusp2d(double a, double h, cw_instance** out) {
  return guarded([&] {
    need(out, "out");
    *out = new cw_instance{build_cusp2d_instance(a, h), std::nullopt};
  });
}

cw_status cw_instance_axisym(double h, int n_theta, cw_instance** out) {
  return guarded([&] {
    need(out, "out");
    *out = new cw_instance{build_axisym_instance(h, n_theta), std::nullopt};
  });
}

cw_status cw_instance_gap_json(cw_instance* inst, int grid_n, char** out) {
  return guarded([&] {
    need(inst, "instance");
    need(out, "out");
    ObservationGrid grid;
    grid.n = grid_n;
    inst->top = top_fields(inst->inst, grid);
    json j = to_json(cauchy_gap(inst->inst, *inst->top));
    j["grid"] = grid_n;
    *out = dup(j.dump(2));
  });
}

cw_status cw_instance_top_field_csv(const cw_instance* inst, int which, char** csv) {
  return guarded([&] {
    need(inst, "instance");
    need(csv, "csv");
    require(which == 1 || which == 2, ErrorKind::invalid_argument, "crack index must be 1 or 2");
    require(inst->top.has_value(), ErrorKind::invalid_argument, "no top fields yet; compute the gap first");
    *csv = dup(field_csv(which == 1 ? inst->top->u1 : inst->top->u2));
  });
}

cw_status cw_instance_perturbed_gap(const cw_instance* inst, int root_cell, double fraction, int grid_n,
                                    double* rel_gap_u) {
  return guarded([&] {
    need(inst, "instance");
    need(rel_gap_u, "rel_gap_u");
    const CounterexampleInstance& base = inst->inst;
    std::vector<int> cells;
    if (base.dim == 3 && base.tag == "sphere") {
      cells = root_cell_family(base, root_cell);
    } else {
      // quarter `root_cell` of the cells (segments) of crack 2
      require(root_cell >= 0 && root_cell < 4, ErrorKind::invalid_argument, "cell group must be in 0..3");
      const int n = base.dim == 2 ? static_cast<int>(base.curve2.lengths.size())
                                  : static_cast<int>(base.crack2.triangles.size());
      for (int c = root_cell * n / 4; c < (root_cell + 1) * n / 4; ++c) cells.push_back(c);
    }
    ObservationGrid grid;
    grid.n = grid_n;
    *rel_gap_u = cauchy_gap(perturb_g2(base, cells, fraction), grid).rel_gap_u;
  });
}

void cw_instance_free(cw_instance* inst) { delete inst; }

cw_status cw_eigen_cusp(double a, double h, int axisymmetric, cw_eigenpair** out) {
  return guarded([&] {
    need(out, "out");
    CuspDomainSpec spec;
    spec.a = a;
    spec.axisymmetric = axisymmetric != 0;
    *out = new cw_eigenpair{cusp_eigenpair(spec, h)};
  });
}

cw_status cw_eigenpair_mu2(const cw_eigenpair* e, double* mu2, double* err_estimate) {
  return guarded([&] {
    need(e, "eigenpair");
    if (mu2) *mu2 = e->pair.mu2;
    if (err_estimate) *err_estimate = e->pair.err_estimate;
  });
}

cw_status cw_eigenpair_json(const cw_eigenpair* e, char** out) {
  return guarded([&] {
    need(e, "eigenpair");
    need(out, "out");
    *out = dup(to_json(e->pair).dump());
  });
}

cw_status cw_eigenpair_decay_json(const cw_eigenpair* e, const double* radii, size_t nr, const double* alphas,
                                  size_t na, char** out) {
  return guarded([&] {
    need(e, "eigenpair");
    need(out, "out");
    require(nr == 0 || radii, ErrorKind::invalid_argument, "radii is null");
    require(na == 0 || alphas, ErrorKind::invalid_argument, "alphas is null");
    const std::vector<double> r(radii, radii + nr), al(alphas, alphas + na);
    *out = dup(to_json(decay_report(e->pair, r, al)).dump(2));
  });
}

void cw_eigenpair_free(cw_eigenpair* e) { delete e; }

cw_status cw_invert_json(const char* request, char** result) {
  return guarded([&] {
    need(request, "request");
    need(result, "result");
    const json req = json::parse(request);
    require(req.is_object(), ErrorKind::parse, "field <root>: expected an object");
    PlanarCrackParams truth = default_truth();
    std::vector<double> ks = {1.0};
    int grid = 11;
    double half_width = 3.0, perturbation = 0.1;
    InversionSpec spec;
    for (auto it = req.begin(); it != req.end(); ++it) {
      const std::string& key = it.key();
      if (key == "truth") {
        truth = params_from_json(*it, truth);
      } else if (key == "k") {
        ks.clear();
        if (it->is_number()) {
          ks.push_back(it->get<double>());
        } else {
          require(it->is_array() && !it->empty(), ErrorKind::parse, "field k: expected a number or a list");
          for (const json& v : *it) ks.push_back(v.get<double>());
        }
      } else if (key == "grid") {
        grid = it->get<int>();
      } else if (key == "half_width") {
        half_width = it->get<double>();
      } else if (key == "budget") {
        spec.budget = it->get<int>();
      } else if (key == "seed") {
        spec.seed = it->get<std::uint64_t>();
      } else if (key == "noise") {
        spec.noise = it->get<double>();
      } else if (key == "perturbation") {
        perturbation = it->get<double>();
      } else {
        fail(ErrorKind::parse, "field " + key + ": unknown key");
      }
    }
    require(truth.coeffs.size() == static_cast<std::size_t>(truth.m * truth.m), ErrorKind::validation,
            "truth needs m * m coefficients");
    require(grid >= 2 && half_width > 0, ErrorKind::invalid_argument, "grid needs n >= 2 and positive half-width");
    require(spec.budget > 0, ErrorKind::invalid_argument, "budget must be positive");
    spec.V = plane_grid(grid, half_width);
    for (std::size_t f = 0; f < ks.size(); ++f) {
      Observation ob;
      ob.ctx = WaveContext{ks[f], 1.0};
      ob.ctx.validate();
      ob.data = forward_map(truth, ob.ctx, spec.V).values;
      if (spec.noise > 0) ob.data = add_noise(ob.data, spec.noise, spec.seed + f);
      spec.observations.push_back(std::move(ob));
    }
    PlanarCrackParams init = perturbed_init(truth, perturbation, spec.seed);
    const GeometryFit fit = fit_geometry(spec, init);

    double dc = (fit.params.center - truth.center).norm() / truth.center.norm();
    double num = 0, den = 0;
    for (std::size_t i = 0; i < truth.coeffs.size(); ++i) {
      num += std::norm(fit.coeffs[0][i] - truth.coeffs[i]);
      den += std::norm(truth.coeffs[i]);
    }
    json out = {{"truth", to_json(truth)},
                {"init", to_json(init)},
                {"fit", to_json(fit)},
                {"k", ks},
                {"grid", grid},
                {"half_width", half_width},
                {"noise", spec.noise},
                {"errors",
                 {{"center_rel", dc},
                  {"a_rel", std::abs(fit.params.a - truth.a) / truth.a},
                  {"b_rel", std::abs(fit.params.b - truth.b) / truth.b},
                  {"tilt1_abs", std::abs(fit.params.tilt1 - truth.tilt1)},
                  {"tilt2_abs", std::abs(fit.params.tilt2 - truth.tilt2)},
                  {"coeffs_rel", std::sqrt(num / den)}}}};
    *result = dup(out.dump(2));
  });
}

cw_status cw_sweep_sphere(double k0, int n_refine, double t_min, double t_max, double t_step, int grid_n,
                          double half_width, int lmax, cw_sweep** out) {
  return guarded([&] {
    need(out, "out");
    require(t_step > 0 && t_max >= t_min && t_min > 0, ErrorKind::invalid_argument,
            "sweep needs 0 < t_min <= t_max and t_step > 0");
    std::vector<double> ts;
    const int n = static_cast<int>(std::floor((t_max - t_min) / t_step + 1e-9));
    for (int i = 0; i <= n; ++i) ts.push_back(t_min + i * t_step);
    const SweepSpec spec = sphere_sweep_spec(1.0, k0, n_refine, lmax, ts, grid_n, half_width);
    *out = new cw_sweep{frequency_sweep(spec)};
  });
}

cw_status cw_sweep_csv(const cw_sweep* s, char** csv) {
  return guarded([&] {
    need(s, "sweep");
    need(csv, "csv");
    std::ostringstream os;
    write_sweep_csv(os, s->result);
    *csv = dup(os.str());
  });
}

cw_status cw_sweep_json(const cw_sweep* s, char** out) {
  return guarded([&] {
    need(s, "sweep");
    need(out, "out");
    *out = dup(to_json(s->result).dump(2));
  });
}

void cw_sweep_free(cw_sweep* s) { delete s; }

}  // extern "C"
