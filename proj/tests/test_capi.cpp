// Exercises the shared library through its C header only.
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <string>

#include <json.hpp>

#include "crackwave/crackwave.h"

using nlohmann::json;

namespace {

std::string take(char* s) {
  std::string out = s ? s : "";
  cw_string_free(s);
  return out;
}

}  // namespace

TEST_CASE("version and build info") {
  CHECK(std::string(cw_version()) == "0.1.0");
  const json info = json::parse(cw_build_info());
  CHECK(info.contains("eigen"));
  CHECK(std::string(cw_status_name(CW_ERR_PRECISION)) == "precision");
}

TEST_CASE("special functions through the C interface") {
  double v = 0;
  REQUIRE(cw_sph_j(1, 2.0, &v) == CW_OK);
  CHECK(v == doctest::Approx(std::sph_bessel(1, 2.0)));
  double z[2];
  REQUIRE(cw_zeros_of_dj(1, 2, z) == CW_OK);
  CHECK(z[0] == doctest::Approx(2.0815759778181));
  double h[4];
  REQUIRE(cw_hankel01(3.0, h) == CW_OK);
  CHECK(h[1] == doctest::Approx(std::cyl_neumann(0.0, 3.0)));
  CHECK(cw_hankel01(-1.0, h) == CW_ERR_DOMAIN);
  CHECK(std::string(cw_last_error()).find("hankel") != std::string::npos);
  CHECK(cw_zeros_of_dj(9, 1, z) == CW_ERR_INVALID_ARGUMENT);
  CHECK(cw_sph_j(1, 1.0, nullptr) == CW_ERR_INVALID_ARGUMENT);
}

TEST_CASE("mesh handles and field evaluation") {
  const double c[3] = {0, 0, -2}, e1[3] = {1, 0, 0}, e2[3] = {0, 1, 0};
  cw_mesh* m = nullptr;
  REQUIRE(cw_mesh_planar(c, e1, e2, 0.5, 0.5, 4, 4, &m) == CW_OK);
  size_t nv = 0, nc = 0;
  cw_mesh_counts(m, &nv, &nc);
  CHECK(nv == 25);
  CHECK(nc == 32);
  std::vector<double> g(2 * nv, 0.0);
  g[2 * 12] = 1.0;  // hat function at the center vertex
  const double pts[6] = {0, 0, 0, 0.3, 0.1, 0};
  double vals[4], grads[12];
  REQUIRE(cw_eval_double_layer(m, g.data(), 1.0, 1.0, pts, 2, vals, grads) == CW_OK);
  CHECK(std::abs(grads[4]) < 1e-14);  // d/dx3 real part on the plane
  CHECK(std::abs(grads[5]) < 1e-14);
  CHECK(vals[0] != 0.0);
  const double on[3] = {0, 0, -2};
  CHECK(cw_eval_double_layer(m, g.data(), 1.0, 1.0, on, 1, vals, nullptr) == CW_ERR_PRECISION);

  REQUIRE(cw_mesh_write(m, "capi_mesh.json") == CW_OK);
  cw_mesh* r = nullptr;
  REQUIRE(cw_mesh_read("capi_mesh.json", &r) == CW_OK);
  size_t nv2 = 0;
  cw_mesh_counts(r, &nv2, nullptr);
  CHECK(nv2 == nv);
  std::remove("capi_mesh.json");
  cw_mesh_free(r);

  char* csv = nullptr;
  REQUIRE(cw_forward_mesh_csv(m, g.data(), 1.0, 1.0, 3, 2.0, &csv) == CW_OK);
  const std::string text = take(csv);
  CHECK(text.rfind("x1,x2,x3,re_u,im_u,re_ux", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 10);
  cw_mesh_free(m);

  CHECK(cw_mesh_read("no_such_file.json", &r) == CW_ERR_IO);
}

TEST_CASE("bad mesh input maps to parse and validation codes") {
  FILE* f = std::fopen("capi_bad.json", "w");
  std::fputs("{\"dim\": 3, \"vertices\": [[0,0,-2],[1,0,-2],[0,1,-2]], \"cells\": [[0,2,1]]}", f);
  std::fclose(f);
  cw_mesh* m = nullptr;
  CHECK(cw_mesh_read("capi_bad.json", &m) == CW_ERR_VALIDATION);
  CHECK(std::string(cw_last_error()).rfind("orientation:", 0) == 0);
  f = std::fopen("capi_bad.json", "w");
  std::fputs("{\"dim\": 3,", f);
  std::fclose(f);
  CHECK(cw_mesh_read("capi_bad.json", &m) == CW_ERR_PARSE);
  std::remove("capi_bad.json");
}

TEST_CASE("counterexample instance") {
  cw_instance* inst = nullptr;
  REQUIRE(cw_instance_cusp2d(1.0, 0.08, &inst) == CW_OK);
  char* csv = nullptr;
  CHECK(cw_instance_top_field_csv(inst, 1, &csv) == CW_ERR_INVALID_ARGUMENT);  // no gap yet
  char* js = nullptr;
  REQUIRE(cw_instance_gap_json(inst, 41, &js) == CW_OK);
  const json gap = json::parse(take(js));
  CHECK(gap["instance"] == "cusp2d");
  CHECK(gap["rel_gap_u"].get<double>() < 3e-2);
  REQUIRE(cw_instance_top_field_csv(inst, 2, &csv) == CW_OK);
  const std::string text = take(csv);
  CHECK(std::count(text.begin(), text.end(), '\n') == 42);
  double pert = 0;
  REQUIRE(cw_instance_perturbed_gap(inst, 1, 0.1, 41, &pert) == CW_OK);
  CHECK(pert > gap["rel_gap_u"].get<double>());
  CHECK(cw_instance_top_field_csv(inst, 3, &csv) == CW_ERR_INVALID_ARGUMENT);
  cw_instance_free(inst);
  CHECK(cw_instance_cusp2d(2.0, 0.08, &inst) == CW_ERR_VALIDATION);
}

TEST_CASE("eigenpair handle") {
  cw_eigenpair* e = nullptr;
  REQUIRE(cw_eigen_cusp(1.0, 0.08, 0, &e) == CW_OK);
  double mu2 = 0, err = -1;
  cw_eigenpair_mu2(e, &mu2, &err);
  CHECK(mu2 > 3.9);
  CHECK(err >= 0);
  char* js = nullptr;
  REQUIRE(cw_eigenpair_json(e, &js) == CW_OK);
  const json j = json::parse(take(js));
  CHECK(j["weight"] == "1");
  CHECK(j["err_estimate"].get<double>() == err);
  const double radii[4] = {0.05, 0.1, 0.2, 0.5}, alphas[1] = {2.5};
  REQUIRE(cw_eigenpair_decay_json(e, radii, 4, alphas, 1, &js) == CW_OK);
  CHECK(json::parse(take(js))["weighted"].size() == 1);
  CHECK(cw_eigenpair_decay_json(e, radii, 2, alphas, 1, &js) == CW_ERR_INVALID_ARGUMENT);
  cw_eigenpair_free(e);
}

TEST_CASE("inversion request") {
  char* out = nullptr;
  CHECK(cw_invert_json("{\"bogus\": 1}", &out) == CW_ERR_PARSE);
  CHECK(cw_invert_json("not json", &out) == CW_ERR_PARSE);
  REQUIRE(cw_invert_json("{\"grid\": 5, \"budget\": 40, \"perturbation\": 0.01}", &out) == CW_OK);
  const json r = json::parse(take(out));
  CHECK(r["fit"]["evals"].get<int>() <= 48);
  CHECK(r["errors"].contains("coeffs_rel"));
}

TEST_CASE("sweep handle") {
  cw_sweep* s = nullptr;
  REQUIRE(cw_sweep_sphere(1.0, 1, 2.0, 2.2, 0.1, 5, 4.0, 1, &s) == CW_OK);
  char* csv = nullptr;
  REQUIRE(cw_sweep_csv(s, &csv) == CW_OK);
  const std::string text = take(csv);
  CHECK(std::count(text.begin(), text.end(), '\n') == 4);
  char* js = nullptr;
  REQUIRE(cw_sweep_json(s, &js) == CW_OK);
  CHECK(json::parse(take(js))["predicted"].size() == 1);
  cw_sweep_free(s);
  CHECK(cw_sweep_sphere(1.0, 1, 2.0, 1.0, 0.1, 5, 4.0, 1, &s) == CW_ERR_INVALID_ARGUMENT);
}
