// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any fails.
//   acceptance --cli <crackwave executable> --work <scratch dir> [--only N]
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "counterexamples.hpp"
#include "eigen_fem.hpp"
#include "errors.hpp"
#include "inversion.hpp"
#include "layer_potentials.hpp"

using namespace crackwave;
namespace fs = std::filesystem;

namespace {

std::string cli_path, work_dir;

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char b[64];
  std::snprintf(b, sizeof b, f, v);
  return b;
}

// Random points inside (|p| < 0.8) and outside (1.25 < |p| < 1.9) the unit ball around c.
void ball_probes(const Vec3& c, std::vector<Vec3>& in, std::vector<Vec3>& out) {
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> U(-1, 1);
  while (in.size() < 50) {
    const Vec3 p(U(rng), U(rng), U(rng));
    if (p.norm() < 0.8) in.push_back(c + p);
  }
  while (out.size() < 50) {
    const Vec3 p(1.9 * U(rng), 1.9 * U(rng), 1.9 * U(rng));
    if (p.norm() > 1.25 && p.norm() < 1.9) out.push_back(c + p);
  }
}

Outcome green_identity() {
  const double k1 = first_dj1_zero();
  const Vec3 c(0, 0, -2);
  std::vector<Vec3> in, out;
  ball_probes(c, in, out);
  const WaveContext ctx{k1, 1.0};
  std::vector<double> ein, eout;
  for (int n = 2; n <= 4; ++n) {
    const CrackMesh s = make_sphere(c, 1.0, n, true);
    DensityField g;
    for (const Vec3& p : s.vertices) g.values.emplace_back(psi_ball(p - c, k1), 0.0);
    const FieldSamples fi = eval_double_layer_3d(s, g, ctx, in);
    const FieldSamples fo = eval_double_layer_3d(s, g, ctx, out);
    double ei = 0, eo = 0, pm = 0;
    for (std::size_t i = 0; i < in.size(); ++i) {
      const double psi = psi_ball(in[i] - c, k1);
      pm = std::max(pm, std::abs(psi));
      ei = std::max(ei, std::abs(fi.values[i] - psi));
    }
    for (const cplx& v : fo.values) eo = std::max(eo, std::abs(v));
    ein.push_back(ei / pm);
    eout.push_back(eo / pm);
  }
  // mesh size halves per level
  const double order_in = std::log(ein[0] / ein[2]) / std::log(4.0);
  const double order_out = std::log(eout[0] / eout[2]) / std::log(4.0);
  const bool ok = ein[2] <= 1e-2 && eout[2] <= 1e-2 && order_in > 1.7 && order_in < 2.5 && order_out > 1.7 &&
                  order_out < 2.5;
  return {ok, "interior err " + fmt("%.2e", ein[0]) + " / " + fmt("%.2e", ein[1]) + " / " + fmt("%.2e", ein[2]) +
                  " (levels 2-4), exterior " + fmt("%.2e", eout[2]) + ", order " + fmt("%.2f", order_in) + " / " +
                  fmt("%.2f", order_out)};
}

Outcome sphere_counterexample() {
  ObservationGrid grid;  // 41 x 41
  const CounterexampleInstance i4 = build_sphere_instance(std::nullopt, 4);
  const GapReport g4 = cauchy_gap(i4, grid);
  // whole lower density +10% at the same level
  std::vector<int> all(i4.crack2.triangles.size());
  for (std::size_t c = 0; c < all.size(); ++c) all[c] = static_cast<int>(c);
  const double whole = cauchy_gap(perturb_g2(i4, all, 0.1), grid).rel_gap_u;
  // one root cell (a quarter of the lower hemisphere) +10%, against the gap of the same mesh
  const CounterexampleInstance i5 = build_sphere_instance(std::nullopt, 5);
  const double g5 = cauchy_gap(i5, grid).rel_gap_u;
  const double local = cauchy_gap(perturb_g2(i5, root_cell_family(i5, 0), 0.1), grid).rel_gap_u;
  const bool ok = g4.rel_gap_u <= 1e-2 && local > 10 * g5 && whole > 10 * g4.rel_gap_u;
  return {ok, "gap " + fmt("%.2e", g4.rel_gap_u) + " at level 4; control: quarter-hemisphere +10% at level 5 " +
                  fmt("%.2e", local) + " vs gap " + fmt("%.2e", g5) + " (x" + fmt("%.1f", local / g5) +
                  "), whole g2 +10% at level 4 x" + fmt("%.1f", whole / g4.rel_gap_u)};
}

Outcome top_plane_neumann() {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> U(-1, 1);
  std::vector<CrackMesh> meshes = {make_hemisphere({0.3, -0.2, -2.4}, 1.1, false, 3),
                                   make_planar_crack({0.5, 0.1, -1.3}, Vec3(1, 0, 0.3).normalized(),
                                                     Vec3(0, 1, 0), 0.4, 0.7, 6, 9)};
  double worst = 0;
  for (const CrackMesh& m : meshes)
    for (double k : {0.5, 1.7, 4.0}) {
      DensityField g;
      for (std::size_t i = 0; i < m.vertices.size(); ++i) g.values.emplace_back(U(rng), U(rng));
      std::vector<Vec3> pts;
      for (int i = 0; i < 40; ++i) pts.push_back({3 * U(rng), 3 * U(rng), 0.0});
      const FieldSamples f = eval_double_layer_grad_3d(m, g, WaveContext{k, 1.0}, pts);
      for (std::size_t i = 0; i < pts.size(); ++i) worst = std::max(worst, std::abs(f.gradients[i][2]) / f.gradients[i].norm());
    }
  return {worst <= 1e-10, "max |d3 u| / |grad u| = " + fmt("%.1e", worst)};
}

Outcome jump_recovery() {
  const CrackMesh m = make_planar_crack({0.1, -0.2, -1.5}, {1, 0, 0}, {0, 1, 0}, 0.6, 0.4, 12, 8);
  DensityField g;
  for (const Vec3& p : m.vertices) {
    const double s = (p[0] - 0.1) / 0.6, t = (p[1] + 0.2) / 0.4;
    g.values.push_back(cplx(1, 0.5) * std::cos(kPi * s / 2) * std::cos(kPi * t / 2) * (1 + 0.3 * s));
  }
  const WaveContext ctx{2.0, 1.0};
  double wj = 0, wd = 0;
  for (int c : {5, 17, 30, 44, 61, 77, 90, 101, 130, 150}) {
    const Tri& t = m.triangles[c];
    const cplx exact = (g.values[t[0]] + g.values[t[1]] + g.values[t[2]]) / 3.0;
    const JumpEstimate j = jump_probe(m, g, ctx, m.centroid(c), m.normals[c], {0.04, 0.02, 0.01});
    wj = std::max(wj, std::abs(j.value - exact) / std::abs(exact));
    const NormalDerivativeJump d = normal_derivative_jump_probe(m, g, ctx, m.centroid(c), m.normals[c], {0.04, 0.02, 0.01});
    wd = std::max(wd, std::abs(d.jump.value) / d.gradient_scale);
  }
  return {wj <= 1e-2 && wd <= 1e-2,
          "jump rel err " + fmt("%.1e", wj) + ", normal-derivative jump / gradient scale " + fmt("%.1e", wd)};
}

Outcome eigen_oracles() {
  const Mesh2D sq = make_rectangle_mesh(0, 1, 0, 1, 64, 64, false);
  const double neu = smallest_eigenpair(assemble(sq), sq).mu2;
  const Mesh2D mx = make_rectangle_mesh(0, 1, 0, 1, 64, 64, true);
  const double mixed = smallest_eigenpair(assemble(mx), mx).mu2;
  ColumnDomain d;
  d.x_lo = 0;
  d.x_hi = 1;
  d.height = [](double r) { return std::sqrt(std::max(0.0, 1 - r * r)); };
  d.grade_hi = true;
  d.grading_layers = 6;
  d.radial_weight = true;
  const Mesh2D disk = make_column_mesh(d, 0.0125);
  const double ball = smallest_eigenpair(assemble(disk), disk).mu2;
  // independent reference: first zero of j1' from the standard library's spherical Bessel functions
  const double k1 = bisect([](double x) { return std::sph_bessel(0, x) - 2 / x * std::sph_bessel(1, x); }, 2.0, 2.2);
  const double e1 = std::abs(neu / (kPi * kPi) - 1), e2 = std::abs(mixed / (kPi * kPi / 4) - 1),
               e3 = std::abs(ball / (k1 * k1) - 1);
  return {e1 <= 1e-2 && e2 <= 1e-2 && e3 <= 1e-2,
          "Neumann " + fmt("%.5f", neu) + ", mixed " + fmt("%.5f", mixed) + ", half-disk " + fmt("%.5f", ball) +
              " vs k1^2 " + fmt("%.5f", k1 * k1) + " (rel " + fmt("%.1e", e1) + " / " + fmt("%.1e", e2) + " / " +
              fmt("%.1e", e3) + ")"};
}

Outcome cusp_decay() {
  CuspDomainSpec spec;
  std::vector<double> radii;
  for (int i = 0; i <= 10; ++i) radii.push_back(0.05 * std::pow(10.0, i / 10.0));
  const EigenPair coarse = cusp_eigenpair(spec, 0.04);
  const EigenPair fine = cusp_eigenpair(spec, 0.02);
  const DecayReport dc = decay_report(coarse, radii, {2.5});
  const DecayReport df = decay_report(fine, radii, {2.5});
  const double drift = std::abs(df.weighted[0] / dc.weighted[0] - 1);
  return {df.slope >= 4.0 && drift <= 0.1,
          "slope " + fmt("%.2f", df.slope) + " on R in [0.05, 0.5]; W(2.5) " + fmt("%.4f", dc.weighted[0]) + " -> " +
              fmt("%.4f", df.weighted[0]) + " (" + fmt("%.1f", 100 * drift) + "%)"};
}

Outcome cusp2d_counterexample() {
  ObservationGrid grid;
  grid.n = 201;
  bool ok = true;
  std::string detail;
  double prev_tilt = std::numeric_limits<double>::infinity();
  for (double a : {1.0, 0.25, 0.05}) {
    const CounterexampleInstance c = build_cusp2d_instance(a, 0.04);
    const CounterexampleInstance f = build_cusp2d_instance(a, 0.02);
    const double gc = cauchy_gap(c, grid).rel_gap_u, gf = cauchy_gap(f, grid).rel_gap_u;
    const double tilt = f.curve1.max_normal_tilt();
    ok = ok && gf <= 3e-2 && gf < gc && tilt < prev_tilt;
    prev_tilt = tilt;
    detail += "a=" + fmt("%g", a) + ": " + fmt("%.1e", gc) + " -> " + fmt("%.1e", gf) + ", tilt " + fmt("%.3f", tilt) + "; ";
  }
  return {ok, detail + "(flatness = max normal tilt of the crack, rad)"};
}

Outcome inversion_round_trip() {
  PlanarCrackParams truth;
  truth.coeffs = {cplx(1, 0), cplx(0, 0.5), cplx(-0.3, 0), cplx(0.2, 0.1)};
  InversionSpec spec;
  spec.V = plane_grid(11, 3.0);
  spec.observations.push_back({WaveContext{1.0, 1.0}, forward_map(truth, WaveContext{1.0, 1.0}, spec.V).values});
  const PlanarCrackParams init = perturbed_init(truth, 0.1, 42);
  const GeometryFit fit = fit_geometry(spec, init);
  double cerr = 0;
  for (int i = 0; i < 3; ++i) cerr = std::max(cerr, std::abs(fit.params.center[i] - truth.center[i]) / truth.center.norm());
  const double aerr = std::max(std::abs(fit.params.a / truth.a - 1), std::abs(fit.params.b / truth.b - 1));
  double num = 0, den = 0;
  for (std::size_t i = 0; i < truth.coeffs.size(); ++i) {
    num += std::norm(fit.params.coeffs[i] - truth.coeffs[i]);
    den += std::norm(truth.coeffs[i]);
  }
  const double ferr = std::sqrt(num / den);
  return {cerr <= 1e-2 && aerr <= 1e-2 && ferr <= 1e-6,
          "center " + fmt("%.1e", cerr) + ", half-widths " + fmt("%.1e", aerr) + ", coefficients " + fmt("%.1e", ferr) +
              ", misfit " + fmt("%.1e", fit.misfit) + " after " + std::to_string(fit.evals) + " evaluations"};
}

Outcome frequency_sweep_dips() {
  std::vector<double> ts;
  for (int i = 0; i <= 350; ++i) ts.push_back(1.5 + 0.01 * i);
  const SweepSpec spec = sphere_sweep_spec(1.0, 1.0, 4, 3, ts, 21, 4.0);
  const SweepResult r = frequency_sweep(spec);
  // every predicted point has a detected dip within 0.02, and every dip sits near a prediction
  double worst_pred = 0;
  for (double p : r.predicted) {
    double best = std::numeric_limits<double>::infinity();
    for (const SweepDip& d : r.dips) best = std::min(best, std::abs(d.t - p));
    worst_pred = std::max(worst_pred, best);
  }
  double worst_dip = 0;
  for (const SweepDip& d : r.dips) {
    double best = std::numeric_limits<double>::infinity();
    for (double p : r.predicted) best = std::min(best, std::abs(d.t - p));
    worst_dip = std::max(worst_dip, best);
  }
  // floor of iota away from the predicted set, for a few exclusion widths
  std::string floors;
  double floor_at = 0;
  for (double w : {0.1, 0.2, 0.3, 0.5}) {
    double f = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < r.t.size(); ++i)
      if (r.dist_to_predicted[i] >= w) f = std::min(f, r.iota[i]);
    floors += fmt("%.2f", w) + ":" + fmt("%.3f", f) + " ";
    if (w == 0.2) floor_at = f;
  }
  std::string dips;
  for (const SweepDip& d : r.dips) dips += fmt("%.3f", d.t) + "(l=" + std::to_string(d.channel) + ") ";
  const bool ok = !r.dips.empty() && worst_pred <= 0.02 && worst_dip <= 0.02 && floor_at >= 0.1;
  return {ok, "dips " + dips + "; worst offset " + fmt("%.3f", std::max(worst_pred, worst_dip)) +
                  "; min iota at distance >= w from the predicted set: " + floors + "(criterion uses w = 0.2)"};
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome determinism() {
  if (cli_path.empty()) return {false, "no --cli given"};
  const std::vector<std::string> runs = {"counterexample-sphere --refine 2 --grid 11",
                                         "counterexample-cusp2d --h 0.08 --grid 41", "forward --grid 9",
                                         "sweep --refine 1 --grid 7 --t-min 2 --t-max 2.3 --t-step 0.05"};
  int compared = 0;
  for (std::size_t r = 0; r < runs.size(); ++r) {
    std::vector<fs::path> dirs;
    for (int rep = 0; rep < 2; ++rep) {
      const fs::path dir = fs::path(work_dir) / ("det" + std::to_string(r) + "_" + std::to_string(rep));
      fs::remove_all(dir);
      const std::string cmd = "\"" + cli_path + "\" " + runs[r] + " --out \"" + dir.string() + "\" > /dev/null";
      if (std::system(cmd.c_str()) != 0) return {false, "run failed: " + runs[r]};
      dirs.push_back(dir);
    }
    for (const auto& e : fs::directory_iterator(dirs[0])) {
      if (e.path().extension() != ".csv") continue;
      if (read_file(e.path()) != read_file(dirs[1] / e.path().filename()))
        return {false, e.path().filename().string() + " differs for: " + runs[r]};
      ++compared;
    }
  }
  return {compared >= 5, std::to_string(compared) + " CSV files byte-identical across repeated runs"};
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i + 1 < argc; i += 2) {
    const std::string a = argv[i];
    if (a == "--cli") cli_path = argv[i + 1];
    else if (a == "--work") work_dir = argv[i + 1];
    else if (a == "--only") only = std::atoi(argv[i + 1]);
  }
  if (work_dir.empty()) work_dir = "acceptance_work";
  fs::create_directories(work_dir);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"Green identity on a closed sphere", green_identity},
      {"sphere counterexample gap and control", sphere_counterexample},
      {"top-plane Neumann condition", top_plane_neumann},
      {"jump recovery on a flat crack", jump_recovery},
      {"eigenvalue oracles", eigen_oracles},
      {"cusp decay law", cusp_decay},
      {"2D cusp counterexample", cusp2d_counterexample},
      {"planar crack inversion", inversion_round_trip},
      {"frequency sweep dips", frequency_sweep_dips},
      {"CLI determinism", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (only && static_cast<int>(i) + 1 != only) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("criterion %zu: %s  %s  [%s; %.1f s]\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first.c_str(),
                o.detail.c_str(), sec);
    std::fflush(stdout);
    failed += !o.pass;
  }
  return failed ? 1 : 0;
}
