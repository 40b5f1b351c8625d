// hopf -- command-line driver: initialize fields, relax them, measure
// energies and charges, extract preimage curves, run the reduced 1D
// minimizers.  One subcommand per task; all machine output is JSON or CSV.
//
// Exit codes: 0 success, 2 usage/IO error, 3 topology precondition failed or
// relaxation went discontinuous, 4 numerical failure.

#include <chrono>
#include <complex>
#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "hopf/ansatz1d.hpp"
#include "hopf/energy.hpp"
#include "hopf/field.hpp"
#include "hopf/geometry.hpp"
#include "hopf/io.hpp"
#include "hopf/optimize.hpp"
#include "hopf/topology.hpp"

using json = nlohmann::ordered_json;
using namespace hopf;

namespace {

constexpr double kPiConst = 3.14159265358979323846;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

ManifoldSpec make_spec(const std::string& manifold,
                       const std::vector<int>& size, double L,
                       const std::vector<double>& periods) {
  auto kind = manifold_from_name(manifold);
  if (!kind) throw UsageError("unknown manifold: " + manifold);
  ManifoldSpec spec;
  spec.kind = *kind;
  if (size.empty()) throw UsageError("--size is required");
  if (size.size() == 1)
    spec.dims.assign(size_t(spec.rank()), size[0]);
  else
    spec.dims = size;
  if (L > 0) spec.L = L;
  spec.periods = periods;
  try {
    spec.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return spec;
}

// Deterministic generic regular values for the preimage-linking estimate.
const Vec3 kProbeValue1 = {0.36, 0.48, 0.80};
const Vec3 kProbeValue2 = {-0.48, 0.60, 0.64};

// Charge diagnostics for a (possibly relaxed) field: spectral on T3, degree
// in 2D, preimage linking plus the carried initializer charge elsewhere.
void fill_charge(RunReport& rep, const Field& field,
                 const LatticeGeometry& geom, std::optional<int> carried,
                 bool discontinuous) {
  rep.charge_method = "none";
  if (discontinuous) return;
  try {
    if (manifold_is_2d(field.spec.kind)) {
      ChargeReport ch = degree_2d(field, geom);
      rep.Q = ch.Q;
      rep.Q_numeric = ch.Q_numeric;
      rep.residual = ch.residual;
      rep.charge_method = "degree";
    } else if (field.spec.kind == Manifold::T3) {
      ChargeReport ch = hopf_charge_t3(field, geom);
      rep.Q = ch.Q;
      rep.Q_numeric = ch.Q_numeric;
      rep.residual = ch.residual;
      rep.charge_method = "spectral";
    } else if (field.spec.kind == Manifold::S3) {
      PreimageCurve c1 = preimage(field, geom, kProbeValue1,
                                  CurveProjection::Stereo3);
      PreimageCurve c2 = preimage(field, geom, kProbeValue2,
                                  CurveProjection::Stereo3);
      LinkingResult lk = total_linking(c1, c2);
      rep.Q_numeric = lk.lk_numeric;
      rep.Q = carried ? *carried : lk.lk;
      rep.residual = std::abs(lk.lk_numeric - *rep.Q);
      rep.charge_method = carried ? "certificate" : "linking";
    } else {  // S2xS1: carried charge + continuity certificate
      if (carried) {
        rep.Q = *carried;
        rep.Q_numeric = double(*carried);
        rep.residual = 0.0;
        rep.charge_method = "certificate";
      }
    }
  } catch (const std::exception&) {
    rep.charge_method = "none";  // diagnostics must not kill the report
  }
}

RunReport build_report(const Field& field, const LatticeGeometry& geom,
                       const EnergyReport& er, std::optional<int> carried,
                       bool converged, bool discontinuous, int iterations,
                       double wall_seconds) {
  RunReport rep;
  rep.manifold = manifold_name(field.spec.kind);
  rep.dims = field.spec.dims;
  rep.E4 = er.E4;
  rep.E2 = er.E2;
  rep.beta_final = 0.0;
  rep.kappa = er.kappa;
  rep.converged = converged;
  rep.discontinuous = discontinuous;
  rep.iterations = iterations;
  rep.wall_seconds = wall_seconds;
  if (geom.rank() == 3 && er.directional.size() == 3) {
    rep.E_x = er.directional[0];
    rep.E_y = er.directional[1];
    rep.E_z = er.directional[2];
  }
  fill_charge(rep, field, geom, carried, discontinuous);
  if (rep.Q && *rep.Q != 0)
    rep.E_over_bound = er.E4 / bound_value(field.spec, *rep.Q);
  return rep;
}

Vec3 parse_vec3(const std::string& s) {
  Vec3 v{};
  std::stringstream ss(s);
  char comma;
  if (!(ss >> v[0] >> comma >> v[1] >> comma >> v[2]))
    throw UsageError("expected x,y,z: " + s);
  return v;
}

int run(int argc, char** argv) {
  CLI::App app{"hopf solitons in the strong-coupling limit on compact "
               "manifolds: initialize, relax, measure"};
  app.set_version_flag("--version",
                       std::string("hopf 1.0 (field format HPF1 v") +
                           std::to_string(kFieldFormatVersion) +
                           ", report schema v" +
                           std::to_string(kReportSchemaVersion) + ")");
  int threads = 1;
  app.add_option("--threads", threads,
                 "max worker threads (evaluation is currently serial)")
      ->check(CLI::PositiveNumber);

  // ---- init ----
  auto* cmd_init = app.add_subcommand("init", "write an initial field file");
  std::string manifold, ansatz, out_path, profile_kind = "default";
  std::vector<int> size;
  std::vector<double> periods;
  double L = 0, perturb_amp = 0;
  std::uint64_t seed = 1;
  int m = 1, n = 1, pairs = 1, Q = 1;
  cmd_init->add_option("--manifold", manifold)->required();
  cmd_init->add_option("--size", size, "sites per axis (one value = cubic)")
      ->required()
      ->delimiter(',');
  cmd_init->add_option("--ansatz", ansatz)
      ->required()
      ->check(CLI::IsMember({"amn", "vav", "t3vav", "baby-s2", "baby-t2"}));
  cmd_init->add_option("--m", m);
  cmd_init->add_option("--n", n);
  cmd_init->add_option("--pairs", pairs);
  cmd_init->add_option("--Q", Q);
  cmd_init->add_option("--L", L);
  cmd_init->add_option("--periods", periods)->delimiter(',');
  cmd_init->add_option("--profile", profile_kind,
                       "amn/vav profile: default|optimal|linear")
      ->check(CLI::IsMember({"default", "optimal", "linear"}));
  cmd_init->add_option("--perturb", perturb_amp);
  cmd_init->add_option("--seed", seed);
  cmd_init->add_option("-o,--output", out_path)->required();

  // ---- relax ----
  auto* cmd_relax = app.add_subcommand("relax", "relax a field file");
  std::string in_path, relax_out, report_path, trace_path;
  RelaxConfig rc;
  rc.grad_tol = 1e-6;
  rc.max_iters = 4000;
  cmd_relax->add_option("-i,--input", in_path)->required();
  cmd_relax->add_option("-o,--output", relax_out);
  cmd_relax->add_option("--report", report_path);
  cmd_relax->add_option("--trace", trace_path);
  cmd_relax->add_option("--beta0", rc.beta0);
  cmd_relax->add_option("--beta-decay", rc.beta_decay);
  cmd_relax->add_option("--stages", rc.beta_stages);
  cmd_relax->add_option("--tol", rc.grad_tol);
  cmd_relax->add_option("--max-iters", rc.max_iters);
  cmd_relax->add_option("--threshold", rc.discontinuity_threshold);

  // ---- charge / energy ----
  auto* cmd_charge = app.add_subcommand("charge", "topological diagnostics");
  std::string charge_in;
  cmd_charge->add_option("-i,--input", charge_in)->required();
  auto* cmd_energy = app.add_subcommand("energy", "energy report");
  std::string energy_in;
  cmd_energy->add_option("-i,--input", energy_in)->required();

  // ---- preimage ----
  auto* cmd_pre = app.add_subcommand("preimage", "extract preimage curves");
  std::string pre_in, pre_out, pre_value = "1,0,0", pre_project = "none";
  cmd_pre->add_option("-i,--input", pre_in)->required();
  cmd_pre->add_option("--value", pre_value, "regular value x,y,z");
  cmd_pre->add_option("--project", pre_project)
      ->check(CLI::IsMember({"none", "stereo"}));
  cmd_pre->add_option("-o,--output", pre_out)->required();

  // ---- profile ----
  auto* cmd_prof = app.add_subcommand("profile", "reduced 1D minimizers");
  std::string prof_mode, prof_L = "auto", prof_csv;
  int prof_n = 512, prof_m = 2, prof_nn = 1, prof_nr = 2000;
  cmd_prof->add_option("mode", prof_mode)
      ->required()
      ->check(CLI::IsMember({"vav", "amn"}));
  cmd_prof->add_option("--L", prof_L, "sphere radius or 'auto'");
  cmd_prof->add_option("--n", prof_n, "theta intervals (vav)");
  cmd_prof->add_option("--m", prof_m);
  cmd_prof->add_option("--n-winding", prof_nn, "n winding (amn)");
  cmd_prof->add_option("--n-r", prof_nr, "r intervals (amn)");
  cmd_prof->add_option("--csv", prof_csv, "write the profile as CSV");

  // ---- bound ----
  auto* cmd_bound = app.add_subcommand("bound", "topological lower bound");
  std::string bound_manifold;
  int bound_Q = 1;
  double bound_L = 0;
  cmd_bound->add_option("--manifold", bound_manifold)->required();
  cmd_bound->add_option("--Q", bound_Q)->required();
  cmd_bound->add_option("--L", bound_L);

  app.require_subcommand(1);
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (cmd_init->parsed()) {
    ManifoldSpec spec = make_spec(manifold, size, L, periods);
    Field field;
    std::optional<int> charge;
    if (ansatz == "amn") {
      if (spec.kind != Manifold::S3) throw UsageError("amn requires s3");
      if (profile_kind == "optimal") {
        ProfileSolution prof = amn_profile_minimize(m, n, 1024);
        field = init_amn(spec, m, n, &prof);
      } else {
        field = init_amn(spec, m, n);
      }
      charge = m * n;
    } else if (ansatz == "vav") {
      if (spec.kind != Manifold::S2xS1) throw UsageError("vav requires s2s1");
      ProfileSolution prof;
      if (profile_kind == "linear") {
        int nn = 256;
        prof.grid.resize(size_t(nn + 1));
        prof.f.resize(size_t(nn + 1));
        for (int i = 0; i <= nn; ++i) {
          prof.grid[size_t(i)] = kPiConst * i / nn;
          prof.f[size_t(i)] = 2.0 * prof.grid[size_t(i)];
        }
      } else {
        prof = vav_minimize(std::max(256, 4 * spec.dims[0]), *spec.L);
      }
      field = init_vav_s2s1(spec, prof);
      charge = 2;
    } else if (ansatz == "t3vav") {
      if (spec.kind != Manifold::T3) throw UsageError("t3vav requires t3");
      field = init_t3_vav(spec, pairs);
      charge = 2 * pairs;
    } else if (ansatz == "baby-s2") {
      if (spec.kind != Manifold::S2) throw UsageError("baby-s2 requires s2");
      field = init_baby_s2(spec, Q);
      charge = Q;
    } else {  // baby-t2
      if (spec.kind != Manifold::T2) throw UsageError("baby-t2 requires t2");
      if (Q == 2)
        field = init_baby_t2(spec);
      else if (Q == 1)
        field = init_baby_t2_q1(spec);
      else
        throw UsageError("baby-t2 supports Q=2 (exact) or Q=1 (bubble)");
      charge = Q;
    }
    if (perturb_amp > 0) field = perturb(field, perturb_amp, seed);
    write_field(out_path, field, charge);
    std::cerr << "wrote " << out_path << " (" << field.n_sites()
              << " sites)\n";
    return 0;
  }

  if (cmd_relax->parsed()) {
    LoadedField lf = read_field(in_path);
    if (lf.renormalized)
      std::cerr << "warning: input site vectors renormalized on load\n";
    LatticeGeometry geom = build_geometry(lf.field.spec);
    auto t0 = std::chrono::steady_clock::now();
    RelaxResult res = relax(lf.field, geom, rc);
    double wall = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
    RunReport rep = build_report(res.field, geom, res.final_report, lf.charge,
                                 res.converged, res.discontinuous,
                                 res.iterations, wall);
    std::string rep_json = rep.to_json();
    std::cout << rep_json;
    if (!report_path.empty()) write_text_file(report_path, rep_json);
    if (!trace_path.empty()) write_text_file(trace_path, trace_csv(res.trace));
    if (!relax_out.empty()) write_field(relax_out, res.field, lf.charge);
    return res.discontinuous ? 3 : 0;
  }

  if (cmd_charge->parsed()) {
    LoadedField lf = read_field(charge_in);
    LatticeGeometry geom = build_geometry(lf.field.spec);
    json j;
    j["manifold"] = manifold_name(lf.field.spec.kind);
    if (manifold_is_2d(lf.field.spec.kind)) {
      ChargeReport ch = degree_2d(lf.field, geom);
      j["method"] = "degree";
      j["Q"] = ch.Q;
      j["Q_numeric"] = ch.Q_numeric;
      j["residual"] = ch.residual;
    } else if (lf.field.spec.kind == Manifold::T3) {
      ChargeReport ch = hopf_charge_t3(lf.field, geom);
      j["method"] = "spectral";
      j["Q"] = ch.Q;
      j["Q_numeric"] = ch.Q_numeric;
      j["residual"] = ch.residual;
      j["net_fluxes"] = ch.net_fluxes;
    } else {
      PreimageCurve c1 =
          preimage(lf.field, geom, kProbeValue1, CurveProjection::Stereo3);
      PreimageCurve c2 =
          preimage(lf.field, geom, kProbeValue2, CurveProjection::Stereo3);
      LinkingResult lk = total_linking(c1, c2);
      j["method"] = "linking";
      j["Q"] = lf.charge ? json(*lf.charge) : json(lk.lk);
      j["Q_numeric"] = lk.lk_numeric;
      j["residual"] = std::abs(lk.lk_numeric - std::round(lk.lk_numeric));
      j["reliable"] = lk.reliable;
      if (lf.field.spec.kind == Manifold::S2xS1)
        j["net_flux_s1"] = net_flux(lf.field, geom, 2);
    }
    j["continuity_max_angle"] = continuity_check(lf.field);
    if (lf.charge) j["charge_carried"] = *lf.charge;
    std::cout << j.dump(2) << "\n";
    return 0;
  }

  if (cmd_energy->parsed()) {
    LoadedField lf = read_field(energy_in);
    LatticeGeometry geom = build_geometry(lf.field.spec);
    EnergyReport er = energy_e4(lf.field, geom);
    er.E2 = energy_e2(lf.field, geom);
    json j;
    j["manifold"] = manifold_name(lf.field.spec.kind);
    j["dims"] = lf.field.spec.dims;
    j["E4"] = er.E4;
    j["E2"] = er.E2;
    j["kappa"] = er.kappa;
    if (geom.rank() == 3) {
      j["E_x"] = er.directional[0];
      j["E_y"] = er.directional[1];
      j["E_z"] = er.directional[2];
    }
    j["density_min"] = er.density_min;
    j["density_max"] = er.density_max;
    if (lf.charge) {
      j["charge_carried"] = *lf.charge;
      j["E_over_bound"] = er.E4 / bound_value(lf.field.spec, *lf.charge);
    }
    std::cout << j.dump(2) << "\n";
    return 0;
  }

  if (cmd_pre->parsed()) {
    LoadedField lf = read_field(pre_in);
    LatticeGeometry geom = build_geometry(lf.field.spec);
    CurveProjection proj = pre_project == "stereo" ? CurveProjection::Stereo3
                                                   : CurveProjection::None;
    PreimageCurve curves = preimage(lf.field, geom, parse_vec3(pre_value), proj);
    write_text_file(pre_out, curves_csv(curves));
    json j;
    j["components"] = curves.components.size();
    j["all_closed"] = curves.all_closed;
    j["value"] = {curves.value[0], curves.value[1], curves.value[2]};
    std::cout << j.dump(2) << "\n";
    if (!curves.all_closed) {
      std::cerr << "warning: open preimage component(s); the field may be "
                   "discontinuous at lattice resolution\n";
    }
    return 0;
  }

  if (cmd_prof->parsed()) {
    json j;
    ProfileSolution sol;
    if (prof_mode == "vav") {
      if (prof_L == "auto") {
        sol = vav_minimize(prof_n, 0.0, true);
      } else {
        sol = vav_minimize(prof_n, std::stod(prof_L));
      }
      j["mode"] = "vav";
      j["L"] = sol.L;
      j["energy"] = sol.energy;
      j["E_over_Q"] = sol.energy / 2.0;
      j["Q"] = 2;
    } else {
      sol = amn_profile_minimize(prof_m, prof_nn, prof_nr);
      j["mode"] = "amn";
      j["m"] = prof_m;
      j["n"] = prof_nn;
      j["energy"] = sol.energy;
      j["formula_energy"] = amn_energy_formula(prof_m, prof_nn);
      j["Q"] = prof_m * prof_nn;
      j["E_over_Q"] = sol.energy / (prof_m * prof_nn);
    }
    j["monotone"] = sol.monotone;
    std::cout << j.dump(2) << "\n";
    if (!prof_csv.empty()) write_text_file(prof_csv, profile_csv(sol));
    return 0;
  }

  if (cmd_bound->parsed()) {
    ManifoldSpec spec;
    auto kind = manifold_from_name(bound_manifold);
    if (!kind) throw UsageError("unknown manifold: " + bound_manifold);
    spec.kind = *kind;
    spec.dims.assign(size_t(spec.rank()), 8);  // dims irrelevant for the bound
    if (spec.kind == Manifold::S2xS1) spec.L = bound_L > 0 ? bound_L : 1.0;
    json j;
    j["manifold"] = manifold_name(spec.kind);
    j["Q"] = bound_Q;
    j["bound"] = bound_value(spec, bound_Q);
    std::cout << j.dump(2) << "\n";
    return 0;
  }
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const TopologyError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const IllConditionedPlaquette& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
}
