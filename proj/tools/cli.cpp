#include "cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <iostream>
#include <sstream>

#include "zeno/checkpoint.hpp"
#include "zeno/experiment.hpp"
#include "zeno/report.hpp"

namespace zeno::cli {

int exit_code(ErrorCategory category) noexcept {
  switch (category) {
    case ErrorCategory::validation: return validation;
    case ErrorCategory::numerical: return numerical;
    case ErrorCategory::io: return io;
  }
  return usage;
}

double box_energy(double plate_separation, const ChargeConfig& charges, const PhysicalConstants& c) {
  const double k2 = PhysicalConstants::pi * PhysicalConstants::pi / (plate_separation * plate_separation);
  return 0.5 * c.hbar * c.hbar * k2 * (1.0 / charges.m1 + 1.0 / charges.m2);
}

std::vector<ConvergenceRow> convergence_sweep(const ProtocolConfig& config,
                                              const std::vector<int>& resolutions) {
  if (resolutions.empty()) throw ValidationError("needs at least one resolution", "resolutions");
  for (std::size_t i = 1; i < resolutions.size(); ++i) {
    if (resolutions[i] <= resolutions[i - 1]) throw ValidationError("must be strictly increasing", "resolutions");
  }
  for (int n : resolutions) {
    ProtocolConfig c = config;
    c.points_per_axis = n;
    c.validate();
  }

  std::vector<ConvergenceRow> rows;
  const double exact = box_energy(config.plate_separation, config.charges);
  for (int n : resolutions) {
    ProtocolConfig c = config;
    c.points_per_axis = n;
    ConvergenceRow row{n, c.grid().spacing(), 0.0, {}, {}, {}, {}};
    const double d0 = c.schedule.lengths.at(0);
    const ConfinedGroundState g0 = solve_confined(c, d0);
    row.e0 = g0.result.energy;
    if (!c.interacting) {
      row.error = row.e0 - exact;
      if (!rows.empty() && *row.error != 0.0) row.ratio = *rows.back().error / *row.error;
    } else if (c.schedule.lengths.size() > 1) {
      const double d1 = c.schedule.lengths[1];
      row.e1 = solve_confined(c, d1).result.energy;
      const ConstraintMask m1 = build_mask(c.grid(), d1, c.charges, c.coulomb_k);
      row.probability = g0.result.psi0.probability_in(*m1.nodes);
      if (!rows.empty()) {
        const double prev = *rows.back().e1 - rows.back().e0;
        row.ratio = (*row.e1 - row.e0 - prev) / prev;
      }
    }
    rows.push_back(row);
  }
  return rows;
}

std::string convergence_csv(const std::vector<ConvergenceRow>& rows) {
  std::string out = "N,h_m,E0_J,E1_J,delta_e_J,probability,error_J,ratio\n";
  auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string(); };
  for (const ConvergenceRow& r : rows) {
    std::optional<double> de;
    if (r.e1) de = *r.e1 - r.e0;
    out += std::to_string(r.points_per_axis) + "," + format_double(r.spacing) + "," + format_double(r.e0) + "," +
           opt(r.e1) + "," + opt(de) + "," + opt(r.probability) + "," + opt(r.error) + "," + opt(r.ratio) + "\n";
  }
  return out;
}

std::string mask_dump(const ProtocolConfig& config, const std::vector<double>& lengths) {
  if (lengths.empty()) throw ValidationError("needs at least one length", "d");
  if (!(config.plate_separation > 0.0)) throw ValidationError("must be positive", "geometry.plate_separation");
  if (config.points_per_axis < Grid2D::min_points) {
    throw ValidationError("must be at least " + std::to_string(Grid2D::min_points), "geometry.points_per_axis");
  }
  const Grid2D grid = config.grid();
  std::vector<ConstraintMask> masks;
  for (double d : lengths) {
    if (!(d > 0.0 && d < config.plate_separation)) throw ValidationError("must lie strictly between 0 and L", "d");
    masks.push_back(build_mask(grid, d, config.charges, config.coulomb_k));
  }
  std::ostringstream comment;
  comment << "L=" << format_double(config.plate_separation) << " N=" << config.points_per_axis << " d=";
  for (std::size_t i = 0; i < lengths.size(); ++i) comment << (i ? "," : "") << format_double(lengths[i]);
  if (masks.size() == 1) return mask_to_pbm(masks[0], comment.str());

  const int n = grid.points_per_axis();
  std::string out = "P2\n# " + comment.str() + "\n" + std::to_string(n) + " " + std::to_string(n) + "\n" +
                    std::to_string(masks.size()) + "\n";
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      int level = 0;
      for (const ConstraintMask& m : masks) level += m.inside(i, j) ? 1 : 0;
      if (j) out += ' ';
      out += std::to_string(level);
    }
    out += '\n';
  }
  return out;
}

namespace {

/// Options shared by every subcommand; set only when given on the command line.
struct Overrides {
  std::string config_path;
  double L = 0, epsilon = 0, charge = 0, coulomb_k = 0, f_photon = 0, solver_tol = 0;
  int N = 0, n_sub = 0, max_iterations = 0, threads = 0;
  std::vector<double> lengths, f_qze, f_confine;
  bool free = false, no_leakage = false, no_localize = false;
  std::string post_success, json, csv, checkpoint;
  std::uint64_t seed = 0;
  std::int64_t trials = 0;
  std::map<std::string, CLI::Option*> given;

  void geometry(CLI::App* app) {
    app->add_option("-c,--config", config_path, "JSON config file")->check(CLI::ExistingFile);
    given["L"] = app->add_option("--plate-separation", L, "Plate separation L (m)");
    given["N"] = app->add_option("-N,--points", N, "Grid points per axis");
    given["epsilon"] = app->add_option("--epsilon", epsilon, "Coulomb regularization (m)");
    given["charge"] = app->add_option("--charge", charge, "Charge of both ions (C)");
    given["coulomb_k"] = app->add_option("--coulomb-k", coulomb_k, "Coulomb constant (N m^2 / C^2)");
  }

  void solver(CLI::App* app) {
    given["free"] = app->add_flag("--free", free, "Drop the Coulomb interaction (q = 0)");
    given["solver_tol"] = app->add_option("--tolerance", solver_tol, "Ground-state relative residual");
    given["max_iterations"] = app->add_option("--max-iterations", max_iterations, "Ground-state iteration cap");
    given["no_localize"] = app->add_flag("--no-localize", no_localize, "Solve on the whole mask");
  }

  void schedule(CLI::App* app) {
    given["lengths"] = app->add_option("--lengths", lengths, "Confinement lengths d_0 > d_1 > ... (m)")->delimiter(',');
    given["f_qze"] = app->add_option("--f-qze", f_qze, "QZE measurement frequency per step (Hz)")->delimiter(',');
    given["f_confine"] = app->add_option("--f-confine", f_confine, "Confinement check frequency per step (Hz)")->delimiter(',');
    given["f_photon"] = app->add_option("--f-photon", f_photon, "Photon frequency (Hz)");
    given["n_sub"] = app->add_option("--n-sub", n_sub, "CN substeps per measurement interval");
    given["no_leakage"] = app->add_flag("--no-leakage", no_leakage, "Skip the leakage computation");
    given["post_success"] = app->add_option("--post-success", post_success, "ground_state or projected");
    given["seed"] = app->add_option("--seed", seed, "Monte Carlo seed");
    given["threads"] = app->add_option("--threads", threads, "Monte Carlo worker threads");
    given["json"] = app->add_option("--json", json, "Structured report path");
    given["csv"] = app->add_option("--csv", csv, "Tabular report path");
  }

  bool has(const std::string& key) const {
    auto it = given.find(key);
    return it != given.end() && it->second->count() > 0;
  }

  ProtocolConfig apply() const {
    ProtocolConfig c = config_path.empty() ? ProtocolConfig{} : load_config(config_path);
    if (has("L")) c.plate_separation = L;
    if (has("N")) c.points_per_axis = N;
    if (has("epsilon")) c.epsilon = epsilon;
    if (has("charge")) c.charges.q1 = c.charges.q2 = charge;
    if (has("coulomb_k")) c.coulomb_k = coulomb_k;
    if (has("free") && free) c.interacting = false;
    if (has("solver_tol")) c.solver.tolerance = solver_tol;
    if (has("max_iterations")) c.solver.max_iterations = max_iterations;
    if (has("no_localize") && no_localize) c.localization.enabled = false;
    if (has("lengths")) c.schedule.lengths = lengths;
    const std::size_t steps = c.schedule.steps();
    // a single value, given or inherited, applies to every step
    auto fit = [steps](std::vector<double>& v) {
      if (v.size() != steps && !v.empty() && (v.size() == 1 || steps == 0)) v.assign(steps, v.front());
    };
    if (has("f_qze")) c.schedule.f_qze = f_qze;
    if (has("f_confine")) c.schedule.f_confine = f_confine;
    fit(c.schedule.f_qze);
    fit(c.schedule.f_confine);
    if (has("f_photon")) c.schedule.f_photon = f_photon;
    if (has("n_sub")) c.n_sub = n_sub;
    if (has("no_leakage") && no_leakage) c.compute_leakage = false;
    if (has("post_success")) c.post_success = parse_post_success(post_success);
    if (has("seed")) c.seed = seed;
    if (has("threads")) c.threads = threads;
    if (has("json")) c.report_json = json;
    if (has("csv")) c.report_csv = csv;
    if (has("checkpoint")) c.checkpoint = checkpoint;
    return c;
  }
};

std::string join_args(int argc, const char* const* argv) {
  std::string s;
  for (int i = 0; i < argc; ++i) {
    if (i) s += ' ';
    s += argv[i];
  }
  return s;
}

void print_ledger(const ProtocolRun& run, std::ostream& out) {
  const EnergyLedger& L = run.ledger;
  out << report_csv(L);
  if (L.steps.empty()) return;
  out << "expected_energy_J=" << format_double(L.expected_energy) << '\n'
      << "survival_probability=" << format_double(L.survival_probability) << '\n'
      << "adjusted_expected_energy_J=" << format_double(L.adjusted_expected_energy) << '\n'
      << "delta_e_quantum_lower_bound_J=" << format_double(L.delta_e_quantum) << '\n'
      << "delta_e_classical_J=" << format_double(L.delta_e_classical) << '\n';
  if (L.t_advantage) out << "t_advantage_s=" << format_double(*L.t_advantage) << '\n';
  if (run.monte_carlo) {
    const MonteCarloSummary& m = *run.monte_carlo;
    out << "monte_carlo_trials=" << m.trials << '\n'
        << "monte_carlo_energy_J=" << format_double(m.total_energy.mean) << " +- "
        << format_double(m.total_energy.standard_error) << '\n'
        << "monte_carlo_time_s=" << format_double(m.total_time.mean) << " +- "
        << format_double(m.total_time.standard_error) << '\n';
    for (std::size_t i = 0; i < m.attempts.size(); ++i) {
      out << "monte_carlo_attempts[" << i << "]=" << format_double(m.attempts[i].mean) << " +- "
          << format_double(m.attempts[i].standard_error) << '\n';
    }
  }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Iterative quantum Zeno confinement of two ions"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(code_version()));

  Overrides gs_o, pr_o, cv_o, mk_o, mc_o;
  double gs_d = 0.0;
  auto* gs = app.add_subcommand("ground-state", "Solve the confined ground state for one length d");
  gs_o.geometry(gs);
  gs_o.solver(gs);
  auto* gs_d_opt = gs->add_option("-d,--length", gs_d, "Confinement length (m); defaults to d_0");
  gs_o.given["json"] = gs->add_option("--json", gs_o.json, "Report path");
  gs_o.given["checkpoint"] = gs->add_option("--checkpoint", gs_o.checkpoint, "Checkpoint path");

  auto* pr = app.add_subcommand("protocol", "Run the schedule and print the energy ledger");
  pr_o.geometry(pr);
  pr_o.solver(pr);
  pr_o.schedule(pr);
  pr_o.given["trials"] = pr->add_option("--monte-carlo", pr_o.trials, "Monte Carlo trials (0 disables)");

  auto* mc = app.add_subcommand("monte-carlo", "Protocol run with the Monte Carlo sampler");
  mc_o.geometry(mc);
  mc_o.solver(mc);
  mc_o.schedule(mc);
  mc_o.trials = 100000;
  mc_o.given["trials"] = mc->add_option("--trials", mc_o.trials, "Monte Carlo trials")->capture_default_str();

  std::vector<int> resolutions;
  std::string cv_csv;
  auto* cv = app.add_subcommand("convergence", "Ground-state energies over a sweep of resolutions");
  cv_o.geometry(cv);
  cv_o.solver(cv);
  cv_o.given["lengths"] = cv->add_option("--lengths", cv_o.lengths, "d_0[,d_1] (m)")->delimiter(',');
  cv->add_option("-r,--resolutions", resolutions, "Strictly increasing N values")->delimiter(',')->required();
  cv->add_option("--csv", cv_csv, "Table path (stdout when omitted)");

  std::vector<double> mk_d;
  std::string mk_out;
  auto* mk = app.add_subcommand("mask-dump", "Print the confinement mask as a text bitmap");
  mk_o.geometry(mk);
  mk->add_option("-d,--length", mk_d, "Confinement length(s); several give nested levels")->delimiter(',')->required();
  mk->add_option("-o,--output", mk_out, "Bitmap path (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? ok : validation;
  }

  const Provenance prov{std::string(code_version()), join_args(argc, argv), 0};
  auto progress = [&err](const std::string& s) { err << s << '\n'; };

  try {
    if (*gs) {
      ProtocolConfig c = gs_o.apply();
      c.validate();
      const double d = gs_d_opt->count() ? gs_d : c.schedule.lengths.at(0);
      if (!(d > 0.0 && d < c.plate_separation)) throw ValidationError("must lie strictly between 0 and L", "d");
      const GroundStateRecord rec{d, solve_confined(c, d)};
      const GroundStateResult& r = rec.state.result;
      out << "d_m=" << format_double(d) << '\n'
          << "E0_J=" << format_double(r.energy) << '\n'
          << "residual=" << format_double(r.residual_norm) << '\n'
          << "iterations=" << r.iterations << '\n'
          << "support_nodes=" << rec.state.support->size() << '\n';
      if (!c.interacting) out << "box_energy_J=" << format_double(box_energy(c.plate_separation, c.charges)) << '\n';
      Provenance p = prov;
      p.seed = c.solver.seed;
      if (!c.report_json.empty()) write_text(c.report_json, ground_state_report_json(c, rec, p));
      if (!c.checkpoint.empty()) {
        const UnitSystem u = c.units();
        const CheckpointMetadata meta{c.points_per_axis, c.plate_separation, d, c.epsilon,
                                      u.length_scale(), u.mass_scale(), c.charges};
        save_checkpoint(r.psi0, meta, c.checkpoint);
      }
      return ok;
    }
    if (*pr || *mc) {
      Overrides& o = *pr ? pr_o : mc_o;
      ProtocolConfig c = o.apply();
      if (*mc || o.has("trials")) c.monte_carlo_trials = o.trials;
      c.validate();
      const ProtocolRun run = run_protocol(c, progress);
      Provenance p = prov;
      p.seed = c.seed;
      print_ledger(run, out);
      if (!c.report_json.empty()) write_report(run, p, ReportFormat::structured, c.report_json);
      if (!c.report_csv.empty()) write_report(run, p, ReportFormat::tabular, c.report_csv);
      return ok;
    }
    if (*cv) {
      ProtocolConfig c = cv_o.apply();
      const std::string table = convergence_csv(convergence_sweep(c, resolutions));
      if (cv_csv.empty()) out << table; else write_text(cv_csv, table);
      return ok;
    }
    if (*mk) {
      const ProtocolConfig c = mk_o.apply();
      const std::string bitmap = mask_dump(c, mk_d);
      if (mk_out.empty()) out << bitmap; else write_text(mk_out, bitmap);
      return ok;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code(e.category());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return numerical;
  }
  return usage;
}

}  // namespace zeno::cli
