#include "sfi/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <future>
#include <iostream>

#include "sfi/csv.hpp"
#include "sfi/decomp.hpp"
#include "sfi/errors.hpp"
#include "sfi/info.hpp"

namespace sfi {

namespace {

namespace fs = std::filesystem;

std::string out_dir(const RunConfig& cfg) {
  if (const char* env = std::getenv("STABLEFISHER_OUTDIR"); env && *env) return env;
  if (!cfg.output_path.empty()) return cfg.output_path;
  return ".";
}

std::string out_file(const RunConfig& cfg, const std::string& name) {
  const fs::path dir = out_dir(cfg);
  fs::create_directories(dir);
  return (dir / name).string();
}

void prefix_names(std::vector<InequalityReport>& rs, const std::string& label) {
  for (auto& r : rs) r.name = label + "." + r.name;
}

void append(std::vector<InequalityReport>& dst, std::vector<InequalityReport> src,
            const std::string& label) {
  prefix_names(src, label);
  for (auto& r : src) dst.push_back(std::move(r));
}

// Re-evaluate pass/fail when the config overrides the inequality tolerances.
void apply_tolerance_overrides(const RunConfig& cfg, std::vector<InequalityReport>& rs) {
  if (!cfg.tolerances.count("ineq_rel") && !cfg.tolerances.count("ineq_abs")) return;
  const double rel = cfg.tolerance("ineq_rel", tol::ineq_rel);
  const double abs = cfg.tolerance("ineq_abs", tol::ineq_abs);
  for (auto& r : rs) {
    if (r.vacuous) continue;
    r.satisfied = r.lhs <= r.rhs + rel * std::abs(r.rhs) + abs;
  }
}

int run_density(const RunConfig& cfg) {
  const StableDensity sd = stable_density(*cfg.law, cfg.effective_grid(), cfg.pad);
  write_density_csv(out_file(cfg, "density.csv"), sd.density, sd.score);
  return 0;
}

int run_fisher(const RunConfig& cfg) {
  const Grid g = cfg.effective_grid();
  std::vector<std::pair<std::string, double>> values;
  if (cfg.source) {
    const DensityGrid d = source_density(*cfg.source, g);
    values.emplace_back("fisher", fisher(d));
    if (cfg.law) {
      const StableDensity sd = stable_density(*cfg.law, g, cfg.pad);
      values.emplace_back("rel_fisher", relative_fisher(d, sd));
      values.emplace_back("rel_entropy", relative_entropy(d, sd));
    }
  } else {
    const StableDensity sd = stable_density(*cfg.law, g, cfg.pad);
    values.emplace_back("fisher", fisher(sd.density));
  }
  write_values_csv(out_file(cfg, "fisher.csv"), values);
  return 0;
}

void verify_source(const RunConfig& cfg, const SourceModel& s,
                   std::vector<InequalityReport>& reports) {
  const Grid g = cfg.effective_grid();
  const std::string label = s.label();
  const DensityGrid d = source_density(s, g);

  append(reports, information_inequalities(d, d), label);
  append(reports, tv_and_charfn_bounds(d), label);
  reports.push_back(three_convolution_fisher(d, d, d));
  reports.back().name = label + "." + reports.back().name;
  append(reports, convolution_pair_checks(make_convolution_pair(d, d), 5.0), label);

  if (s.known_alpha < 2.0) {
    const auto [law, norm] = calibrate_limit(s);
    const StableDensity sd = stable_density(law, g, cfg.pad);
    append(reports, score_bound_inequalities(d, sd), label);

    std::vector<int> ns = cfg.ns;
    if (ns.empty()) ns = {8, 16};
    for (int n : ns) {
      const Truncation tr = truncate(s, n, norm, g);
      InequalityReport env = truncated_charfn_envelope(tr, s.known_alpha / 2.0);
      env.name = label + ".n" + std::to_string(n) + "." + env.name;
      reports.push_back(std::move(env));
    }
    InequalityReport fb = fisher_boundedness_witness(s, ns);
    fb.name = label + "." + fb.name;
    reports.push_back(std::move(fb));
  }
}

int run_verify(const RunConfig& cfg) {
  std::vector<InequalityReport> reports;
  if (cfg.source) {
    verify_source(cfg, *cfg.source, reports);
  } else {
    verify_source(cfg, SourceModel::gaussian(), reports);
    verify_source(cfg, SourceModel::cauchy(), reports);
  }
  apply_tolerance_overrides(cfg, reports);
  write_reports_csv(out_file(cfg, "report.csv"), reports);
  const bool ok = std::all_of(reports.begin(), reports.end(),
                              [](const InequalityReport& r) { return r.satisfied; });
  return ok ? 0 : 1;
}

int run_converge(const RunConfig& cfg) {
  ExperimentConfig ecfg;
  ecfg.xgrid = cfg.effective_grid();
  ecfg.pad = cfg.pad;

  std::vector<ConvergenceRow> rows;
  if (cfg.threads <= 1 || cfg.ns.size() <= 1) {
    rows = convergence_experiment(*cfg.source, cfg.ns, ecfg);
  } else {
    // independent rows in parallel; merged in config order for determinism
    std::vector<std::future<std::vector<ConvergenceRow>>> futs;
    futs.reserve(cfg.ns.size());
    for (int n : cfg.ns)
      futs.push_back(std::async(std::launch::async, [&, n] {
        return convergence_experiment(*cfg.source, std::vector<int>{n}, ecfg);
      }));
    for (auto& f : futs) {
      auto part = f.get();
      rows.insert(rows.end(), part.begin(), part.end());
    }
  }
  write_convergence_csv(out_file(cfg, "convergence.csv"), rows);

  if (!cfg.plot_path.empty()) {
    std::vector<double> xs, ys;
    for (const auto& r : rows)
      if (!r.failed && r.rel_fisher > 0.0) {
        xs.push_back(r.n);
        ys.push_back(r.rel_fisher);
      }
    if (!xs.empty())
      write_loglog_svg(out_file(cfg, cfg.plot_path), "relative Fisher information vs n", xs, ys);
  }
  return 0;
}

int run_decompose(const RunConfig& cfg) {
  const SourceModel& s = *cfg.source;
  const auto [law, norm] = calibrate_limit(s);
  (void)law;
  const Grid g = cfg.effective_grid();

  std::vector<std::pair<std::string, double>> values;
  std::vector<InequalityReport> reports;
  for (int n : cfg.ns) {
    const Truncation tr = truncate(s, n, norm, g);
    const std::string tag = "n" + std::to_string(n);
    values.emplace_back(tag + ".b_n", tr.b_n);
    values.emplace_back(tag + ".delta_n", tr.delta_n);
    values.emplace_back(tag + ".n_delta_n", n * tr.delta_n);
    values.emplace_back(tag + ".slope_bound", centered_charfn_slope_bound(tr));
    const auto integ = charfn_power_integrability(tr, n);
    values.emplace_back(tag + ".charfn_power_integral", integ.first);
    values.emplace_back(tag + ".charfn_deriv_integral", integ.second);

    InequalityReport env = truncated_charfn_envelope(tr, s.known_alpha / 2.0);
    env.name = tag + "." + env.name;
    reports.push_back(std::move(env));

    if (n == cfg.ns.front() && n <= 32) {
      const BinomialReconstruction rec = binomial_reconstruction(s, tr);
      values.emplace_back(tag + ".reconstruction_l1", rec.reconstruction_error);
      values.emplace_back(tag + ".dropped_weight", rec.dropped_weight);
    }
  }
  InequalityReport fb = fisher_boundedness_witness(s, cfg.ns);
  reports.push_back(std::move(fb));

  apply_tolerance_overrides(cfg, reports);
  write_values_csv(out_file(cfg, "decomposition.csv"), values);
  write_reports_csv(out_file(cfg, "decomp_report.csv"), reports);
  return 0;
}

}  // namespace

int run(const RunConfig& cfg) {
  std::string stage = cfg.command;
  try {
    if (cfg.command == "density") return run_density(cfg);
    if (cfg.command == "fisher") return run_fisher(cfg);
    if (cfg.command == "verify") return run_verify(cfg);
    if (cfg.command == "converge") return run_converge(cfg);
    if (cfg.command == "decompose") return run_decompose(cfg);
    std::cerr << "unknown command: " << cfg.command << "\n";
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "config error in stage " << stage << ": " << e.what() << "\n";
    return 2;
  } catch (const ValidationError& e) {
    std::cerr << "config error in stage " << stage << ": " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "numeric failure in stage " << stage << ": " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "failure in stage " << stage << ": " << e.what() << "\n";
    return 3;
  }
}

}  // namespace sfi
