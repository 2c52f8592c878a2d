// Command-line front end: series generation, SSA reconstruction of user
// data, the experiment runners and the acceptance suite.
//
// Exit codes: 0 success, 1 usage error, 2 numerical failure, 3 acceptance failure.

#include <CLI11.hpp>
#include <algorithm>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "ssalab/acceptance.hpp"
#include "ssalab/errors.hpp"
#include "ssalab/experiments.hpp"
#include "ssalab/report.hpp"
#include "ssalab/series_models.hpp"

namespace {

enum Exit { kOk = 0, kUsage = 1, kNumerical = 2, kAcceptance = 3 };

struct Flags {
  std::optional<double> a, omega, phi, delta, alpha, T;
  std::optional<std::size_t> L, N, n_max;
  std::optional<std::string> scheme;
  std::string out;
};

void add_model_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--a", f.a, "growth base, a > 1");
  cmd->add_option("--omega", f.omega, "noise frequency in cycles/sample, in (0, 1/2)");
  cmd->add_option("--phi", f.phi, "noise phase in [0, 2pi)");
  cmd->add_option("--delta", f.delta, "noise amplitude");
  cmd->add_option("--T", f.T, "horizon of the discretized scheme");
  cmd->add_option("--scheme", f.scheme, "fixed | discretized")->check(CLI::IsMember({"fixed", "discretized"}));
}

void apply(const Flags& f, ssalab::ModelParams& p) {
  if (f.a) p.a = *f.a;
  if (f.omega) p.omega = *f.omega;
  if (f.phi) p.phi = *f.phi;
  if (f.delta) p.delta = *f.delta;
  if (f.T) p.T = *f.T;
  if (f.scheme) p.scheme = ssalab::scheme_from_string(f.scheme->c_str());
}

void cap_grid(std::vector<std::size_t>& grid, std::optional<std::size_t> n_max) {
  if (!n_max) return;
  std::erase_if(grid, [&](std::size_t n) { return n > *n_max; });
  if (grid.empty()) throw ssalab::InvalidArgument("--n-max leaves an empty grid");
}

void print_verdicts(const ssalab::ExperimentReport& r) {
  for (const auto& v : r.verdicts)
    std::cout << (v.pass ? "[PASS] " : "[FAIL] ") << r.id << '.' << v.id << ": " << v.description << " = "
              << ssalab::format_double(v.measured) << " (" << v.relation << ' ' << ssalab::format_double(v.threshold)
              << ")\n";
}

int run_experiment(const std::string& name, const Flags& f) {
  using namespace ssalab;
  ExperimentConfig cfg;
  if (name == "fig2") {
    cfg = fig2_defaults();
    if (f.n_max) {
      cfg.grid.clear();
      for (std::size_t n = 10; n <= *f.n_max; ++n) cfg.grid.push_back(n);
    }
  } else if (name == "histogram") {
    cfg = histogram_defaults();
    if (f.n_max) cfg.grid[1] = *f.n_max;
  } else if (name == "proj-decay") {
    const Scheme s = f.scheme ? scheme_from_string(f.scheme->c_str()) : Scheme::FixedStep;
    cfg = proj_decay_defaults(s);
    if (f.n_max && s == Scheme::FixedStep) {
      cfg.grid.clear();
      for (std::size_t n = 100; n <= *f.n_max; n += 50) cfg.grid.push_back(n);
    } else {
      cap_grid(cfg.grid, f.n_max);
    }
  } else if (name == "err-decay") {
    cfg = err_decay_defaults();
    cap_grid(cfg.grid, f.n_max);
  } else if (name == "bounds") {
    cfg = bounds_defaults();
    cap_grid(cfg.grid, f.n_max);
  } else {
    throw InvalidArgument("unknown experiment '" + name + "'");
  }
  if (cfg.grid.empty()) throw InvalidArgument("empty grid");
  apply(f, cfg.params);
  if (f.alpha) cfg.alpha = *f.alpha;
  cfg.out_dir = f.out.empty() ? "out" : f.out;

  ExperimentReport rep;
  if (name == "fig2") rep = run_fig2(cfg);
  else if (name == "histogram") rep = run_histogram(cfg);
  else if (name == "proj-decay") rep = run_proj_decay(cfg);
  else if (name == "err-decay") rep = run_err_decay(cfg);
  else rep = run_bounds(cfg);
  print_verdicts(rep);
  std::cout << "wrote " << (cfg.out_dir / (rep.id + ".csv")).string() << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SSA reconstruction-error laboratory"};
  app.require_subcommand(1);

  Flags gen_flags;
  auto* gen = app.add_subcommand("gen", "write n,signal,noise,perturbed for one parameter set");
  add_model_flags(gen, gen_flags);
  gen->add_option("--N", gen_flags.N, "series length");
  gen->add_option("--out", gen_flags.out, "output CSV (default: stdout)");

  std::string input;
  std::size_t window = 0, rank = 1;
  std::string rec_out;
  auto* rec = app.add_subcommand("reconstruct", "rank-r SSA reconstruction of a single-column CSV");
  rec->add_option("input", input, "input CSV")->required();
  rec->add_option("--L", window, "window length")->required();
  rec->add_option("--rank", rank, "number of leading singular directions kept");
  rec->add_option("--out", rec_out, "output CSV")->required();

  Flags ex_flags;
  std::string experiment;
  auto* expt = app.add_subcommand("expt", "run an experiment and write CSV/JSON/SVG");
  expt->add_option("name", experiment, "fig2 | histogram | proj-decay | err-decay | bounds")
      ->required()
      ->check(CLI::IsMember({"fig2", "histogram", "proj-decay", "err-decay", "bounds"}));
  add_model_flags(expt, ex_flags);
  expt->add_option("--alpha", ex_flags.alpha, "window ratio, L = floor(alpha N)");
  expt->add_option("--n-max", ex_flags.n_max, "upper end of the N grid");
  expt->add_option("--out", ex_flags.out, "output directory (default: out)");

  auto* check = app.add_subcommand("check", "run the acceptance suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*gen) {
      ssalab::ModelParams p;
      apply(gen_flags, p);
      if (gen_flags.N) p.N = *gen_flags.N;
      const auto x = ssalab::signal(p), e = ssalab::noise(p), f = ssalab::perturbed(p);
      std::vector<std::vector<double>> rows;
      for (std::size_t n = 0; n < p.N; ++n) rows.push_back({static_cast<double>(n), x[n], e[n], f[n]});
      const auto csv = ssalab::to_csv({"n", "signal", "noise", "perturbed"}, rows);
      if (gen_flags.out.empty())
        std::cout << csv;
      else
        ssalab::write_text(gen_flags.out, csv);
      return kOk;
    }
    if (*rec) {
      ssalab::reconstruct_csv(input, window, rank, rec_out);
      return kOk;
    }
    if (*expt) return run_experiment(experiment, ex_flags);
    if (*check) {
      bool ok = true;
      for (int id = 1; id <= ssalab::kCriterionCount; ++id) {
        const auto r = ssalab::run_criterion(id);
        std::cout << ssalab::format_result(r) << std::endl;
        ok = ok && r.pass();
      }
      return ok ? kOk : kAcceptance;
    }
  } catch (const ssalab::InvalidArgument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const ssalab::NumericalFailure& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
