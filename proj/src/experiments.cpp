#include "ssalab/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>
#include <numbers>
#include <numeric>
#include <string>

#include "ssalab/errors.hpp"
#include "ssalab/exact_forms.hpp"
#include "ssalab/hankel_core.hpp"
#include "ssalab/kernels.hpp"
#include "ssalab/perturbation.hpp"

namespace ssalab {

namespace {

// Evaluates fn(i) for i < n across OpenMP threads. Results land by index,
// so ordering does not depend on scheduling. The first exception is rethrown.
template <class T, class Fn>
std::vector<T> grid_map(std::size_t n, Fn fn) {
  std::vector<T> out(n);
  std::exception_ptr err;
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < n; ++i) {
    try {
      out[i] = fn(i);
    } catch (...) {
#pragma omp critical(ssalab_grid_error)
      if (!err) err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);
  return out;
}

std::vector<std::size_t> range_grid(std::size_t lo, std::size_t hi, std::size_t step) {
  std::vector<std::size_t> g;
  for (std::size_t n = lo; n <= hi; n += step) g.push_back(n);
  return g;
}

nlohmann::json base_parameters(const ExperimentConfig& cfg) {
  nlohmann::json j = to_json(cfg.params);
  j.erase("N");
  j.erase("L");
  j["alpha"] = cfg.alpha;
  j["window"] = "L = floor(alpha N)";
  j["grid"] = cfg.grid;
  return j;
}

Verdict make_verdict(std::string id, std::string description, double measured, std::string relation,
                     double threshold, bool pass) {
  return {std::move(id), std::move(description), measured, std::move(relation), threshold, pass};
}

void require_grid(const ExperimentConfig& cfg) {
  if (cfg.grid.empty()) throw InvalidArgument("experiment grid is empty");
}

std::size_t index_of(const std::vector<std::size_t>& g, std::size_t N) {
  return static_cast<std::size_t>(std::find(g.begin(), g.end(), N) - g.begin());
}

std::vector<double> column(const ExperimentReport& r, std::size_t c) {
  std::vector<double> out;
  for (const auto& row : r.rows) out.push_back(row[c]);
  return out;
}

void finish(const ExperimentConfig& cfg, const ExperimentReport& rep) {
  if (!cfg.out_dir.empty()) write_report(cfg.out_dir, rep, render_svg(rep));
}

}  // namespace

ModelParams at_length(ModelParams base, std::size_t N, double alpha) {
  base.N = N;
  base.L = window_from_ratio(N, alpha);
  base.validate();
  return base;
}

std::optional<std::pair<long, long>> rational_frequency(double omega, long max_den) {
  for (long den = 1; den <= max_den; ++den) {
    const double scaled = omega * static_cast<double>(den);
    const double num = std::round(scaled);
    if (std::abs(scaled - num) <= 1e-12 * static_cast<double>(den) && num >= 1.0) {
      const long n = static_cast<long>(num);
      if (std::gcd(n, den) == 1) return std::pair{n, den};
    }
  }
  return std::nullopt;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw InvalidArgument("slope fit needs two or more points");
  double mx = 0.0, my = 0.0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]) / n;
    my += std::log(y[i]) / n;
  }
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

std::size_t residue_length(std::size_t target, long k, long den) {
  const auto d = static_cast<std::size_t>(den), kk = static_cast<std::size_t>(k);
  if (target < kk + 1) throw InvalidArgument("residue_length: target too small");
  return target - ((target - (kk + 1)) % d);
}

ExperimentConfig fig2_defaults() {
  ExperimentConfig cfg;
  cfg.params = fig2_params(300);
  cfg.grid = range_grid(10, 300, 1);
  return cfg;
}

ExperimentConfig histogram_defaults() {
  ExperimentConfig cfg;
  cfg.params = fig2_params(1000);
  cfg.params.omega = std::numbers::sqrt2 / 6.0;
  cfg.grid = {1000, 1000000};  // inclusive range of N
  return cfg;
}

ExperimentConfig proj_decay_defaults(Scheme scheme) {
  ExperimentConfig cfg;
  cfg.params = fig2_params(300, scheme);
  cfg.grid = scheme == Scheme::FixedStep ? range_grid(100, 900, 50) : std::vector<std::size_t>{250, 500, 1000, 2000};
  return cfg;
}

ExperimentConfig err_decay_defaults() {
  ExperimentConfig cfg;
  cfg.params = fig2_params(500, Scheme::Discretized);
  cfg.grid = {250, 500, 1000, 2000};
  return cfg;
}

ExperimentConfig bounds_defaults() {
  ExperimentConfig cfg;
  cfg.params = fig2_params(300, Scheme::Discretized);
  cfg.grid = {300, 600, 1200};
  return cfg;
}

ExperimentReport run_fig2(const ExperimentConfig& cfg) {
  require_grid(cfg);
  constexpr std::size_t ell = 4;
  const auto frac = rational_frequency(cfg.params.omega);
  if (!frac) throw InvalidArgument("fig2 needs a rational omega with denominator <= 64");
  const auto [num, den] = *frac;
  ModelParams base = cfg.params;
  base.scheme = Scheme::FixedStep;
  const auto limits = rational_limit_points(num, den, ell, base);
  const double delta = base.delta;

  const auto r_exact = grid_map<double>(cfg.grid.size(), [&](std::size_t i) {
    const ModelParams p = at_length(base, cfg.grid[i], cfg.alpha);
    if (p.N < ell + 1) throw InvalidArgument("fig2 needs N > 4");
    return reconstruction_errors(p).values[p.N - 1 - ell];
  });

  ExperimentReport rep;
  rep.id = "fig2";
  rep.parameters = base_parameters(cfg);
  rep.parameters["scheme"] = to_string(Scheme::FixedStep);
  rep.parameters["ell"] = ell;
  rep.columns = {"N", "r_exact", "residue", "limit"};
  for (std::size_t i = 0; i < cfg.grid.size(); ++i) {
    const std::size_t N = cfg.grid[i];
    const long k = static_cast<long>((N - 1) % static_cast<std::size_t>(den));
    rep.rows.push_back({static_cast<double>(N), r_exact[i], static_cast<double>(k),
                        delta * limits[static_cast<std::size_t>(k)]});
  }
  std::vector<double> scaled_limits;
  for (double v : limits) scaled_limits.push_back(delta * v);
  rep.extra["omega_fraction"] = {num, den};
  rep.extra["limits"] = scaled_limits;
  rep.extra["D"] = tail_coefficients(base, ell).D;

  rep.verdicts.push_back(make_verdict("limit_count", "number of limit values equals the denominator",
                                      static_cast<double>(limits.size()), "==", static_cast<double>(den),
                                      limits.size() == static_cast<std::size_t>(den)));
  // Verification pass: each residue class extended to N near 600.
  const auto dist = grid_map<double>(static_cast<std::size_t>(den), [&](std::size_t k) {
    const ModelParams p = at_length(base, residue_length(600, static_cast<long>(k), den), cfg.alpha);
    return std::abs(reconstruction_errors(p).values[p.N - 1 - ell] - delta * limits[k]);
  });
  const double worst = *std::max_element(dist.begin(), dist.end());
  rep.verdicts.push_back(make_verdict("residue_600", "max residue distance to its limit at N ~ 600", worst, "<=",
                                      0.05, worst <= 0.05));
  finish(cfg, rep);
  return rep;
}

ExperimentReport run_histogram(const ExperimentConfig& cfg) {
  if (cfg.grid.size() != 2 || cfg.grid[0] > cfg.grid[1] || cfg.grid[0] < 1)
    throw InvalidArgument("histogram grid is an inclusive range [N_min, N_max]");
  if (cfg.grid[1] > 1000000) throw InvalidArgument("histogram n_max must not exceed 1e6");
  ModelParams base = cfg.params;
  base.scheme = Scheme::FixedStep;
  base.validate_series();
  const TailCoefficients tc = tail_coefficients(base, 0);
  const double xi = base.xi();
  const double bound = std::abs(base.delta) * tc.D;
  if (!(bound > 0.0)) throw InvalidArgument("histogram needs delta != 0");

  std::vector<double> samples;
  samples.reserve(cfg.grid[1] - cfg.grid[0] + 1);
  for (std::size_t N = cfg.grid[0]; N <= cfg.grid[1]; ++N) samples.push_back(base.delta * tail_predictor(tc, xi, N));

  constexpr std::size_t bins = 50;
  const double width = 2.0 * bound / bins;
  std::vector<std::size_t> counts(bins, 0);
  bool inside = true;
  for (double v : samples) {
    inside = inside && std::abs(v) <= bound * (1.0 + 1e-12);
    const auto b = static_cast<std::size_t>(std::clamp((v + bound) / width, 0.0, static_cast<double>(bins - 1)));
    ++counts[b];
  }

  ExperimentReport rep;
  rep.id = "histogram";
  rep.parameters = base_parameters(cfg);
  rep.parameters["scheme"] = to_string(Scheme::FixedStep);
  rep.parameters["grid"] = {{"N_min", cfg.grid[0]}, {"N_max", cfg.grid[1]}};
  rep.parameters["samples"] = "r_{N-1} = delta F_N(0) from the tail predictor";
  rep.columns = {"bin_left", "bin_right", "count", "density"};
  const double n = static_cast<double>(samples.size());
  double integral = 0.0;
  for (std::size_t b = 0; b < bins; ++b) {
    const double lo = -bound + width * static_cast<double>(b);
    const double hi = b + 1 == bins ? bound : lo + width;
    const double density = static_cast<double>(counts[b]) / (n * (hi - lo));
    integral += density * (hi - lo);
    rep.rows.push_back({lo, hi, static_cast<double>(counts[b]), density});
  }
  const double ks = ks_distance(samples, [&](double z) { return arcsine_cdf(bound, z); });
  rep.extra["D0"] = tc.D;
  rep.extra["ks_distance"] = ks;
  rep.verdicts.push_back(make_verdict("bounded", "all samples within [-delta D(0), delta D(0)]", inside ? 1.0 : 0.0,
                                      "==", 1.0, inside));
  rep.verdicts.push_back(make_verdict("ks", "KS distance to the arcsine cdf", ks, "<=", 0.02, ks <= 0.02));
  rep.verdicts.push_back(make_verdict("normalization", "|integral of density - 1|", std::abs(integral - 1.0), "<=",
                                      1e-3, std::abs(integral - 1.0) <= 1e-3));
  finish(cfg, rep);
  return rep;
}

ExperimentReport run_proj_decay(const ExperimentConfig& cfg) {
  require_grid(cfg);
  const bool fixed = cfg.params.scheme == Scheme::FixedStep;
  const auto gaps = grid_map<double>(cfg.grid.size(), [&](std::size_t i) {
    const ModelParams p = at_length(cfg.params, cfg.grid[i], cfg.alpha);
    return projection_gap(exact_projectors(p), perturbed_projector(p));
  });

  ExperimentReport rep;
  rep.id = fixed ? "proj-decay-fixed" : "proj-decay-discretized";
  rep.parameters = base_parameters(cfg);
  rep.parameters["normalization"] = fixed ? "a^N / sqrt(N)" : "N";
  rep.columns = {"N", "gap", "normalized"};
  std::vector<double> normalized(gaps.size());
  for (std::size_t i = 0; i < gaps.size(); ++i) {
    const double N = static_cast<double>(cfg.grid[i]);
    normalized[i] = fixed ? std::exp(N * std::log(cfg.params.a) - 0.5 * std::log(N)) * gaps[i] : N * gaps[i];
    rep.rows.push_back({N, gaps[i], normalized[i]});
  }

  if (fixed) {
    const double limit = projection_gap_limit(at_length(cfg.params, cfg.grid.back(), cfg.alpha));
    rep.extra["limit"] = limit;
    const std::size_t i600 = index_of(cfg.grid, 600), i300 = index_of(cfg.grid, 300);
    if (i600 < cfg.grid.size() && limit > 0.0) {
      const ModelParams p600 = at_length(cfg.params, 600, cfg.alpha);
      const double lim600 = projection_gap_limit(p600);
      const double dev = std::abs(normalized[i600] / lim600 - 1.0);
      rep.verdicts.push_back(make_verdict("limit_600", "relative deviation from the limit at N=600", dev, "<=", 0.05,
                                          dev <= 0.05));
      if (i300 < cfg.grid.size()) {
        const double dev300 = std::abs(normalized[i300] / projection_gap_limit(at_length(cfg.params, 300, cfg.alpha)) - 1.0);
        rep.verdicts.push_back(make_verdict("closer_600", "deviation at 600 minus deviation at 300", dev - dev300,
                                            "<", 0.0, dev < dev300));
      }
    }
  } else {
    std::vector<double> x;
    for (auto N : cfg.grid) x.push_back(static_cast<double>(N));
    const bool positive = std::all_of(gaps.begin(), gaps.end(), [](double g) { return g > 0.0; });
    const double slope = positive && gaps.size() >= 2 ? loglog_slope(x, gaps) : std::nan("");
    rep.extra["slope"] = slope;
    rep.verdicts.push_back(make_verdict("slope", "log-log slope of gap vs N in [-1.25, -0.75]", slope, "in", -1.0,
                                        slope >= -1.25 && slope <= -0.75));
  }
  finish(cfg, rep);
  return rep;
}

ExperimentReport run_err_decay(const ExperimentConfig& cfg) {
  require_grid(cfg);
  const auto maxima = grid_map<double>(cfg.grid.size(), [&](std::size_t i) {
    return reconstruction_errors(at_length(cfg.params, cfg.grid[i], cfg.alpha)).max_abs();
  });
  ExperimentReport rep;
  rep.id = "err-decay";
  rep.parameters = base_parameters(cfg);
  rep.columns = {"N", "max_abs_r", "scaled"};
  std::vector<double> scaled;
  for (std::size_t i = 0; i < maxima.size(); ++i) {
    const double N = static_cast<double>(cfg.grid[i]);
    scaled.push_back(N * maxima[i]);
    rep.rows.push_back({N, maxima[i], scaled.back()});
  }
  const std::size_t i500 = index_of(cfg.grid, 500), i2000 = index_of(cfg.grid, 2000);
  if (i500 < cfg.grid.size() && i2000 < cfg.grid.size()) {
    const double ratio = scaled[i2000] / scaled[i500];
    rep.verdicts.push_back(make_verdict("stability", "N max|r| at 2000 over its value at 500", ratio, "<=", 1.5,
                                        ratio <= 1.5));
  }
  finish(cfg, rep);
  return rep;
}

BoundConstants bound_constants(const ModelParams& base, std::size_t N, double alpha) {
  BoundConstants bc;
  ModelParams fixed = at_length(base, N, alpha);
  fixed.scheme = Scheme::FixedStep;
  bc.envelope_C = fit_envelope_constant(fixed, rho_series(fixed));

  ModelParams p = at_length(base, N, alpha);
  p.scheme = Scheme::Discretized;
  const double n = static_cast<double>(N);
  const BOperator B(p);
  const SubspaceSet& sub = B.subspace();
  const Vector col = B.column();  // B w_hat / mu
  const Vector Etw = HankelOperator(noise(p), p.L).apply_t(sub.w_hat);
  const double max_w = sub.w_hat.cwiseAbs().maxCoeff();
  const double max_v = sub.v_hat.cwiseAbs().maxCoeff();
  const double max_col = col.cwiseAbs().maxCoeff();
  const double max_etw = Etw.cwiseAbs().maxCoeff();
  // All four matrices are rank one, so their max-norms factor.
  bc.bh = std::exp(1.5 * sub.log_mu()) * max_col * max_v / n;  // B H = mu s (col) v_hat^T
  bc.s0b = n * n * max_w * max_col;                             // S0 B = w_hat col^T
  bc.bs0e = n * n * max_col * max_etw;                          // B S0 E = col (E^T w_hat)^T
  bc.pe = n * max_w * max_etw;                                  // P0perp E = w_hat (E^T w_hat)^T
  const RowMatrix Z = z_matrix(p);
  bc.z_C2 = p.delta != 0.0 ? n * Z.cwiseAbs().maxCoeff() / std::abs(p.delta) : 0.0;
  return bc;
}

ExperimentReport run_bounds(const ExperimentConfig& cfg) {
  require_grid(cfg);
  const auto consts =
      grid_map<BoundConstants>(cfg.grid.size(), [&](std::size_t i) { return bound_constants(cfg.params, cfg.grid[i], cfg.alpha); });
  ExperimentReport rep;
  rep.id = "bounds";
  rep.parameters = base_parameters(cfg);
  rep.parameters["scheme"] = "envelope: fixed; Z and norm orders: discretized";
  rep.columns = {"N", "rho_envelope_C", "z_C2", "bh_ratio", "s0b_ratio", "bs0e_ratio", "pe_ratio"};
  for (std::size_t i = 0; i < consts.size(); ++i) {
    const auto& c = consts[i];
    rep.rows.push_back({static_cast<double>(cfg.grid[i]), c.envelope_C, c.z_C2, c.bh, c.s0b, c.bs0e, c.pe});
  }
  for (std::size_t col = 1; col < rep.columns.size(); ++col) {
    double lo = INFINITY, hi = 0.0;
    bool finite_positive = true;
    for (const auto& row : rep.rows) {
      finite_positive = finite_positive && std::isfinite(row[col]) && row[col] > 0.0;
      lo = std::min(lo, row[col]);
      hi = std::max(hi, row[col]);
    }
    const double spread = finite_positive ? hi / lo : INFINITY;
    rep.verdicts.push_back(make_verdict(rep.columns[col], "max/min across the grid", spread, "<", 3.0, spread < 3.0));
  }
  finish(cfg, rep);
  return rep;
}

std::vector<double> read_series_csv(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw InvalidArgument("cannot read " + path.string());
  std::vector<double> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(f, line)) {
    ++line_no;
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    const auto e = line.find_last_not_of(" \t\r");
    const std::string field = line.substr(b, e - b + 1);
    double v = 0.0;
    const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
    const bool ok = res.ec == std::errc() && res.ptr == field.data() + field.size();
    if (!ok) {
      if (out.empty() && line_no == 1) continue;  // header
      throw InvalidArgument(path.string() + ":" + std::to_string(line_no) + ": not a number: '" + field + "'");
    }
    if (!std::isfinite(v)) throw InvalidArgument(path.string() + ":" + std::to_string(line_no) + ": non-finite value");
    out.push_back(v);
  }
  if (out.empty()) throw InvalidArgument(path.string() + ": no data");
  return out;
}

std::vector<double> ssa_reconstruct(const std::vector<double>& series, std::size_t L, std::size_t rank) {
  const std::size_t N = series.size();
  if (L <= 1 || L + 1 >= N) throw InvalidArgument("window must satisfy 1 < L < N - 1");
  const std::size_t K = N - L + 1;
  if (rank < 1 || rank >= std::min(L, K)) throw InvalidArgument("rank must satisfy 1 <= rank < min(L, K)");
  const TrajectoryMatrix M = embed(series, L);
  std::vector<SingularPair> pairs;
  if (rank == 1)
    pairs.push_back(dominant_left_singular(M));
  else
    pairs = leading_singular_pairs(M, rank);
  std::vector<double> out(N, 0.0), tmp(N);
  Vector row(static_cast<Eigen::Index>(K));
  for (const auto& sp : pairs) {
    kernels::dense_apply_t(M.data(), L, K, {sp.u.data(), L}, {row.data(), K});
    kernels::outer_hankelize({sp.u.data(), L}, {row.data(), K}, tmp);
    for (std::size_t j = 0; j < N; ++j) out[j] += tmp[j];
  }
  return out;
}

std::vector<double> reconstruct_csv(const std::filesystem::path& input, std::size_t L, std::size_t rank,
                                    const std::filesystem::path& output) {
  const auto x = read_series_csv(input);
  const auto rec = ssa_reconstruct(x, L, rank);
  std::vector<std::vector<double>> rows;
  for (std::size_t j = 0; j < x.size(); ++j) rows.push_back({static_cast<double>(j), x[j], rec[j], x[j] - rec[j]});
  write_text(output, to_csv({"index", "original", "reconstructed", "residual"}, rows));
  return rec;
}

std::string render_svg(const ExperimentReport& r) {
  using Style = PlotSeries::Style;
  if (r.rows.empty()) return {};
  if (r.id == "fig2") {
    return svg_plot("Reconstruction errors r_{N-5} and their limits", "N", "r",
                    {{"r exact", column(r, 0), column(r, 1), Style::Points, "#1f77b4"},
                     {"limit (residue of N)", column(r, 0), column(r, 3), Style::Points, "#d62728"}});
  }
  if (r.id == "histogram") {
    auto x = column(r, 0), y = column(r, 3);
    x.push_back(r.rows.back()[1]);
    y.push_back(y.back());
    const double bound = r.rows.back()[1];
    const double cap = 1.5 * *std::max_element(y.begin(), y.end());
    std::vector<double> zx, zy;
    for (int i = 0; i < 400; ++i) {
      const double z = -bound * std::cos(std::numbers::pi * (i + 0.5) / 400.0);
      const double d = arcsine_density(bound, z);
      if (d <= cap) {
        zx.push_back(z);
        zy.push_back(d);
      }
    }
    return svg_plot("Tail errors r_{N-1}: histogram and arcsine density", "r", "density",
                    {{"histogram", x, y, Style::Step, "#1f77b4"}, {"arcsine density", zx, zy, Style::Line, "#d62728"}});
  }
  if (r.id == "proj-decay-fixed") {
    std::vector<PlotSeries> s{{"(a^N/sqrt N) gap", column(r, 0), column(r, 2), Style::Points, "#1f77b4"}};
    if (r.extra.contains("limit")) {
      const double lim = r.extra["limit"].get<double>();
      s.push_back({"limit", {r.rows.front()[0], r.rows.back()[0]}, {lim, lim}, Style::Line, "#d62728"});
    }
    return svg_plot("Normalized projection gap (fixed step)", "N", "normalized gap", s);
  }
  if (r.id == "proj-decay-discretized")
    return svg_plot("Projection gap (discretized)", "N", "gap",
                    {{"gap", column(r, 0), column(r, 1), Style::Line, "#1f77b4"}}, true, true);
  if (r.id == "err-decay")
    return svg_plot("Scaled maximal reconstruction error", "N", "N max|r|",
                    {{"N max|r|", column(r, 0), column(r, 2), Style::Line, "#1f77b4"}}, true, false);
  if (r.id == "bounds") {
    static const char* colors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b"};
    std::vector<PlotSeries> s;
    for (std::size_t c = 1; c < r.columns.size(); ++c) {
      auto y = column(r, c);
      const double first = y.front();
      for (double& v : y) v = first != 0.0 ? v / first : 0.0;
      s.push_back({r.columns[c], column(r, 0), y, Style::Line, colors[(c - 1) % 6]});
    }
    return svg_plot("Fitted constants relative to the first grid point", "N", "value / value at first N", s, true,
                    false);
  }
  return {};
}

}  // namespace ssalab
