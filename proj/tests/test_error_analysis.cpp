#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include "ssalab/error_analysis.hpp"
#include "ssalab/errors.hpp"
#include "ssalab/series_models.hpp"

using namespace ssalab;

namespace {

constexpr double kPi = std::numbers::pi;

double spread(const std::vector<double>& v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return *hi / *lo;
}

double max_signal(const ModelParams& p) {
  const auto x = signal(p);
  return *std::max_element(x.begin(), x.end());
}

double simpson(const std::function<double(double)>& f, double a, double b, double fa, double fm, double fb,
               double whole, double tol, int depth) {
  const double m = 0.5 * (a + b), lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm), right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol) return left + right + (left + right - whole) / 15.0;
  return simpson(f, a, m, fa, flm, fm, left, tol / 2, depth - 1) + simpson(f, m, b, fm, frm, fb, right, tol / 2, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  return simpson(f, a, b, fa, fm, fb, (b - a) / 6.0 * (fa + 4.0 * fm + fb), tol, 50);
}

}  // namespace

TEST_CASE("noise-free series reconstruct without error") {
  for (Scheme s : {Scheme::FixedStep, Scheme::Discretized}) {
    ModelParams p = fig2_params(300, s);
    p.delta = 0.0;
    const auto r = reconstruction_errors(p);
    const auto d = reconstruction_errors_direct(p);
    REQUIRE(r.values.size() == 300);
    CHECK(r.max_abs() <= 1e-9 * max_signal(p));
    CHECK(d.max_abs() <= 1e-9 * max_signal(p));
  }
}

TEST_CASE("split and direct reconstruction routes agree") {
  for (Scheme s : {Scheme::FixedStep, Scheme::Discretized}) {
    const ModelParams p = fig2_params(300, s);
    const auto r = reconstruction_errors(p), d = reconstruction_errors_direct(p);
    CHECK(r.method == ErrorMethod::Exact);
    CHECK(d.method == ErrorMethod::Direct);
    const double scale = max_signal(p);
    for (std::size_t j = 0; j < r.values.size(); ++j) {
      CHECK(std::isfinite(r.values[j]));
      CHECK(std::abs(r.values[j] - d.values[j]) <= 1e-9 * scale);
    }
  }
}

TEST_CASE("default-parameter error near the end of the series") {
  const auto r = reconstruction_errors(fig2_params(300));
  const double v = r.values[295];
  CHECK(std::isfinite(v));
  CHECK(std::abs(v) < 0.05);
  CHECK(std::abs(v) > 1e-4);
}

TEST_CASE("closed-form main term matches the dense oracle") {
  for (Scheme s : {Scheme::FixedStep, Scheme::Discretized})
    for (std::size_t N : {40, 150}) {
      const ModelParams p = fig2_params(N, s);
      const auto a = rho_series(p), b = rho_series_dense(p);
      REQUIRE(a.size() == N);
      for (std::size_t j = 0; j < N; ++j) CHECK(std::abs(a[j] - b[j]) <= 1e-12);
    }
}

TEST_CASE("errors are delta times the main term up to N^2 a^-N") {
  const ModelParams p300 = fig2_params(300);
  const auto r = reconstruction_errors(p300), m = main_term_errors(p300);
  CHECK(m.method == ErrorMethod::MainTerm);
  double worst = 0.0;
  for (std::size_t j = 0; j < 300; ++j) worst = std::max(worst, std::abs(r.values[j] - m.values[j]));
  CHECK(worst <= 1e-3);

  std::vector<double> c;
  for (std::size_t N : {200, 300, 400}) {
    const ModelParams p = fig2_params(N);
    const auto rr = reconstruction_errors(p);
    const auto rho = rho_series(p);
    double w = 0.0;
    for (std::size_t j = 0; j < N; ++j) w = std::max(w, std::abs(rr.values[j] - p.delta * rho[j]));
    c.push_back(w / (double(N) * double(N) * std::pow(p.a, -double(N))));
  }
  CHECK(spread(c) <= 3.0);
}

TEST_CASE("main term in the middle range is of order 1/L") {
  const ModelParams p400 = fig2_params(400);
  const auto rho400 = rho_series(p400);
  double c = 0.0;
  for (std::size_t j = p400.L; j < p400.K(); ++j) c = std::max(c, std::abs(rho400[j]) * double(p400.L));
  for (std::size_t N : {300, 600, 800}) {
    const ModelParams p = fig2_params(N);
    const auto rho = rho_series(p);
    for (std::size_t j = p.L; j < p.K(); ++j) CHECK(std::abs(rho[j]) <= 2.0 * c / double(p.L));
  }
  const auto rho800 = rho_series(fig2_params(800));
  CHECK(std::abs(rho800[400]) < std::abs(rho400[200]));
}

TEST_CASE("bound envelope") {
  const ModelParams p = fig2_params(300);
  for (std::size_t j : {p.L, p.L + 1, p.K() - 1}) CHECK(rho_bound_envelope(p, j) == 1.0 / double(p.L));
  CHECK(rho_bound_envelope(p, 299) == doctest::Approx(1.0 + 1.0 / 1.05).epsilon(1e-15));
  CHECK(rho_bound_envelope(p, 0) == doctest::Approx(std::pow(1.05, -105.0)).epsilon(1e-12));
  CHECK_THROWS_AS(rho_bound_envelope(p, 300), InvalidArgument);

  std::vector<double> c;
  for (std::size_t N : {300, 600}) {
    const ModelParams q = fig2_params(N);
    const double k = fit_envelope_constant(q, rho_series(q));
    CHECK(std::isfinite(k));
    c.push_back(k);
  }
  CHECK(spread(c) <= 2.0);
}

TEST_CASE("errors sit under one envelope constant") {
  std::vector<double> c;
  for (std::size_t N : {300, 600}) {
    const ModelParams p = fig2_params(N);
    const auto r = reconstruction_errors(p);
    double k = 0.0;
    for (std::size_t j = 0; j < N; ++j) k = std::max(k, std::abs(r.values[j]) / (p.delta * rho_bound_envelope(p, j)));
    c.push_back(k);
  }
  CHECK(spread(c) <= 2.0);
}

TEST_CASE("tail coefficients") {
  const ModelParams p = fig2_params(600);
  const double a = p.a, xi = p.xi();
  const auto tc = tail_coefficients(p, 0);
  CHECK(tc.G == doctest::Approx((a * a - 1) / (a * (a * a + 1 - 2 * a * std::cos(xi)))).epsilon(1e-15));
  for (std::size_t ell : {0, 1, 2, 3, 4, 10}) {
    const auto t = tail_coefficients(p, ell);
    CHECK(t.D > 0.0);
    CHECK(t.D == doctest::Approx(t.G * std::hypot(t.C1, t.C2)).epsilon(1e-15));
    CHECK(std::abs(t.C1 * t.C2) > 1e-12);
  }
  const auto far = tail_coefficients(p, 200);
  CHECK(std::abs(far.C1) < 0.02);
  CHECK(std::abs(far.C2) < 0.02);
  CHECK_THROWS_AS(tail_coefficients(fig2_params(600, Scheme::Discretized), 0), InvalidArgument);
}

TEST_CASE("tail phase representation is an identity") {
  ModelParams p = fig2_params(600);
  for (double omega : {0.05, 2.0 / 9.0, 0.31, 0.49})
    for (std::size_t ell : {0, 3, 17}) {
      p.omega = omega;
      const auto t = tail_coefficients(p, ell);
      for (int g = 0; g < 64; ++g) {
        const double x = 2 * kPi * g / 64;
        CHECK(t.D * std::sin(x + t.phi1) == doctest::Approx(t.G * (t.C1 * std::cos(x) + t.C2 * std::sin(x))).epsilon(1e-12));
      }
    }
}

TEST_CASE("tail predictor matches the exact errors at N = 600") {
  const ModelParams p = fig2_params(600);
  const auto r = reconstruction_errors(p);
  for (std::size_t ell = 0; ell < 5; ++ell) {
    const auto t = tail_coefficients(p, ell);
    CHECK(std::abs(r.values[599 - ell] - p.delta * tail_predictor(t, p.xi(), 600)) <= 0.05 * p.delta * t.D);
    CHECK(tail_predictor(t, p.xi(), 600) == tail_predictor(p, ell, 600));
  }
}

TEST_CASE("tail predictor remainder decays like a^-L") {
  std::vector<double> scaled;
  double prev = 1e300;
  for (std::size_t N : {200, 300, 400, 600, 800}) {
    const ModelParams p = fig2_params(N);
    const auto r = reconstruction_errors(p);
    const auto t = tail_coefficients(p, 0);
    const double err = std::abs(r.values[N - 1] - p.delta * tail_predictor(t, p.xi(), N)) / (p.delta * t.D);
    CHECK(err < prev);
    prev = err;
    scaled.push_back(err / std::pow(p.a, -double(p.L)));
  }
  // One constant covers the whole grid.
  CHECK(*std::max_element(scaled.begin(), scaled.end()) <= 1.0);
}

TEST_CASE("tail predictor is bounded and periodic for rational frequencies") {
  const ModelParams p = fig2_params(600);
  for (std::size_t ell : {0, 4}) {
    const auto t = tail_coefficients(p, ell);
    for (std::size_t N = 100; N < 400; ++N) {
      const double f = tail_predictor(t, p.xi(), N);
      CHECK(std::abs(f) <= t.D);
      CHECK(tail_predictor(t, p.xi(), N + 9) == doctest::Approx(f).epsilon(1e-12).scale(t.D));
    }
  }
}

TEST_CASE("tail errors do not converge") {
  double lo = 1e300, hi = -1e300;
  for (std::size_t N = 500; N <= 600; ++N) {
    const auto r = reconstruction_errors(fig2_params(N));
    lo = std::min(lo, r.values[N - 1]);
    hi = std::max(hi, r.values[N - 1]);
  }
  const auto t = tail_coefficients(fig2_params(550), 0);
  CHECK(hi - lo > 0.5 * 0.1 * t.D);
}

TEST_CASE("rational limit points") {
  const ModelParams p = fig2_params(600);
  const auto pts = rational_limit_points(2, 9, 4, p);
  REQUIRE(pts.size() == 9);
  const double D = tail_coefficients(p, 4).D;
  for (double v : pts) CHECK(std::abs(v) <= D);
  CHECK(single_linkage_clusters(pts, 0.1 * D).size() >= 2);

  CHECK_THROWS_AS(rational_limit_points(2, 4, 0, p), InvalidArgument);
  CHECK_THROWS_AS(rational_limit_points(5, 9, 0, p), InvalidArgument);
  CHECK_THROWS_AS(rational_limit_points(0, 9, 0, p), InvalidArgument);
}

TEST_CASE("errors along residue classes approach the limit points") {
  const ModelParams base = fig2_params(600);
  const auto pts = rational_limit_points(2, 9, 4, base);
  for (long k = 0; k < 9; ++k) {
    double dev[2];
    int i = 0;
    for (std::size_t target : {300, 600}) {
      // Largest N <= target with N = 9 m + k + 1.
      const std::size_t N = target - ((target - std::size_t(k + 1)) % 9);
      const ModelParams p = fig2_params(N);
      const auto r = reconstruction_errors(p);
      dev[i++] = std::abs(r.values[N - 5] / p.delta - pts[std::size_t(k)]);
    }
    CHECK(dev[1] < dev[0]);
  }
}

TEST_CASE("arcsine law") {
  const double D = 0.37;
  CHECK(arcsine_density(D, 0.0) == doctest::Approx(1.0 / (kPi * D)).epsilon(1e-15));
  CHECK(arcsine_density(D, 0.5) == 0.0);
  CHECK(arcsine_density(D, -D) == 0.0);
  CHECK(arcsine_cdf(D, D) - arcsine_cdf(D, -D) == 1.0);
  CHECK(arcsine_cdf(D, 0.0) == 0.5);
  for (int i = 0; i < 20; ++i) {
    const double z = D * (-0.95 + 1.9 * i / 19.0);
    CHECK(arcsine_density(D, z) == doctest::Approx(arcsine_density(D, -z)).epsilon(1e-14));
    const double q = integrate([D](double x) { return arcsine_density(D, x); }, 0.0, z, 1e-13);
    CHECK(std::abs(arcsine_cdf(D, z) - (0.5 + q)) <= 1e-8);
  }
  double prev = -1.0;
  for (int i = -60; i <= 60; ++i) {
    const double c = arcsine_cdf(D, D * i / 50.0);
    CHECK(c >= prev);
    prev = c;
  }
  CHECK_THROWS_AS(arcsine_cdf(0.0, 0.1), InvalidArgument);
}

TEST_CASE("KS distance examples") {
  const auto uniform = [](double x) { return std::clamp(x, 0.0, 1.0); };
  for (int n : {1, 10, 999}) {
    std::vector<double> s;
    for (int i = 1; i <= n; ++i) s.push_back(double(i) / (n + 1));
    CHECK(ks_distance(s, uniform) <= 2.0 / (n + 1));
  }
  CHECK(ks_distance({0.5}, uniform) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(ks_distance({0.0, 0.0}, uniform) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(ks_distance({}, uniform), InvalidArgument);
}

TEST_CASE("tail samples at an irrational frequency follow the arcsine law") {
  ModelParams p = fig2_params(1000);
  p.omega = std::sqrt(2.0) / 6.0;
  const auto t = tail_coefficients(p, 0);
  std::vector<double> samples;
  for (std::size_t n = 1000; n <= 100000; ++n) samples.push_back(tail_predictor(t, p.xi(), n));
  CHECK(ks_distance(samples, [&](double z) { return arcsine_cdf(t.D, z); }) <= 0.02);
}

TEST_CASE("single-linkage clustering") {
  CHECK(single_linkage_clusters({}, 0.1).empty());
  const auto c = single_linkage_clusters({0.0, 0.05, 0.5, 0.12, 1.0}, 0.1);
  REQUIRE(c.size() == 3);
  CHECK(c[0].size() == 3);
  CHECK(c[1].size() == 1);
  CHECK(c[2].size() == 1);
}
