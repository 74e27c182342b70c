#include "doctest.h"

#include <cmath>
#include <numbers>
#include <vector>

#include "nlsgibbs/error.hpp"
#include "nlsgibbs/stats.hpp"
#include "nlsgibbs/torus_field.hpp"

using namespace nlsgibbs;
using std::numbers::pi;

namespace {

Field random_field(const TorusGrid& g, std::uint64_t seed) {
  RandomStream rng(seed);
  std::vector<cplx> v(g.size());
  for (auto& z : v) z = {rng.normal(), rng.normal()};
  return Field::from_values(g, std::move(v));
}

// sum_{|k|<n/2} (alpha + (2 pi k/L)^2)^e, written out independently of the library.
double mode_sum(double alpha, double L, std::size_t n, double e) {
  double s = 0.0;
  const int half = static_cast<int>(n / 2);
  for (int k = -half + 1; k < half; ++k) {
    const double q = 2.0 * pi * k / L;
    s += std::pow(alpha + q * q, e);
  }
  return s;
}

// (1/pi) int_0^X cos(xi z)/(alpha + xi^2) d xi by composite Simpson.
double continuum_green(double alpha, double z) {
  const double X = 4000.0;
  const std::size_t m = 800000;
  const double h = X / static_cast<double>(m);
  double s = 0.0;
  for (std::size_t i = 0; i <= m; ++i) {
    const double xi = h * static_cast<double>(i);
    const double f = std::cos(xi * z) / (alpha + xi * xi);
    s += (i == 0 || i == m ? 1.0 : (i % 2 ? 4.0 : 2.0)) * f;
  }
  return s * h / 3.0 / pi;
}

}  // namespace

TEST_CASE("grid invariants") {
  CHECK_THROWS_AS(TorusGrid(8.0, 4), InvalidArgument);
  CHECK_THROWS_AS(TorusGrid(8.0, 12), InvalidArgument);
  CHECK_THROWS_AS(TorusGrid(-1.0, 16), InvalidArgument);
  for (double L : {1.0, 8.0, 32.0, 100.0 / 3.0}) {
    const TorusGrid g(L, 256);
    CHECK(std::abs(g.dx() * 256 - L) <= 2.0 * std::numeric_limits<double>::epsilon() * L);
    CHECK(g.x(0) == doctest::Approx(-L / 2));
  }
  const TorusGrid g(8.0, 16);
  for (int k = -8; k < 8; ++k) CHECK(g.mode(g.slot(k)) == k);
}

TEST_CASE("spectral weights") {
  const TorusGrid g(32.0, 512);
  for (double alpha : {0.5, 1.0, 4.0}) {
    const SpectralWeights w(g, alpha);
    CHECK(w.sigma[0] == doctest::Approx(1.0 / std::sqrt(alpha)).epsilon(1e-15));
    for (int k = 1; k < 256; ++k) {
      CHECK(w.sigma[g.slot(k)] == w.sigma[g.slot(-k)]);
      CHECK(w.sigma[g.slot(k)] <= w.sigma[g.slot(k - 1)]);
    }
    CHECK(w.sigma[256] == 0.0);  // Nyquist is not sampled
    CHECK(w.total_variance() == doctest::Approx(mode_sum(alpha, 32.0, 512, -1.0)).epsilon(1e-13));
  }
  CHECK_THROWS_AS(SpectralWeights(g, 0.0), InvalidArgument);
}

TEST_CASE("Parseval and round trip") {
  for (std::size_t n : {8u, 64u, 1024u}) {
    const TorusGrid g(13.0, n);
    const Field f = random_field(g, n);
    double spec = 0.0;
    for (auto c : f.spectrum()) spec += std::norm(c);
    CHECK(std::abs(mass(f) - spec) <= 1e-10 * spec);
    const auto back = values_from_spectrum(g, f.spectrum());
    double err = 0.0, ref = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      err = std::max(err, std::abs(back[j] - f.values()[j]));
      ref = std::max(ref, std::abs(f.values()[j]));
    }
    CHECK(err <= 1e-12 * ref);
  }
}

TEST_CASE("mass of simple fields") {
  const TorusGrid g(8.0, 64);
  CHECK(mass(Field::zero(g)) == 0.0);
  CHECK(mass(Field::from_values(g, std::vector<cplx>(64, 1.0))) == doctest::Approx(8.0).epsilon(1e-14));
  std::vector<cplx> e(64);
  for (std::size_t j = 0; j < 64; ++j) e[j] = std::polar(1.0, 2.0 * pi * g.x(j) / 8.0);
  CHECK(mass(Field::from_values(g, e)) == doctest::Approx(8.0).epsilon(1e-14));
  const auto f = Field::from_values(g, e);
  CHECK(std::abs(f.coefficient(1)) == doctest::Approx(std::sqrt(8.0)).epsilon(1e-13));
}

TEST_CASE("lp integrals and windows") {
  const TorusGrid g(8.0, 64);
  CHECK(lp_integral(Field::zero(g), 3.0) == 0.0);
  const auto one = Field::from_values(g, std::vector<cplx>(64, 1.0));
  CHECK(lp_integral(one, 4.0) == doctest::Approx(8.0).epsilon(1e-14));
  CHECK(lp_integral(one, 2.0, Window::centered(1.0)) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK_THROWS_AS(lp_integral(one, 0.5), InvalidArgument);

  const TorusGrid big(64.0, 1024);
  RandomStream rng(5);
  const double theta = 0.7;
  const auto w = Window::centered(0.5 * std::pow(64.0, theta));
  for (int i = 0; i < 5; ++i) {
    const Field phi = sample_gff(big, 1.0, rng);
    for (double p : {1.0, 2.0, 4.0}) {
      const double whole = lp_integral(phi, p);
      const double inside = lp_integral(phi, p, w);
      const double outside = lp_integral(phi, p, w.complemented());
      CHECK(std::abs(whole - inside - outside) <= 1e-12 * whole);
    }
  }
  CHECK(window_length(big, w) + window_length(big, w.complemented()) == doctest::Approx(64.0));
}

TEST_CASE("GFF mean mass matches the truncated sum") {
  const TorusGrid g(32.0, 512);
  RandomStream rng(2024);
  std::vector<double> m(2000);
  for (auto& x : m) x = mass(sample_gff(g, 1.0, rng));
  const auto est = stats::iid_estimate(m);
  const double exact = mode_sum(1.0, 32.0, 512, -1.0);
  CHECK(std::abs(est.mean - exact) <= 3.0 * est.std_error);
}

TEST_CASE("GFF low-mode variances, covariance and translation invariance") {
  const TorusGrid g(32.0, 256);
  const double alpha = 1.0;
  RandomStream rng(77);
  const std::size_t count = 10000;
  std::vector<std::vector<double>> modes(8, std::vector<double>(count));
  const std::size_t lags[] = {0, 1, 64};  // z = 0, dx, L/4
  std::vector<std::vector<double>> cov(3, std::vector<double>(count));
  std::vector<double> pointwise(g.size(), 0.0), pointwise2(g.size(), 0.0);
  for (std::size_t s = 0; s < count; ++s) {
    const Field phi = sample_gff(g, alpha, rng);
    for (int k = 0; k < 8; ++k) modes[k][s] = std::norm(phi.coefficient(k));
    const auto v = phi.values();
    for (std::size_t l = 0; l < 3; ++l) {
      double acc = 0.0;
      for (std::size_t j = 0; j < g.size(); ++j) acc += (v[(j + lags[l]) % g.size()] * std::conj(v[j])).real();
      cov[l][s] = acc / static_cast<double>(g.size());
    }
    for (std::size_t j = 0; j < g.size(); ++j) {
      const double a = std::norm(v[j]);
      pointwise[j] += a;
      pointwise2[j] += a * a;
    }
  }
  for (int k = 0; k < 8; ++k) {
    const double q = 2.0 * pi * k / 32.0;
    const auto est = stats::iid_estimate(modes[k]);
    CAPTURE(k);
    CHECK(std::abs(est.mean - 1.0 / (alpha + q * q)) <= 5.0 * est.std_error);
  }
  for (std::size_t l = 0; l < 3; ++l) {
    const auto est = stats::iid_estimate(cov[l]);
    const double z = static_cast<double>(lags[l]) * g.dx();
    CAPTURE(z);
    CHECK(std::abs(est.mean - covariance_function(alpha, 32.0, 256, z)) <= 5.0 * est.std_error);
  }
  const double k0 = covariance_function(alpha, 32.0, 256, 0.0);
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double mean = pointwise[j] / count;
    const double se = std::sqrt((pointwise2[j] / count - mean * mean) / count);
    CHECK(std::abs(mean - k0) <= 5.0 * se);
  }
}

TEST_CASE("GFF sampling is deterministic and degenerates as alpha grows") {
  const TorusGrid g(16.0, 128);
  RandomStream a(9), b(9);
  const auto fa = sample_gff(g, 1.0, a);
  const auto fb = sample_gff(g, 1.0, b);
  for (std::size_t j = 0; j < g.size(); ++j) CHECK(fa.values()[j] == fb.values()[j]);
  RandomStream c(10);
  CHECK(mass(sample_gff(g, 1e12, c)) < 1e-8);
  CHECK_THROWS_AS(sample_gff(g, -1.0, c), InvalidArgument);
}

TEST_CASE("Sobolev norms") {
  const TorusGrid g(32.0, 256);
  CHECK(sobolev_norm(Field::zero(g), 1.0, 1.0) == 0.0);
  RandomStream rng(31);
  const Field f = sample_gff(g, 1.0, rng);
  CHECK(sobolev_norm(f, 1.0, 0.0) == doctest::Approx(std::sqrt(mass(f))).epsilon(1e-12));
  CHECK_THROWS_AS(sobolev_norm(f, 1.0, 2.5), InvalidArgument);
  for (double s : {-1.0, 0.25, 0.5}) {
    std::vector<double> x(4000);
    for (auto& v : x) {
      const double n = sobolev_norm(sample_gff(g, 1.0, rng), 1.0, s);
      v = n * n;
    }
    const auto est = stats::iid_estimate(x);
    CAPTURE(s);
    CHECK(std::abs(est.mean - mode_sum(1.0, 32.0, 256, s - 1.0)) <= 3.0 * est.std_error);
  }
}

TEST_CASE("covariance function") {
  CHECK(covariance_function(1.0, 64.0, 4096, 0.0) == doctest::Approx(0.5).epsilon(2e-2));
  const double green1 = continuum_green(1.0, 1.0);
  CHECK(green1 == doctest::Approx(std::exp(-1.0) / 2.0).epsilon(1e-3));
  CHECK(std::abs(covariance_function(1.0, 64.0, 4096, 1.0) - green1) <= 2e-2);
  for (double z : {0.3, 1.7, 9.0}) {
    CHECK(covariance_function(2.0, 32.0, 512, z) == covariance_function(2.0, 32.0, 512, -z));
  }
}

TEST_CASE("mass tail samples") {
  const TorusGrid g(64.0, 1024);
  RandomStream rng(3);
  const auto d = mass_tail_samples(g, 1.0, Window::centered(8.0), 2000, rng);
  CHECK(d.size() == 2000);
  double prev = 1.0;
  for (double m : {0.5, 1.0, 2.0, 4.0, 8.0}) {
    double frac = 0.0;
    for (double x : d) frac += x > m;
    frac /= static_cast<double>(d.size());
    CHECK(frac <= prev);
    prev = frac;
  }
  const auto zero = mass_tail_samples(g, 1.0, Window::centered(0.0), 100, rng);
  for (double x : zero) CHECK(x == 0.0);
  CHECK_THROWS_AS(mass_tail_samples(g, 1.0, Window::centered(8.0), 50, rng), InvalidArgument);
}
