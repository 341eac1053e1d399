#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "lgfrac/error.hpp"
#include "lgfrac/output.hpp"
#include "lgfrac/stochastic.hpp"

using namespace lgfrac;

namespace {

const WeibullParams glass_strength{4.64, 48.47e6};

std::vector<double> draw(const WeibullParams& p, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<double> v(n);
  for (auto& x : v) x = weibull_sample(p, rng);
  return v;
}

EnsembleSetup cheap_setup(unsigned workers) {
  EnsembleSetup s;
  s.discretization.element_length = 10e-3;
  s.discretization.thickness_points = 10;
  s.settings.temperature = 23.0;
  s.workers = workers;
  return s;
}

}  // namespace

TEST_CASE("Weibull quantiles at the glass parameters") {
  CHECK(weibull_quantile(glass_strength, 0.05) == doctest::Approx(25.6e6).epsilon(0.1 / 25.6));
  CHECK(weibull_quantile(glass_strength, 0.95) == doctest::Approx(61.4e6).epsilon(0.1 / 61.4));
  const double tiny = weibull_quantile(glass_strength, 1e-300);
  CHECK(tiny > 0.0);
  CHECK(tiny < 1e-50);
  CHECK_THROWS_AS(weibull_quantile(glass_strength, 0.0), Error);
  CHECK_THROWS_AS(weibull_quantile(glass_strength, 1.0), Error);
  CHECK_THROWS_AS(weibull_quantile(WeibullParams{-1.0, 1.0}, 0.5), Error);
}

TEST_CASE("CDF inverts the quantile") {
  double worst = 0.0;
  for (int i = 1; i <= 99; ++i) {
    const double p = i / 100.0;
    worst = std::max(worst, std::abs(weibull_cdf(glass_strength, weibull_quantile(glass_strength, p)) - p));
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("sampling") {
  CHECK(weibull_from_uniform(glass_strength, 1.0 - std::exp(-1.0)) ==
        doctest::Approx(glass_strength.scale).epsilon(1e-15));
  std::mt19937_64 a(1), b(1);
  const double a1 = weibull_sample(glass_strength, a), a2 = weibull_sample(glass_strength, a);
  CHECK(a1 != a2);
  CHECK(weibull_sample(glass_strength, b) == a1);
  CHECK(weibull_sample(glass_strength, b) == a2);

  const auto v = draw(glass_strength, 100000, 42);
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  const double expected = glass_strength.scale * std::tgamma(1.0 + 1.0 / glass_strength.shape);
  CHECK(expected == doctest::Approx(44.3e6).epsilon(0.002));
  CHECK(weibull_mean(glass_strength) == doctest::Approx(expected).epsilon(1e-14));
  CHECK(mean == doctest::Approx(expected).epsilon(0.01));
}

TEST_CASE("per-layer streams depend only on their key") {
  auto s1 = strength_stream(7, 3, 1);
  auto s2 = strength_stream(7, 3, 1);
  auto s3 = strength_stream(7, 3, 2);
  auto s4 = strength_stream(7, 4, 1);
  const auto x1 = s1();
  CHECK(x1 == s2());
  CHECK(x1 != s3());
  CHECK(x1 != s4());
  McConfig cfg;
  const auto first = sample_strengths(cfg, 17, 3);
  (void)sample_strengths(cfg, 3, 3);
  CHECK(sample_strengths(cfg, 17, 3) == first);
  CHECK(first.size() == 3);
}

TEST_CASE("maximum-likelihood fit") {
  const auto v = draw(glass_strength, 10000, 2024);
  const auto fit = weibull_fit_mle(v);
  CHECK(fit.shape == doctest::Approx(4.64).epsilon(0.15 / 4.64));
  CHECK(fit.scale == doctest::Approx(48.47e6).epsilon(0.5 / 48.47));

  std::vector<double> scaled(v);
  for (auto& x : scaled) x *= 3.5;
  const auto fs = weibull_fit_mle(scaled);
  CHECK(fs.shape == doctest::Approx(fit.shape).epsilon(1e-9));
  CHECK(fs.scale == doctest::Approx(3.5 * fit.scale).epsilon(1e-9));

  // stationarity of the profile likelihood in k at the fitted values
  double s0 = 0, s1 = 0, sl = 0;
  for (double x : v) {
    const double xk = std::pow(x / fit.scale, fit.shape);
    s0 += xk;
    s1 += xk * std::log(x);
    sl += std::log(x);
  }
  const double n = static_cast<double>(v.size());
  CHECK(s1 / s0 - 1.0 / fit.shape - sl / n == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(s0 / n == doctest::Approx(1.0).epsilon(1e-9));

  CHECK_THROWS_AS(weibull_fit_mle(std::vector<double>{5.0, 5.0}), Error);
  CHECK_THROWS_AS(weibull_fit_mle(std::vector<double>{5.0, 5.0, 5.0}), Error);
  CHECK_THROWS_AS(weibull_fit_mle(std::vector<double>{1.0, -2.0, 3.0}), Error);
}

TEST_CASE("Hazen quantiles") {
  const std::vector<double> s{1.0, 2.0, 3.0, 4.0};
  CHECK(hazen_quantile(s, 0.5) == 2.5);
  CHECK(hazen_quantile(s, 0.05) == 1.0);
  CHECK(hazen_quantile(s, 0.95) == 4.0);
  CHECK(hazen_quantile(s, 0.3) == doctest::Approx(1.7));
  CHECK(hazen_quantile(std::vector<double>{7.0}, 0.05) == 7.0);
  CHECK_THROWS_AS(hazen_quantile(std::vector<double>{}, 0.5), Error);
}

TEST_CASE("failure classes") {
  FailureSummary ev;
  const std::vector<int> none{0, 0, 0}, frag{0, 0, 4};
  CHECK(classify_failure(ev, none, 3) == FailureClass::none);
  ev.groups = {{10, 1e-3, {1, 3, 5}}};
  CHECK(classify_failure(ev, frag, 3) == FailureClass::brittle_simultaneous);
  ev.groups = {{10, 1e-3, {5}}, {12, 2e-3, {1, 3}}};
  CHECK(classify_failure(ev, none, 3) == FailureClass::progressive);
  CHECK(classify_failure(ev, frag, 3) == FailureClass::progressive_with_fragmentation);
  CHECK(to_string(FailureClass::progressive_with_fragmentation) == "progressive-with-fragmentation");
}

TEST_CASE("histogram bins") {
  const auto v = draw(glass_strength, 200, 9);
  const auto h = make_histogram(v);
  CHECK(h.counts.size() == 15);
  CHECK(std::accumulate(h.counts.begin(), h.counts.end(), std::size_t{0}) == 200);
  CHECK(h.edges.front() == *std::min_element(v.begin(), v.end()));
  CHECK(make_histogram(std::vector<double>{1.0, 1.0}).counts.size() == 5);
}

TEST_CASE("ensemble summary of a single realization") {
  McConfig cfg;
  cfg.count = 1;
  cfg.setup = cheap_setup(1);
  const auto r = run_monte_carlo(presets::five_layer(), cfg);
  const auto& s = r.summary;
  REQUIRE(s.count == 1);
  CHECK(s.failed == 0);
  for (std::size_t i = 0; i < s.grid.size(); ++i) {
    if (s.defined[i] == 0) continue;
    CHECK(s.p05[i] == s.p50[i]);
    CHECK(s.p95[i] == s.p50[i]);
    CHECK(s.p50[i] == *reaction_at(r.realizations[0].history, s.grid[i]));
  }
  REQUIRE(s.sequences.size() == 1);
  CHECK(s.sequences[0].frequency == 1.0);
}

TEST_CASE("ensembles are independent of the worker count") {
  McConfig cfg;
  cfg.count = 4;
  cfg.master_seed = 99;
  cfg.setup = cheap_setup(1);
  const auto a = run_monte_carlo(presets::five_layer(), cfg);
  cfg.setup.workers = 3;
  const auto b = run_monte_carlo(presets::five_layer(), cfg);
  CHECK(summary_json(a.summary) == summary_json(b.summary));
  CHECK(realizations_csv(a.realizations, a.summary.glass_labels) ==
        realizations_csv(b.realizations, b.summary.glass_labels));
  for (std::size_t i = 0; i < a.realizations.size(); ++i)
    CHECK(history_csv(a.realizations[i].history) == history_csv(b.realizations[i].history));

  // summary invariants
  const auto& s = a.summary;
  for (std::size_t i = 0; i < s.grid.size(); ++i)
    if (s.defined[i] > 0) {
      CHECK(s.p05[i] <= s.p50[i]);
      CHECK(s.p50[i] <= s.p95[i]);
    }
  double total = 0.0;
  for (const auto& q : s.sequences) total += q.frequency;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
  for (const auto& r : a.realizations)
    if (r.events.all_failed()) CHECK(*r.events.initial_displacement <= *r.events.final_displacement);
}

TEST_CASE("zero-variance strengths give a single sequence") {
  McConfig cfg;
  cfg.count = 3;
  cfg.strength = {1e12, 45e6};
  cfg.setup = cheap_setup(1);
  const auto r = run_monte_carlo(presets::five_layer(), cfg);
  REQUIRE(r.summary.sequences.size() == 1);
  CHECK(r.summary.sequences[0].count == 3);
  CHECK(r.summary.sequences[0].frequency == 1.0);
  for (const auto& x : r.realizations)
    CHECK(x.events.initial_displacement == r.realizations[0].events.initial_displacement);
}
