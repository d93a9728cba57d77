#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "simplexdiff/diagnostics.hpp"
#include "simplexdiff/report_io.hpp"
#include "simplexdiff/rng.hpp"
#include "test_util.hpp"

using namespace simplexdiff;

namespace {

struct ZeroScore : ScoreFunction {
  std::size_t n;
  explicit ZeroScore(std::size_t n_) : n(n_) {}
  std::vector<double> evaluate(double, std::span<const double>) const override {
    return std::vector<double>(n, 0.0);
  }
};

}  // namespace

TEST_CASE("ks_test accepts the true law and rejects a wrong one") {
  RngStream rng(5, 0);
  std::vector<double> u(100000);
  for (double& v : u) v = rng.uniform();

  auto ident = [](double x) { return x; };
  KsReport ok = ks_test(u, ident);
  CHECK(ok.statistic < 0.006);
  CHECK(ok.threshold == doctest::Approx(1.63 / std::sqrt(100000.0)));
  CHECK(ok.pass);

  auto wrong = [](double x) { return x * x; };
  KsReport bad = ks_test(u, wrong);
  CHECK_FALSE(bad.pass);
  CHECK(bad.statistic > 0.2);
}

TEST_CASE("ks_test edge cases: empty and constant samples") {
  std::vector<double> empty;
  auto ident = [](double x) { return x; };
  CHECK_THROWS_AS(ks_test(empty, ident), std::invalid_argument);

  // a point mass at c against a continuous cdf: D = max(F(c), 1 - F(c))
  std::vector<double> c(1000, 0.3);
  KsReport rep = ks_test(c, ident);
  CHECK(rep.statistic == doctest::Approx(0.7).epsilon(1e-2));
}

TEST_CASE("ks statistic is invariant under increasing transformations") {
  RngStream rng(6, 0);
  std::vector<double> x(20000), y(20000);
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = rng.uniform();
    y[i] = x[i] * x[i];  // strictly increasing map on (0, 1)
  }
  auto cdf_x = [](double v) { return v; };
  auto cdf_y = [](double v) { return std::sqrt(v); };
  CHECK(ks_statistic(x, cdf_x) == doctest::Approx(ks_statistic(y, cdf_y))
                                      .epsilon(1e-12));
}

TEST_CASE("elbo gap is exactly zero for the analytic score") {
  SimplexParams sp({1.0, 1.0}, 1.0, 2.0);
  DataSet data({{{1.0, 0.0}}}, {1.0});
  AnalyticMixtureScore score(sp, data);
  RngStream rng(17, 0);
  KlEstimate est = estimate_elbo_gap(sp, data, score, 50, 8, rng);
  CHECK(est.delta_i == 0.0);
  CHECK(est.std_error == 0.0);
  CHECK(est.boundary_kl >= 0.0);
}

TEST_CASE("elbo gap is strictly positive for the zero score") {
  SimplexParams sp({1.0, 1.0}, 1.0, 2.0);
  DataSet data({{{1.0, 0.0}}}, {1.0});
  ZeroScore zero(2);
  RngStream rng(18, 0);
  KlEstimate est = estimate_elbo_gap(sp, data, zero, 200, 8, rng);
  CHECK(est.delta_i > 0.0);
  CHECK(est.delta_i > 3.0 * est.std_error);
}

TEST_CASE("boundary KL decays with the horizon") {
  DataSet data({{{1.0, 0.0}}}, {1.0});
  ZeroScore zero(2);

  SimplexParams sp_short({1.0, 1.0}, 1.0, 2.0);
  RngStream r1(19, 0);
  KlEstimate near = estimate_elbo_gap(sp_short, data, zero, 2, 2, r1);

  SimplexParams sp_long({1.0, 1.0}, 1.0, 20.0);  // bT = 20
  RngStream r2(19, 1);
  KlEstimate far = estimate_elbo_gap(sp_long, data, zero, 2, 2, r2);

  CHECK(far.boundary_kl < 1e-3);
  CHECK(near.boundary_kl > far.boundary_kl);
}

TEST_CASE("boundary KL for a two-point mixture is finite and small at bT=20") {
  SimplexParams sp({1.0, 1.0}, 1.0, 20.0);
  std::vector<std::size_t> idx{0, 1};
  DataSet data = DataSet::one_hot(2, idx);
  ZeroScore zero(2);
  RngStream rng(20, 0);
  KlEstimate est = estimate_elbo_gap(sp, data, zero, 100, 10, rng);
  CHECK(std::isfinite(est.boundary_kl));
  CHECK(est.boundary_kl >= 0.0);
  CHECK(est.boundary_kl < 0.05);
}

TEST_CASE("rank report is a probability vector and validates input") {
  SimplexParams sp({1.0, 1.0, 1.0}, 1.0, 5.0);
  RngStream rng(21, 0);
  RankReport rep = rank_diagnostic(sp, 1, 0.5, 1024, rng);
  double sum = std::accumulate(rep.ranks.begin(), rep.ranks.end(), 0.0);
  CHECK(sum == 1.0);  // counts / 2^10 are exact
  CHECK(rep.q50 >= 1);
  CHECK(rep.q50 <= rep.q90);
  CHECK(rep.q90 <= rep.q99);

  CHECK_THROWS_AS(rank_diagnostic(sp, 3, 0.5, 10, rng), std::invalid_argument);
  CHECK_THROWS_AS(rank_diagnostic(sp, 0, 0.5, 0, rng), std::invalid_argument);
}

TEST_CASE("tiny noise keeps the ground truth at rank 1") {
  SimplexParams sp(std::vector<double>(100, 1.0), 1.0, 5.0);
  RngStream rng(22, 0);
  RankReport rep = rank_diagnostic(sp, 7, 1e-3, 5000, rng);  // bt = 1e-3
  CHECK(rep.ranks[0] > 0.999);
  CHECK(rep.q50 == 1);
}

TEST_CASE("ranks are uniform at stationarity") {
  const std::size_t n = 8;
  SimplexParams sp(std::vector<double>(n, 0.7), 1.0, 25.0);
  RngStream rng(23, 0);
  const int trials = 20000;
  RankReport rep = rank_diagnostic(sp, 2, 20.0, trials, rng);  // bt = 20
  double chi2 = 0.0;
  const double expect = static_cast<double>(trials) / n;
  for (std::size_t i = 0; i < n; ++i) {
    const double obs = rep.ranks[i] * trials;
    chi2 += (obs - expect) * (obs - expect) / expect;
  }
  CHECK(chi2 < testutil::chi2_crit_01(static_cast<double>(n - 1)));
}

TEST_CASE("rank law grows a heavy tail at intermediate noise") {
  // A concentrated data coordinate against diffuse noise coordinates: the
  // exact transition keeps the truth on top most of the time but drops it
  // deep into the bulk when the Poisson mixing index hits zero.
  const std::size_t n = 10000;
  std::vector<double> alpha(n, 0.001);
  alpha[0] = 0.02;
  SimplexParams sp(std::move(alpha), 1.0, 5.0);
  RngStream rng(24, 0);
  RankReport rep = rank_diagnostic(sp, 0, 1.0, 4000, rng);  // bt = 1
  CHECK(rep.q99 > 10 * rep.q50);
}

TEST_CASE("moment suite passes on the default grid") {
  std::vector<MomentGridPoint> grid = default_moment_grid();
  CHECK(grid.size() == 54);
  RngStream rng(25, 0);
  std::vector<MomentCheck> checks = moment_validation_suite(grid, 50000, rng);
  REQUIRE(checks.size() == grid.size());
  for (const MomentCheck& mc : checks) {
    CAPTURE(mc.point.a);
    CAPTURE(mc.point.theta0);
    CAPTURE(mc.point.t);
    CHECK(mc.status == "pass");
  }
}

TEST_CASE("moment suite flags degenerate grid points") {
  std::vector<MomentGridPoint> grid{{1.0, 1.0, 1.0, 1e-13}};
  RngStream rng(26, 0);
  std::vector<MomentCheck> checks = moment_validation_suite(grid, 100, rng);
  CHECK(checks[0].status == "degenerate");

  std::vector<MomentGridPoint> empty;
  CHECK_THROWS_AS(moment_validation_suite(empty, 100, rng),
                  std::invalid_argument);
}

TEST_CASE("theta0 = a is a fixed point of the conditional mean") {
  std::vector<MomentGridPoint> grid{{1.5, 1.0, 1.5, 0.3},
                                    {1.5, 1.0, 1.5, 3.0}};
  RngStream rng(27, 0);
  std::vector<MomentCheck> checks = moment_validation_suite(grid, 50000, rng);
  for (const MomentCheck& mc : checks) {
    CHECK(mc.analytic_mean == doctest::Approx(1.5).epsilon(1e-14));
    CHECK(mc.status == "pass");
  }
}

TEST_CASE("reports round-trip through JSON losslessly") {
  RngStream rng(28, 0);
  std::vector<double> u(2000);
  for (double& v : u) v = rng.uniform();
  KsReport ks = ks_test(u, [](double x) { return x; });

  nlohmann::json j1 = ks;
  KsReport ks2 = nlohmann::json::parse(j1.dump()).get<KsReport>();
  CHECK(ks2.statistic == ks.statistic);
  CHECK(ks2.n_samples == ks.n_samples);
  CHECK(ks2.threshold == ks.threshold);
  CHECK(ks2.pass == ks.pass);

  KlEstimate kl{0.12345678901234567, 1e-9, 0.25};
  KlEstimate kl2 = nlohmann::json::parse(nlohmann::json(kl).dump())
                       .get<KlEstimate>();
  CHECK(kl2.delta_i == kl.delta_i);
  CHECK(kl2.boundary_kl == kl.boundary_kl);
  CHECK(kl2.std_error == kl.std_error);

  SimplexParams sp({1.0, 1.0, 1.0}, 1.0, 5.0);
  RankReport rr = rank_diagnostic(sp, 0, 0.7, 500, rng);
  RankReport rr2 = nlohmann::json::parse(nlohmann::json(rr).dump())
                       .get<RankReport>();
  CHECK(rr2.n == rr.n);
  CHECK(rr2.t == rr.t);
  CHECK(rr2.n_trials == rr.n_trials);
  CHECK(rr2.ranks == rr.ranks);
  CHECK(rr2.q50 == rr.q50);
  CHECK(rr2.q90 == rr.q90);
  CHECK(rr2.q99 == rr.q99);

  std::vector<MomentGridPoint> grid{{0.5, 1.0, 2.0, 0.1}};
  std::vector<MomentCheck> checks = moment_validation_suite(grid, 2000, rng);
  MomentCheck mc2 = nlohmann::json::parse(nlohmann::json(checks[0]).dump())
                        .get<MomentCheck>();
  CHECK(mc2.point.a == checks[0].point.a);
  CHECK(mc2.point.theta0 == checks[0].point.theta0);
  CHECK(mc2.analytic_mean == checks[0].analytic_mean);
  CHECK(mc2.analytic_var == checks[0].analytic_var);
  CHECK(mc2.mc_mean == checks[0].mc_mean);
  CHECK(mc2.mc_var == checks[0].mc_var);
  CHECK(mc2.z_mean == checks[0].z_mean);
  CHECK(mc2.z_var == checks[0].z_var);
  CHECK(mc2.status == checks[0].status);
}
