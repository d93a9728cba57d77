#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "simplexdiff/diagnostics.hpp"
#include "simplexdiff/quadrature.hpp"
#include "simplexdiff/rng.hpp"
#include "simplexdiff/samplers.hpp"
#include "simplexdiff/simplex.hpp"
#include "test_util.hpp"

using namespace simplexdiff;

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(SimplexParams({1.0}, 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(SimplexParams({1.0, 0.0}, 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(SimplexParams({1.0, 1.0}, 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(SimplexParams({1.0, 1.0}, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("uniform Dirichlet density is ln Gamma(n)") {
  const SimplexParams sp({1.0, 1.0, 1.0}, 1.0, 1.0);
  for (auto x : {std::vector<double>{0.2, 0.3, 0.5},
                 std::vector<double>{0.6, 0.3, 0.1}}) {
    CHECK(dirichlet_log_density(sp, x) ==
          doctest::Approx(std::log(2.0)).epsilon(1e-13));
  }
}

TEST_CASE("Beta(2,2) value at the midpoint") {
  const SimplexParams sp({2.0, 2.0}, 1.0, 1.0);
  std::vector<double> x{0.5, 0.5};
  CHECK(dirichlet_log_density(sp, x) ==
        doctest::Approx(std::log(1.5)).epsilon(1e-13));
}

TEST_CASE("n = 2 density integrates to 1 over the simplex") {
  const SimplexParams sp({0.5, 1.5}, 1.0, 1.0);
  auto log_pdf = [&](double x1) {
    std::vector<double> x{x1, 1.0 - x1};
    return dirichlet_log_density(sp, x);
  };
  // integrable singularity at x1 = 0 (alpha_1 = 0.5)
  const double integral = integrate_density(log_pdf, 0.0, 0.5, 1e-9) +
                          adaptive_simpson(
                              [&](double x) { return std::exp(log_pdf(x)); },
                              0.5, 1.0 - 1e-13, 1e-9);
  CHECK(integral == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("density rejects boundary and off-simplex input") {
  const SimplexParams sp({1.0, 2.0}, 1.0, 1.0);
  std::vector<double> boundary{0.0, 1.0};
  CHECK_THROWS_AS(dirichlet_log_density(sp, boundary), std::domain_error);
  std::vector<double> off{0.4, 0.4};
  CHECK_THROWS_AS(dirichlet_log_density(sp, off), std::domain_error);
}

TEST_CASE("density is permutation invariant with alpha permuted") {
  const SimplexParams sp({0.5, 1.0, 2.0}, 1.0, 1.0);
  const SimplexParams sp_perm({2.0, 0.5, 1.0}, 1.0, 1.0);
  std::vector<double> x{0.2, 0.3, 0.5};
  std::vector<double> x_perm{0.5, 0.2, 0.3};
  CHECK(dirichlet_log_density(sp, x) ==
        dirichlet_log_density(sp_perm, x_perm));
}

TEST_CASE("Dirichlet draws: symmetry, mean identity, Beta marginals") {
  const SimplexParams sp3({1.0, 1.0, 1.0}, 1.0, 1.0);
  RngStream rng(41, 0);
  const int n = 100000;
  std::vector<double> m(3, 0.0);
  for (int i = 0; i < n; ++i) {
    const auto x = sample_dirichlet(sp3, rng);
    for (int j = 0; j < 3; ++j) m[j] += x[j];
    double sum = x[0] + x[1] + x[2];
    REQUIRE(std::abs(sum - 1.0) < 1e-12);
  }
  for (int j = 0; j < 3; ++j) {
    CHECK(std::abs(m[j] / n - 1.0 / 3.0) < 0.005);
  }

  const SimplexParams sp4({1.0, 2.0, 3.0, 4.0}, 1.0, 1.0);
  std::vector<double> m4(4, 0.0);
  for (int i = 0; i < n; ++i) {
    const auto x = sample_dirichlet(sp4, rng);
    for (int j = 0; j < 4; ++j) m4[j] += x[j];
  }
  const double want[4] = {0.1, 0.2, 0.3, 0.4};
  for (int j = 0; j < 4; ++j) {
    CHECK(std::abs(m4[j] / n - want[j]) < 0.005);
  }

  // per-coordinate marginals are Beta(alpha_i, sum - alpha_i)
  const SimplexParams spm({0.5, 1.0, 2.0}, 1.0, 1.0);
  const double asum = 3.5;
  std::vector<std::vector<double>> marg(3, std::vector<double>(n));
  for (int i = 0; i < n; ++i) {
    const auto x = sample_dirichlet(spm, rng);
    for (int j = 0; j < 3; ++j) marg[j][i] = x[j];
  }
  for (int j = 0; j < 3; ++j) {
    const double p = spm.alpha[j], q = asum - spm.alpha[j];
    auto log_pdf = [&](double v) { return testutil::beta_log_pdf(v, p, q); };
    CHECK(ks_test_log_density(marg[j], log_pdf, 0.0).statistic < 0.006);
  }
}

TEST_CASE("projection basics") {
  std::vector<double> y{2.0, 2.0};
  const auto x = project_to_simplex(y);
  CHECK(x[0] == 0.5);
  CHECK(x[1] == 0.5);

  std::vector<double> on{0.25, 0.75};
  const auto same = project_to_simplex(on);
  CHECK(same[0] == doctest::Approx(0.25).epsilon(1e-15));

  std::vector<double> v{0.1, 0.4, 2.0};
  std::vector<double> scaled{0.73, 2.92, 14.6};  // 7.3 * v
  const auto p1 = project_to_simplex(v);
  const auto p2 = project_to_simplex(scaled);
  for (int i = 0; i < 3; ++i) {
    CHECK(p1[i] == doctest::Approx(p2[i]).epsilon(1e-14));
  }

  std::vector<double> zeros{0.0, 0.0};
  CHECK_THROWS_AS(project_to_simplex(zeros), std::domain_error);
  std::vector<double> neg{-0.1, 0.4};
  CHECK_THROWS_AS(project_to_simplex(neg), std::domain_error);
}

TEST_CASE("forward noising converges to the Dirichlet law") {
  const SimplexParams sp({1.0, 1.0, 1.0}, 1.0, 20.0);
  RngStream rng(42, 0);
  std::vector<double> y0{1.0, 0.0, 0.0};
  const int n = 100000;
  std::vector<std::vector<double>> marg(3, std::vector<double>(n));
  for (int i = 0; i < n; ++i) {
    const auto x = project_to_simplex(forward_noise(sp, y0, 20.0, rng));
    for (int j = 0; j < 3; ++j) marg[j][i] = x[j];
  }
  for (int j = 0; j < 3; ++j) {
    auto log_pdf = [](double v) { return testutil::beta_log_pdf(v, 1.0, 2.0); };
    CHECK(ks_test_log_density(marg[j], log_pdf, 0.0).statistic < 0.006);
  }
}

TEST_CASE("small-time forward noise stays near the start") {
  const SimplexParams sp({1.0, 1.0, 1.0}, 1.0, 1.0);
  RngStream rng(43, 0);
  std::vector<double> y0{1.0, 0.0, 0.0};
  const double t = 1e-4;
  const int n = 20000;
  std::vector<double> dev(3, 0.0);
  for (int i = 0; i < n; ++i) {
    const auto y = forward_noise(sp, y0, t, rng);
    for (int j = 0; j < 3; ++j) dev[j] += std::abs(y[j] - y0[j]);
  }
  for (int j = 0; j < 3; ++j) {
    CHECK(dev[j] / n < 0.02);
  }
}

TEST_CASE("per-coordinate law matches the 1-D sampler under matched streams") {
  const SimplexParams sp({1.3, 0.8}, 1.0, 1.0);
  std::vector<double> y0{0.4, 1.1};
  const double t = 0.6;
  RngStream rng(44, 0);
  RngStream mirror(44, 0);
  for (int rep = 0; rep < 100; ++rep) {
    const auto y = forward_noise(sp, y0, t, rng);
    RngStream base = mirror.split();
    for (std::size_t i = 0; i < 2; ++i) {
      RngStream sub = base.substream(i);
      CHECK(y[i] == sample_transition_exact(sp.coord(i),
                                            TransitionQuery(y0[i], t), sub));
    }
  }
}

TEST_CASE("coordinates are uncorrelated before projection") {
  const SimplexParams sp({1.0, 2.0}, 1.0, 1.0);
  std::vector<double> y0{0.5, 0.5};
  RngStream rng(45, 0);
  const int n = 100000;
  std::vector<double> a(n), b(n);
  for (int i = 0; i < n; ++i) {
    const auto y = forward_noise(sp, y0, 0.7, rng);
    a[i] = y[0];
    b[i] = y[1];
  }
  const double ma = testutil::mean(a), mb = testutil::mean(b);
  double cov = 0.0;
  for (int i = 0; i < n; ++i) cov += (a[i] - ma) * (b[i] - mb);
  const double corr =
      cov / (n * std::sqrt(testutil::variance(a) * testutil::variance(b)));
  CHECK(std::abs(corr) < 4.0 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("stationarity: Gamma start stays Gamma at any t") {
  const SimplexParams sp({0.7, 1.5}, 1.0, 1.0);
  RngStream rng(46, 0);
  const int n = 100000;
  std::vector<std::vector<double>> marg(2, std::vector<double>(n));
  for (int i = 0; i < n; ++i) {
    std::vector<double> y0(2);
    for (int j = 0; j < 2; ++j) y0[j] = sample_gamma(sp.alpha[j], 1.0, rng);
    const auto y = forward_noise(sp, y0, 0.9, rng);
    for (int j = 0; j < 2; ++j) marg[j][i] = y[j];
  }
  for (int j = 0; j < 2; ++j) {
    const double aj = sp.alpha[j];
    auto log_pdf = [aj](double v) {
      return testutil::gamma_log_pdf(v, aj, 1.0);
    };
    CHECK(ks_test_log_density(marg[j], log_pdf, 0.0).statistic < 0.006);
  }
}

TEST_CASE("forward trajectory: stationary terminal marginals at bt = 20") {
  const SimplexParams sp({2.0, 1.0}, 1.0, 20.0);
  RngStream rng(47, 0);
  std::vector<double> y0{1.0, 1.0};
  std::vector<double> grid{0.0, 5.0, 20.0};
  const int n = 100000;
  std::vector<std::vector<double>> marg(2, std::vector<double>(n));
  for (int i = 0; i < n; ++i) {
    const Trajectory tr =
        simulate_forward_trajectory(sp, y0, grid, Scheme{}, rng);
    for (int j = 0; j < 2; ++j) marg[j][i] = tr.states.back()[j];
  }
  for (int j = 0; j < 2; ++j) {
    const double aj = sp.alpha[j];
    auto log_pdf = [aj](double v) {
      return testutil::gamma_log_pdf(v, aj, 1.0);
    };
    CHECK(ks_test_log_density(marg[j], log_pdf, 0.0).statistic < 0.006);
  }
}

TEST_CASE("trajectory coordinate restriction matches 1-D simulate_path") {
  const SimplexParams sp({2.0, 0.6}, 1.0, 2.0);
  std::vector<double> y0{1.0, 0.3};
  std::vector<double> grid{0.0, 0.5, 1.0, 2.0};
  RngStream rng(48, 0), mirror(48, 0);
  const Trajectory tr = simulate_forward_trajectory(sp, y0, grid, Scheme{},
                                                    rng);
  RngStream base = mirror.split();
  for (std::size_t j = 0; j < 2; ++j) {
    RngStream sub = base.substream(j);
    const Trajectory1d path =
        simulate_path(sp.coord(j), y0[j], grid, Scheme{}, sub);
    for (std::size_t k = 0; k < grid.size(); ++k) {
      CHECK(tr.states[k][j] == path.values[k]);
    }
  }
}

TEST_CASE("Exact and Euler terminal means agree") {
  const SimplexParams sp({2.0, 2.0}, 1.0, 2.0);
  std::vector<double> y0{1.0, 1.0};
  RngStream r1(49, 0), r2(50, 0);
  const int n = 200000;
  const int m = 200;  // step 0.01
  std::vector<double> grid(m + 1);
  for (int i = 0; i <= m; ++i) grid[i] = 2.0 * i / m;
  grid[0] = 0.0;
  Scheme euler{SchemeKind::EulerFullTruncation, 0.01, 1e-6};
  double mean_exact = 0.0, mean_euler = 0.0;
  for (int i = 0; i < n; ++i) {
    mean_exact += forward_noise(sp, y0, 2.0, r1)[0];
    mean_euler +=
        simulate_forward_trajectory(sp, y0, grid, euler, r2).states.back()[0];
  }
  mean_exact /= n;
  mean_euler /= n;
  CHECK(std::abs(mean_euler - mean_exact) / mean_exact < 0.02);
}
