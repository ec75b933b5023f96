#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>
#include <thread>

#include "entpert/twobody.hpp"

using namespace entpert;

namespace {

// (1/4) sqrt(1/(2 pi)), the delta-interaction prefactor at omega = 1.
const double kPrefactor = 0.25 / std::sqrt(2.0 * std::numbers::pi);

Eigen::VectorXd linspace(double a, double b, int n) {
  return Eigen::VectorXd::LinSpaced(n, a, b);
}

InteractionSpec gaussian_table(double amplitude, double width, double u_max, int n) {
  const Eigen::VectorXd u = linspace(-u_max, u_max, n);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = amplitude * std::exp(-u[i] * u[i] / (2 * width * width));
  // Symmetrize exactly so the evenness check is about the physics, not fp dust.
  for (int i = 0; i < n / 2; ++i) v[n - 1 - i] = v[i];
  return InteractionSpec::tabulated(u, v);
}

}  // namespace

TEST_CASE("delta integral (0,1,0,1) matches the closed-form gaussian integral") {
  const HarmonicBasis basis(1.0);
  const TwoBodyEngine engine(basis, InteractionSpec::delta());
  // (1/2) * integral(phi0^2 phi1^2) = (1/2) * (1/2) sqrt(1/(2 pi))
  CHECK(engine.spatial_integral(0, 1, 0, 1) == doctest::Approx(kPrefactor).epsilon(1e-12));
}

TEST_CASE("delta integrals converge under quadrature doubling") {
  const HarmonicBasis coarse(1.0, 16, 400);
  const HarmonicBasis fine(1.0, 16, 800);
  const TwoBodyEngine e1(coarse, InteractionSpec::delta());
  const TwoBodyEngine e2(fine, InteractionSpec::delta());
  for (auto [a, b, c, d] : {std::array{0, 1, 0, 1}, std::array{4, 6, 2, 0},
                            std::array{12, 12, 12, 12}, std::array{3, 9, 5, 7}}) {
    CHECK(std::abs(e1.spatial_integral(a, b, c, d) - e2.spatial_integral(a, b, c, d)) <= 1e-9);
  }
}

TEST_CASE("quartets with odd total parity vanish for every kind") {
  const HarmonicBasis basis(1.0);
  for (const auto& spec : {InteractionSpec::delta(), InteractionSpec::harmonic(1.0),
                           InteractionSpec::gaussian(1.0, 0.8)}) {
    const TwoBodyEngine engine(basis, spec);
    CHECK(std::abs(engine.spatial_integral(0, 0, 0, 1)) <= 1e-14);
    CHECK(std::abs(engine.spatial_integral(2, 1, 0, 0)) <= 1e-14);
    CHECK(std::abs(engine.spatial_integral(3, 3, 2, 1)) <= 1e-14);
  }
}

TEST_CASE("particle relabeling and hermiticity symmetries on the quadrature route") {
  const HarmonicBasis basis(1.0);
  const TwoBodyEngine engine(basis, InteractionSpec::gaussian(0.7, 1.1));
  for (auto [a, b, c, d] :
       {std::array{0, 1, 2, 3}, std::array{4, 2, 2, 0}, std::array{5, 1, 3, 7}}) {
    const double base = engine.spatial_integral_quadrature(a, b, c, d);
    CHECK(std::abs(base - engine.spatial_integral_quadrature(b, a, d, c)) <= 1e-10);
    CHECK(std::abs(base - engine.spatial_integral_quadrature(c, d, a, b)) <= 1e-10);
  }
}

TEST_CASE("gaussian (0,0,0,0) element matches its closed form A s / sqrt(s^2 + 1)") {
  const double amplitude = 1.0, width = 0.8;
  const HarmonicBasis basis(1.0);
  const TwoBodyEngine engine(basis, InteractionSpec::gaussian(amplitude, width));
  const double exact = amplitude * width / std::sqrt(width * width + 1.0);
  CHECK(engine.spatial_integral(0, 0, 0, 0) == doctest::Approx(exact).epsilon(1e-10));
}

TEST_CASE("harmonic kind: analytic path agrees with 2D quadrature") {
  const HarmonicBasis basis(1.0);
  const TwoBodyEngine engine(basis, InteractionSpec::harmonic(1.0));
  for (int a = 0; a <= 5; ++a)
    for (int b = 0; b <= 5; ++b)
      for (int c = 0; c <= 5; ++c)
        for (int d = 0; d <= 5; ++d) {
          const double analytic = engine.spatial_integral(a, b, c, d);
          const double quad = engine.spatial_integral_quadrature(a, b, c, d);
          CHECK(std::abs(analytic - quad) <= 1e-8);
        }
  // A few higher quartets, including the Moshinsky-relevant (0,2,1,1).
  for (auto [a, b, c, d] : {std::array{0, 2, 1, 1}, std::array{8, 8, 8, 8},
                            std::array{7, 3, 5, 1}, std::array{6, 0, 8, 2}}) {
    CHECK(std::abs(engine.spatial_integral(a, b, c, d) -
                   engine.spatial_integral_quadrature(a, b, c, d)) <= 1e-8);
  }
}

TEST_CASE("slater elements reproduce the four-fold level delta matrix entries") {
  const HarmonicBasis basis(1.0);
  const TwoBodyEngine engine(basis, InteractionSpec::delta());
  const SlaterState psi1({0, Spin::Up}, {1, Spin::Up});
  const SlaterState psi2({0, Spin::Up}, {1, Spin::Down});
  const SlaterState psi3({0, Spin::Down}, {1, Spin::Up});

  CHECK(engine.slater_element(psi2, psi2) == doctest::Approx(kPrefactor).epsilon(1e-10));
  CHECK(engine.slater_element(psi2, psi3) == doctest::Approx(-kPrefactor).epsilon(1e-10));
  // Contact interaction is blind to spatially antisymmetric (parallel-spin) pairs.
  CHECK(std::abs(engine.slater_element(psi1, psi1)) <= 1e-14);
}

TEST_CASE("elements between different total-S_z determinants vanish structurally") {
  const HarmonicBasis basis(1.0);
  const TwoBodyEngine engine(basis, InteractionSpec::gaussian(2.0, 0.5));
  const SlaterState up_up({0, Spin::Up}, {1, Spin::Up});
  const SlaterState mixed({0, Spin::Up}, {1, Spin::Down});
  const SlaterState down_down({0, Spin::Down}, {1, Spin::Down});
  CHECK(engine.slater_element(up_up, mixed) == 0.0);
  CHECK(engine.slater_element(mixed, down_down) == 0.0);
  CHECK(engine.slater_element(up_up, down_down) == 0.0);
}

TEST_CASE("slater element matrices are symmetric") {
  const HarmonicBasis basis(1.0);
  const TwoBodyEngine engine(basis, InteractionSpec::gaussian(1.0, 0.9));
  std::vector<SlaterState> states;
  for (int i = 0; i < 8; ++i)
    for (int j = i + 1; j < 8; ++j)
      states.emplace_back(orbital_from_index(i), orbital_from_index(j));
  for (std::size_t i = 0; i < states.size(); ++i)
    for (std::size_t j = i; j < states.size(); ++j)
      CHECK(std::abs(engine.slater_element(states[i], states[j]) -
                     engine.slater_element(states[j], states[i])) <= 1e-12);
}

TEST_CASE("tabulated interaction tracks its analytic original") {
  const HarmonicBasis basis(1.0);
  const TwoBodyEngine exact(basis, InteractionSpec::gaussian(1.0, 0.8));
  const TwoBodyEngine table(basis, gaussian_table(1.0, 0.8, 25.0, 10001));
  for (auto [a, b, c, d] : {std::array{0, 0, 0, 0}, std::array{0, 1, 0, 1},
                            std::array{2, 3, 4, 1}, std::array{5, 5, 5, 5}}) {
    CHECK(std::abs(exact.spatial_integral(a, b, c, d) - table.spatial_integral(a, b, c, d)) <=
          2e-5);  // linear-interpolation floor
  }
  CHECK(table.warnings().empty());
}

TEST_CASE("tabulated interaction validation") {
  // Odd V(u) is rejected.
  const Eigen::VectorXd u = linspace(-2.0, 2.0, 101);
  CHECK_THROWS_AS(InteractionSpec::tabulated(u, u), std::invalid_argument);
  // Non-uniform grid is rejected.
  Eigen::VectorXd bad_u(5), v(5);
  bad_u << -2.0, -1.0, 0.1, 1.0, 2.0;
  v.setOnes();
  CHECK_THROWS_AS(InteractionSpec::tabulated(bad_u, v), std::invalid_argument);
  // Asymmetric grid is rejected.
  CHECK_THROWS_AS(InteractionSpec::tabulated(linspace(-1.0, 2.0, 31),
                                             Eigen::VectorXd::Ones(31)),
                  std::invalid_argument);
}

TEST_CASE("narrow tabulated support triggers a truncation warning with tail mass") {
  const HarmonicBasis basis(1.0);
  const TwoBodyEngine engine(basis, gaussian_table(1.0, 2.0, 1.0, 201));
  (void)engine.spatial_integral(0, 0, 0, 0);
  const auto warnings = engine.warnings();
  REQUIRE(!warnings.empty());
  CHECK(warnings[0].find("tail mass") != std::string::npos);
  // Cache prevents duplicate warnings for the same quartet.
  (void)engine.spatial_integral(0, 0, 0, 0);
  CHECK(engine.warnings().size() == warnings.size());
}

TEST_CASE("modes outside the basis are rejected") {
  const HarmonicBasis basis(1.0, 10);
  const TwoBodyEngine engine(basis, InteractionSpec::delta());
  CHECK_THROWS_AS(engine.spatial_integral(0, 1, 11, 0), std::invalid_argument);
  CHECK_THROWS_AS(engine.spatial_integral(-1, 0, 0, 0), std::invalid_argument);
}

TEST_CASE("cache returns identical values under concurrent access") {
  const HarmonicBasis basis(1.0, 12);
  std::vector<std::array<int, 4>> quartets;
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> mode(0, 12);
  for (int i = 0; i < 200; ++i)
    quartets.push_back({mode(rng), mode(rng), mode(rng), mode(rng)});

  const TwoBodyEngine reference(basis, InteractionSpec::delta());
  std::vector<double> expected;
  for (const auto& [a, b, c, d] : quartets)
    expected.push_back(reference.spatial_integral(a, b, c, d));

  const TwoBodyEngine shared(basis, InteractionSpec::delta());
  std::vector<std::vector<double>> results(4);
  std::vector<std::thread> workers;
  for (int t = 0; t < 4; ++t)
    workers.emplace_back([&, t] {
      for (const auto& [a, b, c, d] : quartets)
        results[t].push_back(shared.spatial_integral(a, b, c, d));
    });
  for (auto& w : workers) w.join();
  for (int t = 0; t < 4; ++t)
    for (std::size_t i = 0; i < quartets.size(); ++i)
      CHECK(results[t][i] == expected[i]);  // bitwise, schedule-independent
}
