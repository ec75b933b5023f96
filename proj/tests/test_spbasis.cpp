#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "entpert/spbasis.hpp"
#include "oracles.hpp"

using namespace entpert;

namespace {

Grid1D oscillator_grid(int n_points = 2001) { return Grid1D{-10.0, 10.0, n_points}; }

Eigen::VectorXd sample_potential(const Grid1D& grid, double (*u)(double)) {
  Eigen::VectorXd out(grid.n_points);
  const Eigen::VectorXd xs = grid.nodes();
  for (int i = 0; i < grid.n_points; ++i) out[i] = u(xs[i]);
  return out;
}

double half_x_squared(double x) { return 0.5 * x * x; }
double quartic(double x) { return x * x * x * x; }

int count_sign_changes(const Eigen::VectorXd& v) {
  const double thr = 1e-6 * v.cwiseAbs().maxCoeff();
  int changes = 0;
  double last = 0.0;
  for (int i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) < thr) continue;
    if (last != 0.0 && v[i] * last < 0) ++changes;
    last = v[i];
  }
  return changes;
}

}  // namespace

TEST_CASE("spin-orbital canonical order and indices") {
  CHECK(SpinOrbital{0, Spin::Up}.index() == 0);
  CHECK(SpinOrbital{0, Spin::Down}.index() == 1);
  CHECK(SpinOrbital{3, Spin::Up}.index() == 6);
  CHECK(SpinOrbital{1, Spin::Up} < SpinOrbital{1, Spin::Down});
  CHECK(SpinOrbital{1, Spin::Down} < SpinOrbital{2, Spin::Up});

  const SlaterState s(SpinOrbital{2, Spin::Down}, SpinOrbital{0, Spin::Up});
  CHECK(s.lo() == SpinOrbital{0, Spin::Up});  // canonicalized
  CHECK(s.total_sz() == 0);
  CHECK_THROWS_AS(SlaterState(SpinOrbital{1, Spin::Up}, SpinOrbital{1, Spin::Up}),
                  std::invalid_argument);
}

TEST_CASE("hermite modes: pinned values at the origin") {
  const HarmonicBasis basis(1.0);
  const double peak = std::pow(std::numbers::pi, -0.25);
  CHECK(hermite_mode(basis, 0, 0.0) == doctest::Approx(peak).epsilon(1e-14));
  CHECK(hermite_mode(basis, 1, 0.0) == 0.0);  // odd parity
  CHECK(hermite_mode(basis, 2, 0.0) == doctest::Approx(-peak / std::sqrt(2.0)).epsilon(1e-14));
  CHECK_THROWS_AS(hermite_mode(basis, -1, 0.0), std::invalid_argument);
}

TEST_CASE("hermite modes stay normalized at high order (independent quadrature)") {
  const HarmonicBasis basis(1.0);
  for (int n : {6, 17, 30}) {
    const double norm = oracles::simpson(
        [&](double x) { return std::pow(hermite_mode(basis, n, x), 2); }, -12.0, 12.0, 24000);
    CHECK(norm == doctest::Approx(1.0).epsilon(n == 30 ? 1e-9 : 1e-11));
  }
}

TEST_CASE("analytic modes are orthonormal under the reference quadrature") {
  const HarmonicBasis basis(1.0);
  const auto& q = basis.quad();
  for (int m = 0; m <= 10; ++m)
    for (int n = m; n <= 10; ++n) {
      const double overlap =
          (q.weights.array() * basis.mode_on_quad(m).array() * basis.mode_on_quad(n).array())
              .sum();
      CHECK(std::abs(overlap - (m == n ? 1.0 : 0.0)) <= 1e-10);
    }
}

TEST_CASE("analytic modes have parity (-1)^n") {
  const HarmonicBasis basis(1.0);
  for (int n = 0; n <= 20; ++n) {
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
    for (double x : {0.13, 0.97, 2.4, 5.5}) {
      CHECK(std::abs(hermite_mode(basis, n, x) - sign * hermite_mode(basis, n, -x)) <= 1e-8);
    }
  }
}

TEST_CASE("frequency scaling phi_n^omega(x) = omega^(1/4) phi_n^1(sqrt(omega) x)") {
  const HarmonicBasis unit(1.0);
  const double omega = 2.5;
  const HarmonicBasis scaled(omega);
  for (int n : {0, 3, 11})
    for (double x : {-1.7, 0.4, 2.2}) {
      const double expected =
          std::pow(omega, 0.25) * hermite_mode(unit, n, std::sqrt(omega) * x);
      CHECK(hermite_mode(scaled, n, x) == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("oscillator eigenvalues are omega (n + 1/2)") {
  const HarmonicBasis basis(0.7);
  for (int n = 0; n < 12; ++n)
    CHECK(basis.eigenvalue(n) == doctest::Approx(0.7 * (n + 0.5)).epsilon(1e-14));
}

TEST_CASE("x and x^2 matrix elements close the commutator check") {
  const HarmonicBasis basis(1.3);
  // <m|x^2|n> = sum_k <m|x|k><k|x|n>
  for (int m = 0; m <= 6; ++m)
    for (int n = 0; n <= 6; ++n) {
      double s = 0.0;
      for (int k = 0; k <= 8; ++k) s += basis.x_element(m, k) * basis.x_element(k, n);
      CHECK(basis.x2_element(m, n) == doctest::Approx(s).epsilon(1e-12));
    }
}

//==============================================================================

TEST_CASE("numeric solver reproduces the oscillator spectrum") {
  const Grid1D grid = oscillator_grid(8001);  // h small enough for 1e-5 on mode 3
  const auto basis = solve_potential(grid, sample_potential(grid, half_x_squared), 4);
  for (int k = 0; k < 4; ++k)
    CHECK(basis.eigenvalue(k) == doctest::Approx(k + 0.5).margin(1e-5));
  for (int k = 0; k + 1 < 4; ++k) CHECK(basis.eigenvalue(k + 1) > basis.eigenvalue(k));
}

TEST_CASE("numeric eigenfunctions are trapezoid-orthonormal to 1e-8") {
  const Grid1D grid = oscillator_grid();
  const auto basis = solve_potential(grid, sample_potential(grid, half_x_squared), 5);
  const auto& w = basis.quad().weights;
  for (int a = 0; a < 5; ++a)
    for (int b = a; b < 5; ++b) {
      const double overlap =
          (w.array() * basis.eigenfunction(a).array() * basis.eigenfunction(b).array()).sum();
      CHECK(std::abs(overlap - (a == b ? 1.0 : 0.0)) <= 1e-8);
    }
}

TEST_CASE("numeric mode 1 matches the analytic hermite mode pointwise") {
  const Grid1D grid = oscillator_grid();
  const auto basis = solve_potential(grid, sample_potential(grid, half_x_squared), 2);
  const HarmonicBasis analytic(1.0);
  const Eigen::VectorXd xs = grid.nodes();
  double max_dev = 0.0;
  for (int i = 0; i < grid.n_points; ++i)
    max_dev = std::max(max_dev,
                       std::abs(basis.eigenfunction(1)[i] - hermite_mode(analytic, 1, xs[i])));
  CHECK(max_dev <= 1e-4);
}

TEST_CASE("quartic well ground state is stable under grid refinement") {
  const Grid1D coarse{-6.0, 6.0, 1201};
  const Grid1D fine{-6.0, 6.0, 2401};
  const double e_coarse =
      solve_potential(coarse, sample_potential(coarse, quartic), 1).eigenvalue(0);
  const double e_fine = solve_potential(fine, sample_potential(fine, quartic), 1).eigenvalue(0);
  CHECK(std::abs(e_coarse - e_fine) <= 1e-4);
}

TEST_CASE("numeric eigenfunction k has k interior nodes") {
  const Grid1D grid{-6.0, 6.0, 1501};
  const auto basis = solve_potential(grid, sample_potential(grid, quartic), 6);
  for (int k = 0; k < 6; ++k) CHECK(count_sign_changes(basis.eigenfunction(k)) == k);
}

TEST_CASE("numeric modes of an even potential have parity (-1)^n") {
  const Grid1D grid = oscillator_grid();
  const auto basis = solve_potential(grid, sample_potential(grid, half_x_squared), 4);
  CHECK(basis.parity_definite());
  const int n = grid.n_points;
  for (int k = 0; k < 4; ++k) {
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    const auto& v = basis.eigenfunction(k);
    double dev = 0.0;
    for (int i = 0; i < n; ++i) dev = std::max(dev, std::abs(v[i] - sign * v[n - 1 - i]));
    CHECK(dev <= 1e-5);
  }
}

TEST_CASE("finite differences converge at second order (Richardson)") {
  const Grid1D coarse{-10.0, 10.0, 501};
  const Grid1D fine{-10.0, 10.0, 1001};
  const double e1 =
      solve_potential(coarse, sample_potential(coarse, half_x_squared), 1).eigenvalue(0);
  const double e2 =
      solve_potential(fine, sample_potential(fine, half_x_squared), 1).eigenvalue(0);
  const double ratio = (e1 - 0.5) / (e2 - 0.5);
  CHECK(ratio > 3.5);
  CHECK(ratio < 4.5);
}

TEST_CASE("boundary decay is checked, not assumed") {
  const Grid1D narrow{-2.5, 2.5, 501};
  CHECK_THROWS_WITH_AS(
      solve_potential(narrow, sample_potential(narrow, half_x_squared), 4),
      doctest::Contains("eigenfunction"), std::runtime_error);
}

TEST_CASE("solver input validation") {
  const Grid1D grid = oscillator_grid(101);
  CHECK_THROWS_AS(solve_potential(grid, Eigen::VectorXd::Zero(55), 2), std::invalid_argument);
  CHECK_THROWS_AS(solve_potential(grid, Eigen::VectorXd::Zero(101), 0), std::invalid_argument);
  CHECK_THROWS_AS(solve_potential(grid, Eigen::VectorXd::Zero(101), 100), std::invalid_argument);
}
