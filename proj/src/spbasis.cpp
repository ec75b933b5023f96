#include "entpert/spbasis.hpp"

#include <lapacke.h>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

namespace entpert {

SlaterState::SlaterState(SpinOrbital a, SpinOrbital b) : lo_(a), hi_(b) {
  if (a == b)
    throw std::invalid_argument("SlaterState: Pauli exclusion, both spin-orbitals are |" +
                                std::to_string(a.mode) +
                                (a.spin == Spin::Up ? ",+>" : ",->"));
  if (hi_ < lo_) std::swap(lo_, hi_);
}

int SlaterState::total_sz() const {
  const auto z = [](Spin s) { return s == Spin::Up ? 1 : -1; };
  return (z(lo_.spin) + z(hi_.spin)) / 2;
}

//==============================================================================

HarmonicBasis::HarmonicBasis(double omega, int max_mode, int quad_points)
    : omega_(omega), max_mode_(max_mode) {
  if (!(omega > 0)) throw std::invalid_argument("HarmonicBasis: omega must be positive");
  if (max_mode < 0) throw std::invalid_argument("HarmonicBasis: negative max_mode");
  // Gaussian tails are < 1e-20 at |x| = 10/sqrt(omega).
  const double half_width = 10.0 / std::sqrt(omega);
  quad_ = gauss_legendre(quad_points, -half_width, half_width);

  tables_.resize(max_mode_ + 1);
  for (int n = 0; n <= max_mode_; ++n) {
    tables_[n].resize(quad_.size());
    for (int i = 0; i < quad_.size(); ++i) tables_[n][i] = value(n, quad_.points[i]);
  }
}

double HarmonicBasis::value(int n, double x) const {
  if (n < 0) throw std::invalid_argument("hermite_mode: negative mode index");
  const double xi = std::sqrt(omega_) * x;
  double prev = 0.0;
  double cur = std::pow(omega_ / std::numbers::pi, 0.25) * std::exp(-0.5 * xi * xi);
  for (int k = 0; k < n; ++k) {
    const double next =
        std::sqrt(2.0 / (k + 1)) * xi * cur - std::sqrt(double(k) / (k + 1)) * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

double HarmonicBasis::x_element(int m, int n) const {
  if (m < 0 || n < 0) throw std::invalid_argument("x_element: negative mode index");
  const double s = 1.0 / std::sqrt(2.0 * omega_);
  if (m == n + 1) return s * std::sqrt(n + 1.0);
  if (m == n - 1) return s * std::sqrt(double(n));
  return 0.0;
}

double HarmonicBasis::x2_element(int m, int n) const {
  if (m < 0 || n < 0) throw std::invalid_argument("x2_element: negative mode index");
  const double t = 1.0 / (2.0 * omega_);
  if (m == n) return t * (2.0 * n + 1.0);
  if (m == n + 2) return t * std::sqrt((n + 1.0) * (n + 2.0));
  if (m == n - 2) return t * std::sqrt(double(n) * (n - 1.0));
  return 0.0;
}

double HarmonicBasis::eigenvalue(int n) const {
  if (n < 0) throw std::invalid_argument("eigenvalue: negative mode index");
  return omega_ * (n + 0.5);
}

const Eigen::VectorXd& HarmonicBasis::mode_on_quad(int n) const {
  if (n < 0 || n > max_mode_)
    throw std::invalid_argument("mode_on_quad: mode " + std::to_string(n) +
                                " not tabulated (max_mode = " + std::to_string(max_mode_) + ")");
  return tables_[n];
}

double hermite_mode(const HarmonicBasis& basis, int n, double x) { return basis.value(n, x); }

//==============================================================================

double NumericBasis::eigenvalue(int n) const {
  if (n < 0 || n > max_mode())
    throw std::invalid_argument("NumericBasis: mode index out of range");
  return eigenvalues_[n];
}

const Eigen::VectorXd& NumericBasis::mode_on_quad(int n) const {
  if (n < 0 || n > max_mode())
    throw std::invalid_argument("NumericBasis: mode index out of range");
  return modes_[n];
}

namespace {

bool potential_is_even(const Grid1D& grid, const Eigen::VectorXd& u) {
  if (std::abs(grid.x_min + grid.x_max) > 1e-12 * (std::abs(grid.x_min) + 1.0)) return false;
  const int n = grid.n_points;
  const double scale = 1.0 + u.cwiseAbs().maxCoeff();
  for (int i = 0; i < n / 2; ++i)
    if (std::abs(u[i] - u[n - 1 - i]) > 1e-9 * scale) return false;
  return true;
}

}  // namespace

NumericBasis solve_potential(const Grid1D& grid, const Eigen::VectorXd& potential_samples,
                             int k_max) {
  const int n = grid.n_points;
  if (n < 10) throw std::invalid_argument("solve_potential: grid too coarse");
  if (potential_samples.size() != n)
    throw std::invalid_argument("solve_potential: potential_samples size does not match grid");
  if (k_max < 1 || k_max > n - 2)
    throw std::invalid_argument("solve_potential: k_max out of range");
  if (!(grid.x_max > grid.x_min)) throw std::invalid_argument("solve_potential: empty grid");

  // -1/2 psi'' + U psi with Dirichlet values beyond the grid ends.
  const double h = grid.spacing();
  Eigen::VectorXd diag = potential_samples.array() + 1.0 / (h * h);
  Eigen::VectorXd offdiag = Eigen::VectorXd::Constant(n - 1, -0.5 / (h * h));

  Eigen::VectorXd w(n);
  Eigen::MatrixXd z(n, k_max);
  std::vector<lapack_int> isuppz(2 * std::max(1, k_max));
  lapack_int found = 0;
  const lapack_int info = LAPACKE_dstevr(
      LAPACK_COL_MAJOR, 'V', 'I', n, diag.data(), offdiag.data(), 0.0, 0.0, 1, k_max, 0.0,
      &found, w.data(), z.data(), n, isuppz.data());
  if (info != 0 || found != k_max)
    throw std::runtime_error("solve_potential: tridiagonal eigensolver failed (info = " +
                             std::to_string(info) + ")");

  NumericBasis basis;
  basis.grid_ = grid;
  basis.potential_ = potential_samples;
  basis.quad_ = trapezoid(grid.x_min, grid.x_max, n);
  basis.parity_definite_ = potential_is_even(grid, potential_samples);
  basis.eigenvalues_ = w.head(k_max);
  basis.modes_.resize(k_max);

  const Eigen::VectorXd& qw = basis.quad_.weights;
  for (int k = 0; k < k_max; ++k) {
    Eigen::VectorXd v = z.col(k);
    // Re-orthonormalize under the trapezoidal weight (modified Gram-Schmidt).
    for (int j = 0; j < k; ++j) {
      const double overlap = (qw.array() * basis.modes_[j].array() * v.array()).sum();
      v -= overlap * basis.modes_[j];
    }
    v /= std::sqrt((qw.array() * v.array().square()).sum());

    // Sign convention: first significant value scanning in from the right
    // boundary is positive, matching the analytic oscillator modes.
    const double vmax = v.cwiseAbs().maxCoeff();
    for (int i = n - 1; i >= 0; --i) {
      if (std::abs(v[i]) > 1e-8 * vmax) {
        if (v[i] < 0) v = -v;
        break;
      }
    }
    basis.modes_[k] = std::move(v);
  }

  for (int k = 0; k < k_max; ++k) {
    const double edge =
        std::max(std::abs(basis.modes_[k][0]), std::abs(basis.modes_[k][n - 1]));
    if (edge > 1e-8)
      throw std::runtime_error(
          "solve_potential: eigenfunction " + std::to_string(k) +
          " does not decay below 1e-8 at the grid boundary (|psi_edge| = " +
          std::to_string(edge) + "); widen the grid");
  }
  for (int k = 0; k + 1 < k_max; ++k) {
    if (!(basis.eigenvalues_[k + 1] > basis.eigenvalues_[k]))
      throw std::runtime_error("solve_potential: eigenvalues not strictly ascending");
  }
  return basis;
}

}  // namespace entpert
