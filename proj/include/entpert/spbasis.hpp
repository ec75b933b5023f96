#pragma once
#include <Eigen/Dense>

#include <compare>
#include <vector>

#include "entpert/quadrature.hpp"

namespace entpert {

enum class Spin : int { Up = 0, Down = 1 };

//! A single-particle state |n, sigma>: spatial mode index plus spin projection.
//! Canonical order is mode ascending, Up before Down; it fixes all determinant signs.
struct SpinOrbital {
  int mode = 0;
  Spin spin = Spin::Up;

  //! Position in the canonical spin-orbital enumeration: |n,+> -> 2n, |n,-> -> 2n+1.
  int index() const { return 2 * mode + static_cast<int>(spin); }

  friend auto operator<=>(const SpinOrbital&, const SpinOrbital&) = default;
};

inline SpinOrbital orbital_from_index(int idx) {
  return SpinOrbital{idx / 2, static_cast<Spin>(idx % 2)};
}

//! One normalized Slater determinant of two spin-orbitals, stored in canonical order.
class SlaterState {
 public:
  //! Throws if a == b (exclusion principle). Arguments may come in either order.
  SlaterState(SpinOrbital a, SpinOrbital b);

  const SpinOrbital& lo() const { return lo_; }
  const SpinOrbital& hi() const { return hi_; }

  //! Total spin projection, an integer in {-1, 0, +1}.
  int total_sz() const;
  //! True when both spatial modes coincide (forced spin singlet).
  bool equal_modes() const { return lo_.mode == hi_.mode; }

  friend auto operator<=>(const SlaterState&, const SlaterState&) = default;

 private:
  SpinOrbital lo_, hi_;
};

//==============================================================================
//! Spatial mode basis of the confining potential: eigenvalues, a reference
//! quadrature, and mode values tabulated on the quadrature nodes.
class SpatialBasis {
 public:
  virtual ~SpatialBasis() = default;
  //! Largest mode index usable in two-body integrals.
  virtual int max_mode() const = 0;
  virtual double eigenvalue(int n) const = 0;
  virtual const QuadRule& quad() const = 0;
  virtual const Eigen::VectorXd& mode_on_quad(int n) const = 0;
  //! True when mode n has definite parity (-1)^n (even confining potential).
  virtual bool parity_definite() const = 0;
  //! True when two-particle levels are indexed by n1+n2 (equispaced spectrum).
  virtual bool harmonic_levels() const = 0;
};

//==============================================================================
//! Analytic eigenbasis of the harmonic well U(x) = omega^2 x^2 / 2.
class HarmonicBasis final : public SpatialBasis {
 public:
  explicit HarmonicBasis(double omega, int max_mode = 40, int quad_points = 400);

  double omega() const { return omega_; }
  //! phi_n(x), evaluated by the three-term recurrence on the normalized modes.
  double value(int n, double x) const;
  //! <m|x|n> of the unit-mass oscillator.
  double x_element(int m, int n) const;
  //! <m|x^2|n>.
  double x2_element(int m, int n) const;

  int max_mode() const override { return max_mode_; }
  double eigenvalue(int n) const override;
  const QuadRule& quad() const override { return quad_; }
  const Eigen::VectorXd& mode_on_quad(int n) const override;
  bool parity_definite() const override { return true; }
  bool harmonic_levels() const override { return true; }

 private:
  double omega_;
  int max_mode_;
  QuadRule quad_;
  std::vector<Eigen::VectorXd> tables_;
};

//! phi_n(x) for the unit-mass oscillator of frequency basis.omega().
double hermite_mode(const HarmonicBasis& basis, int n, double x);

//==============================================================================
//! Uniform 1D grid (n_points nodes spanning [x_min, x_max]).
struct Grid1D {
  double x_min = -10.0;
  double x_max = 10.0;
  int n_points = 2001;

  double spacing() const { return (x_max - x_min) / (n_points - 1); }
  Eigen::VectorXd nodes() const {
    return Eigen::VectorXd::LinSpaced(n_points, x_min, x_max);
  }
};

//! Grid eigenbasis of a generic confining potential, orthonormal under the
//! trapezoidal weight. Produced by solve_potential.
class NumericBasis final : public SpatialBasis {
 public:
  const Grid1D& grid() const { return grid_; }
  const Eigen::VectorXd& potential_samples() const { return potential_; }
  const Eigen::VectorXd& eigenvalues() const { return eigenvalues_; }
  //! Grid samples of eigenfunction k (same thing mode_on_quad returns).
  const Eigen::VectorXd& eigenfunction(int k) const { return mode_on_quad(k); }

  int max_mode() const override { return static_cast<int>(eigenvalues_.size()) - 1; }
  double eigenvalue(int n) const override;
  const QuadRule& quad() const override { return quad_; }
  const Eigen::VectorXd& mode_on_quad(int n) const override;
  bool parity_definite() const override { return parity_definite_; }
  bool harmonic_levels() const override { return false; }

 private:
  friend NumericBasis solve_potential(const Grid1D&, const Eigen::VectorXd&, int);
  NumericBasis() = default;

  Grid1D grid_;
  Eigen::VectorXd potential_;
  Eigen::VectorXd eigenvalues_;
  std::vector<Eigen::VectorXd> modes_;
  QuadRule quad_;
  bool parity_definite_ = false;
};

//! Lowest k_max eigenpairs of -1/2 d^2/dx^2 + U(x) by second-order finite
//! differences on the grid. Eigenfunctions are orthonormalized under the
//! trapezoidal weight and sign-fixed so the first significant value scanning
//! in from the right boundary is positive (the convention the analytic
//! oscillator modes satisfy). Throws when an eigenfunction fails to decay
//! below 1e-8 at the boundary, naming the offending mode.
NumericBasis solve_potential(const Grid1D& grid, const Eigen::VectorXd& potential_samples,
                             int k_max);

}  // namespace entpert
