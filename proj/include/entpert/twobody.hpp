#pragma once
#include <Eigen/Dense>

#include <cstdint>
#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "entpert/spbasis.hpp"

namespace entpert {

//! Even interparticle interaction V(x1 - x2).
//!   delta:     V = (1/2) delta(u)          (strength convention baked in)
//!   harmonic:  V = (1/2) omega^2 u^2
//!   gaussian:  V = A exp(-u^2 / (2 s^2))
//!   tabulated: V sampled on a symmetric uniform u-grid, zero outside it
struct InteractionSpec {
  enum class Kind { Delta, Harmonic, Gaussian, Tabulated };

  Kind kind = Kind::Delta;
  double omega = 1.0;      // harmonic
  double amplitude = 1.0;  // gaussian
  double width = 1.0;      // gaussian
  Eigen::VectorXd u_grid;  // tabulated
  Eigen::VectorXd v_samples;

  static InteractionSpec delta();
  static InteractionSpec harmonic(double omega);
  static InteractionSpec gaussian(double amplitude, double width);
  //! Requires a uniform grid symmetric about u = 0 with max|V(u)-V(-u)| <= 1e-10.
  static InteractionSpec tabulated(Eigen::VectorXd u, Eigen::VectorXd v);

  //! Pointwise value; throws for the delta kind.
  double evaluate(double u) const;
  std::string describe() const;
};

//! Spatial two-body integrals <ab|V|cd> and Slater-determinant matrix elements
//! of the spin-free interaction, over one basis and one interaction.
//! Integrals are cached per engine; all methods are safe to call concurrently
//! and return identical values regardless of call order or thread count.
class TwoBodyEngine {
 public:
  //! The engine keeps references to basis; it must outlive the engine.
  TwoBodyEngine(const SpatialBasis& basis, InteractionSpec interaction,
                std::size_t cache_limit = default_cache_limit());

  //! integral phi_a(x1) phi_b(x2) V(x1-x2) phi_c(x1) phi_d(x2) dx1 dx2.
  //! Delta reduces to 1D quadrature, harmonic on a harmonic basis to analytic
  //! x/x^2 matrix elements, everything else to tensor-product quadrature.
  double spatial_integral(int a, int b, int c, int d) const;

  //! The tensor-product quadrature route, bypassing analytic shortcuts.
  //! Used to cross-check the harmonic analytic path; rejects the delta kind.
  double spatial_integral_quadrature(int a, int b, int c, int d) const;

  //! <bra| V |ket> between canonical Slater determinants:
  //! direct minus exchange with spin Kronecker deltas.
  double slater_element(const SlaterState& bra, const SlaterState& ket) const;

  const SpatialBasis& basis() const { return basis_; }
  const InteractionSpec& interaction() const { return interaction_; }

  //! Accumulated diagnostics (tabulated-support truncation and the like).
  std::vector<std::string> warnings() const;

  //! Cache entry cap; the ENTPERT_CACHE_SIZE environment variable overrides it.
  static std::size_t default_cache_limit();

 private:
  double compute(int a, int b, int c, int d) const;
  double quad2d(int a, int b, int c, int d) const;

  const SpatialBasis& basis_;
  InteractionSpec interaction_;
  std::size_t cache_limit_;
  bool analytic_harmonic_ = false;  // harmonic kind on a harmonic basis
  bool uniform_quad_ = false;
  bool truncated_table_ = false;

  Eigen::MatrixXd kernel_;       // w_i w_j V(x_i - x_j), non-uniform rules
  Eigen::VectorXd v_of_offset_;  // V(k h) for uniform rules, k = -(n-1)..n-1

  mutable std::mutex mutex_;
  mutable std::unordered_map<std::uint64_t, double> cache_;
  mutable std::vector<std::string> warnings_;
};

}  // namespace entpert
