#pragma once
#include <Eigen/Dense>

#include <complex>
#include <utility>
#include <vector>

#include "entpert/spbasis.hpp"

namespace entpert {

//! Pure state of two identical fermions: an antisymmetric coefficient matrix w
//! over the canonical spin-orbital order, |psi> = sum_ab w_ab |a>|b>.
//! Antisymmetry holds exactly and sum |w_ab|^2 = 1 after construction.
class TwoFermionState {
 public:
  //! State of one Slater determinant: w_pq = 1/sqrt(2), w_qp = -1/sqrt(2) for
  //! p < q canonical. dim < 0 picks the smallest even dimension that fits.
  static TwoFermionState from_slater(SpinOrbital p, SpinOrbital q, int dim = -1);
  static TwoFermionState from_slater(const SlaterState& s, int dim = -1);

  //! Validates antisymmetry, then antisymmetrizes exactly and normalizes.
  static TwoFermionState from_matrix(Eigen::MatrixXcd w);

  //! Normalized linear combination. Throws when every coefficient is zero or
  //! the combination cancels to the zero state.
  static TwoFermionState superpose(
      const std::vector<std::pair<std::complex<double>, TwoFermionState>>& terms);

  int dim() const { return static_cast<int>(w_.rows()); }
  const Eigen::MatrixXcd& w() const { return w_; }

 private:
  explicit TwoFermionState(Eigen::MatrixXcd w) : w_(std::move(w)) {}
  Eigen::MatrixXcd w_;
};

//! Single-particle reduced density matrix rho_r = W W^dagger (trace one,
//! Hermitian, positive semidefinite; eigenvalues come in equal pairs).
Eigen::MatrixXcd reduced_density(const TwoFermionState& state);

//! Schmidt coefficients lambda_i, descending; 0 <= lambda_i <= 1, sum = 1.
struct SchmidtSpectrum {
  std::vector<double> coefficients;
};

//! Pairs the descending eigenvalues of rho_r into Schmidt coefficients
//! (lambda_i = sum of the i-th adjacent pair). A pair gap above 1e-9 signals
//! corrupted antisymmetry and raises ConsistencyError. Exposed for tests.
std::vector<double> pair_eigenvalues(const Eigen::VectorXd& rho_eigenvalues_descending);

SchmidtSpectrum schmidt_spectrum(const TwoFermionState& state);

//! Linear-entropy entanglement 1 - 2 Tr[rho_r^2]; cross-checked against
//! 1 - sum lambda_i^2 within 1e-10.
double linear_entanglement(const TwoFermionState& state);

//! Von Neumann entanglement -Tr[rho_r ln rho_r] - ln 2; cross-checked against
//! -sum lambda_i ln lambda_i within 1e-9.
double vn_entanglement(const TwoFermionState& state);

//! ln of the largest Schmidt rank reachable with m_tilde distinct
//! spin-orbitals: ln floor(m_tilde / 2). Requires m_tilde >= 2.
double slater_span_bound(int m_tilde);

struct LevelBounds {
  double bound_l;
  double bound_vn;
};

//! Entanglement ceilings of the harmonic level N = n1 + n2:
//! (N/(N+1), ln(N+1)).
LevelBounds level_bounds(int n_quanta);

}  // namespace entpert
