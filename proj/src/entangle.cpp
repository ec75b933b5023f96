#include "entpert/entangle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "entpert/errors.hpp"

namespace entpert {

namespace {

constexpr double kEigClamp = 1e-12;   // eigensolver noise window around zero
constexpr double kPairTol = 1e-9;     // max gap inside a Kramers pair
constexpr double kLinearTol = 1e-10;  // agreement of the two eps_L routes
constexpr double kVnTol = 1e-9;       // agreement of the two eps_vN routes

Eigen::VectorXd rho_eigenvalues_descending(const TwoFermionState& state) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(reduced_density(state));
  if (es.info() != Eigen::Success)
    throw ConsistencyError("entangle: eigendecomposition of rho_r failed");
  return es.eigenvalues().reverse();
}

}  // namespace

TwoFermionState TwoFermionState::from_slater(SpinOrbital p, SpinOrbital q, int dim) {
  const SlaterState s(p, q);  // validates p != q, canonicalizes
  return from_slater(s, dim);
}

TwoFermionState TwoFermionState::from_slater(const SlaterState& s, int dim) {
  const int needed = s.hi().index() + 1;
  int d = dim < 0 ? needed + (needed % 2) : dim;
  if (d % 2 != 0 || d < needed)
    throw std::invalid_argument("from_slater: dimension must be even and hold both orbitals");
  Eigen::MatrixXcd w = Eigen::MatrixXcd::Zero(d, d);
  const double amp = 1.0 / std::sqrt(2.0);
  w(s.lo().index(), s.hi().index()) = amp;
  w(s.hi().index(), s.lo().index()) = -amp;
  return TwoFermionState(std::move(w));
}

TwoFermionState TwoFermionState::from_matrix(Eigen::MatrixXcd w) {
  if (w.rows() != w.cols() || w.rows() < 2 || w.rows() % 2 != 0)
    throw std::invalid_argument("from_matrix: w must be square with even dimension >= 2");
  const double scale = std::max(1.0, w.cwiseAbs().maxCoeff());
  const double sym = (w + w.transpose()).cwiseAbs().maxCoeff();
  if (sym > 1e-10 * scale)
    throw std::invalid_argument("from_matrix: coefficient matrix is not antisymmetric");
  w = 0.5 * (w - w.transpose().eval());
  const double norm = w.norm();
  if (norm < 1e-14)
    throw std::invalid_argument("from_matrix: zero state");
  w /= norm;
  return TwoFermionState(std::move(w));
}

TwoFermionState TwoFermionState::superpose(
    const std::vector<std::pair<std::complex<double>, TwoFermionState>>& terms) {
  if (terms.empty()) throw std::invalid_argument("superpose: no terms");
  bool any = false;
  int d = 0;
  for (const auto& [c, s] : terms) {
    if (std::abs(c) > 0.0) any = true;
    d = std::max(d, s.dim());
  }
  if (!any) throw std::invalid_argument("superpose: at least one nonzero coefficient required");
  Eigen::MatrixXcd w = Eigen::MatrixXcd::Zero(d, d);
  for (const auto& [c, s] : terms)
    w.topLeftCorner(s.dim(), s.dim()) += c * s.w();
  if (w.norm() < 1e-14)
    throw std::invalid_argument("superpose: combination cancels to the zero state");
  return from_matrix(std::move(w));
}

Eigen::MatrixXcd reduced_density(const TwoFermionState& state) {
  return state.w() * state.w().adjoint();
}

std::vector<double> pair_eigenvalues(const Eigen::VectorXd& eigs) {
  const int d = static_cast<int>(eigs.size());
  if (d % 2 != 0) throw std::invalid_argument("pair_eigenvalues: odd count");
  std::vector<double> lambdas;
  lambdas.reserve(d / 2);
  double sum = 0.0;
  for (int i = 0; i < d; i += 2) {
    double a = eigs[i], b = eigs[i + 1];
    if (a < -kEigClamp || b < -kEigClamp)
      throw ConsistencyError("schmidt_spectrum: rho_r eigenvalue below -1e-12");
    a = std::max(a, 0.0);
    b = std::max(b, 0.0);
    if (std::abs(a - b) > kPairTol)
      throw ConsistencyError(
          "schmidt_spectrum: eigenvalue pairing failure (gap " + std::to_string(a - b) +
          "), antisymmetry numerically corrupted");
    lambdas.push_back(a + b);
    sum += a + b;
  }
  if (std::abs(sum - 1.0) > 1e-10)
    throw ConsistencyError("schmidt_spectrum: coefficients sum to " + std::to_string(sum));
  return lambdas;
}

SchmidtSpectrum schmidt_spectrum(const TwoFermionState& state) {
  return SchmidtSpectrum{pair_eigenvalues(rho_eigenvalues_descending(state))};
}

double linear_entanglement(const TwoFermionState& state) {
  const Eigen::MatrixXcd rho = reduced_density(state);
  const double from_trace = 1.0 - 2.0 * (rho * rho).trace().real();
  const auto lambdas = schmidt_spectrum(state).coefficients;
  double sum_sq = 0.0;
  for (double l : lambdas) sum_sq += l * l;
  const double from_schmidt = 1.0 - sum_sq;
  if (std::abs(from_trace - from_schmidt) > kLinearTol)
    throw ConsistencyError("linear_entanglement: trace and Schmidt routes disagree");
  if (from_trace < -kEigClamp)
    throw ConsistencyError("linear_entanglement: negative value");
  return std::max(from_trace, 0.0);
}

double vn_entanglement(const TwoFermionState& state) {
  const Eigen::VectorXd eigs = rho_eigenvalues_descending(state);
  double s = 0.0;  // 0 ln 0 := 0
  for (int i = 0; i < eigs.size(); ++i) {
    const double mu = std::max(eigs[i], 0.0);
    if (mu > 0.0) s -= mu * std::log(mu);
  }
  const double from_rho = s - std::log(2.0);
  double from_schmidt = 0.0;
  for (double l : pair_eigenvalues(eigs))
    if (l > 0.0) from_schmidt -= l * std::log(l);
  if (std::abs(from_rho - from_schmidt) > kVnTol)
    throw ConsistencyError("vn_entanglement: density and Schmidt routes disagree");
  if (from_rho < -kEigClamp)
    throw ConsistencyError("vn_entanglement: negative value");
  return std::max(from_rho, 0.0);
}

double slater_span_bound(int m_tilde) {
  if (m_tilde < 2)
    throw std::invalid_argument("slater_span_bound: need at least two spin-orbitals");
  return std::log(static_cast<double>(m_tilde / 2));
}

LevelBounds level_bounds(int n_quanta) {
  if (n_quanta < 0) throw std::invalid_argument("level_bounds: negative level");
  return {n_quanta / (n_quanta + 1.0), std::log(n_quanta + 1.0)};
}

}  // namespace entpert
