#pragma once
#include <Eigen/Dense>

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "entpert/entangle.hpp"
#include "entpert/spbasis.hpp"
#include "entpert/twobody.hpp"

namespace entpert {

//! One degenerate unperturbed two-particle level: its Slater basis in the
//! normative order (balanced unequal pairs first, four spin combinations
//! (+,+), (+,-), (-,+), (-,-) each; the equal-mode singlet last).
struct DegenerateLevel {
  int n_quanta = 0;  // n1 + n2 for harmonic spectra, a label otherwise
  int degeneracy = 0;
  double unperturbed_energy = 0.0;
  std::vector<SlaterState> basis;

  //! Spin-orbital dimension spanned by the level (even).
  int orbital_dim() const;
};

//! Level N of a basis with harmonic degeneracy structure (m = 2N+1 for even N,
//! 2N+2 for odd N). For a generic basis only N <= 1 is well defined; higher
//! levels require an explicit degenerate-pair declaration.
DegenerateLevel enumerate_level(const SpatialBasis& basis, int n);

//! Level built from explicitly declared degenerate spatial pairs (n1, n2).
//! All members must share the unperturbed energy within energy_tol.
DegenerateLevel enumerate_level(const SpatialBasis& basis, int label,
                                const std::vector<std::pair<int, int>>& degenerate_pairs,
                                double energy_tol = 1e-10);

//! The m x m matrix <psi_i|H'|psi_j> over a level basis. basis_map carries the
//! expansion of the matrix basis over the level's Slater basis (identity when
//! the matrix was built directly on it).
struct HTilde {
  Eigen::MatrixXd matrix;
  Eigen::MatrixXd basis_map;
  std::string provenance;
};

HTilde build_htilde(const DegenerateLevel& level, const TwoBodyEngine& engine);

//! Zeroth-order eigenstate selected by the interaction in the lambda -> 0
//! limit: coefficients over the level's Slater basis, first-order energy shift
//! per unit lambda, symmetry labels where resolvable, entanglement values.
struct ZerothOrderState {
  Eigen::VectorXd coefficients;
  double energy_shift = 0.0;
  std::optional<int> sz;
  std::optional<int> total_s;  // S, from <S^2> = S(S+1)
  std::optional<int> parity;
  double eps_l = 0.0;
  double eps_vn = 0.0;
  bool residual_degenerate = false;
};

//! Eigenstates of htilde with degenerate eigenvalue clusters re-diagonalized
//! against S_z, then S^2, then spatial parity (parity only when the basis has
//! definite mode parity). Sorted by energy shift, then S_z. Residual
//! degeneracy is flagged, never fatal.
std::vector<ZerothOrderState> zeroth_order_states(const HTilde& htilde,
                                                  const DegenerateLevel& level,
                                                  const SpatialBasis& basis);

//! The antisymmetric two-fermion state with the given coefficients over the
//! level's Slater basis.
TwoFermionState level_state(const DegenerateLevel& level, const Eigen::VectorXd& coefficients);

//! Matrix elements of the symmetry operators between canonical Slater
//! determinants. parity_element assumes mode n has parity (-1)^n.
double sz_element(const SlaterState& a, const SlaterState& b);
double s2_element(const SlaterState& a, const SlaterState& b);
double parity_element(const SlaterState& a, const SlaterState& b);

using SlaterOperatorElement = double (*)(const SlaterState&, const SlaterState&);
Eigen::MatrixXd operator_matrix(SlaterOperatorElement element,
                                const std::vector<SlaterState>& basis);

//! Re-diagonalizes the span of `columns` (orthonormal, all degenerate under
//! the Hamiltonian) against each operator in order, splitting into operator
//! eigenvalue blocks. Returns per-column flags marking blocks that stay
//! larger than one after every operator (residual degeneracy).
std::vector<bool> symmetry_adapt(Eigen::Ref<Eigen::MatrixXd> columns,
                                 const std::vector<const Eigen::MatrixXd*>& ops,
                                 double eigenvalue_gap = 1e-6);

//! Closed-form solution of the five-fold level's singlet branch: the
//! eigenvectors (-r_i, r_i, 1)/sqrt(2 r_i^2 + 1) over (psi2, psi3, psi5).
struct FiveLevelClosedForm {
  double a = 0.0, b = 0.0, c = 0.0, d = 0.0, e = 0.0;
  double c1 = 0.0, c2 = 0.0, big_r = 0.0;
  double r1 = 0.0, r2 = 0.0;
  //! Energy shifts of the two branch states, e - 2 d r_i.
  double shift1 = 0.0, shift2 = 0.0;
};

//! r_i = (C1 +- c R) / (C2 +- d R). Throws SingularClosedForm when either
//! denominator falls below 1e-12 (d -> 0 decouples the equal-mode singlet).
FiveLevelClosedForm closed_form_r(double b, double c, double d, double e);

//! Extracts (a, b, c, d, e) from a 5x5 matrix with the five-fold level's
//! sign pattern, validating the pattern, then applies closed_form_r.
FiveLevelClosedForm closed_form_from_htilde(const HTilde& htilde);

//! (eps_L, eps_vN) of the branch state as a function of r; both 0 at r = 0.
std::pair<double, double> entanglement_of_r(double r);

}  // namespace entpert
