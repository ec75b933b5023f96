#pragma once
#include <Eigen/Dense>

#include <string>
#include <vector>

#include "entpert/degenpt.hpp"
#include "entpert/twobody.hpp"

namespace entpert {

//! Truncated antisymmetric two-particle basis: every Slater determinant with
//! spatial modes <= n_max, in canonical (lexicographic spin-orbital) order.
//! Holds C(2(n_max+1), 2) states.
struct CiBasis {
  int n_max = 0;
  std::vector<SlaterState> states;

  static CiBasis build(int n_max);
  int size() const { return static_cast<int>(states.size()); }
  //! Canonical position of a determinant, -1 when outside the truncation.
  int index_of(const SlaterState& s) const;
};

//! H0 (diagonal sums of single-particle eigenvalues) plus lambda times the
//! interaction matrix over the truncated basis. Symmetric by construction.
Eigen::MatrixXd build_full_hamiltonian(const CiBasis& basis, const TwoBodyEngine& engine,
                                       double lambda);

struct SweepStateRecord {
  double energy = 0.0;
  double eps_l = 0.0;
  double eps_vn = 0.0;
  Eigen::VectorXd overlaps;  // |<ci eigenstate | prediction k>| for every k
  double overlap_max = 0.0;
};

struct SweepResult {
  std::vector<double> lambdas;  // descending
  DegenerateLevel level;
  std::vector<ZerothOrderState> predictions;
  //! records[i][k]: the eigenstate tracked to prediction k at lambdas[i].
  std::vector<std::vector<SweepStateRecord>> records;
  std::vector<std::string> warnings;
  int ci_dim = 0;
};

//! Diagonalizes the full Hamiltonian at every lambda, selects the m
//! eigenstates adiabatically connected to level target_n by maximal overlap
//! with the level's Slater span (exact spin degeneracies resolved with the
//! same S_z / S^2 / parity rule the perturbative module uses), and records
//! entanglement plus overlaps against the zeroth-order predictions.
//! Lambdas must be positive (tracking degenerates at lambda = 0); a thin
//! spectral separation margin (gap <= 10x the level's spread) is recorded as
//! a warning, genuine tracking ambiguity throws TrackingError.
SweepResult lambda_sweep(const TwoBodyEngine& engine, int target_n,
                         std::vector<double> lambdas, int n_max);

struct Extrapolation {
  double intercept_l = 0.0, slope_l = 0.0;
  double intercept_vn = 0.0, slope_vn = 0.0;
  bool poor_fit_l = false, poor_fit_vn = false;
};

//! Linear fit of eps vs lambda over the three smallest lambdas, one result
//! per predicted state. Residuals beyond tolerance set the poor-fit flags.
std::vector<Extrapolation> extrapolate(const SweepResult& sweep);

}  // namespace entpert
