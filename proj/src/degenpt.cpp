#include "entpert/degenpt.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "entpert/errors.hpp"

namespace entpert {

int DegenerateLevel::orbital_dim() const {
  int max_idx = 0;
  for (const auto& s : basis) max_idx = std::max(max_idx, s.hi().index());
  const int d = max_idx + 1;
  return d + d % 2;
}

DegenerateLevel enumerate_level(const SpatialBasis& basis, int n) {
  if (n < 0) throw std::invalid_argument("enumerate_level: negative level");
  if (!basis.harmonic_levels() && n > 1)
    throw std::runtime_error(
        "enumerate_level: for a generic U(x) the level structure depends on the spectrum; "
        "declare the degenerate (n1,n2) pairs explicitly");
  std::vector<std::pair<int, int>> pairs;
  if (n >= 1)
    for (int n1 = (n - 1) / 2; n1 >= 0; --n1) pairs.emplace_back(n1, n - n1);
  if (n % 2 == 0) pairs.emplace_back(n / 2, n / 2);
  return enumerate_level(basis, n, pairs);
}

DegenerateLevel enumerate_level(const SpatialBasis& basis, int label,
                                const std::vector<std::pair<int, int>>& degenerate_pairs,
                                double energy_tol) {
  if (degenerate_pairs.empty())
    throw std::invalid_argument("enumerate_level: no degenerate pairs given");

  DegenerateLevel level;
  level.n_quanta = label;
  std::vector<double> energies;
  for (auto [n1, n2] : degenerate_pairs) {
    if (n1 > n2) std::swap(n1, n2);
    if (n1 < 0 || n2 > basis.max_mode())
      throw std::invalid_argument("enumerate_level: mode pair (" + std::to_string(n1) + "," +
                                  std::to_string(n2) + ") outside the basis");
    const double e = basis.eigenvalue(n1) + basis.eigenvalue(n2);
    if (n1 < n2) {
      for (Spin s1 : {Spin::Up, Spin::Down})
        for (Spin s2 : {Spin::Up, Spin::Down}) {
          level.basis.emplace_back(SpinOrbital{n1, s1}, SpinOrbital{n2, s2});
          energies.push_back(e);
        }
    } else {
      level.basis.emplace_back(SpinOrbital{n1, Spin::Up}, SpinOrbital{n1, Spin::Down});
      energies.push_back(e);
    }
  }

  const std::set<SlaterState> unique(level.basis.begin(), level.basis.end());
  if (unique.size() != level.basis.size())
    throw std::invalid_argument("enumerate_level: duplicate Slater determinants in level");

  double mean = 0.0;
  for (double e : energies) mean += e;
  mean /= static_cast<double>(energies.size());
  for (double e : energies)
    if (std::abs(e - mean) > energy_tol * std::max(1.0, std::abs(mean)))
      throw std::runtime_error("enumerate_level: members are not degenerate within tolerance");

  level.degeneracy = static_cast<int>(level.basis.size());
  level.unperturbed_energy = mean;
  return level;
}

HTilde build_htilde(const DegenerateLevel& level, const TwoBodyEngine& engine) {
  const int m = level.degeneracy;
  HTilde ht;
  ht.matrix.resize(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j) {
      const double v = engine.slater_element(level.basis[i], level.basis[j]);
      ht.matrix(i, j) = v;
      ht.matrix(j, i) = v;
    }
  ht.basis_map = Eigen::MatrixXd::Identity(m, m);
  ht.provenance =
      "level N=" + std::to_string(level.n_quanta) + ", " + engine.interaction().describe();
  return ht;
}

//==============================================================================

double sz_element(const SlaterState& a, const SlaterState& b) {
  return a == b ? static_cast<double>(a.total_sz()) : 0.0;
}

double parity_element(const SlaterState& a, const SlaterState& b) {
  if (a != b) return 0.0;
  return (a.lo().mode + a.hi().mode) % 2 == 0 ? 1.0 : -1.0;
}

double s2_element(const SlaterState& a, const SlaterState& b) {
  if (a.lo().mode != b.lo().mode || a.hi().mode != b.hi().mode) return 0.0;
  if (a.equal_modes()) return 0.0;  // forced spin singlet
  const bool a_parallel = a.lo().spin == a.hi().spin;
  const bool b_parallel = b.lo().spin == b.hi().spin;
  if (a == b) return a_parallel ? 2.0 : 1.0;
  if (!a_parallel && !b_parallel) return 1.0;  // (+,-) <-> (-,+)
  return 0.0;
}

Eigen::MatrixXd operator_matrix(SlaterOperatorElement element,
                                const std::vector<SlaterState>& basis) {
  const int m = static_cast<int>(basis.size());
  Eigen::MatrixXd op(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) op(i, j) = element(basis[i], basis[j]);
  return op;
}

std::vector<bool> symmetry_adapt(Eigen::Ref<Eigen::MatrixXd> columns,
                                 const std::vector<const Eigen::MatrixXd*>& ops,
                                 double eigenvalue_gap) {
  const int k_total = static_cast<int>(columns.cols());
  std::vector<bool> residual(k_total, false);
  std::vector<std::pair<int, int>> blocks = {{0, k_total}};
  for (const auto* op : ops) {
    std::vector<std::pair<int, int>> next;
    for (const auto& [bb, be] : blocks) {
      const int k = be - bb;
      if (k == 1) {
        next.emplace_back(bb, be);
        continue;
      }
      const Eigen::MatrixXd sub = columns.middleCols(bb, k);
      const Eigen::MatrixXd proj = sub.transpose() * (*op) * sub;
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> pes(0.5 * (proj + proj.transpose()));
      columns.middleCols(bb, k) = sub * pes.eigenvectors();
      const Eigen::VectorXd ov = pes.eigenvalues();
      int s = bb;
      for (int i = 1; i <= k; ++i)
        if (i == k || ov[i] - ov[i - 1] > eigenvalue_gap) {
          next.emplace_back(s, bb + i);
          s = bb + i;
        }
    }
    blocks = next;
  }
  for (const auto& [bb, be] : blocks)
    if (be - bb > 1)
      for (int i = bb; i < be; ++i) residual[i] = true;
  return residual;
}

TwoFermionState level_state(const DegenerateLevel& level, const Eigen::VectorXd& coefficients) {
  if (coefficients.size() != level.degeneracy)
    throw std::invalid_argument("level_state: coefficient count does not match degeneracy");
  const int d = level.orbital_dim();
  std::vector<std::pair<std::complex<double>, TwoFermionState>> terms;
  terms.reserve(level.basis.size());
  for (int i = 0; i < level.degeneracy; ++i)
    terms.emplace_back(coefficients[i], TwoFermionState::from_slater(level.basis[i], d));
  return TwoFermionState::superpose(terms);
}

//==============================================================================

namespace {

struct LabelReadout {
  std::optional<int> sz, total_s, parity;
};

LabelReadout read_labels(const Eigen::VectorXd& c, const Eigen::MatrixXd& op_sz,
                         const Eigen::MatrixXd& op_s2, const Eigen::MatrixXd* op_parity) {
  constexpr double kVarTol = 1e-9;
  LabelReadout out;
  const auto expectation = [&c](const Eigen::MatrixXd& op, double& mean, double& var) {
    const Eigen::VectorXd w = op * c;
    mean = c.dot(w);
    var = w.dot(w) - mean * mean;
  };
  double mean = 0, var = 0;
  expectation(op_sz, mean, var);
  if (std::abs(var) < kVarTol) out.sz = static_cast<int>(std::lround(mean));
  expectation(op_s2, mean, var);
  if (std::abs(var) < kVarTol) {
    const double s2 = std::max(mean, 0.0);  // S(S+1)
    out.total_s = static_cast<int>(std::lround(0.5 * (-1.0 + std::sqrt(1.0 + 4.0 * s2))));
  }
  if (op_parity) {
    expectation(*op_parity, mean, var);
    if (std::abs(var) < kVarTol) out.parity = static_cast<int>(std::lround(mean));
  }
  return out;
}

}  // namespace

std::vector<ZerothOrderState> zeroth_order_states(const HTilde& htilde,
                                                  const DegenerateLevel& level,
                                                  const SpatialBasis& basis) {
  const int m = level.degeneracy;
  if (htilde.matrix.rows() != m || htilde.matrix.cols() != m)
    throw std::invalid_argument("zeroth_order_states: htilde size does not match level");
  if (htilde.basis_map.rows() != m || htilde.basis_map.cols() != m)
    throw std::invalid_argument("zeroth_order_states: basis_map size does not match level");
  const double scale = std::max(1.0, htilde.matrix.cwiseAbs().maxCoeff());
  if ((htilde.matrix - htilde.matrix.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw std::invalid_argument("zeroth_order_states: htilde is not symmetric");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
      0.5 * (htilde.matrix + htilde.matrix.transpose()));
  const Eigen::VectorXd vals = es.eigenvalues();
  // Work in the level's Slater coordinates from here on.
  Eigen::MatrixXd vecs = htilde.basis_map * es.eigenvectors();

  // Degenerate clusters: gaps at 1e-9 relative to the spectral range, floored
  // against eigensolver noise when the whole spectrum is one value.
  const double range = vals[m - 1] - vals[0];
  const double abs_max = std::max(std::abs(vals[0]), std::abs(vals[m - 1]));
  const double gap_thr = std::max(1e-9 * range, 1e-14 * abs_max);
  std::vector<std::pair<int, int>> clusters;
  int begin = 0;
  for (int i = 1; i <= m; ++i)
    if (i == m || vals[i] - vals[i - 1] > gap_thr) {
      clusters.emplace_back(begin, i);
      begin = i;
    }

  const Eigen::MatrixXd op_sz = operator_matrix(sz_element, level.basis);
  const Eigen::MatrixXd op_s2 = operator_matrix(s2_element, level.basis);
  Eigen::MatrixXd op_parity;
  std::vector<const Eigen::MatrixXd*> tie_break_ops = {&op_sz, &op_s2};
  if (basis.parity_definite()) {
    op_parity = operator_matrix(parity_element, level.basis);
    tie_break_ops.push_back(&op_parity);
  }

  std::vector<double> shift(m);
  std::vector<bool> residual(m, false);

  for (const auto& [cb, ce] : clusters) {
    double mean = 0.0;
    for (int i = cb; i < ce; ++i) mean += vals[i];
    mean /= (ce - cb);
    for (int i = cb; i < ce; ++i) shift[i] = mean;

    if (ce - cb == 1) continue;
    // Sequential re-diagonalization against S_z, S^2, parity.
    const std::vector<bool> res =
        symmetry_adapt(vecs.middleCols(cb, ce - cb), tie_break_ops);
    for (int i = cb; i < ce; ++i) residual[i] = res[i - cb];
  }

  std::vector<ZerothOrderState> states;
  states.reserve(m);
  for (int j = 0; j < m; ++j) {
    Eigen::VectorXd c = vecs.col(j);
    int idx = 0;
    c.cwiseAbs().maxCoeff(&idx);
    if (c[idx] < 0) c = -c;

    ZerothOrderState st;
    const auto labels =
        read_labels(c, op_sz, op_s2, basis.parity_definite() ? &op_parity : nullptr);
    st.sz = labels.sz;
    st.total_s = labels.total_s;
    st.parity = labels.parity;
    st.energy_shift = shift[j];
    st.residual_degenerate = residual[j];

    const TwoFermionState psi = level_state(level, c);
    st.eps_l = linear_entanglement(psi);
    st.eps_vn = vn_entanglement(psi);
    st.coefficients = std::move(c);
    states.push_back(std::move(st));
  }

  std::stable_sort(states.begin(), states.end(),
                   [](const ZerothOrderState& x, const ZerothOrderState& y) {
                     if (x.energy_shift != y.energy_shift)
                       return x.energy_shift < y.energy_shift;
                     return x.sz.value_or(99) < y.sz.value_or(99);
                   });
  return states;
}

//==============================================================================

FiveLevelClosedForm closed_form_r(double b, double c, double d, double e) {
  FiveLevelClosedForm f;
  f.b = b;
  f.c = c;
  f.d = d;
  f.e = e;
  f.c1 = -b * c + c * c + 2.0 * d * d + c * e;
  f.c2 = d * (b + 3.0 * c - e);
  const double arg =
      b * b + c * c + 8.0 * d * d + 2.0 * c * e + e * e - 2.0 * b * (c + e);
  if (arg < -1e-12)
    throw ConsistencyError("closed_form_r: negative discriminant " + std::to_string(arg));
  f.big_r = std::sqrt(std::max(arg, 0.0));

  const double den1 = f.c2 + d * f.big_r;
  const double den2 = f.c2 - d * f.big_r;
  if (std::abs(den1) < 1e-12 || std::abs(den2) < 1e-12)
    throw SingularClosedForm(
        "closed_form_r: |C2 +- d R| below 1e-12; d -> 0 decouples the equal-mode singlet, "
        "fall back to direct eigendecomposition");
  f.r1 = (f.c1 + c * f.big_r) / den1;
  f.r2 = (f.c1 - c * f.big_r) / den2;
  f.shift1 = e - 2.0 * d * f.r1;
  f.shift2 = e - 2.0 * d * f.r2;
  return f;
}

FiveLevelClosedForm closed_form_from_htilde(const HTilde& htilde) {
  const Eigen::MatrixXd& h = htilde.matrix;
  if (h.rows() != 5 || h.cols() != 5)
    throw std::invalid_argument("closed_form_from_htilde: need the 5x5 level matrix");
  const double tol = 1e-10 * std::max(1.0, h.cwiseAbs().maxCoeff());
  const auto expect_zero = [&](int i, int j) {
    if (std::abs(h(i, j)) > tol)
      throw std::invalid_argument("closed_form_from_htilde: matrix does not follow the "
                                  "five-fold level pattern at (" +
                                  std::to_string(i) + "," + std::to_string(j) + ")");
  };
  for (int j = 1; j < 5; ++j) expect_zero(0, j);
  expect_zero(1, 3);
  expect_zero(2, 3);
  expect_zero(3, 4);
  if (std::abs(h(0, 0) - h(3, 3)) > tol || std::abs(h(1, 1) - h(2, 2)) > tol ||
      std::abs(h(1, 4) + h(2, 4)) > tol)
    throw std::invalid_argument("closed_form_from_htilde: pattern symmetry violated");

  FiveLevelClosedForm f = closed_form_r(h(1, 1), h(1, 2), h(1, 4), h(4, 4));
  f.a = h(0, 0);
  return f;
}

std::pair<double, double> entanglement_of_r(double r) {
  if (r == 0.0) return {0.0, 0.0};
  // The r and -r branch states are spin-flip related, so both measures are
  // even in r; the log term therefore carries |r|.
  const double r2 = r * r;
  const double den = 2.0 * r2 + 1.0;
  const double eps_l = 1.0 - (2.0 * r2 * r2 + 1.0) / (den * den);
  const double eps_vn = std::log(den) - (4.0 * r2 / den) * std::log(std::abs(r));
  return {eps_l, eps_vn};
}

}  // namespace entpert
