#include "entpert/ci_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "entpert/errors.hpp"

namespace entpert {

CiBasis CiBasis::build(int n_max) {
  if (n_max < 0) throw std::invalid_argument("CiBasis: negative mode cutoff");
  CiBasis basis;
  basis.n_max = n_max;
  const int d = 2 * (n_max + 1);
  basis.states.reserve(d * (d - 1) / 2);
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j)
      basis.states.emplace_back(orbital_from_index(i), orbital_from_index(j));
  return basis;
}

int CiBasis::index_of(const SlaterState& s) const {
  const int d = 2 * (n_max + 1);
  const int i = s.lo().index();
  const int j = s.hi().index();
  if (j >= d) return -1;
  return i * d - i * (i + 1) / 2 + (j - i - 1);
}

Eigen::MatrixXd build_full_hamiltonian(const CiBasis& basis, const TwoBodyEngine& engine,
                                       double lambda) {
  if (lambda < 0) throw std::invalid_argument("build_full_hamiltonian: negative lambda");
  if (basis.n_max > engine.basis().max_mode())
    throw std::invalid_argument("build_full_hamiltonian: CI cutoff exceeds the basis");
  const int n = basis.size();
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    const SlaterState& si = basis.states[i];
    h(i, i) = engine.basis().eigenvalue(si.lo().mode) + engine.basis().eigenvalue(si.hi().mode);
    if (lambda == 0.0) continue;
    for (int j = i; j < n; ++j) {
      const SlaterState& sj = basis.states[j];
      if (si.total_sz() != sj.total_sz()) continue;  // structural zero
      const double v = lambda * engine.slater_element(si, sj);
      h(i, j) += v;
      if (j != i) h(j, i) += v;
    }
  }
  return h;
}

//==============================================================================

namespace {

// Antisymmetric coefficient matrix of a CI vector over 2(n_max+1) orbitals.
TwoFermionState ci_vector_state(const CiBasis& basis, const Eigen::VectorXd& v) {
  const int d = 2 * (basis.n_max + 1);
  Eigen::MatrixXcd w = Eigen::MatrixXcd::Zero(d, d);
  const double amp = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < basis.size(); ++i) {
    const SlaterState& s = basis.states[i];
    w(s.lo().index(), s.hi().index()) += v[i] * amp;
    w(s.hi().index(), s.lo().index()) -= v[i] * amp;
  }
  return TwoFermionState::from_matrix(std::move(w));
}

}  // namespace

SweepResult lambda_sweep(const TwoBodyEngine& engine, int target_n,
                         std::vector<double> lambdas, int n_max) {
  for (double l : lambdas)
    if (!(l > 0.0))
      throw std::invalid_argument(
          "lambda_sweep: tracking degenerates at lambda = 0, all lambdas must be positive");
  std::sort(lambdas.begin(), lambdas.end(), std::greater<>());
  lambdas.erase(std::unique(lambdas.begin(), lambdas.end()), lambdas.end());
  if (lambdas.empty()) throw std::invalid_argument("lambda_sweep: no lambda values");

  SweepResult result;
  result.lambdas = lambdas;
  result.level = enumerate_level(engine.basis(), target_n);
  const HTilde ht = build_htilde(result.level, engine);
  result.predictions = zeroth_order_states(ht, result.level, engine.basis());

  const CiBasis ci = CiBasis::build(n_max);
  result.ci_dim = ci.size();
  const int m = result.level.degeneracy;

  std::vector<int> level_idx;
  for (const auto& s : result.level.basis) {
    const int idx = ci.index_of(s);
    if (idx < 0)
      throw std::invalid_argument("lambda_sweep: level determinant outside CI truncation");
    level_idx.push_back(idx);
  }

  // Predictions embedded as CI coordinate vectors.
  Eigen::MatrixXd preds = Eigen::MatrixXd::Zero(ci.size(), m);
  for (int k = 0; k < m; ++k)
    for (int j = 0; j < m; ++j)
      preds(level_idx[j], k) = result.predictions[k].coefficients[j];

  const Eigen::MatrixXd op_sz = operator_matrix(sz_element, ci.states);
  const Eigen::MatrixXd op_s2 = operator_matrix(s2_element, ci.states);
  Eigen::MatrixXd op_parity;
  std::vector<const Eigen::MatrixXd*> ops = {&op_sz, &op_s2};
  if (engine.basis().parity_definite()) {
    op_parity = operator_matrix(parity_element, ci.states);
    ops.push_back(&op_parity);
  }

  for (double lambda : lambdas) {
    const Eigen::MatrixXd h = build_full_hamiltonian(ci, engine, lambda);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
    if (es.info() != Eigen::Success)
      throw std::runtime_error("lambda_sweep: CI eigensolver failed");
    const Eigen::VectorXd& vals = es.eigenvalues();
    const Eigen::MatrixXd& vecs = es.eigenvectors();

    // Adiabatic selection by overlap with the level's Slater span.
    Eigen::VectorXd weight(ci.size());
    for (int j = 0; j < ci.size(); ++j) {
      double wsum = 0.0;
      for (int idx : level_idx) wsum += vecs(idx, j) * vecs(idx, j);
      weight[j] = wsum;
    }
    std::vector<int> order(ci.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int x, int y) { return weight[x] > weight[y]; });
    if (weight[order[m - 1]] < 0.5 ||
        (ci.size() > m &&
         weight[order[m - 1]] - weight[order[m]] < 0.1 * weight[order[m - 1]])) {
      std::ostringstream os;
      os << "lambda_sweep: level-crossing detected at lambda = " << lambda
         << " (subspace overlap tracking ambiguous)";
      throw TrackingError(os.str());
    }
    std::vector<int> selected(order.begin(), order.begin() + m);
    std::sort(selected.begin(), selected.end());

    // Spectral separation margin: gap to foreign states vs first-order spread.
    const double sel_min = vals[selected.front()];
    const double sel_max = vals[selected.back()];
    double foreign_gap = std::numeric_limits<double>::infinity();
    for (int j = 0; j < ci.size(); ++j) {
      if (std::binary_search(selected.begin(), selected.end(), j)) continue;
      const double v = vals[j];
      const double dist = v < sel_min ? sel_min - v : (v > sel_max ? v - sel_max : 0.0);
      foreign_gap = std::min(foreign_gap, dist);
    }
    if (foreign_gap <= 10.0 * (sel_max - sel_min)) {
      std::ostringstream os;
      os << "lambda = " << lambda << ": spectral gap to neighboring levels (" << foreign_gap
         << ") is below 10x the level's first-order spread (" << sel_max - sel_min << ")";
      result.warnings.push_back(os.str());
    }

    // Gather selected columns; resolve exact (spin) degeneracies with the
    // same rule the perturbative side uses, so entanglement is well defined.
    Eigen::MatrixXd sel_vecs(ci.size(), m);
    Eigen::VectorXd sel_vals(m);
    for (int k = 0; k < m; ++k) {
      sel_vecs.col(k) = vecs.col(selected[k]);
      sel_vals[k] = vals[selected[k]];
    }
    const double range = vals[ci.size() - 1] - vals[0];
    const double gap_thr = std::max(1e-9 * range, 1e-14);
    int begin = 0;
    for (int i = 1; i <= m; ++i) {
      if (i == m || sel_vals[i] - sel_vals[i - 1] > gap_thr) {
        if (i - begin > 1) {
          symmetry_adapt(sel_vecs.middleCols(begin, i - begin), ops);
          const double mean = sel_vals.segment(begin, i - begin).mean();
          for (int t = begin; t < i; ++t) sel_vals[t] = mean;
        }
        begin = i;
      }
    }

    // Assign resolved states to predictions, greedily by overlap.
    Eigen::MatrixXd omat = (preds.transpose() * sel_vecs).cwiseAbs();
    std::vector<int> assigned(m, -1);
    std::vector<bool> used(m, false);
    for (int pass = 0; pass < m; ++pass) {
      int bi = -1, bj = -1;
      double best = -1.0;
      for (int k = 0; k < m; ++k) {
        if (assigned[k] >= 0) continue;
        for (int j = 0; j < m; ++j) {
          if (used[j]) continue;
          if (omat(k, j) > best) {
            best = omat(k, j);
            bi = k;
            bj = j;
          }
        }
      }
      if (best < 0.5) {
        std::ostringstream os;
        os << "lambda_sweep: overlap tracking ambiguous at lambda = " << lambda
           << " (best remaining overlap " << best << ")";
        throw TrackingError(os.str());
      }
      assigned[bi] = bj;
      used[bj] = true;
    }

    std::vector<SweepStateRecord> row(m);
    for (int k = 0; k < m; ++k) {
      const int j = assigned[k];
      SweepStateRecord rec;
      rec.energy = sel_vals[j];
      const TwoFermionState psi = ci_vector_state(ci, sel_vecs.col(j));
      rec.eps_l = linear_entanglement(psi);
      rec.eps_vn = vn_entanglement(psi);
      rec.overlaps = (preds.transpose() * sel_vecs.col(j)).cwiseAbs();
      rec.overlap_max = rec.overlaps.maxCoeff();
      row[k] = std::move(rec);
    }
    result.records.push_back(std::move(row));
  }
  return result;
}

std::vector<Extrapolation> extrapolate(const SweepResult& sweep) {
  const int nl = static_cast<int>(sweep.lambdas.size());
  if (nl < 3)
    throw std::invalid_argument("extrapolate: need at least three lambda values");
  const int m = sweep.level.degeneracy;

  // Fit over the three smallest lambdas (the tail of the descending grid).
  std::vector<int> pick = {nl - 3, nl - 2, nl - 1};
  std::vector<Extrapolation> out(m);
  for (int k = 0; k < m; ++k) {
    const auto fit = [&](auto getter, double& intercept, double& slope, bool& poor) {
      double sx = 0, sy = 0, sxx = 0, sxy = 0;
      for (int i : pick) {
        const double x = sweep.lambdas[i];
        const double y = getter(sweep.records[i][k]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
      }
      const int n = 3;
      const double det = n * sxx - sx * sx;
      slope = (n * sxy - sx * sy) / det;
      intercept = (sy - slope * sx) / n;
      double max_resid = 0, ymin = 1e300, ymax = -1e300;
      for (int i : pick) {
        const double y = getter(sweep.records[i][k]);
        max_resid = std::max(max_resid,
                             std::abs(y - (intercept + slope * sweep.lambdas[i])));
        ymin = std::min(ymin, y);
        ymax = std::max(ymax, y);
      }
      poor = max_resid > std::max(1e-6, 0.05 * (ymax - ymin));
    };
    fit([](const SweepStateRecord& r) { return r.eps_l; }, out[k].intercept_l,
        out[k].slope_l, out[k].poor_fit_l);
    fit([](const SweepStateRecord& r) { return r.eps_vn; }, out[k].intercept_vn,
        out[k].slope_vn, out[k].poor_fit_vn);
  }
  return out;
}

}  // namespace entpert
