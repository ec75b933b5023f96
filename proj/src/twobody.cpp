#include "entpert/twobody.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

namespace entpert {

InteractionSpec InteractionSpec::delta() { return InteractionSpec{}; }

InteractionSpec InteractionSpec::harmonic(double omega) {
  if (!(omega > 0)) throw std::invalid_argument("interaction harmonic: omega must be positive");
  InteractionSpec s;
  s.kind = Kind::Harmonic;
  s.omega = omega;
  return s;
}

InteractionSpec InteractionSpec::gaussian(double amplitude, double width) {
  if (!(width > 0)) throw std::invalid_argument("interaction gaussian: width must be positive");
  InteractionSpec s;
  s.kind = Kind::Gaussian;
  s.amplitude = amplitude;
  s.width = width;
  return s;
}

InteractionSpec InteractionSpec::tabulated(Eigen::VectorXd u, Eigen::VectorXd v) {
  const int n = static_cast<int>(u.size());
  if (n < 3 || v.size() != n)
    throw std::invalid_argument("interaction tabulated: need matching u, V columns (>= 3 rows)");
  const double h = u[1] - u[0];
  if (!(h > 0)) throw std::invalid_argument("interaction tabulated: u-grid must ascend");
  for (int i = 1; i + 1 < n; ++i)
    if (std::abs((u[i + 1] - u[i]) - h) > 1e-9 * std::abs(h))
      throw std::invalid_argument("interaction tabulated: u-grid not uniform");
  if (std::abs(u[0] + u[n - 1]) > 1e-9 * std::abs(h))
    throw std::invalid_argument("interaction tabulated: u-grid not symmetric about 0");
  for (int i = 0; i < n / 2; ++i)
    if (std::abs(v[i] - v[n - 1 - i]) > 1e-10)
      throw std::invalid_argument("interaction tabulated: V is not even, |V(u)-V(-u)| = " +
                                  std::to_string(std::abs(v[i] - v[n - 1 - i])));
  InteractionSpec s;
  s.kind = Kind::Tabulated;
  s.u_grid = std::move(u);
  s.v_samples = std::move(v);
  return s;
}

double InteractionSpec::evaluate(double u) const {
  switch (kind) {
    case Kind::Delta:
      throw std::invalid_argument("delta interaction has no pointwise value");
    case Kind::Harmonic:
      return 0.5 * omega * omega * u * u;
    case Kind::Gaussian:
      return amplitude * std::exp(-u * u / (2.0 * width * width));
    case Kind::Tabulated: {
      const int n = static_cast<int>(u_grid.size());
      if (u < u_grid[0] || u > u_grid[n - 1]) return 0.0;
      const double h = u_grid[1] - u_grid[0];
      const int i = std::min(n - 2, static_cast<int>((u - u_grid[0]) / h));
      const double t = (u - u_grid[i]) / h;
      return (1.0 - t) * v_samples[i] + t * v_samples[i + 1];
    }
  }
  return 0.0;
}

std::string InteractionSpec::describe() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::Delta:
      os << "delta (V = 1/2 delta(x1-x2))";
      break;
    case Kind::Harmonic:
      os << "harmonic (V = 1/2 * " << omega << "^2 (x1-x2)^2)";
      break;
    case Kind::Gaussian:
      os << "gaussian (A = " << amplitude << ", s = " << width << ")";
      break;
    case Kind::Tabulated:
      os << "tabulated (" << u_grid.size() << " samples, |u| <= " << u_grid[u_grid.size() - 1]
         << ")";
      break;
  }
  return os.str();
}

//==============================================================================

namespace {

// Canonical quartet under particle relabeling (b,a,d,c) and hermiticity
// (c,d,a,b): the lexicographic minimum keys the cache.
std::uint64_t quartet_key(int a, int b, int c, int d) {
  const auto pack = [](int p, int q, int r, int s) {
    return (((static_cast<std::uint64_t>(p) * 1024 + q) * 1024 + r) * 1024 + s);
  };
  std::uint64_t k = pack(a, b, c, d);
  k = std::min(k, pack(b, a, d, c));
  k = std::min(k, pack(c, d, a, b));
  k = std::min(k, pack(d, c, b, a));
  return k;
}

void unpack_key(std::uint64_t k, int& a, int& b, int& c, int& d) {
  d = static_cast<int>(k % 1024);
  k /= 1024;
  c = static_cast<int>(k % 1024);
  k /= 1024;
  b = static_cast<int>(k % 1024);
  a = static_cast<int>(k / 1024);
}

bool quad_is_uniform(const QuadRule& q) {
  const int n = q.size();
  if (n < 3) return false;
  const double h = q.points[1] - q.points[0];
  for (int i = 1; i + 1 < n; ++i)
    if (std::abs((q.points[i + 1] - q.points[i]) - h) > 1e-12 * std::abs(h)) return false;
  return true;
}

}  // namespace

std::size_t TwoBodyEngine::default_cache_limit() {
  if (const char* env = std::getenv("ENTPERT_CACHE_SIZE")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return std::size_t{1} << 20;
}

TwoBodyEngine::TwoBodyEngine(const SpatialBasis& basis, InteractionSpec interaction,
                             std::size_t cache_limit)
    : basis_(basis), interaction_(std::move(interaction)), cache_limit_(cache_limit) {
  const auto* harmonic = dynamic_cast<const HarmonicBasis*>(&basis_);
  analytic_harmonic_ = harmonic && interaction_.kind == InteractionSpec::Kind::Harmonic;
  uniform_quad_ = quad_is_uniform(basis_.quad());

  if (interaction_.kind != InteractionSpec::Kind::Delta) {
    const QuadRule& q = basis_.quad();
    const int n = q.size();
    if (uniform_quad_) {
      const double h = q.points[1] - q.points[0];
      v_of_offset_.resize(2 * n - 1);
      for (int k = -(n - 1); k <= n - 1; ++k)
        v_of_offset_[k + n - 1] = interaction_.evaluate(k * h);
    } else {
      kernel_.resize(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          kernel_(i, j) = q.weights[i] * q.weights[j] *
                          interaction_.evaluate(q.points[i] - q.points[j]);
    }
    if (interaction_.kind == InteractionSpec::Kind::Tabulated) {
      const double extent = q.points[n - 1] - q.points[0];
      const double u_max = interaction_.u_grid[interaction_.u_grid.size() - 1];
      truncated_table_ = u_max < extent * (1.0 - 1e-12);
    }
  }
}

std::vector<std::string> TwoBodyEngine::warnings() const {
  std::lock_guard lock(mutex_);
  return warnings_;
}

double TwoBodyEngine::spatial_integral(int a, int b, int c, int d) const {
  for (int m : {a, b, c, d})
    if (m < 0 || m > basis_.max_mode())
      throw std::invalid_argument("spatial_integral: mode " + std::to_string(m) +
                                  " not available in basis");
  const std::uint64_t key = quartet_key(a, b, c, d);
  {
    std::lock_guard lock(mutex_);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  }
  int ka, kb, kc, kd;
  unpack_key(key, ka, kb, kc, kd);
  const double value = compute(ka, kb, kc, kd);
  {
    std::lock_guard lock(mutex_);
    if (cache_.size() < cache_limit_) cache_.emplace(key, value);
  }
  return value;
}

double TwoBodyEngine::compute(int a, int b, int c, int d) const {
  switch (interaction_.kind) {
    case InteractionSpec::Kind::Delta: {
      // (1/2) integral of phi_a phi_b phi_c phi_d over the reference quadrature.
      const QuadRule& q = basis_.quad();
      const Eigen::ArrayXd prod = basis_.mode_on_quad(a).array() *
                                  basis_.mode_on_quad(b).array() *
                                  basis_.mode_on_quad(c).array() *
                                  basis_.mode_on_quad(d).array();
      return 0.5 * (q.weights.array() * prod).sum();
    }
    case InteractionSpec::Kind::Harmonic:
      if (analytic_harmonic_) {
        const auto& hb = static_cast<const HarmonicBasis&>(basis_);
        const double w2 = interaction_.omega * interaction_.omega;
        const double x2_part = (b == d ? hb.x2_element(a, c) : 0.0) +
                               (a == c ? hb.x2_element(b, d) : 0.0);
        return 0.5 * w2 * (x2_part - 2.0 * hb.x_element(a, c) * hb.x_element(b, d));
      }
      return quad2d(a, b, c, d);
    case InteractionSpec::Kind::Gaussian:
    case InteractionSpec::Kind::Tabulated:
      return quad2d(a, b, c, d);
  }
  return 0.0;
}

double TwoBodyEngine::spatial_integral_quadrature(int a, int b, int c, int d) const {
  if (interaction_.kind == InteractionSpec::Kind::Delta)
    throw std::invalid_argument("quadrature route undefined for the delta kind");
  for (int m : {a, b, c, d})
    if (m < 0 || m > basis_.max_mode())
      throw std::invalid_argument("spatial_integral_quadrature: mode out of range");
  return quad2d(a, b, c, d);
}

double TwoBodyEngine::quad2d(int a, int b, int c, int d) const {
  const QuadRule& q = basis_.quad();
  const int n = q.size();
  const Eigen::VectorXd lhs = basis_.mode_on_quad(a).cwiseProduct(basis_.mode_on_quad(c));
  const Eigen::VectorXd rhs = basis_.mode_on_quad(b).cwiseProduct(basis_.mode_on_quad(d));

  double value = 0.0;
  if (uniform_quad_) {
    const Eigen::VectorXd wl = q.weights.cwiseProduct(lhs);
    const Eigen::VectorXd wr = q.weights.cwiseProduct(rhs);
    for (int i = 0; i < n; ++i) {
      // v_of_offset_[i - j + n - 1] = V(x_i - x_j)
      value += wl[i] * wr.dot(v_of_offset_.segment(i, n).reverse());
    }
  } else {
    value = lhs.transpose() * kernel_ * rhs;
  }

  if (truncated_table_) {
    const double u_max = interaction_.u_grid[interaction_.u_grid.size() - 1];
    double tail = 0.0;
    for (int i = 0; i < n; ++i) {
      double row = 0.0;
      for (int j = 0; j < n; ++j)
        if (std::abs(q.points[i] - q.points[j]) > u_max)
          row += q.weights[j] * std::abs(rhs[j]);
      tail += q.weights[i] * std::abs(lhs[i]) * row;
    }
    std::ostringstream os;
    os << "tabulated V support (|u| <= " << u_max << ") narrower than basis extent; quartet ("
       << a << "," << b << "," << c << "," << d << ") neglects tail mass ~ " << tail;
    std::lock_guard lock(mutex_);
    warnings_.push_back(os.str());
  }
  return value;
}

double TwoBodyEngine::slater_element(const SlaterState& bra, const SlaterState& ket) const {
  const SpinOrbital &p = bra.lo(), &q = bra.hi(), &r = ket.lo(), &s = ket.hi();
  // Spin selection first: elements between different-S_z determinants vanish
  // structurally, no quadrature involved.
  double value = 0.0;
  if (p.spin == r.spin && q.spin == s.spin)
    value += spatial_integral(p.mode, q.mode, r.mode, s.mode);
  if (p.spin == s.spin && q.spin == r.spin)
    value -= spatial_integral(p.mode, q.mode, s.mode, r.mode);
  return value;
}

}  // namespace entpert
