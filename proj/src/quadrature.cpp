#include "entpert/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace entpert {

QuadRule gauss_legendre(int n, double a, double b) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: need at least one node");
  if (!(b > a)) throw std::invalid_argument("gauss_legendre: empty interval");

  QuadRule rule;
  rule.points.resize(n);
  rule.weights.resize(n);

  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const int m = (n + 1) / 2;

  for (int i = 0; i < m; ++i) {
    // Newton iteration on P_n, seeded with the Chebyshev estimate of the root.
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2 * j + 1) * z * p1 - j * p2) / (j + 1);
      }
      pp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    rule.points[i] = mid - half * z;
    rule.points[n - 1 - i] = mid + half * z;
    const double w = 2.0 * half / ((1.0 - z * z) * pp * pp);
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

QuadRule trapezoid(double a, double b, int n) {
  if (n < 2) throw std::invalid_argument("trapezoid: need at least two nodes");
  if (!(b > a)) throw std::invalid_argument("trapezoid: empty interval");
  QuadRule rule;
  rule.points = Eigen::VectorXd::LinSpaced(n, a, b);
  const double h = (b - a) / (n - 1);
  rule.weights = Eigen::VectorXd::Constant(n, h);
  rule.weights[0] = 0.5 * h;
  rule.weights[n - 1] = 0.5 * h;
  return rule;
}

}  // namespace entpert
