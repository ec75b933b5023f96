#pragma once
#include <Eigen/Dense>

namespace entpert {

//! A 1D quadrature rule: sum_i weights[i] * f(points[i]).
struct QuadRule {
  Eigen::VectorXd points;
  Eigen::VectorXd weights;
  int size() const { return static_cast<int>(points.size()); }
};

//! n-point Gauss-Legendre rule on [a, b] (exact for polynomials of degree 2n-1).
QuadRule gauss_legendre(int n, double a, double b);

//! Trapezoidal rule on the uniform grid with n nodes spanning [a, b].
QuadRule trapezoid(double a, double b, int n);

}  // namespace entpert
