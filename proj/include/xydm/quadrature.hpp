#pragma once

#include <functional>
#include <span>

#include <Eigen/Dense>

namespace xydm {

struct QuadratureOptions {
  double abs_tolerance = 1e-10;
  int max_intervals = 4000;
};

struct QuadratureResult {
  Eigen::VectorXd value;
  /// Sum over subintervals of the max-norm Kronrod-Gauss difference.
  double error = 0.0;
  int intervals = 0;
};

/// Vector-valued integrand: writes f(x) into the output slot (already sized).
using VectorIntegrand = std::function<void(double, Eigen::Ref<Eigen::VectorXd>)>;

/// Globally adaptive 21-point Gauss-Kronrod integration of a vector-valued
/// function over [breakpoints.front(), breakpoints.back()]. Interior breakpoints
/// seed the initial partition, so known kinks or jumps should be listed there.
/// The interval with the largest error is bisected until the total error falls
/// below abs_tolerance. Throws NumericalError carrying the achieved error when
/// max_intervals is exhausted.
QuadratureResult integrate(const VectorIntegrand& f, Eigen::Index dimension,
                           std::span<const double> breakpoints,
                           const QuadratureOptions& options = {});

/// Scalar convenience wrapper.
double integrate_scalar(const std::function<double(double)>& f, double a, double b,
                        const QuadratureOptions& options = {});

}  // namespace xydm
