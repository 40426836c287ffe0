#pragma once

#include <cstddef>
#include <functional>

namespace leapclust {

struct QuadratureOptions {
    double abs_tol = 1e-10;
    double rel_tol = 1e-8;
    std::size_t max_intervals = 20000;
};

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    std::size_t evaluations = 0;
};

/// Adaptive Gauss-Kronrod (7/15) quadrature with global bisection of the worst interval.
/// Throws DomainError if the integrand is non-finite anywhere it is evaluated.
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureOptions& options = {});

}  // namespace leapclust
