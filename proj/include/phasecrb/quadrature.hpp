#pragma once

#include <functional>
#include <span>
#include <vector>

namespace phasecrb {

struct QuadratureResult {
    double value = 0.0;
    double abs_error = 0.0;
    long evaluations = 0;
    int intervals = 0;
    bool converged = false;
};

struct QuadratureOptions {
    double rel_tol = 1e-10;
    double abs_tol = 0.0;
    int max_intervals = 50000;
};

using Integrand = std::function<double(double)>;

/// Globally adaptive 15-point Gauss-Kronrod integration over the panels delimited by
/// `breakpoints` (sorted, at least two). Intervals are bisected largest-error first until the
/// summed error estimate is below max(abs_tol, rel_tol * |value|).
QuadratureResult integrate(const Integrand& f, std::span<const double> breakpoints,
                           const QuadratureOptions& options = {});

QuadratureResult integrate(const Integrand& f, double a, double b,
                           const QuadratureOptions& options = {});

/// Integral over [a, inf) through the map omega = a + scale * u / (1 - u). The integrand must
/// decay faster than 1/omega.
QuadratureResult integrate_to_infinity(const Integrand& f, double a, double scale,
                                       const QuadratureOptions& options = {});

/// Breakpoints 0, lo, lo*ratio, ... up to hi, with every entry of `extra` merged in.
std::vector<double> geometric_breakpoints(double lo, double hi, double ratio,
                                          std::span<const double> extra = {});

/// Deterministic pairwise summation.
double pairwise_sum(std::span<const double> values);

} // namespace phasecrb
