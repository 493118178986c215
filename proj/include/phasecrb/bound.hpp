#pragma once

#include <functional>
#include <vector>

#include "phasecrb/models.hpp"
#include "phasecrb/spectrum.hpp"

namespace phasecrb {

struct BoundResult {
    double value = 0.0;              ///< F^-1(0) [rad^2]
    double abs_error_estimate = 0.0; ///< quadrature plus tail truncation
    double tail_correction = 0.0;    ///< analytic contribution of |omega| > cutoff
    double cutoff = 0.0;             ///< Omega [rad/s]
    long evaluations = 0;
};

struct CrbOptions {
    double rel_tol = 1e-10;
    /// Fixed cutoff; zero picks one automatically.
    double cutoff = 0.0;
    int max_intervals = 200000;
};

/// (1/2pi) \int dw / (fc(w) + fq(w)).
///
/// fc must declare a growing tail a |w|^p with p > 1; fq must not grow. The integral over
/// [0, Omega] is adaptive Gauss-Kronrod, and |w| > Omega is integrated analytically from the
/// expansion 1/(a w^p + b) = w^-p/a - b w^-2p/a^2 + ... . Spikes carry no weight in the integral.
BoundResult crb_mse(const Spectrum& fc, const Spectrum& fq, const CrbOptions& options = {});

/// crb_mse(1/Sigma, F~Q) for a prior and a beam.
BoundResult crb_mse(const PhaseNoiseModel& phase, const BeamModel& beam, const CrbOptions& options = {});

/// (1/pi) \int_0^inf kappa^(p-1) dw / (w^p + B) = kappa^(p-1) / (pi B^(1-1/p)) * (pi/p) / sin(pi/p).
double powerlaw_constant_integral(double p, double b, double kappa);

struct ClosedFormResult {
    double value = 0.0;
    /// True when the discriminant was negative and the value came from quadrature.
    bool fallback = false;
    double discriminant = 0.0;
};

/// MSE bound from the mean-field information of an OPO beam with an OU prior, in closed form.
ClosedFormResult mean_field_bound_closed_form(double alpha, double r_plus, double x, double gamma,
                                              double kappa, double lambda);

struct HLBResult {
    double value = 0.0;
    double mu = 0.0;
    double residual = 0.0;
    double zeta = 17.0 / 4.0;
    double calI = 0.0;
};

/// Analytic stochastic-Heisenberg lower bound for a power-law prior and photon flux N.
HLBResult heisenberg_lower_bound(double p, double kappa, double n);

struct ScalingFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    double curvature = 0.0; ///< max |residual| of the final fit in log units
    bool dropped_first_decade = false;
    std::vector<double> n;
    std::vector<double> bound;
};

/// Least-squares fit of log(bound) against log(N) on a geometric grid of `points` values in
/// [n_min, n_max]. The smallest decade is dropped once if the residuals exceed 1e-2.
ScalingFit scaling_exponent_fit(const std::function<double(double)>& bound_fn, double n_min, double n_max,
                                int points, int threads = 1);

} // namespace phasecrb
