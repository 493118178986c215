#pragma once

#include <cstdint>
#include <vector>

#include "phasecrb/models.hpp"
#include "phasecrb/spectrum.hpp"

namespace phasecrb {

enum class Feedback {
    /// Record dy = 2 alpha phi dt + dV; the filter works on the linear model.
    Linearized,
    /// Local oscillator follows the predicted estimate: dy = 2 alpha sin(phi - phi_hat) dt + dV.
    AdaptiveNonlinear,
};

/// Monte Carlo setup for tracking an OU (or Wiener, lambda = 0) phase on a coherent beam.
struct TrackingConfig {
    double kappa = 1.0;  ///< diffusion rate; 0 freezes the phase
    double lambda = 0.0; ///< OU damping
    double alpha = 1.0;
    double dt = 1e-3;
    double duration = 10.0;
    double burn_in = 1.0;
    int trajectories = 100;
    std::uint64_t seed = 1;
    Feedback feedback = Feedback::Linearized;
    int threads = 1;
    /// Trajectory whose time series is returned in TrackingResult::trace; -1 for none.
    int trace_trajectory = -1;
    int trace_stride = 1;

    /// Checks dt * max(lambda, 4 alpha^2, kappa) <= 1e-2, burn_in >= 10 error correlation times
    /// and room for samples between the two burn-in windows.
    void validate() const;
    /// 1 / sqrt(lambda^2 + 4 alpha^2 kappa), the correlation time of the steady-state error.
    double error_correlation_time() const;
};

/// One simulated homodyne record with the forward filter that drove the feedback.
struct TrackRecord {
    double dt = 0.0;
    std::vector<double> phi;      ///< true phase at the start of each step
    std::vector<double> dy;       ///< record increments
    std::vector<double> feedback; ///< local-oscillator phase during each step
    std::vector<double> filtered; ///< posterior estimate after each increment
};

/// Reproducible from (config.seed, index) regardless of threads.
TrackRecord simulate_record(const TrackingConfig& config, std::size_t index);

/// Fixed-interval two-filter smoother estimates for a record.
std::vector<double> smooth_record(const TrackingConfig& config, const TrackRecord& record);

struct Estimate {
    double value = 0.0;
    double std_error = 0.0;
};

struct TrackingResult {
    Estimate mse_filtered;
    Estimate mse_smoothed;
    Estimate ratio_filter_smoother;
    double riccati_filtered = 0.0;
    double crb = 0.0;
    bool diverged = false;
    long cycle_slips = 0;
    std::size_t trajectories = 0;
    std::size_t filtered_samples = 0; ///< per trajectory
    std::size_t smoothed_samples = 0; ///< per trajectory

    struct Trace {
        std::vector<double> t, phi, filtered, smoothed;
    } trace;
};

TrackingResult monte_carlo_mse(const TrackingConfig& config);

/// Positive root of 4 alpha^2 P^2 + 2 lambda P - kappa = 0.
double riccati_steady_state(double alpha, double kappa, double lambda);

/// (1/2pi) \int dw [1/Sigma~(w) + 4 alpha^2 / S_Y(w)]^-1 for homodyne noise spectrum S_Y.
double wiener_smoother_mse(const PhaseNoiseModel& phase, double alpha, const Spectrum& s_y);

} // namespace phasecrb
