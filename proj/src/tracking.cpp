#include "phasecrb/tracking.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include "phasecrb/bound.hpp"
#include "phasecrb/error.hpp"
#include "phasecrb/parallel.hpp"
#include "phasecrb/quadrature.hpp"

namespace phasecrb {

namespace {

constexpr double kPi = std::numbers::pi;

double wrap(double e)
{
    // Into (-pi, pi].
    double w = std::remainder(e, 2.0 * kPi);
    if (w <= -kPi)
        w += 2.0 * kPi;
    return w;
}

// Exact discretisation of the OU phase and the filter quantities that do not depend on the data.
struct Schedule {
    std::size_t steps = 0;
    double a = 1.0;        // state transition exp(-lambda dt)
    double q = 0.0;        // process noise variance per step
    double r = 0.0;        // pseudo-observation noise variance 1 / (4 alpha^2 dt)
    double p0 = 0.0;       // prior variance of phi(0)
    std::vector<double> gain;      // Kalman gain at each step
    std::vector<double> posterior; // filtered variance P_k
    std::vector<double> info;      // backward information Y_k from z_{k+1..n-1}
};

Schedule make_schedule(const TrackingConfig& c)
{
    Schedule s;
    s.steps = static_cast<std::size_t>(std::llround(c.duration / c.dt));
    s.a = std::exp(-c.lambda * c.dt);
    s.q = c.lambda > 0.0 ? c.kappa * (-std::expm1(-2.0 * c.lambda * c.dt)) / (2.0 * c.lambda) : c.kappa * c.dt;
    s.r = 1.0 / (4.0 * c.alpha * c.alpha * c.dt);
    s.p0 = c.lambda > 0.0 ? c.kappa / (2.0 * c.lambda) : 0.0;

    s.gain.resize(s.steps);
    s.posterior.resize(s.steps);
    double prior = s.p0;
    for (std::size_t k = 0; k < s.steps; ++k) {
        const double k_gain = prior / (prior + s.r);
        s.gain[k] = k_gain;
        s.posterior[k] = (1.0 - k_gain) * prior;
        prior = s.a * s.a * s.posterior[k] + s.q;
    }
    s.info.resize(s.steps);
    double y_info = 0.0;
    for (std::size_t k = s.steps; k-- > 0;) {
        s.info[k] = y_info;
        const double with_z = y_info + 1.0 / s.r;
        y_info = s.a * s.a * with_z / (1.0 + s.q * with_z);
    }
    return s;
}

std::mt19937_64 stream(std::uint64_t seed, std::uint64_t index)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    return std::mt19937_64(seq);
}

void run_forward(const TrackingConfig& c, const Schedule& s, std::size_t index, TrackRecord& rec)
{
    const std::size_t n = s.steps;
    rec.dt = c.dt;
    rec.phi.resize(n);
    rec.dy.resize(n);
    rec.feedback.resize(n);
    rec.filtered.resize(n);

    auto rng = stream(c.seed, index);
    std::normal_distribution<double> normal(0.0, 1.0);
    const bool adaptive = c.feedback == Feedback::AdaptiveNonlinear;
    const double sqrt_dt = std::sqrt(c.dt);
    const double sqrt_q = std::sqrt(s.q);
    const double two_alpha_dt = 2.0 * c.alpha * c.dt;

    double phi = s.p0 > 0.0 ? std::sqrt(s.p0) * normal(rng) : 0.0;
    double predicted = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double lo = adaptive ? predicted : 0.0;
        const double signal = adaptive ? std::sin(phi - lo) : phi;
        const double dy = two_alpha_dt * signal + sqrt_dt * normal(rng);
        const double z = lo + dy / two_alpha_dt;
        const double estimate = predicted + s.gain[k] * (z - predicted);
        rec.phi[k] = phi;
        rec.dy[k] = dy;
        rec.feedback[k] = lo;
        rec.filtered[k] = estimate;
        predicted = s.a * estimate;
        phi = s.a * phi + sqrt_q * normal(rng);
    }
}

void run_backward(const TrackingConfig& c, const Schedule& s, const TrackRecord& rec, std::vector<double>& out)
{
    const std::size_t n = s.steps;
    out.resize(n);
    const double two_alpha_dt = 2.0 * c.alpha * c.dt;
    double y = 0.0;
    for (std::size_t k = n; k-- > 0;) {
        const double p = s.posterior[k];
        const double info = s.info[k];
        out[k] = (rec.filtered[k] + p * y) / (1.0 + p * info);
        const double z = rec.feedback[k] + rec.dy[k] / two_alpha_dt;
        const double with_z = info + 1.0 / s.r;
        y = s.a * (y + z / s.r) / (1.0 + s.q * with_z);
    }
}

void require(bool condition, const std::string& message)
{
    if (!condition)
        throw DomainError(message);
}

} // namespace

double TrackingConfig::error_correlation_time() const
{
    const double rate = std::sqrt(lambda * lambda + 4.0 * alpha * alpha * kappa);
    return rate > 0.0 ? 1.0 / rate : std::numeric_limits<double>::infinity();
}

void TrackingConfig::validate() const
{
    require(std::isfinite(kappa) && kappa >= 0.0, "kappa must be >= 0");
    require(std::isfinite(lambda) && lambda >= 0.0, "lambda must be >= 0");
    require(std::isfinite(alpha) && alpha > 0.0, "alpha must be > 0");
    require(std::isfinite(dt) && dt > 0.0, "dt must be > 0");
    const double fastest = std::max({lambda, 4.0 * alpha * alpha, kappa});
    require(dt * fastest <= 1e-2 * (1.0 + 1e-12),
            "dt * max(lambda, 4 alpha^2, kappa) = " + std::to_string(dt * fastest) + " exceeds 1e-2");
    require(std::isfinite(duration) && duration > 0.0, "duration must be > 0");
    require(std::isfinite(burn_in) && burn_in >= 0.0, "burn_in must be >= 0");
    if (kappa > 0.0)
        require(burn_in >= 10.0 * error_correlation_time() * (1.0 - 1e-12),
                "burn_in must cover at least 10 error correlation times ("
                    + std::to_string(10.0 * error_correlation_time()) + " s)");
    require(duration > 2.0 * burn_in + 2.0 * dt, "duration must exceed twice the burn-in");
    require(trajectories >= 2, "at least two trajectories are needed for standard errors");
    require(trace_stride >= 1, "trace_stride must be >= 1");
    require(duration / dt < 4e9, "too many time steps");
}

TrackRecord simulate_record(const TrackingConfig& config, std::size_t index)
{
    config.validate();
    const Schedule s = make_schedule(config);
    TrackRecord rec;
    run_forward(config, s, index, rec);
    return rec;
}

std::vector<double> smooth_record(const TrackingConfig& config, const TrackRecord& record)
{
    config.validate();
    const Schedule s = make_schedule(config);
    if (record.phi.size() != s.steps)
        throw DomainError("record length does not match the configuration");
    std::vector<double> out;
    run_backward(config, s, record, out);
    return out;
}

TrackingResult monte_carlo_mse(const TrackingConfig& config)
{
    config.validate();
    const Schedule s = make_schedule(config);
    const std::size_t n = s.steps;
    const std::size_t burn = std::min(n, static_cast<std::size_t>(std::ceil(config.burn_in / config.dt)));
    const std::size_t smooth_end = n - burn;
    const bool adaptive = config.feedback == Feedback::AdaptiveNonlinear;
    const std::size_t count = static_cast<std::size_t>(config.trajectories);

    std::vector<double> filt(count), smooth(count);
    std::vector<long> slips(count, 0);
    TrackingResult result;

    parallel_for(count, config.threads, [&](std::size_t i) {
        thread_local TrackRecord rec;
        thread_local std::vector<double> smoothed, sq;
        run_forward(config, s, i, rec);
        run_backward(config, s, rec, smoothed);

        auto error = [&](double estimate, double truth) {
            return adaptive ? wrap(estimate - truth) : estimate - truth;
        };
        sq.resize(n - burn);
        for (std::size_t k = burn; k < n; ++k) {
            const double e = error(rec.filtered[k], rec.phi[k]);
            sq[k - burn] = e * e;
        }
        filt[i] = pairwise_sum(sq) / static_cast<double>(sq.size());
        sq.resize(smooth_end - burn);
        for (std::size_t k = burn; k < smooth_end; ++k) {
            const double e = error(smoothed[k], rec.phi[k]);
            sq[k - burn] = e * e;
        }
        smooth[i] = pairwise_sum(sq) / static_cast<double>(sq.size());

        if (adaptive) {
            long count_slips = 0;
            double last = 0.0;
            for (std::size_t k = 0; k < n; ++k) {
                const double turns = std::round((rec.filtered[k] - rec.phi[k]) / (2.0 * kPi));
                if (k > 0 && turns != last)
                    ++count_slips;
                last = turns;
            }
            slips[i] = count_slips;
        }
        if (static_cast<int>(i) == config.trace_trajectory) {
            auto& tr = result.trace;
            for (std::size_t k = 0; k < n; k += static_cast<std::size_t>(config.trace_stride)) {
                tr.t.push_back(static_cast<double>(k) * config.dt);
                tr.phi.push_back(rec.phi[k]);
                tr.filtered.push_back(rec.filtered[k]);
                tr.smoothed.push_back(smoothed[k]);
            }
        }
    });

    const double t = static_cast<double>(count);
    const double mf = pairwise_sum(filt) / t;
    const double ms = pairwise_sum(smooth) / t;
    double vf = 0.0, vs = 0.0, cov = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
        vf += (filt[i] - mf) * (filt[i] - mf);
        vs += (smooth[i] - ms) * (smooth[i] - ms);
        cov += (filt[i] - mf) * (smooth[i] - ms);
    }
    vf /= t - 1.0;
    vs /= t - 1.0;
    cov /= t - 1.0;

    result.mse_filtered = {mf, std::sqrt(vf / t)};
    result.mse_smoothed = {ms, std::sqrt(vs / t)};
    const double ratio = mf / ms;
    const double var_ratio = (vf / (ms * ms) - 2.0 * mf * cov / (ms * ms * ms) + mf * mf * vs / (ms * ms * ms * ms)) / t;
    result.ratio_filter_smoother = {ratio, std::sqrt(std::max(var_ratio, 0.0))};
    result.riccati_filtered = riccati_steady_state(config.alpha, config.kappa, config.lambda);
    const double c = 4.0 * config.alpha * config.alpha * config.kappa + config.lambda * config.lambda;
    result.crb = c > 0.0 ? config.kappa / (2.0 * std::sqrt(c)) : 0.0;
    result.diverged = mf > 10.0 * result.riccati_filtered && mf > 0.0 && config.kappa > 0.0;
    for (const long v : slips)
        result.cycle_slips += v;
    result.trajectories = count;
    result.filtered_samples = n - burn;
    result.smoothed_samples = smooth_end - burn;
    return result;
}

double riccati_steady_state(double alpha, double kappa, double lambda)
{
    require(std::isfinite(alpha) && alpha != 0.0, "riccati_steady_state requires alpha != 0");
    require(std::isfinite(kappa) && kappa >= 0.0, "kappa must be >= 0");
    require(std::isfinite(lambda) && lambda >= 0.0, "lambda must be >= 0");
    const double a2 = alpha * alpha;
    // Rationalised root avoids cancellation when lambda dominates.
    return kappa / (lambda + std::sqrt(lambda * lambda + 4.0 * a2 * kappa));
}

double wiener_smoother_mse(const PhaseNoiseModel& phase, double alpha, const Spectrum& s_y)
{
    require(std::isfinite(alpha), "alpha must be finite");
    const double white = s_y.floor();
    require(white > 0.0, "S_Y must approach a positive white level at high frequency");
    const double a4 = 4.0 * alpha * alpha;
    auto info = [s_y, a4, white](double w) {
        const double v = s_y(w);
        if (!(v > 0.0))
            throw DomainError("homodyne noise spectrum S_Y must be positive (S_Y(" + std::to_string(w)
                              + ") = " + std::to_string(v) + ")");
        // 4 alpha^2 / S_Y minus its white level, written to avoid cancellation.
        return -a4 * s_y.continuous(w) / (white * v);
    };
    const PowerTail tail{-a4 * s_y.tail().coeff / (white * white), s_y.tail().exponent, s_y.tail().onset};
    std::vector<double> scales(s_y.scales().begin(), s_y.scales().end());
    const Spectrum fq = s_y.has_continuous() ? Spectrum(info, tail, scales, a4 / white)
                                             : Spectrum::constant(a4 / white);
    return crb_mse(classical_fisher(phase), fq).value;
}

} // namespace phasecrb
