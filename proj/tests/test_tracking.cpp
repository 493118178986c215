#include <doctest.h>

#include <cmath>

#include "phasecrb/bound.hpp"
#include "phasecrb/error.hpp"
#include "phasecrb/tracking.hpp"

using namespace phasecrb;
using doctest::Approx;

namespace {

TrackingConfig small_config()
{
    TrackingConfig c;
    c.alpha = 2.0;
    c.kappa = 1.0;
    c.dt = 5e-4;
    c.duration = 20.0;
    c.burn_in = 2.5;
    c.trajectories = 20;
    c.seed = 42;
    return c;
}

} // namespace

TEST_CASE("Riccati steady state")
{
    for (const auto [a, k, l] : {std::tuple{4.0, 1.0, 0.0}, {1.0, 2.0, 3.0}, {0.1, 0.5, 0.01}}) {
        const double p = riccati_steady_state(a, k, l);
        CHECK(p > 0.0);
        CHECK(4 * a * a * p * p + 2 * l * p - k == Approx(0.0).scale(k));
    }
    CHECK(riccati_steady_state(4.0, 1.0, 0.0) == Approx(0.125));
}

TEST_CASE("smoother MSE with white homodyne noise is the coherent bound")
{
    for (const auto [a, k, l] : {std::tuple{4.0, 1.0, 0.0}, {1.0, 2.0, 3.0}}) {
        const auto phase = PhaseNoiseModel::ornstein_uhlenbeck(k, l);
        const double expect = k / (2 * std::sqrt(4 * a * a * k + l * l));
        CHECK(wiener_smoother_mse(phase, a, Spectrum::constant(1.0)) == Approx(expect).epsilon(1e-9));
        CHECK(crb_mse(phase, CoherentBeam(a)).value == Approx(expect).epsilon(1e-9));
    }
}

TEST_CASE("smoother MSE grows with the noise spectrum")
{
    const auto phase = PhaseNoiseModel::wiener(1.0);
    const double white = wiener_smoother_mse(phase, 1.0, Spectrum::constant(1.0));
    const double colored = wiener_smoother_mse(phase, 1.0, Spectrum::lorentzians({{0.5, 2.0}}, 1.0));
    const double squeezed = wiener_smoother_mse(phase, 1.0, Spectrum::lorentzians({{-0.4, 2.0}}, 1.0));
    CHECK(colored > white);
    CHECK(squeezed < white);
    CHECK_THROWS_AS(wiener_smoother_mse(phase, 1.0, Spectrum::constant(0.0)), DomainError);
}

TEST_CASE("records are reproducible from seed and index")
{
    const auto c = small_config();
    const auto a = simulate_record(c, 3);
    const auto b = simulate_record(c, 3);
    const auto d = simulate_record(c, 4);
    CHECK(a.dy == b.dy);
    CHECK(a.phi == b.phi);
    CHECK(a.dy != d.dy);
    CHECK(a.phi.size() == static_cast<std::size_t>(std::llround(c.duration / c.dt)));
}

TEST_CASE("Monte Carlo result does not depend on the thread count")
{
    auto c = small_config();
    c.threads = 1;
    const auto one = monte_carlo_mse(c);
    c.threads = 3;
    const auto three = monte_carlo_mse(c);
    CHECK(one.mse_filtered.value == three.mse_filtered.value);
    CHECK(one.mse_smoothed.value == three.mse_smoothed.value);
}

TEST_CASE("filter and smoother reach their steady-state errors")
{
    const auto r = monte_carlo_mse(small_config());
    CHECK(r.riccati_filtered == Approx(0.25));
    CHECK(r.crb == Approx(0.125));
    CHECK(std::abs(r.mse_filtered.value - r.riccati_filtered) < 5 * r.mse_filtered.std_error);
    CHECK(std::abs(r.mse_smoothed.value - r.crb) < 5 * r.mse_smoothed.std_error);
    CHECK_FALSE(r.diverged);
}

TEST_CASE("adaptive feedback tracks like the linearized filter at high flux")
{
    auto c = small_config();
    c.alpha = 8.0;
    c.dt = 2.5e-5;
    c.duration = 3.0;
    c.burn_in = 0.75;
    c.trajectories = 10;
    c.feedback = Feedback::AdaptiveNonlinear;
    const auto r = monte_carlo_mse(c);
    CHECK(r.mse_filtered.value == Approx(r.riccati_filtered).epsilon(0.15));
    CHECK(r.cycle_slips == 0);
}

TEST_CASE("OU phase")
{
    auto c = small_config();
    c.lambda = 2.0;
    const auto r = monte_carlo_mse(c);
    CHECK(r.riccati_filtered == Approx(riccati_steady_state(2.0, 1.0, 2.0)));
    CHECK(std::abs(r.mse_filtered.value - r.riccati_filtered) < 5 * r.mse_filtered.std_error);
    CHECK(r.crb == Approx(1.0 / (2 * std::sqrt(16.0 + 4.0))));
}

TEST_CASE("configuration checks")
{
    auto c = small_config();
    c.dt = 0.1;
    CHECK_THROWS_AS(c.validate(), DomainError);
    c = small_config();
    c.burn_in = 0.01;
    CHECK_THROWS_AS(c.validate(), DomainError);
    c = small_config();
    c.duration = 3.0;
    CHECK_THROWS_AS(c.validate(), DomainError);
    CHECK(small_config().error_correlation_time() == Approx(0.25));
}

TEST_CASE("trace output")
{
    auto c = small_config();
    c.trajectories = 2;
    c.trace_trajectory = 1;
    c.trace_stride = 100;
    const auto r = monte_carlo_mse(c);
    CHECK(r.trace.t.size() == 40000 / 100);
    CHECK(r.trace.smoothed.size() == r.trace.t.size());
}
