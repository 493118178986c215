#include <doctest.h>

#include <cmath>
#include <numbers>

#include "phasecrb/bound.hpp"
#include "phasecrb/error.hpp"
#include "phasecrb/fisher.hpp"
#include "phasecrb/quadrature.hpp"

using namespace phasecrb;
using doctest::Approx;

namespace {

constexpr double pi = std::numbers::pi;

double coherent_ou(double n, double kappa, double lambda)
{
    return kappa / (2.0 * std::sqrt(4.0 * n * kappa + lambda * lambda));
}

} // namespace

TEST_CASE("coherent beam with Wiener and OU priors")
{
    CHECK(crb_mse(PhaseNoiseModel::wiener(1.0), CoherentBeam(1.0)).value == Approx(0.25).epsilon(1e-10));
    for (const auto [n, k, l] : {std::tuple{1e4, 1.0, 0.0}, {3.0, 0.2, 5.0}, {1e8, 7.0, 1e3}}) {
        const auto r = crb_mse(PhaseNoiseModel::ornstein_uhlenbeck(k, l), CoherentBeam(std::sqrt(n)));
        CHECK(r.value == Approx(coherent_ou(n, k, l)).epsilon(1e-9));
        CHECK(r.abs_error_estimate < 1e-9 * r.value);
    }
}

TEST_CASE("coherent beam with power-law priors")
{
    // independent route: direct quadrature of kappa^(p-1) / (w^p + kappa^(p-1) B) over [0, inf)
    for (double p : {1.5, 2.5, 4.0}) {
        const double kappa = 0.7, n = 50.0;
        const double kp = std::pow(kappa, p - 1.0);
        const double b = kp * 4.0 * n;
        const auto q = integrate_to_infinity([&](double w) { return kp / (std::pow(w, p) + b); }, 0.0,
                                             std::pow(b, 1.0 / p), {1e-13, 0.0, 100000});
        CHECK(powerlaw_constant_integral(p, b, kappa) == Approx(q.value / pi).epsilon(1e-9));
        const auto r = crb_mse(PhaseNoiseModel::power_law(p, kappa), CoherentBeam(std::sqrt(n)));
        CHECK(r.value == Approx(q.value / pi).epsilon(1e-8));
    }
}

TEST_CASE("doubling the cutoff leaves the bound unchanged")
{
    const auto phase = PhaseNoiseModel::ornstein_uhlenbeck(1.0, 0.3);
    const BeamModel beam = OpoBeam::pure(3.0, 10.0, 20.0);
    const auto a = crb_mse(phase, beam);
    CrbOptions o;
    o.cutoff = 2.0 * a.cutoff;
    const auto b = crb_mse(phase, beam, o);
    CHECK(b.value == Approx(a.value).epsilon(1e-9));
    CHECK(b.tail_correction < a.tail_correction);
}

TEST_CASE("bound decreases with more light and more squeezing")
{
    const auto phase = PhaseNoiseModel::wiener(1.0);
    double prev = INFINITY;
    for (double alpha : {0.5, 1.0, 2.0, 4.0}) {
        const double v = crb_mse(phase, CoherentBeam(alpha)).value;
        CHECK(v < prev);
        prev = v;
    }
    const double coh = crb_mse(phase, CoherentBeam(2.0)).value;
    const double sq = crb_mse(phase, OpoBeam::pure(2.0, 10.0, 10.0)).value;
    CHECK(sq < coh);
}

TEST_CASE("crb_mse input checks")
{
    const Spectrum flat = Spectrum::constant(1.0);
    CHECK_THROWS_AS(crb_mse(flat, flat), DomainError);
    const Spectrum growing(
        [](double w) { return w; }, PowerTail{1.0, 1.0, 0.0}, {1.0});
    CHECK_THROWS_AS(crb_mse(growing, flat), DomainError);
    const Spectrum fc = classical_fisher(PhaseNoiseModel::wiener(1.0));
    CHECK_THROWS_AS(crb_mse(fc, fc), DomainError);
}

TEST_CASE("mean-field closed form against quadrature")
{
    for (const auto [alpha, rp, g, kappa, lambda] :
         {std::tuple{1.0, 4.0, 2.0, 1.0, 0.0}, {3.0, 30.0, 0.5, 0.2, 1.0}, {0.5, 1.0, 5.0, 2.0, 0.1}}) {
        const auto b = OpoBeam::pure(alpha, rp, g);
        const auto cf = mean_field_bound_closed_form(alpha, rp, b.x(), g, kappa, lambda);
        const double q =
            crb_mse(classical_fisher(PhaseNoiseModel::ornstein_uhlenbeck(kappa, lambda)), mean_field_fisher_spectrum(b))
                .value;
        CHECK(cf.value == Approx(q).epsilon(1e-8));
    }
    // R+ = 1 reduces to the coherent bound
    CHECK(mean_field_bound_closed_form(2.0, 1.0, 0.0, 3.0, 1.0, 0.5).value == Approx(coherent_ou(4.0, 1.0, 0.5)));
}

TEST_CASE("negative discriminant falls back to quadrature")
{
    // c = 4 alpha^2 kappa equals g^2, so the discriminant is -4d < 0
    const auto r = mean_field_bound_closed_form(1.0, 10.0, 0.2, 5.0, 1.0, 0.0);
    CHECK(r.fallback);
    CHECK(r.discriminant < 0.0);
    const OpoBeam b(1.0, 10.0, 0.1, 5.0, 0.2);
    const double q = crb_mse(classical_fisher(PhaseNoiseModel::wiener(1.0)), mean_field_fisher_spectrum(b)).value;
    CHECK(r.value == Approx(q).epsilon(1e-10));
}

TEST_CASE("Heisenberg lower bound solves its defining equation")
{
    for (double p : {1.5, 2.0, 3.0, 10.0}) {
        const double kappa = 1.3, n = 1e7;
        const auto h = heisenberg_lower_bound(p, kappa, n);
        CHECK(std::abs(h.residual) < 1e-12);
        CHECK(h.calI == Approx(16 * pi * n * n));
        // (I / mu)^p = kappa^(p-1) (zeta N + mu)
        CHECK(p * std::log(h.calI / h.mu) == Approx((p - 1) * std::log(kappa) + std::log(h.zeta * n + h.mu)).epsilon(1e-12));
        CHECK(heisenberg_lower_bound(p, kappa, 10 * n).value < h.value);
    }
    CHECK_THROWS_AS(heisenberg_lower_bound(1.0, 1.0, 1.0), DomainError);
}

TEST_CASE("scaling fit recovers exact power laws")
{
    const auto fit = scaling_exponent_fit([](double n) { return 3.0 * std::pow(n, -0.4); }, 1e2, 1e8, 13);
    CHECK(fit.slope == Approx(-0.4).epsilon(1e-12));
    CHECK(fit.r2 == Approx(1.0));
    CHECK_FALSE(fit.dropped_first_decade);

    // a low-N bend is removed with the first decade
    const auto bent = scaling_exponent_fit([](double n) { return std::pow(n, -0.5) * (1.0 + 30.0 / n); }, 1.0, 1e6, 25);
    CHECK(bent.dropped_first_decade);
    CHECK(bent.slope == Approx(-0.5).epsilon(0.05));

    CHECK_THROWS_AS(scaling_exponent_fit([](double) { return 1.0; }, 1.0, 100.0, 9), DomainError);
}

TEST_CASE("parallel scaling fit is identical to the serial one")
{
    auto fn = [](double n) { return crb_mse(PhaseNoiseModel::power_law(3.0, 1.0), CoherentBeam(std::sqrt(n))).value; };
    const auto a = scaling_exponent_fit(fn, 1e4, 1e9, 11, 1);
    const auto b = scaling_exponent_fit(fn, 1e4, 1e9, 11, 3);
    CHECK(a.bound == b.bound);
    CHECK(a.slope == Approx(-2.0 / 3.0).epsilon(0.02));
}
