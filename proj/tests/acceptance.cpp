// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "phasecrb/asymptotic.hpp"
#include "phasecrb/bound.hpp"
#include "phasecrb/fisher.hpp"
#include "phasecrb/parallel.hpp"
#include "phasecrb/quadrature.hpp"
#include "phasecrb/tracking.hpp"

using namespace phasecrb;

namespace {

constexpr double pi = std::numbers::pi;

double rel(double a, double b) { return std::abs(a / b - 1.0); }

double log_uniform(std::mt19937_64& rng, double lo, double hi)
{
    return std::exp(std::uniform_real_distribution<double>(std::log(lo), std::log(hi))(rng));
}

struct Outcome {
    bool pass;
    std::string detail;
};

std::string fmt(const char* f, auto... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

Outcome c0_reproduction()
{
    const auto r = optimize_C({});
    const bool ok = std::abs(r.c_min - 0.20788) <= 1e-3 && std::abs(r.gamma_star - 2.1319) <= 1e-2
                 && std::abs(r.tau - 1.0) <= 1e-9;
    return {ok, fmt("C0=%.8f gamma*=%.6f tau=%.6f (exact %.8f at %.6f), %d evaluations", r.c_min, r.gamma_star,
                    r.tau, C0_exact(), gamma_star_optimal_exact(), r.evaluations)};
}

Outcome closed_form_consistency()
{
    const double kappa = 1.0, lambda = 0.3;
    double worst = 0.0, worst_fallback = 0.0;
    int fallbacks = 0, cases = 0;
    for (double alpha : {0.5, 1.0, 2.0, 4.0, 8.0})
        for (double rp : {1.0, 3.16, 10.0, 31.6, 100.0})
            for (double gamma : {0.1, 1.0, 10.0, 100.0, 1000.0}) {
                const auto beam = OpoBeam::pure(alpha, rp, gamma);
                const auto cf = mean_field_bound_closed_form(alpha, rp, beam.x(), gamma, kappa, lambda);
                const double q =
                    crb_mse(classical_fisher(PhaseNoiseModel::ornstein_uhlenbeck(kappa, lambda)),
                            mean_field_fisher_spectrum(beam))
                        .value;
                const double e = rel(cf.value, q);
                ++cases;
                if (cf.fallback) {
                    ++fallbacks;
                    worst_fallback = std::max(worst_fallback, e);
                } else {
                    worst = std::max(worst, e);
                }
            }
    return {worst <= 1e-6 && worst_fallback <= 1e-4,
            fmt("%d cases, max rel %.2e (closed form), %d fallbacks max rel %.2e", cases, worst, fallbacks,
                worst_fallback)};
}

Outcome coherent_bound()
{
    std::mt19937_64 rng(20240611);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
        const double n = log_uniform(rng, 1e-2, 1e10);
        const double kappa = log_uniform(rng, 1e-3, 1e3);
        const double lambda = i % 4 == 0 ? 0.0 : log_uniform(rng, 1e-3, 1e3);
        const double exact = kappa / (2.0 * std::sqrt(4.0 * n * kappa + lambda * lambda));
        const double v = crb_mse(PhaseNoiseModel::ornstein_uhlenbeck(kappa, lambda), CoherentBeam(std::sqrt(n))).value;
        worst = std::max(worst, rel(v, exact));
    }
    return {worst <= 1e-8, fmt("20 triples, max rel %.2e", worst)};
}

Outcome convolution_oracle()
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    bool ok = true;
    double worst_default = 0.0;
    std::string rates;
    for (int i = 0; i < 10; ++i) {
        const double alpha = 0.5 + 2.5 * u(rng);
        const double rp = log_uniform(rng, 1.5, 30.0);
        const double rm = std::pow(rp, -u(rng)); // R+ R- >= 1
        const double gamma = log_uniform(rng, 0.3, 30.0);
        const double x = 0.8 * u(rng);
        const OpoBeam beam(alpha, rp, rm, gamma, x);
        const Spectrum exact = opo_quantum_fisher_spectrum(beam);
        const auto base = general_fisher_components(to_general(beam));
        double err[3];
        int k = 0;
        for (int refinement : {1, 2, 4}) {
            ConvolutionGrid g;
            g.refinement = refinement;
            const Spectrum fq = general_quantum_fisher_spectrum(to_general(beam), g);
            double e = 0.0;
            for (double w : base.omega)
                e = std::max(e, rel(fq(w), exact(w)));
            err[k++] = e;
        }
        worst_default = std::max(worst_default, err[0]);
        ok = ok && err[0] <= 1e-4 && err[1] < err[0] && err[2] < err[1];
        rates += fmt(" %.1e/%.1e/%.1e", err[0], err[1], err[2]);
    }
    return {ok, fmt("max rel default grid %.2e; per beam r=1/2/4:%s", worst_default, rates.c_str())};
}

Outcome scaling_exponents()
{
    bool ok = true;
    std::string detail;
    for (double p : {1.5, 2.0, 3.0}) {
        const auto phase = PhaseNoiseModel::power_law(p, 1.0);
        const auto fit = scaling_exponent_fit(
            [&](double n) { return crb_mse(phase, CoherentBeam(std::sqrt(n))).value; }, 1e6, 1e12, 13);
        const double expect = -(p - 1.0) / p;
        ok = ok && std::abs(fit.slope - expect) <= 0.02;
        detail += fmt("coh p=%.1f %.4f (%.4f); ", p, fit.slope, expect);
    }
    double slope10 = 0.0;
    for (double p : {1.5, 2.0, 3.0, 10.0}) {
        const auto fit = scaling_exponent_fit([&](double n) { return heisenberg_lower_bound(p, 1.0, n).value; },
                                              1e6, 1e12, 13);
        const double expect = -2.0 * (p - 1.0) / (p + 1.0);
        ok = ok && std::abs(fit.slope - expect) <= 0.02;
        detail += fmt("HLB p=%.1f %.4f (%.4f); ", p, fit.slope, expect);
        if (p == 10.0)
            slope10 = fit.slope;
    }
    // the p = 10 slope sits between the p = 3 value and the constant-phase limit -2
    ok = ok && slope10 < -1.0 && slope10 > -2.0;
    return {ok, detail};
}

Outcome f_integral_identity()
{
    const std::vector<OpoBeam> beams{OpoBeam::pure(1.0, 4.0, 2.0), OpoBeam::pure(0.2, 50.0, 30.0),
                                     OpoBeam(2.0, 5.0, 0.5, 1.0, 0.3), OpoBeam(0.0, 10.0, 0.2, 7.0, 0.5)};
    double worst = 0.0;
    for (const auto& b : beams) {
        const Spectrum f = opo_f_spectrum(b);
        const auto r = integrate_to_infinity([&](double w) { return f.continuous(w); }, 0.0, b.gamma(),
                                             {1e-13, 0.0, 200000});
        const double n = photon_flux(b);
        worst = std::max(worst, rel(2.0 * r.value + f.spike_weight(), 16.0 * pi * n * n));
    }
    return {worst <= 1e-6, fmt("%zu beams, max rel %.2e", beams.size(), worst)};
}

Outcome spectral_uncertainty()
{
    bool ok = true;
    double worst_pure = 0.0;
    for (const auto [alpha, rp, gamma] : {std::tuple{1.0, 4.0, 2.0}, {0.0, 20.0, 0.5}, {3.0, 100.0, 10.0}}) {
        const auto report = validate_beam_spectrum(to_general(OpoBeam::pure(alpha, rp, gamma)));
        ok = ok && report.pass;
        for (const auto& c : report.checks)
            if (c.name == "uncertainty") {
                worst_pure = std::max(worst_pure, std::abs(c.min_margin));
                ok = ok && std::abs(c.min_margin) <= 1e-9;
            }
    }
    int failed = 0, perturbed = 0;
    for (const double shrink : {0.99, 0.9, 0.5}) {
        const double rp = 9.0, rm = shrink / rp;
        const auto report = validate_beam_spectrum(opo_general_unchecked(1.0, rp, rm, 2.0, 0.5));
        ++perturbed;
        failed += report.pass ? 0 : 1;
    }
    ok = ok && failed == perturbed;
    return {ok, fmt("pure max |uncertainty margin| %.2e; %d/%d perturbed beams rejected", worst_pure, failed, perturbed)};
}

Outcome tracking_attainability()
{
    TrackingConfig c;
    c.alpha = 4.0;
    c.kappa = 1.0;
    c.lambda = 0.0;
    c.dt = 1.5625e-4;
    c.duration = 1000.0 * c.error_correlation_time();
    c.burn_in = 10.0 * c.error_correlation_time();
    c.trajectories = 1000;
    c.seed = 1;
    c.threads = resolve_threads(0);
    const auto r = monte_carlo_mse(c);
    const double crb = crb_mse(PhaseNoiseModel::wiener(1.0), CoherentBeam(4.0)).value;
    const double ef = std::abs(r.mse_filtered.value - 0.125) / r.mse_filtered.std_error;
    const double es = std::abs(r.mse_smoothed.value - 0.0625) / r.mse_smoothed.std_error;
    const double ec = std::abs(r.mse_smoothed.value - crb) / r.mse_smoothed.std_error;
    const double er = std::abs(r.ratio_filter_smoother.value - 2.0) / r.ratio_filter_smoother.std_error;
    return {ef <= 3 && es <= 3 && ec <= 3 && er <= 3 && !r.diverged,
            fmt("filtered %.6f+-%.1e (%.2f se), smoothed %.6f+-%.1e (%.2f se; crb %.6f), ratio %.4f+-%.1e (%.2f se)",
                r.mse_filtered.value, r.mse_filtered.std_error, ef, r.mse_smoothed.value, r.mse_smoothed.std_error, es,
                crb, r.ratio_filter_smoother.value, r.ratio_filter_smoother.std_error, er)};
}

Outcome squeezed_cross_check()
{
    double worst = 0.0;
    for (double alpha : {0.5, 2.0, 8.0})
        for (double rp : {2.0, 10.0, 50.0})
            for (double gamma : {0.3, 3.0, 30.0})
                for (double lambda : {0.0, 0.5}) {
                    const auto beam = OpoBeam::pure(alpha, rp, gamma);
                    const auto [tp, tm] = opo_correlation_terms(beam);
                    const double w = wiener_smoother_mse(PhaseNoiseModel::ornstein_uhlenbeck(1.0, lambda), alpha,
                                                         Spectrum::lorentzians({tm}, 1.0));
                    const double cf = mean_field_bound_closed_form(alpha, rp, beam.x(), gamma, 1.0, lambda).value;
                    worst = std::max(worst, rel(w, cf));
                }

    // gamma -> infinity against kappa / (2 sqrt(4 alpha^2 kappa c + lambda^2)) with c = 1/R- or the alternative c = R-
    const double alpha = 2.0, rp = 10.0, kappa = 1.0, lambda = 0.0;
    const auto big = OpoBeam::pure(alpha, rp, 1e6);
    const auto [tp, tm] = opo_correlation_terms(big);
    const double limit = wiener_smoother_mse(PhaseNoiseModel::ornstein_uhlenbeck(kappa, lambda), alpha,
                                             Spectrum::lorentzians({tm}, 1.0));
    const double rm = big.r_minus();
    const double inverse = kappa / (2.0 * std::sqrt(4.0 * alpha * alpha * kappa / rm + lambda * lambda));
    const double alternative = kappa / (2.0 * std::sqrt(4.0 * alpha * alpha * rm * kappa + lambda * lambda));
    const bool matches_inverse = rel(limit, inverse) <= 1e-3;
    const bool matches_alternative = rel(limit, alternative) <= 1e-3;
    return {worst <= 1e-4 && (matches_inverse || matches_alternative),
            fmt("54 cases, max rel %.2e; gamma=1e6 limit %.8f vs 4a^2k/R- form %.8f (rel %.1e), alternative 4a^2R-k form "
                "%.8f (rel %.1e) -> %s",
                worst, limit, inverse, rel(limit, inverse), alternative, rel(limit, alternative),
                matches_inverse ? "4a^2k/R-" : (matches_alternative ? "4a^2R-k" : "neither"))};
}

Outcome asymptotic_convergence()
{
    const StarredParams s(gamma_star_optimal_exact(), 1.0);
    const auto rows = asymptotic_convergence_check(s, {1e2, 1e3, 1e4, 1e6}, StarMapping::LeadingOrder, 1.0,
                                                   resolve_threads(0));
    bool decreasing = true;
    std::string detail;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        detail += fmt("N*=%.0e dev %.3e; ", rows[i].n_star, rows[i].deviation);
        if (i > 0)
            decreasing = decreasing && std::abs(rows[i].deviation) < std::abs(rows[i - 1].deviation);
    }
    const double rate = convergence_rate(rows);
    detail += fmt("rate %.4f", rate);
    return {decreasing && std::abs(rate + 1.0 / 3.0) <= 0.1, detail};
}

} // namespace

int main()
{
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"optimum of C", c0_reproduction},
        {"closed form vs quadrature", closed_form_consistency},
        {"coherent bound", coherent_bound},
        {"convolution pipeline", convolution_oracle},
        {"scaling exponents", scaling_exponents},
        {"f integral identity", f_integral_identity},
        {"spectral uncertainty", spectral_uncertainty},
        {"tracking attainability", tracking_attainability},
        {"squeezed mean-field cross-check", squeezed_cross_check},
        {"asymptotic convergence", asymptotic_convergence},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("%s %2zu %s: %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str(),
                    secs);
        std::fflush(stdout);
        failures += o.pass ? 0 : 1;
    }
    return failures == 0 ? 0 : 1;
}
