#include <doctest.h>

#include <cmath>
#include <numbers>

#include <json.hpp>

#include "phasecrb/error.hpp"
#include "phasecrb/fisher.hpp"
#include "phasecrb/quadrature.hpp"

using namespace phasecrb;
using doctest::Approx;

namespace {

constexpr double pi = std::numbers::pi;

// Closed form of the OPO quantum Fisher spectrum written out term by term.
double fq_explicit(double alpha, double rp, double rm, double g, double x, double w)
{
    const double n = alpha * alpha + g / 16.0 * ((rp - 1) * (1 - x) + (rm - 1) * (1 + x));
    const double gm = (1 - x) * g, gp = (1 + x) * g;
    return 4 * n + 4 * alpha * alpha * (rp - 1) * gm * gm / (gm * gm + 4 * w * w)
         + g * g * g / 16.0
               * ((rp - 1) * (rp - 1) * std::pow(1 - x, 3) / (gm * gm + w * w)
                  + (rm - 1) * (rm - 1) * std::pow(1 + x, 3) / (gp * gp + w * w));
}

// Cosine transform of the time-domain f(t) = [4 alpha^2 + T+(t) + T-(t)]^2 / 2 minus its constant.
double f_time_domain(const OpoBeam& b, double w)
{
    const double m = 4 * b.alpha() * b.alpha();
    auto fc = [&](double t) {
        const auto c = opo_correlations(b, t);
        const double s = c.t_plus + c.t_minus;
        return 0.5 * s * s + m * s;
    };
    const double rate = (1 - b.x()) * b.gamma() / 2;
    const auto r = integrate_to_infinity([&](double t) { return fc(t) * std::cos(w * t); }, 0.0, 1.0 / rate,
                                         {1e-12, 0.0, 100000});
    return 2.0 * r.value;
}

} // namespace

TEST_CASE("OPO quantum Fisher spectrum matches the explicit closed form")
{
    for (const auto& b : {OpoBeam(1.0, 4.0, 0.25, 2.0, 1.0 / 3.0), OpoBeam(2.5, 3.0, 0.5, 0.7, 0.2),
                          OpoBeam(0.3, 30.0, 0.05, 15.0, 0.6)}) {
        const Spectrum fq = opo_quantum_fisher_spectrum(b);
        CHECK(fq.floor() == Approx(4 * photon_flux(b)));
        for (double w : {0.0, 0.1, 1.0, 3.3, 50.0}) {
            CHECK(fq(w) == Approx(fq_explicit(b.alpha(), b.r_plus(), b.r_minus(), b.gamma(), b.x(), w)).epsilon(1e-12));
            CHECK(fq(-w) == fq(w));
        }
    }
}

TEST_CASE("mean-field part is 4 alpha^2 S_X")
{
    const OpoBeam b(1.2, 5.0, 0.3, 3.0, 0.25);
    const auto [tp, tm] = opo_correlation_terms(b);
    const Spectrum mf = mean_field_fisher_spectrum(b);
    for (double w : {0.0, 0.4, 7.0})
        CHECK(mf(w) == Approx(4 * 1.44 * (1 + tp.spectrum(w))));
}

TEST_CASE("f spectrum against the time-domain transform")
{
    const OpoBeam b(0.8, 6.0, 0.2, 2.0, 0.3);
    const Spectrum f = opo_f_spectrum(b);
    for (double w : {0.0, 0.5, 2.0, 9.0})
        CHECK(f.continuous(w) == Approx(f_time_domain(b, w)).epsilon(1e-8));
    const double m = 4 * 0.64;
    CHECK(f.spike_weight() == Approx(pi * m * m));
}

TEST_CASE("integral of f equals 16 pi N^2")
{
    const OpoBeam b = OpoBeam::pure(1.1, 8.0, 4.0);
    const Spectrum f = opo_f_spectrum(b);
    const auto r = integrate_to_infinity([&](double w) { return f.continuous(w); }, 0.0, b.gamma(),
                                         {1e-13, 0.0, 100000});
    const double n = photon_flux(b);
    CHECK(2 * r.value + f.spike_weight() == Approx(16 * pi * n * n).epsilon(1e-9));
}

TEST_CASE("general pipeline reproduces the OPO closed form")
{
    const OpoBeam b(1.0, 4.0, 0.3, 2.0, 0.2);
    const auto comp = general_fisher_components(to_general(b));
    CHECK(comp.flux == Approx(photon_flux(b)).epsilon(1e-10));
    const Spectrum exact = opo_quantum_fisher_spectrum(b);
    double worst = 0.0;
    for (std::size_t j = 0; j < comp.omega.size(); j += 5)
        worst = std::max(worst, std::abs(comp.fq(comp.omega[j]) / exact(comp.omega[j]) - 1.0));
    CHECK(worst < 1e-4);
    // f from the grid matches its closed form away from the spike
    const Spectrum f = opo_f_spectrum(b);
    CHECK(comp.f.continuous(1.0) == Approx(f.continuous(1.0)).epsilon(1e-4));
    CHECK(comp.f.spike_weight() == Approx(f.spike_weight()).epsilon(1e-12));
}

TEST_CASE("coherent beams have a flat quantum Fisher spectrum")
{
    const auto s = fisher_spectra(PhaseNoiseModel::wiener(1.0), CoherentBeam(2.0));
    CHECK(s.flux == Approx(4.0));
    CHECK(s.fq(0.0) == Approx(16.0));
    CHECK(s.fq(1e4) == Approx(16.0));

    const Spectrum g = general_quantum_fisher_spectrum(to_general(CoherentBeam(2.0)));
    CHECK(g(0.0) == Approx(16.0).epsilon(1e-10));
    CHECK(g(3.0) == Approx(16.0).epsilon(1e-10));
}

TEST_CASE("validation of pure and perturbed beams")
{
    const auto pure = validate_beam_spectrum(to_general(OpoBeam::pure(1.5, 6.0, 2.0)));
    CHECK(pure.pass);
    for (const auto& c : pure.checks) {
        CHECK(c.min_margin >= -1e-6);
        if (c.name == "uncertainty")
            CHECK(std::abs(c.min_margin) < 1e-9);
    }

    const auto bad = validate_beam_spectrum(opo_general_unchecked(1.5, 6.0, 0.1, 2.0, 0.4));
    CHECK_FALSE(bad.pass);
    bool uncertainty_failed = false;
    for (const auto& c : bad.checks)
        if (c.name == "uncertainty")
            uncertainty_failed = c.min_margin < -1e-6;
    CHECK(uncertainty_failed);

    const auto j = nlohmann::json::parse(bad.to_json());
    CHECK(j.at("pass") == false);
    CHECK(j.at("checks").size() == 5);
}

TEST_CASE("general beams must have zero floors")
{
    CHECK_THROWS_AS(GeneralBeam(1.0, 0.0, Spectrum::lorentzians({{0.1, 1.0}}, 1.0), Spectrum::lorentzians({}),
                                Spectrum::lorentzians({})),
                    DomainError);
}
