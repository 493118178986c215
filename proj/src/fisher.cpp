#include "phasecrb/fisher.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <json.hpp>

#include "phasecrb/error.hpp"

namespace phasecrb {

namespace {

constexpr double kPi = std::numbers::pi;

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

// a = amplitude, b = rate of the exponentials behind T+ and T-.
struct OpoTerms {
    double ap, bp, am, bm;
};

OpoTerms terms_of(const OpoBeam& beam)
{
    const auto [plus, minus] = opo_correlation_terms(beam);
    return {plus.amplitude, plus.rate, minus.amplitude, minus.rate};
}

std::vector<Spike> scaled(std::span<const Spike> spikes, double factor)
{
    std::vector<Spike> out;
    for (const Spike& s : spikes)
        out.push_back({s.location, s.weight * factor});
    return out;
}

void append(std::vector<Spike>& to, const std::vector<Spike>& from)
{
    to.insert(to.end(), from.begin(), from.end());
}

} // namespace

Spectrum opo_quantum_fisher_spectrum(const OpoBeam& beam)
{
    const auto t = terms_of(beam);
    const double a2 = beam.alpha() * beam.alpha();
    // Mean field times T+, then the self-convolutions of T+ and T- (one Lorentzian each).
    return Spectrum::lorentzians({{4.0 * a2 * t.ap, t.bp}, {0.5 * t.ap * t.ap, 2.0 * t.bp}, {0.5 * t.am * t.am, 2.0 * t.bm}},
                                 4.0 * photon_flux(beam));
}

Spectrum mean_field_fisher_spectrum(const OpoBeam& beam)
{
    const auto t = terms_of(beam);
    const double a2 = beam.alpha() * beam.alpha();
    return Spectrum::lorentzians({{4.0 * a2 * t.ap, t.bp}}, 4.0 * a2);
}

Spectrum opo_f_spectrum(const OpoBeam& beam)
{
    const auto t = terms_of(beam);
    const double m = 4.0 * beam.alpha() * beam.alpha();
    // (1/4pi)(T~ * T~) with T~ = T+~ + T-~, plus M T~, plus the mean-field spike.
    Spectrum s = Spectrum::lorentzians({{0.5 * t.ap * t.ap, 2.0 * t.bp},
                                        {0.5 * t.am * t.am, 2.0 * t.bm},
                                        {t.ap * t.am, t.bp + t.bm},
                                        {m * t.ap, t.bp},
                                        {m * t.am, t.bm}});
    return m == 0.0 ? s : s.with_spikes({{0.0, kPi * m * m}});
}

GeneralFisherComponents general_fisher_components(const GeneralBeam& beam, const ConvolutionGrid& grid)
{
    const Spectrum& hx = beam.h_x();
    const Spectrum& hy = beam.h_y();
    const Spectrum& hz = beam.h_xy();
    const Spectrum* inputs[] = {&hx, &hy, &hz};

    Convolver conv(make_layout(inputs, grid));
    const int X = conv.add(hx), Y = conv.add(hy), Z = conv.add(hz);
    const auto xx = conv.convolve(X, X), yy = conv.convolve(Y, Y);
    const auto xy = conv.convolve(X, Y), zz = conv.convolve(Z, Z);
    const auto x = conv.samples(X), y = conv.samples(Y), z = conv.samples(Z);

    const double mx = beam.mean_x(), my = beam.mean_y();
    const double mx2 = mx * mx, my2 = my * my, m = mx2 + my2;
    const double n = photon_flux(beam);

    GeneralFisherComponents out;
    out.flux = n;
    out.omega = conv.omega();
    const std::size_t count = out.omega.size();
    out.f_values.resize(count);
    out.g_values.resize(count);
    out.fq_values.resize(count);
    for (std::size_t j = 0; j < count; ++j) {
        out.f_values[j] = (xx[j] + yy[j] + 2.0 * xy[j]) / (4.0 * kPi) + m * (x[j] + y[j]);
        out.g_values[j] = (xy[j] - zz[j]) / (2.0 * kPi) + my2 * x[j] + mx2 * y[j] - 2.0 * mx * my * z[j];
        // f~ - g~ with the cancellations done symbolically.
        out.fq_values[j] = (xx[j] + yy[j] + 2.0 * zz[j]) / (4.0 * kPi) + mx2 * x[j] + my2 * y[j] + 2.0 * mx * my * z[j];
    }

    std::vector<Spike> f_spikes, g_spikes, q_spikes;
    const auto sxx = conv.spike_product(X, X), syy = conv.spike_product(Y, Y);
    const auto sxy = conv.spike_product(X, Y), szz = conv.spike_product(Z, Z);
    append(f_spikes, scaled(sxx, 1.0 / (4.0 * kPi)));
    append(f_spikes, scaled(syy, 1.0 / (4.0 * kPi)));
    append(f_spikes, scaled(sxy, 2.0 / (4.0 * kPi)));
    append(f_spikes, scaled(hx.spikes(), m));
    append(f_spikes, scaled(hy.spikes(), m));
    append(g_spikes, scaled(sxy, 1.0 / (2.0 * kPi)));
    append(g_spikes, scaled(szz, -1.0 / (2.0 * kPi)));
    append(g_spikes, scaled(hx.spikes(), my2));
    append(g_spikes, scaled(hy.spikes(), mx2));
    append(g_spikes, scaled(hz.spikes(), -2.0 * mx * my));
    if (m != 0.0) {
        f_spikes.push_back({0.0, kPi * m * m});
        g_spikes.push_back({0.0, kPi * m * m});
    }
    append(q_spikes, scaled(sxx, 1.0 / (4.0 * kPi)));
    append(q_spikes, scaled(syy, 1.0 / (4.0 * kPi)));
    append(q_spikes, scaled(szz, 2.0 / (4.0 * kPi)));
    append(q_spikes, scaled(hx.spikes(), mx2));
    append(q_spikes, scaled(hy.spikes(), my2));
    append(q_spikes, scaled(hz.spikes(), 2.0 * mx * my));

    double tail_exponent = -2.0;
    bool any = false;
    std::vector<double> scales;
    for (const Spectrum* s : inputs) {
        if (!s->has_continuous())
            continue;
        tail_exponent = any ? std::max(tail_exponent, s->tail().exponent) : s->tail().exponent;
        any = true;
        scales.insert(scales.end(), s->scales().begin(), s->scales().end());
    }
    const double spacing = conv.layout().spacing;
    out.f = Spectrum::tabulated(spacing, out.f_values, tail_exponent, scales).with_spikes(merge_spikes(f_spikes));
    out.g = Spectrum::tabulated(spacing, out.g_values, tail_exponent, scales).with_spikes(merge_spikes(g_spikes));
    out.fq = Spectrum::tabulated(spacing, out.fq_values, tail_exponent, scales, 4.0 * n)
                 .with_spikes(merge_spikes(q_spikes));
    return out;
}

Spectrum general_quantum_fisher_spectrum(const GeneralBeam& beam, const ConvolutionGrid& grid)
{
    auto c = general_fisher_components(beam, grid);
    const double floor = 4.0 * c.flux;
    double lo = floor, hi = 0.0, arg = 0.0;
    for (std::size_t j = 0; j < c.fq_values.size(); ++j) {
        const double v = floor + c.fq_values[j];
        hi = std::max(hi, std::abs(v));
        if (v < lo) {
            lo = v;
            arg = c.omega[j];
        }
    }
    if (lo < -1e-8 * hi)
        throw PhysicalityError("quantum Fisher spectrum is negative (" + std::to_string(lo) + " at omega = "
                               + std::to_string(arg) + "); the beam violates Bochner positivity");
    return c.fq;
}

std::string ValidationReport::to_json() const
{
    nlohmann::json j;
    j["pass"] = pass;
    j["checks"] = nlohmann::json::array();
    for (const auto& c : checks)
        j["checks"].push_back({{"name", c.name}, {"min_margin", c.min_margin}, {"argmin_omega", c.argmin_omega}});
    return j.dump(2);
}

ValidationReport validate_beam_spectrum(const GeneralBeam& beam, double tolerance, const ConvolutionGrid& grid)
{
    const auto c = general_fisher_components(beam, grid);
    const double unit = 4.0 * c.flux;

    ValidationReport report;
    auto check = [&](std::string name, auto&& margin) {
        ValidationCheck result{std::move(name), margin(0), c.omega[0]};
        for (std::size_t j = 1; j < c.omega.size(); ++j) {
            const double v = margin(j);
            if (v < result.min_margin) {
                result.min_margin = v;
                result.argmin_omega = c.omega[j];
            }
        }
        if (!(result.min_margin >= -tolerance))
            report.pass = false;
        report.checks.push_back(std::move(result));
    };

    const auto& hx = beam.h_x();
    const auto& hy = beam.h_y();
    const auto& hz = beam.h_xy();
    check("vacuum_x", [&](std::size_t j) { return 1.0 + hx.continuous(c.omega[j]); });
    check("vacuum_y", [&](std::size_t j) { return 1.0 + hy.continuous(c.omega[j]); });
    check("uncertainty", [&](std::size_t j) {
        const double w = c.omega[j];
        const double sxy = hz.continuous(w);
        return (1.0 + hx.continuous(w)) * (1.0 + hy.continuous(w)) - sxy * sxy - 1.0;
    });
    check("f_nonnegative", [&](std::size_t j) { return c.f_values[j] / unit; });
    check("g_bound", [&](std::size_t j) { return (unit + c.g_values[j]) / unit; });
    return report;
}

GeneralBeam as_general(const BeamModel& beam)
{
    return std::visit(overloaded{
                          [](const CoherentBeam& b) { return to_general(b); },
                          [](const OpoBeam& b) { return to_general(b); },
                          [](const GeneralBeam& b) { return b; },
                      },
                      beam);
}

FisherSpectra fisher_spectra(const PhaseNoiseModel& phase, const BeamModel& beam)
{
    Spectrum fq = std::visit(overloaded{
                                 [](const CoherentBeam& b) { return Spectrum::constant(4.0 * b.alpha() * b.alpha()); },
                                 [](const OpoBeam& b) { return opo_quantum_fisher_spectrum(b); },
                                 [](const GeneralBeam& b) { return general_quantum_fisher_spectrum(b); },
                             },
                             beam);
    return {classical_fisher(phase), std::move(fq), photon_flux(beam)};
}

} // namespace phasecrb
