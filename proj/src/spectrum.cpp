#include "phasecrb/spectrum.hpp"

#include <algorithm>
#include <cmath>

#include "phasecrb/error.hpp"

namespace phasecrb {

double PowerTail::operator()(double omega) const
{
    return coeff * std::pow(std::abs(omega), exponent);
}

double ExpCorrelation::at_time(double t) const
{
    return amplitude * std::exp(-rate * std::abs(t));
}

double ExpCorrelation::spectrum(double omega) const
{
    return 2.0 * amplitude * rate / (rate * rate + omega * omega);
}

Spectrum::Spectrum(Function continuous, PowerTail tail, std::vector<double> scales, double floor,
                   std::vector<Spike> spikes)
    : fn_(std::move(continuous)), tail_(tail), scales_(std::move(scales)), floor_(floor),
      spikes_(std::move(spikes))
{
    if (!std::isfinite(floor_))
        throw DomainError("spectrum floor must be finite");
    for (const double s : scales_)
        if (!(s > 0.0) || !std::isfinite(s))
            throw DomainError("spectrum scales must be positive and finite");

    // Every off-origin spike needs a mirror partner of equal weight.
    std::vector<bool> used(spikes_.size(), false);
    for (std::size_t i = 0; i < spikes_.size(); ++i) {
        const Spike& s = spikes_[i];
        if (!std::isfinite(s.location) || !std::isfinite(s.weight))
            throw DomainError("spike location and weight must be finite");
        if (s.location == 0.0 || used[i])
            continue;
        bool paired = false;
        for (std::size_t j = i + 1; j < spikes_.size(); ++j) {
            const Spike& t = spikes_[j];
            if (!used[j] && t.location == -s.location && t.weight == s.weight) {
                used[i] = used[j] = true;
                paired = true;
                break;
            }
        }
        if (!paired)
            throw DomainError("spike at nonzero frequency lacks a mirrored partner");
    }
}

Spectrum Spectrum::constant(double level)
{
    return Spectrum({}, PowerTail{}, {}, level);
}

Spectrum Spectrum::lorentzians(std::vector<ExpCorrelation> terms, double floor)
{
    std::vector<double> scales;
    double tail_coeff = 0.0;
    for (const auto& term : terms) {
        if (!(term.rate > 0.0) || !std::isfinite(term.amplitude))
            throw DomainError("Lorentzian terms need a positive rate and finite amplitude");
        scales.push_back(term.rate);
        tail_coeff += 2.0 * term.amplitude * term.rate;
    }
    if (terms.empty())
        return constant(floor);
    const double onset = 1e3 * *std::max_element(scales.begin(), scales.end());
    auto fn = [terms = std::move(terms)](double w) {
        double sum = 0.0;
        for (const auto& term : terms)
            sum += term.spectrum(w);
        return sum;
    };
    return Spectrum(std::move(fn), PowerTail{tail_coeff, -2.0, onset}, std::move(scales), floor);
}

namespace {

struct Table {
    double spacing;
    std::vector<double> values;
    PowerTail tail;

    double operator()(double w) const
    {
        const double end = spacing * static_cast<double>(values.size() - 1);
        if (w >= end)
            return tail(w);
        const double u = w / spacing;
        const auto j = static_cast<std::ptrdiff_t>(u);
        const double s = u - static_cast<double>(j);
        const auto n = static_cast<std::ptrdiff_t>(values.size());
        // Even extension below zero, tail law beyond the end.
        auto at = [&](std::ptrdiff_t k) {
            if (k < 0)
                return values[static_cast<std::size_t>(-k)];
            if (k >= n)
                return tail(spacing * static_cast<double>(k));
            return values[static_cast<std::size_t>(k)];
        };
        const double f0 = at(j - 1), f1 = at(j), f2 = at(j + 1), f3 = at(j + 2);
        // Four-point Lagrange interpolation on [j, j+1].
        return f0 * (-s * (s - 1.0) * (s - 2.0) / 6.0) + f1 * ((s + 1.0) * (s - 1.0) * (s - 2.0) / 2.0)
             + f2 * (-(s + 1.0) * s * (s - 2.0) / 2.0) + f3 * ((s + 1.0) * s * (s - 1.0) / 6.0);
    }
};

} // namespace

Spectrum Spectrum::tabulated(double spacing, std::vector<double> values, double tail_exponent,
                             std::vector<double> scales, double floor)
{
    if (!(spacing > 0.0) || values.size() < 4)
        throw DomainError("tabulated spectrum needs a positive spacing and at least four samples");
    const double end = spacing * static_cast<double>(values.size() - 1);
    const PowerTail tail{values.back() / std::pow(end, tail_exponent), tail_exponent, end};
    auto table = std::make_shared<const Table>(Table{spacing, std::move(values), tail});
    return Spectrum([table](double w) { return (*table)(w); }, tail, std::move(scales), floor);
}

double Spectrum::continuous(double omega) const
{
    return fn_ ? fn_(std::abs(omega)) : 0.0;
}

double Spectrum::spike_weight() const
{
    double sum = 0.0;
    for (const auto& s : spikes_)
        sum += s.weight;
    return sum;
}

Spectrum Spectrum::with_floor(double floor) const
{
    Spectrum copy = *this;
    copy.floor_ = floor;
    return copy;
}

Spectrum Spectrum::with_spikes(std::vector<Spike> spikes) const
{
    return Spectrum(fn_, tail_, scales_, floor_, std::move(spikes));
}

double Spectrum::widest_scale() const
{
    return scales_.empty() ? 1.0 : *std::max_element(scales_.begin(), scales_.end());
}

double Spectrum::narrowest_scale() const
{
    return scales_.empty() ? 1.0 : *std::min_element(scales_.begin(), scales_.end());
}

} // namespace phasecrb
