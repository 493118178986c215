#pragma once

#include <functional>
#include <memory>
#include <span>
#include <vector>

namespace phasecrb {

/// Fourier convention used everywhere in the library:
///   g~(w) = \int g(t) e^{-iwt} dt,   g(t) = (1/2pi) \int g~(w) e^{iwt} dw.
/// A constant c in the time domain therefore maps to a spike of weight 2*pi*c at w = 0.

/// Contribution `weight * delta(omega - location)`.
struct Spike {
    double location = 0.0;
    double weight = 0.0;
};

/// Declared asymptotic law of a continuous part: `coeff * |omega|^exponent` for |omega| >= onset.
/// Decaying parts use a negative exponent, growing ones (prior information) a positive one.
struct PowerTail {
    double coeff = 0.0;
    double exponent = -2.0;
    double onset = 0.0;

    double operator()(double omega) const;
};

/// Time correlation `amplitude * exp(-rate |t|)`; its spectrum is the Lorentzian
/// 2 * amplitude * rate / (rate^2 + omega^2).
struct ExpCorrelation {
    double amplitude = 0.0;
    double rate = 1.0;

    double at_time(double t) const;
    double spectrum(double omega) const;
};

/// Even real spectrum made of a white floor, a continuous part and delta spikes.
///
/// The continuous part is always evaluated at |omega|, so evenness holds by construction.
/// Spikes away from the origin must come in +/- pairs of equal weight. `scales` lists the
/// characteristic frequencies of the continuous part (Lorentzian widths and similar) and is
/// used to place quadrature breakpoints and convolution grids.
class Spectrum {
public:
    using Function = std::function<double(double)>;

    Spectrum() = default;
    Spectrum(Function continuous, PowerTail tail, std::vector<double> scales,
             double floor = 0.0, std::vector<Spike> spikes = {});

    static Spectrum constant(double level);
    static Spectrum lorentzians(std::vector<ExpCorrelation> terms, double floor = 0.0);

    /// Samples on the grid omega_j = j * spacing (j >= 0), cubic interpolation in between,
    /// and `tail_exponent` power law beyond the last sample (matched to it).
    static Spectrum tabulated(double spacing, std::vector<double> values, double tail_exponent,
                              std::vector<double> scales = {}, double floor = 0.0);

    /// floor + continuous(omega); spikes are not included.
    double operator()(double omega) const { return floor_ + continuous(omega); }
    double continuous(double omega) const;

    double floor() const noexcept { return floor_; }
    const PowerTail& tail() const noexcept { return tail_; }
    std::span<const double> scales() const noexcept { return scales_; }
    std::span<const Spike> spikes() const noexcept { return spikes_; }
    bool has_continuous() const noexcept { return static_cast<bool>(fn_); }

    /// Sum of all spike weights.
    double spike_weight() const;

    Spectrum with_floor(double floor) const;
    Spectrum with_spikes(std::vector<Spike> spikes) const;

    /// Largest and smallest positive entries of `scales`, or 1 if there are none.
    double widest_scale() const;
    double narrowest_scale() const;

private:
    Function fn_;
    PowerTail tail_{};
    std::vector<double> scales_;
    double floor_ = 0.0;
    std::vector<Spike> spikes_;
};

} // namespace phasecrb
