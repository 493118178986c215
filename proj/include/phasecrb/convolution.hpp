#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "phasecrb/spectrum.hpp"

namespace phasecrb {

/// Sampling parameters for numerical spectral convolution.
///
/// Inputs are sampled with spacing narrowest_scale / (points_per_width * refinement) on
/// |omega| <= W / 2, W = cutoff_widths * refinement * widest_scale. Convolutions are returned on
/// 0 <= omega <= W / 4, where truncation of the inputs costs O(W^-3).
struct ConvolutionGrid {
    int refinement = 1;
    int points_per_width = 32;
    int cutoff_widths = 64;
};

struct GridLayout {
    double spacing = 0.0;
    std::size_t input_half = 0;   ///< inputs sampled at j * spacing, |j| <= input_half
    std::size_t output_count = 0; ///< outputs at j * spacing, 0 <= j < output_count
};

/// Grid covering every scale of the listed spectra.
GridLayout make_layout(std::span<const Spectrum* const> spectra, const ConvolutionGrid& grid);

/// FFT-based linear convolution of even spectra with zero white floor.
///
/// Continuous parts are convolved on the grid; terms involving spikes are evaluated exactly.
class Convolver {
public:
    explicit Convolver(GridLayout layout);
    ~Convolver();
    Convolver(const Convolver&) = delete;
    Convolver& operator=(const Convolver&) = delete;

    /// Registers an operand and returns its handle.
    int add(const Spectrum& s);

    /// (A * B)(omega_j) = \int A(nu) B(omega_j - nu) dnu without the spike-spike part.
    std::vector<double> convolve(int a, int b) const;

    /// Spike-spike part of A * B.
    std::vector<Spike> spike_product(int a, int b) const;

    /// Samples of the continuous part of an operand on the output grid.
    std::vector<double> samples(int a) const;

    const GridLayout& layout() const noexcept { return layout_; }
    std::vector<double> omega() const;

private:
    struct Impl;
    GridLayout layout_;
    std::unique_ptr<Impl> impl_;
};

/// Merges spikes sharing a location (exact comparison) and drops zero weights.
std::vector<Spike> merge_spikes(std::vector<Spike> spikes);

} // namespace phasecrb
