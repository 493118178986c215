#include "phasecrb/convolution.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <mutex>

#include "phasecrb/error.hpp"

namespace phasecrb {

namespace {

// FFTW planning is not thread-safe; execution with the new-array interface is.
std::mutex& planner_mutex()
{
    static std::mutex m;
    return m;
}

std::size_t fast_length(std::size_t n)
{
    for (std::size_t len = n;; ++len) {
        std::size_t r = len;
        for (const std::size_t f : {2u, 3u, 5u})
            while (r % f == 0)
                r /= f;
        if (r == 1)
            return len;
    }
}

struct RealBuffer {
    double* data;
    explicit RealBuffer(std::size_t n) : data(fftw_alloc_real(n)) {}
    ~RealBuffer() { fftw_free(data); }
    RealBuffer(const RealBuffer&) = delete;
    RealBuffer& operator=(const RealBuffer&) = delete;
};

struct ComplexBuffer {
    fftw_complex* data;
    explicit ComplexBuffer(std::size_t n) : data(fftw_alloc_complex(n)) {}
    ~ComplexBuffer() { fftw_free(data); }
    ComplexBuffer(const ComplexBuffer&) = delete;
    ComplexBuffer& operator=(const ComplexBuffer&) = delete;
};

} // namespace

GridLayout make_layout(std::span<const Spectrum* const> spectra, const ConvolutionGrid& grid)
{
    if (grid.refinement < 1 || grid.points_per_width < 2 || grid.cutoff_widths < 4)
        throw DomainError("convolution grid needs refinement >= 1, points_per_width >= 2, cutoff_widths >= 4");
    double narrow = 0.0, wide = 0.0;
    for (const Spectrum* s : spectra) {
        if (!s->has_continuous())
            continue;
        for (const double sc : s->scales()) {
            narrow = narrow == 0.0 ? sc : std::min(narrow, sc);
            wide = std::max(wide, sc);
        }
    }
    if (narrow == 0.0)
        narrow = wide = 1.0;
    const double r = grid.refinement;
    GridLayout layout;
    layout.spacing = narrow / (grid.points_per_width * r);
    const double width = grid.cutoff_widths * r * wide;
    layout.input_half = static_cast<std::size_t>(std::ceil(0.5 * width / layout.spacing));
    layout.output_count = layout.input_half / 2 + 1;
    return layout;
}

struct Convolver::Impl {
    std::size_t length = 0;
    std::unique_ptr<RealBuffer> real;
    std::unique_ptr<ComplexBuffer> work;
    fftw_plan forward = nullptr;
    fftw_plan backward = nullptr;

    struct Operand {
        Spectrum spectrum;
        std::vector<std::complex<double>> transform;
    };
    std::vector<Operand> operands;
};

Convolver::Convolver(GridLayout layout) : layout_(layout), impl_(std::make_unique<Impl>())
{
    const std::size_t m = layout_.input_half;
    impl_->length = fast_length(4 * m + 2);
    const std::size_t n = impl_->length;
    impl_->real = std::make_unique<RealBuffer>(n);
    impl_->work = std::make_unique<ComplexBuffer>(n / 2 + 1);
    std::lock_guard lock(planner_mutex());
    impl_->forward = fftw_plan_dft_r2c_1d(static_cast<int>(n), impl_->real->data, impl_->work->data,
                                          FFTW_ESTIMATE);
    impl_->backward = fftw_plan_dft_c2r_1d(static_cast<int>(n), impl_->work->data, impl_->real->data,
                                           FFTW_ESTIMATE);
    if (!impl_->forward || !impl_->backward)
        throw Error("FFTW planning failed");
}

Convolver::~Convolver()
{
    std::lock_guard lock(planner_mutex());
    if (impl_->forward)
        fftw_destroy_plan(impl_->forward);
    if (impl_->backward)
        fftw_destroy_plan(impl_->backward);
}

int Convolver::add(const Spectrum& s)
{
    if (s.floor() != 0.0)
        throw DomainError("cannot convolve a spectrum with a white floor");
    const std::size_t m = layout_.input_half;
    const std::size_t n = impl_->length;
    double* in = impl_->real->data;
    std::fill(in, in + n, 0.0);
    if (s.has_continuous()) {
        for (std::size_t j = 0; j <= m; ++j) {
            const double v = s.continuous(static_cast<double>(j) * layout_.spacing);
            in[m + j] = v;
            in[m - j] = v;
        }
    }
    fftw_execute(impl_->forward);
    Impl::Operand op{s, std::vector<std::complex<double>>(n / 2 + 1)};
    for (std::size_t k = 0; k < n / 2 + 1; ++k)
        op.transform[k] = {impl_->work->data[k][0], impl_->work->data[k][1]};
    impl_->operands.push_back(std::move(op));
    return static_cast<int>(impl_->operands.size() - 1);
}

std::vector<double> Convolver::convolve(int a, int b) const
{
    const auto& A = impl_->operands.at(static_cast<std::size_t>(a));
    const auto& B = impl_->operands.at(static_cast<std::size_t>(b));
    const std::size_t n = impl_->length;
    const std::size_t m = layout_.input_half;
    const std::size_t out = layout_.output_count;

    std::vector<double> result(out, 0.0);
    if (A.spectrum.has_continuous() && B.spectrum.has_continuous()) {
        for (std::size_t k = 0; k < n / 2 + 1; ++k) {
            const std::complex<double> p = A.transform[k] * B.transform[k];
            impl_->work->data[k][0] = p.real();
            impl_->work->data[k][1] = p.imag();
        }
        fftw_execute(impl_->backward);
        // Index i of an input holds omega = (i - m) * spacing, so the product sits at 2m + j.
        const double scale = layout_.spacing / static_cast<double>(n);
        for (std::size_t j = 0; j < out; ++j)
            result[j] = impl_->real->data[2 * m + j] * scale;
    }

    auto add_shifted = [&](const Spectrum& spikes, const Spectrum& smooth) {
        if (!smooth.has_continuous())
            return;
        for (const Spike& s : spikes.spikes())
            for (std::size_t j = 0; j < out; ++j)
                result[j] += s.weight * smooth.continuous(static_cast<double>(j) * layout_.spacing - s.location);
    };
    add_shifted(A.spectrum, B.spectrum);
    add_shifted(B.spectrum, A.spectrum);
    return result;
}

std::vector<Spike> Convolver::spike_product(int a, int b) const
{
    const auto& A = impl_->operands.at(static_cast<std::size_t>(a)).spectrum;
    const auto& B = impl_->operands.at(static_cast<std::size_t>(b)).spectrum;
    std::vector<Spike> out;
    for (const Spike& s : A.spikes())
        for (const Spike& t : B.spikes())
            out.push_back({s.location + t.location, s.weight * t.weight});
    return merge_spikes(std::move(out));
}

std::vector<double> Convolver::samples(int a) const
{
    const auto& A = impl_->operands.at(static_cast<std::size_t>(a)).spectrum;
    std::vector<double> out(layout_.output_count);
    for (std::size_t j = 0; j < out.size(); ++j)
        out[j] = A.continuous(static_cast<double>(j) * layout_.spacing);
    return out;
}

std::vector<double> Convolver::omega() const
{
    std::vector<double> out(layout_.output_count);
    for (std::size_t j = 0; j < out.size(); ++j)
        out[j] = static_cast<double>(j) * layout_.spacing;
    return out;
}

std::vector<Spike> merge_spikes(std::vector<Spike> spikes)
{
    std::map<double, double> merged;
    for (const Spike& s : spikes)
        merged[s.location] += s.weight;
    std::vector<Spike> out;
    for (const auto& [loc, w] : merged)
        if (w != 0.0)
            out.push_back({loc, w});
    return out;
}

} // namespace phasecrb
