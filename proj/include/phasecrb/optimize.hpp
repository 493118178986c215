#pragma once

#include <array>
#include <functional>

namespace phasecrb {

struct Box2 {
    std::array<double, 2> lo;
    std::array<double, 2> hi;

    std::array<double, 2> clamp(std::array<double, 2> p) const;
};

struct NelderMeadOptions {
    double f_tol = 1e-10;   ///< spread of simplex values
    double x_tol = 1e-9;    ///< simplex diameter relative to the box
    int max_evaluations = 4000;
};

struct NelderMeadResult {
    std::array<double, 2> x{};
    double f = 0.0;
    int evaluations = 0;
    bool converged = false;
};

/// Nelder-Mead simplex in two dimensions; trial points are projected onto the box.
NelderMeadResult nelder_mead(const std::function<double(std::array<double, 2>)>& f, std::array<double, 2> start,
                             std::array<double, 2> step, const Box2& box, const NelderMeadOptions& options = {});

struct GoldenResult {
    double x = 0.0;
    double f = 0.0;
    int evaluations = 0;
};

/// Golden-section minimisation of a unimodal function on [a, b].
GoldenResult golden_section(const std::function<double(double)>& f, double a, double b, double tol = 1e-10,
                            int max_iterations = 200);

} // namespace phasecrb
