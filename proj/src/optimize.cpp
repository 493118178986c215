#include "phasecrb/optimize.hpp"

#include <algorithm>
#include <cmath>

namespace phasecrb {

std::array<double, 2> Box2::clamp(std::array<double, 2> p) const
{
    for (int i = 0; i < 2; ++i)
        p[i] = std::clamp(p[i], lo[i], hi[i]);
    return p;
}

NelderMeadResult nelder_mead(const std::function<double(std::array<double, 2>)>& f, std::array<double, 2> start,
                             std::array<double, 2> step, const Box2& box, const NelderMeadOptions& options)
{
    using Point = std::array<double, 2>;
    struct Vertex {
        Point x;
        double f;
    };
    NelderMeadResult result;
    auto eval = [&](Point p) {
        p = box.clamp(p);
        ++result.evaluations;
        return Vertex{p, f(p)};
    };
    auto combine = [](const Point& a, const Point& b, double t) {
        // a + t (b - a)
        return Point{a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])};
    };

    start = box.clamp(start);
    std::array<Vertex, 3> s{eval(start), eval({start[0] + step[0], start[1]}), eval({start[0], start[1] + step[1]})};
    // A vertex clamped onto the start point would collapse the simplex; step the other way.
    for (int i = 1; i < 3; ++i)
        if (s[i].x == s[0].x) {
            Point p = start;
            p[i - 1] -= step[i - 1];
            s[i] = eval(p);
        }

    const double width = std::max(box.hi[0] - box.lo[0], box.hi[1] - box.lo[1]);
    while (result.evaluations < options.max_evaluations) {
        std::sort(s.begin(), s.end(), [](const Vertex& a, const Vertex& b) { return a.f < b.f; });
        double diameter = 0.0;
        for (int i = 1; i < 3; ++i)
            diameter = std::max(diameter, std::hypot(s[i].x[0] - s[0].x[0], s[i].x[1] - s[0].x[1]));
        if (std::abs(s[2].f - s[0].f) <= options.f_tol * (std::abs(s[0].f) + options.f_tol)
            && diameter <= options.x_tol * width) {
            result.converged = true;
            break;
        }
        if (diameter <= 1e-15 * width) {
            result.converged = true;
            break;
        }
        const Point centroid{0.5 * (s[0].x[0] + s[1].x[0]), 0.5 * (s[0].x[1] + s[1].x[1])};
        const Vertex reflected = eval(combine(centroid, s[2].x, -1.0));
        if (reflected.f < s[0].f) {
            const Vertex expanded = eval(combine(centroid, s[2].x, -2.0));
            s[2] = expanded.f < reflected.f ? expanded : reflected;
        } else if (reflected.f < s[1].f) {
            s[2] = reflected;
        } else {
            const bool outside = reflected.f < s[2].f;
            const Vertex contracted = eval(combine(centroid, outside ? reflected.x : s[2].x, 0.5));
            if (contracted.f < std::min(reflected.f, s[2].f)) {
                s[2] = contracted;
            } else {
                for (int i = 1; i < 3; ++i)
                    s[i] = eval(combine(s[0].x, s[i].x, 0.5));
            }
        }
    }
    const auto best = std::min_element(s.begin(), s.end(), [](const Vertex& a, const Vertex& b) { return a.f < b.f; });
    result.x = best->x;
    result.f = best->f;
    return result;
}

GoldenResult golden_section(const std::function<double(double)>& f, double a, double b, double tol,
                            int max_iterations)
{
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    GoldenResult r;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    r.evaluations = 2;
    for (int i = 0; i < max_iterations && (b - a) > tol * (std::abs(c) + std::abs(d)); ++i) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
        ++r.evaluations;
    }
    if (fc < fd) {
        r.x = c;
        r.f = fc;
    } else {
        r.x = d;
        r.f = fd;
    }
    return r;
}

} // namespace phasecrb
