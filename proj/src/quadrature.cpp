#include "phasecrb/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

#include "phasecrb/error.hpp"

namespace phasecrb {

namespace {

// Kronrod abscissae and weights; Gauss weights for the 7-point rule on the odd nodes.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double a, b, value, error;
    bool operator<(const Segment& other) const { return error < other.error; }
};

Segment gauss_kronrod(const Integrand& f, double a, double b)
{
    constexpr double eps = std::numeric_limits<double>::epsilon();
    constexpr double tiny = std::numeric_limits<double>::min();
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    double fv1[7], fv2[7];
    const double fc = f(center);
    double resg = fc * kWg[3];
    double resk = fc * kWgk[7];
    double resabs = std::abs(resk);
    for (int j = 0; j < 3; ++j) {
        const int k = 2 * j + 1;
        const double dx = half * kXgk[k];
        const double f1 = f(center - dx), f2 = f(center + dx);
        fv1[k] = f1;
        fv2[k] = f2;
        resg += kWg[j] * (f1 + f2);
        resk += kWgk[k] * (f1 + f2);
        resabs += kWgk[k] * (std::abs(f1) + std::abs(f2));
    }
    for (int j = 0; j < 4; ++j) {
        const int k = 2 * j;
        const double dx = half * kXgk[k];
        const double f1 = f(center - dx), f2 = f(center + dx);
        fv1[k] = f1;
        fv2[k] = f2;
        resk += kWgk[k] * (f1 + f2);
        resabs += kWgk[k] * (std::abs(f1) + std::abs(f2));
    }
    const double mean = 0.5 * resk;
    double resasc = kWgk[7] * std::abs(fc - mean);
    for (int j = 0; j < 7; ++j)
        resasc += kWgk[j] * (std::abs(fv1[j] - mean) + std::abs(fv2[j] - mean));

    const double value = resk * half;
    resabs *= std::abs(half);
    resasc *= std::abs(half);
    double err = std::abs((resk - resg) * half);
    if (resasc != 0.0 && err != 0.0)
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    if (resabs > tiny / (50.0 * eps))
        err = std::max(50.0 * eps * resabs, err);
    if (!std::isfinite(value))
        throw DomainError("integrand is not finite on [" + std::to_string(a) + ", " + std::to_string(b) + "]");
    return {a, b, value, err};
}

} // namespace

QuadratureResult integrate(const Integrand& f, std::span<const double> breakpoints,
                           const QuadratureOptions& options)
{
    if (breakpoints.size() < 2)
        throw DomainError("integration needs at least two breakpoints");

    std::priority_queue<Segment> queue;
    std::vector<Segment> frozen;
    QuadratureResult result;
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        if (!(breakpoints[i + 1] > breakpoints[i]))
            continue;
        queue.push(gauss_kronrod(f, breakpoints[i], breakpoints[i + 1]));
        result.evaluations += 15;
    }

    auto totals = [&] {
        std::vector<double> values, errors;
        for (const auto& s : frozen) {
            values.push_back(s.value);
            errors.push_back(s.error);
        }
        auto copy = queue;
        while (!copy.empty()) {
            values.push_back(copy.top().value);
            errors.push_back(copy.top().error);
            copy.pop();
        }
        return std::pair{pairwise_sum(values), pairwise_sum(errors)};
    };

    double value = 0.0, error = 0.0;
    {
        auto [v, e] = totals();
        value = v;
        error = e;
    }
    int iterations = 0;
    while (!queue.empty()) {
        if (error <= std::max(options.abs_tol, options.rel_tol * std::abs(value)))
            break;
        if (static_cast<int>(queue.size() + frozen.size()) >= options.max_intervals)
            break;
        const Segment worst = queue.top();
        queue.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        const double scale = std::max(std::abs(worst.a), std::abs(worst.b));
        if (!(mid > worst.a && mid < worst.b) || (worst.b - worst.a) < 1e-14 * scale) {
            frozen.push_back(worst);
            continue;
        }
        const Segment left = gauss_kronrod(f, worst.a, mid);
        const Segment right = gauss_kronrod(f, mid, worst.b);
        result.evaluations += 30;
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        queue.push(left);
        queue.push(right);
        // Running sums drift; refresh them now and then.
        if (++iterations % 256 == 0) {
            auto [v, e] = totals();
            value = v;
            error = e;
        }
    }
    auto [v, e] = totals();
    result.value = v;
    result.abs_error = e;
    result.intervals = static_cast<int>(queue.size() + frozen.size());
    result.converged = e <= std::max(options.abs_tol, options.rel_tol * std::abs(v));
    return result;
}

QuadratureResult integrate(const Integrand& f, double a, double b, const QuadratureOptions& options)
{
    const double pts[2] = {a, b};
    return integrate(f, std::span<const double>(pts), options);
}

QuadratureResult integrate_to_infinity(const Integrand& f, double a, double scale,
                                       const QuadratureOptions& options)
{
    if (!(scale > 0.0))
        throw DomainError("integrate_to_infinity needs a positive scale");
    auto mapped = [&](double u) {
        if (u >= 1.0)
            return 0.0;
        const double one_minus = 1.0 - u;
        const double w = a + scale * u / one_minus;
        return f(w) * scale / (one_minus * one_minus);
    };
    // Breakpoints at omega - a = scale * 4^k so each panel covers a comparable dynamic range.
    std::vector<double> pts{0.0};
    for (int k = -6; k <= 24; ++k) {
        const double r = std::pow(4.0, k);
        pts.push_back(r / (1.0 + r));
    }
    pts.push_back(1.0);
    return integrate(mapped, pts, options);
}

std::vector<double> geometric_breakpoints(double lo, double hi, double ratio,
                                          std::span<const double> extra)
{
    std::vector<double> pts{0.0};
    for (double w = lo; w < hi; w *= ratio)
        pts.push_back(w);
    pts.push_back(hi);
    for (const double e : extra)
        if (e > 0.0 && e < hi)
            pts.push_back(e);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](double x, double y) { return std::abs(x - y) <= 1e-12 * std::abs(y); }),
              pts.end());
    return pts;
}

double pairwise_sum(std::span<const double> values)
{
    if (values.size() <= 8) {
        double s = 0.0;
        for (const double v : values)
            s += v;
        return s;
    }
    const std::size_t half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

} // namespace phasecrb
