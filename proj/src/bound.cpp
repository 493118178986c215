#include "phasecrb/bound.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "phasecrb/error.hpp"
#include "phasecrb/fisher.hpp"
#include "phasecrb/parallel.hpp"
#include "phasecrb/quadrature.hpp"

namespace phasecrb {

namespace {

constexpr double kPi = std::numbers::pi;

// Relative size of the second-order tail term at which the cutoff is accepted.
constexpr double kTailEpsilon = 1e-5;

void require(bool condition, const std::string& message)
{
    if (!condition)
        throw DomainError(message);
}

} // namespace

BoundResult crb_mse(const Spectrum& fc, const Spectrum& fq, const CrbOptions& options)
{
    const double a = fc.tail().coeff;
    const double p = fc.tail().exponent;
    require(fc.has_continuous() && a > 0.0 && std::isfinite(a),
            "classical Fisher spectrum must declare a growing power-law tail");
    require(p > 1.0, "integrand tail |omega|^-p is not integrable for p <= 1 (p = " + std::to_string(p) + ")");
    require(!(fq.has_continuous() && fq.tail().exponent > 0.0 && fq.tail().coeff != 0.0),
            "quantum Fisher spectrum must not grow at high frequency");

    auto total = [&](double w) { return fc(w) + fq(w); };
    // Remainder of the denominator once the leading a w^p is removed.
    auto remainder = [&](double w) { return (fc(w) - a * std::pow(w, p)) + fq(w); };

    std::vector<double> scales;
    for (const Spectrum* s : {&fc, &fq})
        scales.insert(scales.end(), s->scales().begin(), s->scales().end());
    const double level = fq(0.0) + std::max(fc(0.0), 0.0);
    if (level > 0.0)
        scales.push_back(std::pow(level / a, 1.0 / p));
    if (scales.empty())
        scales.push_back(1.0);
    const double smin = *std::min_element(scales.begin(), scales.end());
    const double smax = *std::max_element(scales.begin(), scales.end());

    double cutoff = options.cutoff;
    if (cutoff > 0.0) {
        require(std::isfinite(cutoff), "cutoff must be finite");
    } else {
        cutoff = 1e3 * smax;
        for (int i = 0;; ++i) {
            const double eps = std::abs(remainder(cutoff)) / (a * std::pow(cutoff, p));
            if (eps <= kTailEpsilon)
                break;
            if (i > 200 || !std::isfinite(cutoff))
                throw ConvergenceError("no cutoff found where the tail expansion is accurate (last omega = "
                                       + std::to_string(cutoff) + ")");
            cutoff *= 4.0;
        }
    }

    const auto pts = geometric_breakpoints(1e-3 * smin, cutoff, 2.0, scales);
    const auto quad = integrate([&](double w) { return 1.0 / total(w); }, pts,
                                {options.rel_tol, 0.0, options.max_intervals});
    if (!quad.converged)
        throw ConvergenceError("bound quadrature did not converge: value " + std::to_string(quad.value)
                               + ", error estimate " + std::to_string(quad.abs_error) + " after "
                               + std::to_string(quad.intervals) + " intervals");

    const double b = remainder(cutoff);
    const double lead = std::pow(cutoff, 1.0 - p) / (p - 1.0);
    const double second = (b / a) * std::pow(cutoff, 1.0 - 2.0 * p) / (2.0 * p - 1.0);
    const double tail = (lead - second) / a;
    const double third = (b / a) * (b / a) * std::pow(cutoff, 1.0 - 3.0 * p) / ((3.0 * p - 1.0) * a);
    const double drift = std::abs(remainder(2.0 * cutoff) - b) / (a * a) * std::pow(cutoff, 1.0 - 2.0 * p)
                       / (2.0 * p - 1.0);

    BoundResult r;
    r.value = (quad.value + tail) / kPi;
    r.tail_correction = tail / kPi;
    r.abs_error_estimate = (quad.abs_error + std::abs(third) + drift) / kPi;
    r.cutoff = cutoff;
    r.evaluations = quad.evaluations;
    if (!(r.value > 0.0) || !std::isfinite(r.value))
        throw ConvergenceError("bound is not finite and positive");
    return r;
}

BoundResult crb_mse(const PhaseNoiseModel& phase, const BeamModel& beam, const CrbOptions& options)
{
    const auto s = fisher_spectra(phase, beam);
    return crb_mse(s.fc, s.fq, options);
}

double powerlaw_constant_integral(double p, double b, double kappa)
{
    require(std::isfinite(p) && p > 1.0, "powerlaw_constant_integral requires p > 1");
    require(std::isfinite(b) && b > 0.0, "powerlaw_constant_integral requires B > 0");
    require(std::isfinite(kappa) && kappa > 0.0, "powerlaw_constant_integral requires kappa > 0");
    const double z = kPi / p;
    return std::pow(kappa, p - 1.0) / (kPi * std::pow(b, 1.0 - 1.0 / p)) * z / std::sin(z);
}

ClosedFormResult mean_field_bound_closed_form(double alpha, double r_plus, double x, double gamma,
                                              double kappa, double lambda)
{
    require(std::isfinite(alpha), "alpha must be finite");
    require(std::isfinite(r_plus) && r_plus >= 1.0, "r_plus must be >= 1");
    require(std::isfinite(x) && x >= 0.0 && x < 1.0, "x must lie in [0, 1)");
    require(std::isfinite(gamma) && gamma > 0.0, "gamma must be > 0");
    require(std::isfinite(kappa) && kappa > 0.0, "kappa must be > 0");
    require(std::isfinite(lambda) && lambda >= 0.0, "lambda must be >= 0");

    const double a2 = alpha * alpha;
    const double g = 0.5 * (1.0 - x) * gamma;
    const double g2 = g * g;
    const double c = 4.0 * a2 * kappa + lambda * lambda;
    require(c > 0.0, "bound is infinite without mean field or damping");
    const double d = 4.0 * kappa * a2 * (r_plus - 1.0) * g2;
    // Xi+ and Xi- are the roots of z^2 - s z + q.
    const double s = c + g2;
    const double q = g2 * c + d;
    const double disc = (c - g2) * (c - g2) - 4.0 * d;

    ClosedFormResult out;
    out.discriminant = disc;
    if (disc >= 0.0) {
        const double rq = std::sqrt(q);
        out.value = 0.5 * kappa * (1.0 + g2 / rq) / std::sqrt(s + 2.0 * rq);
        return out;
    }
    const ExpCorrelation plus{(r_plus - 1.0) * (1.0 - x) * gamma / 4.0, g};
    const Spectrum fq = Spectrum::lorentzians({{4.0 * a2 * plus.amplitude, plus.rate}}, 4.0 * a2);
    out.value = crb_mse(classical_fisher(PhaseNoiseModel::ornstein_uhlenbeck(kappa, lambda)), fq).value;
    out.fallback = true;
    return out;
}

HLBResult heisenberg_lower_bound(double p, double kappa, double n)
{
    require(std::isfinite(p) && p > 1.0, "heisenberg_lower_bound requires p > 1");
    require(std::isfinite(kappa) && kappa > 0.0, "heisenberg_lower_bound requires kappa > 0");
    require(std::isfinite(n) && n > 0.0, "heisenberg_lower_bound requires N > 0");

    HLBResult r;
    r.calI = 16.0 * kPi * n * n;
    const double log_kp = (p - 1.0) * std::log(kappa);
    // log(LHS / RHS); strictly decreasing in mu.
    auto h = [&](double log_mu) {
        const double mu = std::exp(log_mu);
        return p * (std::log(r.calI) - log_mu) - log_kp - std::log(r.zeta * n + mu);
    };

    const double mu0 = n * std::pow(n / kappa, (p - 1.0) / (p + 1.0));
    double lo = std::log(mu0) - std::log(1e3), hi = std::log(mu0) + std::log(1e3);
    for (int i = 0; h(lo) < 0.0; ++i) {
        if (i > 100)
            throw ConvergenceError("could not bracket mu from below");
        lo -= std::log(1e3);
    }
    for (int i = 0; h(hi) > 0.0; ++i) {
        if (i > 100)
            throw ConvergenceError("could not bracket mu from above");
        hi += std::log(1e3);
    }
    for (int i = 0; i < 400 && hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * std::abs(hi) + 1e-300; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi)
            break;
        (h(mid) > 0.0 ? lo : hi) = mid;
    }
    const double log_mu = std::abs(h(lo)) < std::abs(h(hi)) ? lo : hi;
    r.mu = std::exp(log_mu);
    r.residual = std::expm1(h(log_mu));
    const double kp = std::pow(kappa, p - 1.0);
    r.value = kp / (2.0 * kPi * std::pow(kp * (r.zeta * n + r.mu), 1.0 - 1.0 / p));
    return r;
}

namespace {

struct LineFit {
    double slope, intercept, r2, max_residual;
};

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y)
{
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    LineFit f{};
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double e = y[i] - (f.intercept + f.slope * x[i]);
        ss_res += e * e;
        f.max_residual = std::max(f.max_residual, std::abs(e));
    }
    f.r2 = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
    return f;
}

} // namespace

ScalingFit scaling_exponent_fit(const std::function<double(double)>& bound_fn, double n_min, double n_max,
                                int points, int threads)
{
    require(points >= 5, "scaling fit needs at least 5 points");
    require(n_min > 0.0 && std::isfinite(n_max) && n_max / n_min >= 1e4 * (1.0 - 1e-12),
            "scaling fit needs a range of at least four decades");

    ScalingFit out;
    out.n.resize(static_cast<std::size_t>(points));
    out.bound.resize(out.n.size());
    const double step = std::log(n_max / n_min) / (points - 1);
    for (std::size_t i = 0; i < out.n.size(); ++i)
        out.n[i] = n_min * std::exp(step * static_cast<double>(i));
    out.n.back() = n_max;
    parallel_for(out.n.size(), threads, [&](std::size_t i) { out.bound[i] = bound_fn(out.n[i]); });
    for (const double v : out.bound)
        if (!(v > 0.0) || !std::isfinite(v))
            throw DomainError("bound values must be finite and positive for a scaling fit");

    auto fit_from = [&](double lower) {
        std::vector<double> lx, ly;
        for (std::size_t i = 0; i < out.n.size(); ++i)
            if (out.n[i] >= lower * (1.0 - 1e-12)) {
                lx.push_back(std::log(out.n[i]));
                ly.push_back(std::log(out.bound[i]));
            }
        return std::pair{least_squares(lx, ly), lx.size()};
    };
    auto [fit, used] = fit_from(n_min);
    if (fit.max_residual > 1e-2) {
        auto [trimmed, count] = fit_from(10.0 * n_min);
        if (count >= 3) {
            fit = trimmed;
            out.dropped_first_decade = true;
        }
    }
    out.slope = fit.slope;
    out.intercept = fit.intercept;
    out.r2 = fit.r2;
    out.curvature = fit.max_residual;
    return out;
}

} // namespace phasecrb
