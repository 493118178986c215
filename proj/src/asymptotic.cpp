#include "phasecrb/asymptotic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "phasecrb/error.hpp"
#include "phasecrb/fisher.hpp"
#include "phasecrb/models.hpp"
#include "phasecrb/optimize.hpp"
#include "phasecrb/parallel.hpp"

namespace phasecrb {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

const Spectrum& unit_prior()
{
    static const Spectrum fc = classical_fisher(PhaseNoiseModel::power_law(2.0, 1.0));
    return fc;
}

} // namespace

StarredParams::StarredParams(double gamma_star, double tau) : gamma_(gamma_star), tau_(tau)
{
    if (!(gamma_star > 0.0) || !std::isfinite(gamma_star))
        throw DomainError("gamma* must be positive and finite");
    if (!(tau >= 0.0 && tau <= 1.0))
        throw DomainError("tau must lie in [0, 1]");
}

StarredParams StarredParams::from_r_star(double gamma_star, double r_star)
{
    if (!(r_star >= 0.0))
        throw DomainError("R* must be >= 0");
    return StarredParams(gamma_star, gamma_star * std::sqrt(r_star) / 8.0);
}

double StarredParams::r_star() const noexcept
{
    const double s = 8.0 * tau_ / gamma_;
    return s * s;
}

double starred_fisher(const StarredParams& params, double w)
{
    if (params.tau() == 0.0)
        return 0.0;
    const double g = params.gamma_star();
    const double r = params.r_star();
    const double sr = 8.0 * params.tau() / g;
    return 4.0 * g * g * params.alpha_star_sq() / (g * g / r + w * w) + (0.5 * g * g * g * sr) / (4.0 * g * g / r + w * w);
}

Spectrum starred_fisher_spectrum(const StarredParams& params)
{
    if (params.tau() == 0.0)
        return Spectrum{};
    const double g = params.gamma_star();
    const double sr = 8.0 * params.tau() / g;
    // Widths g/sqrt(R*) and 2 g/sqrt(R*); each Lorentzian is 2 a b / (b^2 + w^2).
    const double b1 = g / sr, b2 = 2.0 * g / sr;
    const double a1 = 4.0 * g * g * params.alpha_star_sq() / (2.0 * b1);
    const double a2 = 0.5 * g * g * g * sr / (2.0 * b2);
    return Spectrum::lorentzians({{a1, b1}, {a2, b2}});
}

double C_value(const StarredParams& params, const CrbOptions& options)
{
    if (params.tau() == 0.0)
        return kInf;
    return crb_mse(unit_prior(), starred_fisher_spectrum(params), options).value;
}

double C_tau1_closed_form(double g)
{
    // (1/2pi) \int (w^2 + q) / (w^4 + q w^2 + 4 g^2) dw with q = g^4 / 16.
    return (1.0 + g * g * g / 32.0) / (2.0 * std::sqrt(g * g * g * g / 16.0 + 4.0 * g));
}

double gamma_star_optimal_exact()
{
    return 2.0 * std::cbrt(2.0 * (std::sqrt(13.0) - 3.0));
}

double C0_exact()
{
    return std::pow(587.0 - 143.0 * std::sqrt(13.0), 1.0 / 6.0) / (4.0 * std::sqrt(6.0));
}

std::vector<SurfaceCell> surface(const std::vector<double>& gamma_grid, const std::vector<double>& tau_grid,
                                 int threads)
{
    std::vector<SurfaceCell> cells(gamma_grid.size() * tau_grid.size());
    for (std::size_t j = 0; j < tau_grid.size(); ++j)
        for (std::size_t i = 0; i < gamma_grid.size(); ++i) {
            auto& c = cells[j * gamma_grid.size() + i];
            c.gamma_star = gamma_grid[i];
            c.tau = tau_grid[j];
        }
    parallel_for(cells.size(), threads, [&](std::size_t k) {
        auto& cell = cells[k];
        cell.c = std::numeric_limits<double>::quiet_NaN();
        try {
            const double v = C_value(StarredParams(cell.gamma_star, cell.tau));
            if (std::isfinite(v)) {
                cell.c = v;
                cell.ok = true;
            } else {
                cell.error = "C is infinite";
            }
        } catch (const Error& e) {
            cell.error = e.what();
        }
    });
    return cells;
}

OptimizeResult optimize_C(const OptimizeOptions& o)
{
    if (!(o.gamma_max > o.gamma_min && o.gamma_min >= 0.0 && o.tau_min >= 0.0 && o.tau_max <= 1.0
          && o.tau_max >= o.tau_min && o.gamma_points >= 2 && o.tau_points >= 2))
        throw DomainError("optimize_C needs 0 <= gamma_min < gamma_max, 0 <= tau_min <= tau_max <= 1 and a 2x2 grid");

    std::vector<double> gammas(static_cast<std::size_t>(o.gamma_points)), taus(static_cast<std::size_t>(o.tau_points));
    const double dg = (o.gamma_max - o.gamma_min) / o.gamma_points;
    const double dt = (o.tau_max - o.tau_min) / (o.tau_points - 1);
    for (std::size_t i = 0; i < gammas.size(); ++i)
        gammas[i] = o.gamma_min + dg * static_cast<double>(i + 1);
    for (std::size_t j = 0; j < taus.size(); ++j)
        taus[j] = o.tau_min + dt * static_cast<double>(j);
    taus.back() = o.tau_max;

    const auto cells = surface(gammas, taus, o.threads);
    OptimizeResult r;
    r.evaluations = static_cast<int>(cells.size());
    const SurfaceCell* best = nullptr;
    for (const auto& c : cells)
        if (c.ok && (!best || c.c < best->c))
            best = &c;
    if (!best)
        throw ConvergenceError("C is undefined on every grid cell");

    // Keep gamma* strictly positive; C diverges there anyway.
    const double g_floor = std::max(o.gamma_min, 1e-3 * dg);
    const Box2 box{{g_floor, o.tau_min}, {o.gamma_max, o.tau_max}};
    auto objective = [](std::array<double, 2> p) {
        try {
            return C_value(StarredParams(p[0], p[1]));
        } catch (const Error&) {
            return kInf;
        }
    };
    const auto nm = nelder_mead(objective, {best->gamma_star, best->tau}, {0.5 * dg, 0.5 * std::max(dt, 1e-3)}, box,
                                {o.c_tol * 1e-4, 1e-9, 4000});
    r.evaluations += nm.evaluations;
    r.gamma_star = nm.x[0];
    r.tau = nm.x[1];
    r.c_min = nm.f;
    if (best->c < r.c_min) {
        r.gamma_star = best->gamma_star;
        r.tau = best->tau;
        r.c_min = best->c;
    }

    const double edge = 1e-6;
    if (o.tau_max - r.tau <= edge * std::max(1.0, o.tau_max)) {
        const double lo = std::max(g_floor, r.gamma_star - 2.0 * dg);
        const double hi = std::min(o.gamma_max, r.gamma_star + 2.0 * dg);
        const auto gs = golden_section([&](double g) { return objective({g, o.tau_max}); }, lo, hi, 1e-10);
        r.evaluations += gs.evaluations;
        if (gs.f <= r.c_min) {
            r.gamma_star = gs.x;
            r.tau = o.tau_max;
            r.c_min = gs.f;
        }
    }

    const double gspan = o.gamma_max - g_floor;
    const bool on_gamma_edge = r.gamma_star - g_floor <= edge * gspan || o.gamma_max - r.gamma_star <= edge * gspan;
    const bool on_tau_low = o.tau_max > o.tau_min && r.tau - o.tau_min <= edge;
    const bool on_tau_high = o.tau_max < 1.0 && o.tau_max - r.tau <= edge;
    r.boundary_hit = on_gamma_edge || on_tau_low || on_tau_high;
    return r;
}

std::vector<ConvergenceRow> asymptotic_convergence_check(const StarredParams& params,
                                                         const std::vector<double>& n_star_list,
                                                         StarMapping mapping, double kappa, int threads)
{
    if (!(kappa > 0.0) || !std::isfinite(kappa))
        throw DomainError("kappa must be positive");
    const double c = C_value(params);
    std::vector<ConvergenceRow> rows(n_star_list.size());
    parallel_for(rows.size(), threads, [&](std::size_t i) {
        const double ns = n_star_list[i];
        if (!(ns > 0.0) || !std::isfinite(ns))
            throw DomainError("N* must be positive");
        const double n = kappa * ns;
        const auto prior = PhaseNoiseModel::power_law(2.0, kappa);
        BeamModel beam = CoherentBeam(std::sqrt(n));
        if (params.tau() > 0.0) {
            const double gamma = params.gamma_star() * kappa * std::pow(ns, 5.0 / 6.0);
            const double r_plus = params.r_star() * std::cbrt(ns);
            const double r_minus = 1.0 / r_plus;
            if (r_plus < 1.0)
                throw DomainError("R+ = R* N*^(1/3) must be >= 1; increase N*");
            const double s = std::sqrt(r_plus);
            if (mapping == StarMapping::LeadingOrder) {
                if (s < 2.0)
                    throw DomainError("leading-order pump x = 1 - 2/sqrt(R+) needs R+ >= 4; increase N*");
                beam = OpoBeam(std::sqrt(params.alpha_star_sq() * n), r_plus, r_minus, gamma, 1.0 - 2.0 / s);
            } else {
                const double x = (s - 1.0) / (s + 1.0);
                const double squeezed = gamma / 16.0 * ((r_plus - 1.0) * (1.0 - x) + (r_minus - 1.0) * (1.0 + x));
                const double a2 = n - squeezed;
                if (a2 < 0.0)
                    throw DomainError("squeezed-vacuum flux exceeds N; no mean field fits at this N*");
                beam = OpoBeam(std::sqrt(a2), r_plus, r_minus, gamma, x);
            }
        }
        const double bound = crb_mse(prior, beam).value;
        auto& row = rows[i];
        row.n_star = ns;
        row.rescaled = std::pow(ns, 2.0 / 3.0) * bound;
        row.c_value = c;
        row.deviation = row.rescaled / c - 1.0;
    });
    return rows;
}

double convergence_rate(const std::vector<ConvergenceRow>& rows)
{
    if (rows.size() < 2)
        throw DomainError("convergence rate needs at least two rows");
    double mx = 0.0, my = 0.0;
    for (const auto& r : rows) {
        mx += std::log(r.n_star);
        my += std::log(std::abs(r.deviation));
    }
    mx /= static_cast<double>(rows.size());
    my /= static_cast<double>(rows.size());
    double sxx = 0.0, sxy = 0.0;
    for (const auto& r : rows) {
        const double dx = std::log(r.n_star) - mx;
        sxx += dx * dx;
        sxy += dx * (std::log(std::abs(r.deviation)) - my);
    }
    return sxy / sxx;
}

} // namespace phasecrb
