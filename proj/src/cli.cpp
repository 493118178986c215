#include "phasecrb/cli.hpp"

#include <cmath>

#include "phasecrb/asymptotic.hpp"
#include "phasecrb/bound.hpp"
#include "phasecrb/error.hpp"
#include "phasecrb/fisher.hpp"
#include "phasecrb/output.hpp"
#include "phasecrb/parallel.hpp"
#include "phasecrb/tracking.hpp"

namespace phasecrb {

using nlohmann::json;

namespace {

void require_format(const RunConfig& c, std::initializer_list<const char*> allowed)
{
    for (const char* f : allowed)
        if (c.format == f)
            return;
    throw ConfigError("format", "'" + c.format + "' is not available for the " + c.command + " command");
}

std::vector<double> linear_grid(double lo, double hi, int n, bool skip_first)
{
    std::vector<double> g(static_cast<std::size_t>(n));
    if (skip_first) {
        for (int i = 0; i < n; ++i)
            g[static_cast<std::size_t>(i)] = lo + (hi - lo) * (i + 1) / n;
    } else {
        for (int i = 0; i < n; ++i)
            g[static_cast<std::size_t>(i)] = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
    }
    return g;
}

Artifact cmd_bound(const RunConfig& c)
{
    require_format(c, {"json", "csv"});
    const auto phase = make_phase(c.phase);
    const auto beam = make_beam(c.beam);
    const auto r = crb_mse(phase, beam, {c.bound.rel_tol, c.bound.cutoff});
    const double flux = photon_flux(beam);
    if (c.format == "csv")
        return {to_csv({"value", "abs_error_estimate", "tail_correction", "cutoff", "evaluations", "flux"},
                       {{r.value, r.abs_error_estimate, r.tail_correction, r.cutoff, static_cast<double>(r.evaluations), flux}}),
                {}};
    json j{{"command", "bound"},
           {"value", r.value},
           {"abs_error_estimate", r.abs_error_estimate},
           {"tail_correction", r.tail_correction},
           {"cutoff", r.cutoff},
           {"evaluations", r.evaluations},
           {"flux", flux}};
    return {j.dump(2) + "\n", {}};
}

Artifact cmd_surface(const RunConfig& c)
{
    require_format(c, {"json", "csv", "svg"});
    const auto& g = c.surface;
    if (g.gamma_points < 1 || g.tau_points < 1 || !(g.gamma_max > g.gamma_min) || g.gamma_min < 0.0)
        throw ConfigError("surface", "grid needs points >= 1 and 0 <= gamma_min < gamma_max");
    const auto gammas = linear_grid(g.gamma_min, g.gamma_max, g.gamma_points, true);
    const auto taus = linear_grid(g.tau_min, g.tau_max, g.tau_points, false);
    const auto cells = surface(gammas, taus, resolve_threads(c.threads));
    if (c.format == "svg")
        return {surface_svg(cells, gammas.size(), taus.size()), {}};
    if (c.format == "csv") {
        std::vector<std::vector<double>> rows;
        for (const auto& cell : cells)
            rows.push_back({cell.gamma_star, cell.tau, cell.c});
        return {to_csv({"gamma_star", "tau", "C"}, rows), {}};
    }
    json a = json::array();
    for (const auto& cell : cells)
        a.push_back({{"gamma_star", cell.gamma_star}, {"tau", cell.tau}, {"C", cell.ok ? json(cell.c) : json(nullptr)}});
    return {json{{"command", "surface"}, {"cells", a}}.dump(2) + "\n", {}};
}

Artifact cmd_optimize(const RunConfig& c)
{
    require_format(c, {"json"});
    OptimizeOptions o;
    o.gamma_min = c.optimize.grid.gamma_min;
    o.gamma_max = c.optimize.grid.gamma_max;
    o.gamma_points = c.optimize.grid.gamma_points;
    o.tau_min = c.optimize.grid.tau_min;
    o.tau_max = c.optimize.grid.tau_max;
    o.tau_points = c.optimize.grid.tau_points;
    o.c_tol = c.optimize.c_tol;
    o.threads = resolve_threads(c.threads);
    OptimizeResult r;
    try {
        r = optimize_C(o);
    } catch (const DomainError& e) {
        throw ConfigError("optimize", e.what());
    }
    json j{{"command", "optimize"},     {"gamma_star", r.gamma_star}, {"tau", r.tau},
           {"C0", r.c_min},             {"boundary_hit", r.boundary_hit},
           {"evaluations", r.evaluations}};
    return {j.dump(2) + "\n", {}};
}

Artifact cmd_scaling(const RunConfig& c)
{
    require_format(c, {"json", "csv"});
    const auto phase = make_phase(c.phase);
    const double p = phase.exponent();
    std::function<double(double)> fn;
    double expected = 0.0;
    if (c.scaling.kind == "heisenberg") {
        if (phase.lambda() != 0.0)
            throw ConfigError("phase.lambda", "the Heisenberg construction needs an undamped power-law prior");
        fn = [p, k = phase.kappa()](double n) { return heisenberg_lower_bound(p, k, n).value; };
        expected = -2.0 * (p - 1.0) / (p + 1.0);
    } else {
        const CrbOptions opts{c.bound.rel_tol, 0.0};
        fn = [phase, opts](double n) { return crb_mse(phase, CoherentBeam(std::sqrt(n)), opts).value; };
        expected = -(p - 1.0) / p;
    }
    ScalingFit fit;
    try {
        fit = scaling_exponent_fit(fn, c.scaling.n_min, c.scaling.n_max, c.scaling.points, resolve_threads(c.threads));
    } catch (const DomainError& e) {
        throw ConfigError("scaling", e.what());
    }
    if (c.format == "csv") {
        std::vector<std::vector<double>> rows;
        for (std::size_t i = 0; i < fit.n.size(); ++i) {
            double running = std::nan("");
            if (i >= 1) {
                double mx = 0.0, my = 0.0;
                for (std::size_t k = 0; k <= i; ++k) {
                    mx += std::log(fit.n[k]);
                    my += std::log(fit.bound[k]);
                }
                mx /= static_cast<double>(i + 1);
                my /= static_cast<double>(i + 1);
                double sxx = 0.0, sxy = 0.0;
                for (std::size_t k = 0; k <= i; ++k) {
                    sxx += (std::log(fit.n[k]) - mx) * (std::log(fit.n[k]) - mx);
                    sxy += (std::log(fit.n[k]) - mx) * (std::log(fit.bound[k]) - my);
                }
                running = sxy / sxx;
            }
            rows.push_back({fit.n[i], fit.bound[i], running});
        }
        return {to_csv({"N", "bound", "fit_slope_running"}, rows), {}};
    }
    json rows = json::array();
    for (std::size_t i = 0; i < fit.n.size(); ++i)
        rows.push_back({{"N", fit.n[i]}, {"bound", fit.bound[i]}});
    json j{{"command", "scaling"},
           {"kind", c.scaling.kind},
           {"slope", fit.slope},
           {"expected_slope", expected},
           {"intercept", fit.intercept},
           {"r2", fit.r2},
           {"curvature", fit.curvature},
           {"dropped_first_decade", fit.dropped_first_decade},
           {"rows", rows}};
    return {j.dump(2) + "\n", {}};
}

Artifact cmd_simulate(const RunConfig& c)
{
    require_format(c, {"json"});
    const auto t = make_tracking(c);
    const auto r = monte_carlo_mse(t);
    auto est = [](const Estimate& e) { return json{{"value", e.value}, {"stderr", e.std_error}}; };
    json j{{"command", "simulate"},
           {"mse_filtered", est(r.mse_filtered)},
           {"mse_smoothed", est(r.mse_smoothed)},
           {"ratio_filter_smoother", est(r.ratio_filter_smoother)},
           {"riccati_filtered", r.riccati_filtered},
           {"crb", r.crb},
           {"diverged", r.diverged},
           {"cycle_slips", r.cycle_slips},
           {"trajectories", r.trajectories},
           {"filtered_samples", r.filtered_samples},
           {"smoothed_samples", r.smoothed_samples}};
    Artifact a{j.dump(2) + "\n", {}};
    if (!c.simulate.trace_path.empty()) {
        std::vector<std::vector<double>> rows;
        for (std::size_t i = 0; i < r.trace.t.size(); ++i)
            rows.push_back({r.trace.t[i], r.trace.phi[i], r.trace.filtered[i], r.trace.smoothed[i]});
        a.side_files.emplace_back(c.simulate.trace_path,
                                  to_csv({"t", "phi", "phi_hat_filtered", "phi_hat_smoothed"}, rows));
    }
    return a;
}

Artifact cmd_validate(const RunConfig& c)
{
    require_format(c, {"json"});
    const auto beam = as_general(make_beam(c.beam));
    ConvolutionGrid grid;
    grid.refinement = c.validate.refinement;
    return {validate_beam_spectrum(beam, c.validate.tolerance, grid).to_json() + "\n", {}};
}

} // namespace

Artifact execute(const RunConfig& c)
{
    if (c.command == "bound")
        return cmd_bound(c);
    if (c.command == "surface")
        return cmd_surface(c);
    if (c.command == "optimize")
        return cmd_optimize(c);
    if (c.command == "scaling")
        return cmd_scaling(c);
    if (c.command == "simulate")
        return cmd_simulate(c);
    if (c.command == "validate")
        return cmd_validate(c);
    throw ConfigError("command", "unknown command '" + c.command + "'");
}

std::string error_json(const std::exception& e)
{
    json err{{"message", e.what()}};
    if (const auto* pe = dynamic_cast<const Error*>(&e))
        err["kind"] = pe->kind();
    else
        err["kind"] = "internal_error";
    if (const auto* ce = dynamic_cast<const ConfigError*>(&e))
        err["field"] = ce->field();
    return json{{"error", err}}.dump(2) + "\n";
}

int run(const RunConfig& config, std::ostream& out, std::ostream& log)
{
    try {
        const Artifact a = execute(config);
        for (const auto& [path, content] : a.side_files)
            write_atomic(path, content);
        const std::string manifest = to_json(config).dump(2) + "\n";
        if (config.out.empty()) {
            out << a.content;
            log << manifest;
        } else {
            write_atomic(config.out, a.content);
            write_atomic(config.out + ".manifest.json", manifest);
        }
        return 0;
    } catch (const std::exception& e) {
        out << error_json(e);
        return 1;
    }
}

} // namespace phasecrb
