#include "phasecrb/config.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "phasecrb/error.hpp"
#include "phasecrb/parallel.hpp"

namespace phasecrb {

using nlohmann::json;

namespace {

class Reader {
public:
    Reader(const json& j, std::string path) : obj_(j), path_(std::move(path))
    {
        if (!obj_.is_object())
            throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object");
    }

    std::string at(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

    const json* find(const std::string& key)
    {
        seen_.insert(key);
        const auto it = obj_.find(key);
        return it == obj_.end() ? nullptr : &*it;
    }

    void number(const std::string& key, double& out)
    {
        if (const json* v = find(key)) {
            if (!v->is_number())
                throw ConfigError(at(key), "expected a number");
            out = v->get<double>();
            if (!std::isfinite(out))
                throw ConfigError(at(key), "must be finite");
        }
    }

    void integer(const std::string& key, int& out)
    {
        if (const json* v = find(key)) {
            if (!v->is_number_integer())
                throw ConfigError(at(key), "expected an integer");
            const auto value = v->get<long long>();
            if (value < std::numeric_limits<int>::min() || value > std::numeric_limits<int>::max())
                throw ConfigError(at(key), "integer out of range");
            out = static_cast<int>(value);
        }
    }

    void unsigned64(const std::string& key, std::uint64_t& out)
    {
        if (const json* v = find(key)) {
            if (!v->is_number_unsigned() && !(v->is_number_integer() && v->get<long long>() >= 0))
                throw ConfigError(at(key), "expected a non-negative integer");
            out = v->get<std::uint64_t>();
        }
    }

    void text(const std::string& key, std::string& out, std::initializer_list<const char*> allowed = {})
    {
        if (const json* v = find(key)) {
            if (!v->is_string())
                throw ConfigError(at(key), "expected a string");
            out = v->get<std::string>();
            if (allowed.size() && std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return out == a; })) {
                std::string list;
                for (const char* a : allowed)
                    list += (list.empty() ? "" : ", ") + std::string(a);
                throw ConfigError(at(key), "must be one of " + list);
            }
        }
    }

    template <class F>
    void object(const std::string& key, F&& body)
    {
        if (const json* v = find(key)) {
            Reader sub(*v, at(key));
            body(sub);
            sub.finish();
        }
    }

    void lorentzians(const std::string& key, std::vector<ExpCorrelation>& out)
    {
        if (const json* v = find(key)) {
            if (!v->is_array())
                throw ConfigError(at(key), "expected an array of {amplitude, rate}");
            out.clear();
            for (std::size_t i = 0; i < v->size(); ++i) {
                Reader item((*v)[i], at(key) + "[" + std::to_string(i) + "]");
                ExpCorrelation e{0.0, 0.0};
                item.number("amplitude", e.amplitude);
                item.number("rate", e.rate);
                item.finish();
                if (!(e.rate > 0.0))
                    throw ConfigError(item.at("rate"), "must be > 0");
                out.push_back(e);
            }
        }
    }

    void finish() const
    {
        for (const auto& [key, value] : obj_.items())
            if (!seen_.count(key))
                throw ConfigError(at(key), "unknown key");
    }

private:
    const json& obj_;
    std::string path_;
    std::set<std::string> seen_;
};

void read_grid(Reader& r, GridSection& g)
{
    r.number("gamma_min", g.gamma_min);
    r.number("gamma_max", g.gamma_max);
    r.integer("gamma_points", g.gamma_points);
    r.number("tau_min", g.tau_min);
    r.number("tau_max", g.tau_max);
    r.integer("tau_points", g.tau_points);
}

json grid_json(const GridSection& g)
{
    return {{"gamma_min", g.gamma_min}, {"gamma_max", g.gamma_max}, {"gamma_points", g.gamma_points},
            {"tau_min", g.tau_min},     {"tau_max", g.tau_max},     {"tau_points", g.tau_points}};
}

json lorentzian_json(const std::vector<ExpCorrelation>& terms)
{
    json a = json::array();
    for (const auto& t : terms)
        a.push_back({{"amplitude", t.amplitude}, {"rate", t.rate}});
    return a;
}

} // namespace

RunConfig parse_config(const json& doc, RunConfig c)
{
    Reader r(doc, "");
    r.text("command", c.command, {"bound", "surface", "optimize", "scaling", "simulate", "validate"});
    r.text("out", c.out);
    r.text("format", c.format, {"json", "csv", "svg"});
    r.unsigned64("seed", c.seed);
    r.integer("threads", c.threads);
    r.object("phase", [&](Reader& s) {
        s.text("model", c.phase.model, {"power_law", "ou", "wiener"});
        s.number("p", c.phase.p);
        s.number("kappa", c.phase.kappa);
        s.number("lambda", c.phase.lambda);
    });
    r.object("beam", [&](Reader& s) {
        s.text("type", c.beam.type, {"coherent", "opo", "opo_pure", "general"});
        s.number("alpha", c.beam.alpha);
        s.number("r_plus", c.beam.r_plus);
        s.number("r_minus", c.beam.r_minus);
        s.number("gamma", c.beam.gamma);
        s.number("x", c.beam.x);
        s.number("mean_x", c.beam.mean_x);
        s.number("mean_y", c.beam.mean_y);
        s.lorentzians("h_x", c.beam.h_x);
        s.lorentzians("h_y", c.beam.h_y);
        s.lorentzians("h_xy", c.beam.h_xy);
    });
    r.object("bound", [&](Reader& s) {
        s.number("rel_tol", c.bound.rel_tol);
        s.number("cutoff", c.bound.cutoff);
    });
    r.object("surface", [&](Reader& s) { read_grid(s, c.surface); });
    r.object("optimize", [&](Reader& s) {
        read_grid(s, c.optimize.grid);
        s.number("c_tol", c.optimize.c_tol);
    });
    r.object("scaling", [&](Reader& s) {
        s.text("kind", c.scaling.kind, {"coherent", "heisenberg"});
        s.number("n_min", c.scaling.n_min);
        s.number("n_max", c.scaling.n_max);
        s.integer("points", c.scaling.points);
    });
    r.object("simulate", [&](Reader& s) {
        s.number("alpha", c.simulate.alpha);
        s.number("dt", c.simulate.dt);
        s.number("duration", c.simulate.duration);
        s.number("burn_in", c.simulate.burn_in);
        s.integer("trajectories", c.simulate.trajectories);
        s.text("feedback", c.simulate.feedback, {"linearized", "adaptive_nonlinear"});
        s.text("trace_path", c.simulate.trace_path);
        s.integer("trace_stride", c.simulate.trace_stride);
    });
    r.object("validate", [&](Reader& s) {
        s.number("tolerance", c.validate.tolerance);
        s.integer("refinement", c.validate.refinement);
    });
    r.finish();
    return c;
}

RunConfig parse_config_text(const std::string& text, RunConfig base)
{
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("<document>", std::string("malformed JSON: ") + e.what());
    }
    return parse_config(doc, std::move(base));
}

json to_json(const RunConfig& c)
{
    return {
        {"command", c.command},
        {"out", c.out},
        {"format", c.format},
        {"seed", c.seed},
        {"threads", c.threads},
        {"phase", {{"model", c.phase.model}, {"p", c.phase.p}, {"kappa", c.phase.kappa}, {"lambda", c.phase.lambda}}},
        {"beam",
         {{"type", c.beam.type},
          {"alpha", c.beam.alpha},
          {"r_plus", c.beam.r_plus},
          {"r_minus", c.beam.r_minus},
          {"gamma", c.beam.gamma},
          {"x", c.beam.x},
          {"mean_x", c.beam.mean_x},
          {"mean_y", c.beam.mean_y},
          {"h_x", lorentzian_json(c.beam.h_x)},
          {"h_y", lorentzian_json(c.beam.h_y)},
          {"h_xy", lorentzian_json(c.beam.h_xy)}}},
        {"bound", {{"rel_tol", c.bound.rel_tol}, {"cutoff", c.bound.cutoff}}},
        {"surface", grid_json(c.surface)},
        {"optimize", [&] {
             json j = grid_json(c.optimize.grid);
             j["c_tol"] = c.optimize.c_tol;
             return j;
         }()},
        {"scaling", {{"kind", c.scaling.kind}, {"n_min", c.scaling.n_min}, {"n_max", c.scaling.n_max}, {"points", c.scaling.points}}},
        {"simulate",
         {{"alpha", c.simulate.alpha},
          {"dt", c.simulate.dt},
          {"duration", c.simulate.duration},
          {"burn_in", c.simulate.burn_in},
          {"trajectories", c.simulate.trajectories},
          {"feedback", c.simulate.feedback},
          {"trace_path", c.simulate.trace_path},
          {"trace_stride", c.simulate.trace_stride}}},
        {"validate", {{"tolerance", c.validate.tolerance}, {"refinement", c.validate.refinement}}},
    };
}

PhaseNoiseModel make_phase(const PhaseConfig& c)
{
    try {
        if (c.model == "power_law")
            return PhaseNoiseModel::power_law(c.p, c.kappa);
        if (c.model == "ou")
            return PhaseNoiseModel::ornstein_uhlenbeck(c.kappa, c.lambda);
        return PhaseNoiseModel::wiener(c.kappa);
    } catch (const DomainError& e) {
        throw ConfigError("phase", e.what());
    }
}

BeamModel make_beam(const BeamConfig& c)
{
    try {
        if (c.type == "coherent")
            return CoherentBeam(c.alpha);
        if (c.type == "opo")
            return OpoBeam(c.alpha, c.r_plus, c.r_minus, c.gamma, c.x);
        if (c.type == "opo_pure")
            return OpoBeam::pure(c.alpha, c.r_plus, c.gamma);
        auto spectrum = [](const std::vector<ExpCorrelation>& terms) {
            return terms.empty() ? Spectrum{} : Spectrum::lorentzians(terms);
        };
        return GeneralBeam(c.mean_x, c.mean_y, spectrum(c.h_x), spectrum(c.h_y), spectrum(c.h_xy));
    } catch (const DomainError& e) {
        throw ConfigError("beam", e.what());
    }
}

TrackingConfig make_tracking(const RunConfig& c)
{
    if (c.phase.model == "power_law" && c.phase.p != 2.0)
        throw ConfigError("phase.model", "tracking needs an OU or Wiener phase");
    TrackingConfig t;
    t.kappa = c.phase.kappa;
    t.lambda = c.phase.model == "ou" ? c.phase.lambda : 0.0;
    t.alpha = c.simulate.alpha;
    t.dt = c.simulate.dt;
    t.duration = c.simulate.duration;
    t.burn_in = c.simulate.burn_in;
    t.trajectories = c.simulate.trajectories;
    t.seed = c.seed;
    t.feedback = c.simulate.feedback == "adaptive_nonlinear" ? Feedback::AdaptiveNonlinear : Feedback::Linearized;
    t.threads = resolve_threads(c.threads);
    t.trace_trajectory = c.simulate.trace_path.empty() ? -1 : 0;
    t.trace_stride = c.simulate.trace_stride;
    try {
        t.validate();
    } catch (const DomainError& e) {
        throw ConfigError("simulate", e.what());
    }
    return t;
}

} // namespace phasecrb
