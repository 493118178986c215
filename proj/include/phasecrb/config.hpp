#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "phasecrb/models.hpp"
#include "phasecrb/spectrum.hpp"
#include "phasecrb/tracking.hpp"

namespace phasecrb {

struct PhaseConfig {
    std::string model = "wiener"; ///< power_law | ou | wiener
    double p = 2.0;
    double kappa = 1.0;
    double lambda = 0.0;
};

struct BeamConfig {
    std::string type = "coherent"; ///< coherent | opo | opo_pure | general
    double alpha = 1.0;
    double r_plus = 1.0;
    double r_minus = 1.0;
    double gamma = 1.0;
    double x = 0.0;
    double mean_x = 0.0;
    double mean_y = 0.0;
    std::vector<ExpCorrelation> h_x, h_y, h_xy;
};

struct BoundSection {
    double rel_tol = 1e-10;
    double cutoff = 0.0;
};

struct GridSection {
    double gamma_min = 0.0;
    double gamma_max = 4.0;
    int gamma_points = 64;
    double tau_min = 0.0;
    double tau_max = 1.0;
    int tau_points = 32;
};

struct OptimizeSection {
    GridSection grid;
    double c_tol = 1e-6;
};

struct ScalingSection {
    std::string kind = "coherent"; ///< coherent | heisenberg
    double n_min = 1e6;
    double n_max = 1e12;
    int points = 13;
};

struct SimulateSection {
    double alpha = 4.0;
    double dt = 1.5625e-4;
    double duration = 12.5;
    double burn_in = 1.25;
    int trajectories = 100;
    std::string feedback = "linearized"; ///< linearized | adaptive_nonlinear
    std::string trace_path;              ///< CSV of trajectory 0 when non-empty
    int trace_stride = 100;
};

struct ValidateSection {
    double tolerance = 1e-6;
    int refinement = 1;
};

/// Fully resolved run description; serialises back to a document that parses to itself.
struct RunConfig {
    std::string command = "bound"; ///< bound | surface | optimize | scaling | simulate | validate
    std::string out;               ///< output path; empty for stdout
    std::string format = "json";   ///< json | csv | svg
    std::uint64_t seed = 1;
    int threads = 0;               ///< 0: PHASECRB_THREADS or 1
    PhaseConfig phase;
    BeamConfig beam;
    BoundSection bound;
    GridSection surface;
    OptimizeSection optimize;
    ScalingSection scaling;
    SimulateSection simulate;
    ValidateSection validate;
};

/// Overlays a JSON document on `base`. Unknown keys and mistyped values throw ConfigError
/// naming the dotted field path.
RunConfig parse_config(const nlohmann::json& doc, RunConfig base = {});
RunConfig parse_config_text(const std::string& text, RunConfig base = {});

nlohmann::json to_json(const RunConfig& config);

PhaseNoiseModel make_phase(const PhaseConfig& c);
BeamModel make_beam(const BeamConfig& c);
TrackingConfig make_tracking(const RunConfig& c);

} // namespace phasecrb
