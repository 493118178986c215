#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "phasecrb/asymptotic.hpp"
#include "phasecrb/bound.hpp"
#include "phasecrb/cli.hpp"
#include "phasecrb/config.hpp"
#include "phasecrb/error.hpp"
#include "phasecrb/fisher.hpp"
#include "phasecrb/tracking.hpp"

namespace py = pybind11;
using namespace phasecrb;

namespace {

py::dict bound_dict(const BoundResult& r)
{
    py::dict d;
    d["value"] = r.value;
    d["abs_error_estimate"] = r.abs_error_estimate;
    d["tail_correction"] = r.tail_correction;
    d["cutoff"] = r.cutoff;
    d["evaluations"] = r.evaluations;
    return d;
}

py::dict estimate_dict(const Estimate& e)
{
    py::dict d;
    d["value"] = e.value;
    d["stderr"] = e.std_error;
    return d;
}

BeamModel to_beam(const py::handle& h)
{
    if (py::isinstance<CoherentBeam>(h))
        return h.cast<CoherentBeam>();
    if (py::isinstance<OpoBeam>(h))
        return h.cast<OpoBeam>();
    if (py::isinstance<GeneralBeam>(h))
        return h.cast<GeneralBeam>();
    throw py::type_error("expected CoherentBeam, OpoBeam or GeneralBeam");
}

py::object json_to_python(const std::string& text)
{
    return py::module_::import("json").attr("loads")(text);
}

} // namespace

PYBIND11_MODULE(_phasecrb, m)
{
    m.doc() = "Quantum Cramer-Rao bounds for stochastic optical phase estimation";

    auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<DomainError>(m, "DomainError", base.ptr());
    py::register_exception<ConvergenceError>(m, "ConvergenceError", base.ptr());
    py::register_exception<PhysicalityError>(m, "PhysicalityError", base.ptr());
    py::register_exception<ConfigError>(m, "ConfigError", base.ptr());

    py::class_<ExpCorrelation>(m, "ExpCorrelation")
        .def(py::init([](double amplitude, double rate) { return ExpCorrelation{amplitude, rate}; }),
             py::arg("amplitude"), py::arg("rate"))
        .def_readwrite("amplitude", &ExpCorrelation::amplitude)
        .def_readwrite("rate", &ExpCorrelation::rate)
        .def("spectrum", &ExpCorrelation::spectrum, py::arg("omega"));

    py::class_<Spectrum>(m, "Spectrum")
        .def_static("constant", &Spectrum::constant, py::arg("level"))
        .def_static("lorentzians", &Spectrum::lorentzians, py::arg("terms"), py::arg("floor") = 0.0)
        .def("__call__", &Spectrum::operator(), py::arg("omega"))
        .def("continuous", &Spectrum::continuous, py::arg("omega"))
        .def_property_readonly("floor", &Spectrum::floor)
        .def_property_readonly("spike_weight", &Spectrum::spike_weight);

    py::class_<PhaseNoiseModel>(m, "PhaseNoiseModel")
        .def_static("power_law", &PhaseNoiseModel::power_law, py::arg("p"), py::arg("kappa"))
        .def_static("ornstein_uhlenbeck", &PhaseNoiseModel::ornstein_uhlenbeck, py::arg("kappa"), py::arg("lambda_"))
        .def_static("wiener", &PhaseNoiseModel::wiener, py::arg("kappa"))
        .def_property_readonly("kappa", &PhaseNoiseModel::kappa)
        .def_property_readonly("lambda_", &PhaseNoiseModel::lambda)
        .def_property_readonly("exponent", &PhaseNoiseModel::exponent)
        .def("prior", [](const PhaseNoiseModel& p, double w) { return phase_prior_spectrum(p, w); }, py::arg("omega"));

    py::class_<CoherentBeam>(m, "CoherentBeam")
        .def(py::init<double>(), py::arg("alpha"))
        .def_property_readonly("alpha", &CoherentBeam::alpha);

    py::class_<OpoBeam>(m, "OpoBeam")
        .def(py::init<double, double, double, double, double>(), py::arg("alpha"), py::arg("r_plus"),
             py::arg("r_minus"), py::arg("gamma"), py::arg("x"))
        .def_static("pure", &OpoBeam::pure, py::arg("alpha"), py::arg("r_plus"), py::arg("gamma"))
        .def_property_readonly("alpha", &OpoBeam::alpha)
        .def_property_readonly("r_plus", &OpoBeam::r_plus)
        .def_property_readonly("r_minus", &OpoBeam::r_minus)
        .def_property_readonly("gamma", &OpoBeam::gamma)
        .def_property_readonly("x", &OpoBeam::x)
        .def("is_pure", &OpoBeam::is_pure, py::arg("rel_tol") = 1e-12);

    py::class_<GeneralBeam>(m, "GeneralBeam")
        .def(py::init<double, double, Spectrum, Spectrum, Spectrum>(), py::arg("mean_x"), py::arg("mean_y"),
             py::arg("h_x"), py::arg("h_y"), py::arg("h_xy"))
        .def_property_readonly("mean_x", &GeneralBeam::mean_x)
        .def_property_readonly("mean_y", &GeneralBeam::mean_y);

    m.def("to_general", py::overload_cast<const OpoBeam&>(&to_general), py::arg("beam"));
    m.def("to_general", py::overload_cast<const CoherentBeam&>(&to_general), py::arg("beam"));
    m.def("opo_general_unchecked", &opo_general_unchecked, py::arg("alpha"), py::arg("r_plus"), py::arg("r_minus"),
          py::arg("gamma"), py::arg("x"));

    m.def("photon_flux", [](const py::object& b) { return photon_flux(to_beam(b)); }, py::arg("beam"));
    m.def("opo_quantum_fisher_spectrum", &opo_quantum_fisher_spectrum, py::arg("beam"));
    m.def("mean_field_fisher_spectrum", &mean_field_fisher_spectrum, py::arg("beam"));
    m.def("opo_f_spectrum", &opo_f_spectrum, py::arg("beam"));
    m.def("general_quantum_fisher_spectrum",
          [](const GeneralBeam& b, int refinement) {
              ConvolutionGrid g;
              g.refinement = refinement;
              return general_quantum_fisher_spectrum(b, g);
          },
          py::arg("beam"), py::arg("refinement") = 1);
    m.def("validate_beam_spectrum",
          [](const py::object& b, double tolerance) {
              return json_to_python(validate_beam_spectrum(as_general(to_beam(b)), tolerance).to_json());
          },
          py::arg("beam"), py::arg("tolerance") = 1e-6);

    m.def("crb_mse",
          [](const PhaseNoiseModel& phase, const py::object& beam, double rel_tol, double cutoff) {
              return bound_dict(crb_mse(phase, to_beam(beam), {rel_tol, cutoff}));
          },
          py::arg("phase"), py::arg("beam"), py::arg("rel_tol") = 1e-10, py::arg("cutoff") = 0.0);
    m.def("mean_field_bound_closed_form",
          [](double alpha, double r_plus, double x, double gamma, double kappa, double lambda) {
              const auto r = mean_field_bound_closed_form(alpha, r_plus, x, gamma, kappa, lambda);
              return py::make_tuple(r.value, r.fallback);
          },
          py::arg("alpha"), py::arg("r_plus"), py::arg("x"), py::arg("gamma"), py::arg("kappa"), py::arg("lambda_"));
    m.def("heisenberg_lower_bound",
          [](double p, double kappa, double n) {
              const auto r = heisenberg_lower_bound(p, kappa, n);
              py::dict d;
              d["value"] = r.value;
              d["mu"] = r.mu;
              d["residual"] = r.residual;
              return d;
          },
          py::arg("p"), py::arg("kappa"), py::arg("n"));

    m.def("C_value", [](double g, double tau) { return C_value(StarredParams(g, tau)); }, py::arg("gamma_star"),
          py::arg("tau"));
    m.def("C_tau1_closed_form", &C_tau1_closed_form, py::arg("gamma_star"));
    m.def("C0_exact", &C0_exact);
    m.def("gamma_star_optimal_exact", &gamma_star_optimal_exact);
    m.def("optimize_C",
          [](double gamma_max, int gamma_points, int tau_points, int threads) {
              OptimizeOptions o;
              o.gamma_max = gamma_max;
              o.gamma_points = gamma_points;
              o.tau_points = tau_points;
              o.threads = threads;
              const auto r = optimize_C(o);
              py::dict d;
              d["gamma_star"] = r.gamma_star;
              d["tau"] = r.tau;
              d["C0"] = r.c_min;
              d["boundary_hit"] = r.boundary_hit;
              return d;
          },
          py::arg("gamma_max") = 4.0, py::arg("gamma_points") = 64, py::arg("tau_points") = 32,
          py::arg("threads") = 1);

    m.def("riccati_steady_state", &riccati_steady_state, py::arg("alpha"), py::arg("kappa"), py::arg("lambda_"));
    m.def("wiener_smoother_mse", &wiener_smoother_mse, py::arg("phase"), py::arg("alpha"), py::arg("s_y"));
    m.def("monte_carlo_mse",
          [](double alpha, double kappa, double lambda, double dt, double duration, double burn_in, int trajectories,
             std::uint64_t seed, bool adaptive, int threads) {
              TrackingConfig c;
              c.alpha = alpha;
              c.kappa = kappa;
              c.lambda = lambda;
              c.dt = dt;
              c.duration = duration;
              c.burn_in = burn_in;
              c.trajectories = trajectories;
              c.seed = seed;
              c.feedback = adaptive ? Feedback::AdaptiveNonlinear : Feedback::Linearized;
              c.threads = threads;
              TrackingResult r;
              {
                  py::gil_scoped_release release;
                  r = monte_carlo_mse(c);
              }
              py::dict d;
              d["mse_filtered"] = estimate_dict(r.mse_filtered);
              d["mse_smoothed"] = estimate_dict(r.mse_smoothed);
              d["ratio_filter_smoother"] = estimate_dict(r.ratio_filter_smoother);
              d["riccati_filtered"] = r.riccati_filtered;
              d["crb"] = r.crb;
              d["diverged"] = r.diverged;
              return d;
          },
          py::arg("alpha"), py::arg("kappa") = 1.0, py::arg("lambda_") = 0.0, py::arg("dt") = 1e-3,
          py::arg("duration") = 10.0, py::arg("burn_in") = 1.0, py::arg("trajectories") = 100, py::arg("seed") = 1,
          py::arg("adaptive") = false, py::arg("threads") = 1);

    m.def("run_config",
          [](const std::string& text) {
              const auto a = execute(parse_config_text(text));
              return a.content;
          },
          py::arg("config_json"), "Runs a CLI configuration document and returns the command output as text.");
}
