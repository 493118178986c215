#include "phasecrb/models.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "phasecrb/error.hpp"
#include "phasecrb/quadrature.hpp"

namespace phasecrb {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

void require(bool condition, const std::string& message)
{
    if (!condition)
        throw DomainError(message);
}

bool finite(double v)
{
    return std::isfinite(v);
}

} // namespace

PhaseNoiseModel PhaseNoiseModel::power_law(double p, double kappa)
{
    require(finite(p) && p > 1.0, "power-law prior requires p > 1");
    require(finite(kappa) && kappa > 0.0, "phase prior requires kappa > 0");
    return PhaseNoiseModel(PowerLawPhase{p, kappa});
}

PhaseNoiseModel PhaseNoiseModel::ornstein_uhlenbeck(double kappa, double lambda)
{
    require(finite(kappa) && kappa > 0.0, "phase prior requires kappa > 0");
    require(finite(lambda) && lambda >= 0.0, "Ornstein-Uhlenbeck prior requires lambda >= 0");
    return PhaseNoiseModel(OrnsteinUhlenbeckPhase{kappa, lambda});
}

double PhaseNoiseModel::kappa() const noexcept
{
    return std::visit([](const auto& m) { return m.kappa; }, model_);
}

double PhaseNoiseModel::lambda() const noexcept
{
    if (const auto* ou = std::get_if<OrnsteinUhlenbeckPhase>(&model_))
        return ou->lambda;
    return 0.0;
}

double PhaseNoiseModel::exponent() const noexcept
{
    if (const auto* pl = std::get_if<PowerLawPhase>(&model_))
        return pl->p;
    return 2.0;
}

bool PhaseNoiseModel::is_markov() const noexcept
{
    return exponent() == 2.0;
}

double phase_prior_spectrum(const PhaseNoiseModel& model, double omega)
{
    return std::visit(
        overloaded{
            [&](const PowerLawPhase& m) {
                if (omega == 0.0)
                    throw DomainError("power-law phase spectrum is undefined at omega = 0");
                return std::pow(m.kappa, m.p - 1.0) / std::pow(std::abs(omega), m.p);
            },
            [&](const OrnsteinUhlenbeckPhase& m) {
                if (m.lambda == 0.0 && omega == 0.0)
                    throw DomainError("Wiener phase spectrum is undefined at omega = 0");
                return m.kappa / (m.lambda * m.lambda + omega * omega);
            },
        },
        model.variant());
}

double classical_fisher_spectrum(const PhaseNoiseModel& model, double omega)
{
    return std::visit(
        overloaded{
            [&](const PowerLawPhase& m) {
                return std::pow(std::abs(omega), m.p) / std::pow(m.kappa, m.p - 1.0);
            },
            [&](const OrnsteinUhlenbeckPhase& m) {
                return (m.lambda * m.lambda + omega * omega) / m.kappa;
            },
        },
        model.variant());
}

Spectrum classical_fisher(const PhaseNoiseModel& model)
{
    std::vector<double> scales{model.kappa()};
    if (model.lambda() > 0.0)
        scales.push_back(model.lambda());
    const double p = model.exponent();
    const PowerTail tail{std::pow(model.kappa(), 1.0 - p), p, 0.0};
    return Spectrum([model](double w) { return classical_fisher_spectrum(model, w); }, tail,
                    std::move(scales));
}

CoherentBeam::CoherentBeam(double alpha) : alpha_(alpha)
{
    require(finite(alpha), "alpha must be finite");
}

OpoBeam::OpoBeam(double alpha, double r_plus, double r_minus, double gamma, double x)
    : alpha_(alpha), r_plus_(r_plus), r_minus_(r_minus), gamma_(gamma), x_(x)
{
    require(finite(alpha), "alpha must be finite");
    require(finite(r_plus) && r_plus >= 1.0, "r_plus must be >= 1");
    require(finite(r_minus) && r_minus > 0.0 && r_minus <= 1.0, "r_minus must lie in (0, 1]");
    require(finite(gamma) && gamma > 0.0, "gamma must be > 0");
    require(finite(x) && x >= 0.0 && x < 1.0, "x must lie in [0, 1)");
    require(r_plus * r_minus >= 1.0 - 1e-12,
            "r_plus * r_minus must be >= 1 (got " + std::to_string(r_plus * r_minus) + ")");
}

OpoBeam OpoBeam::pure(double alpha, double r_plus, double gamma)
{
    require(finite(r_plus) && r_plus >= 1.0, "r_plus must be >= 1");
    const double s = std::sqrt(r_plus);
    return OpoBeam(alpha, r_plus, 1.0 / r_plus, gamma, (s - 1.0) / (s + 1.0));
}

bool OpoBeam::is_pure(double rel_tol) const noexcept
{
    return std::abs(r_plus_ * r_minus_ - 1.0) <= rel_tol;
}

GeneralBeam::GeneralBeam(double mean_x, double mean_y, Spectrum h_x, Spectrum h_y, Spectrum h_xy)
    : mean_x_(mean_x), mean_y_(mean_y), h_x_(std::move(h_x)), h_y_(std::move(h_y)),
      h_xy_(std::move(h_xy))
{
    require(finite(mean_x) && finite(mean_y), "quadrature means must be finite");
    for (const Spectrum* h : {&h_x_, &h_y_, &h_xy_}) {
        require(h->floor() == 0.0,
                "normally ordered spectra cannot carry a white floor (infinite photon flux)");
        if (h->has_continuous())
            require(h->tail().exponent < -1.0, "normally ordered spectra must decay faster than 1/omega");
    }
}

std::pair<ExpCorrelation, ExpCorrelation> opo_correlation_terms(const OpoBeam& b)
{
    const double g = b.gamma();
    const ExpCorrelation plus{(b.r_plus() - 1.0) * (1.0 - b.x()) * g / 4.0, (1.0 - b.x()) * g / 2.0};
    const ExpCorrelation minus{(b.r_minus() - 1.0) * (1.0 + b.x()) * g / 4.0, (1.0 + b.x()) * g / 2.0};
    return {plus, minus};
}

OpoCorrelations opo_correlations(const OpoBeam& beam, double t)
{
    const auto [plus, minus] = opo_correlation_terms(beam);
    return {plus.at_time(t), minus.at_time(t)};
}

GeneralBeam opo_general_unchecked(double alpha, double r_plus, double r_minus, double gamma, double x)
{
    const ExpCorrelation plus{(r_plus - 1.0) * (1.0 - x) * gamma / 4.0, (1.0 - x) * gamma / 2.0};
    const ExpCorrelation minus{(r_minus - 1.0) * (1.0 + x) * gamma / 4.0, (1.0 + x) * gamma / 2.0};
    return GeneralBeam(2.0 * alpha, 0.0, Spectrum::lorentzians({plus}), Spectrum::lorentzians({minus}),
                       Spectrum{});
}

GeneralBeam to_general(const OpoBeam& b)
{
    return opo_general_unchecked(b.alpha(), b.r_plus(), b.r_minus(), b.gamma(), b.x());
}

GeneralBeam to_general(const CoherentBeam& b)
{
    return GeneralBeam(2.0 * b.alpha(), 0.0, Spectrum{}, Spectrum{}, Spectrum{});
}

namespace {

double check_flux(double n)
{
    if (!(n > 0.0) || !std::isfinite(n))
        throw DomainError("photon flux must be positive (got " + std::to_string(n) + ")");
    return n;
}

// h(0) = (1/2pi) * integral of h~ over the real line, spikes included.
double correlation_at_zero(const Spectrum& h)
{
    double total = h.spike_weight();
    if (h.has_continuous()) {
        const auto r = integrate_to_infinity([&](double w) { return h.continuous(w); }, 0.0,
                                             h.widest_scale(), {1e-12, 0.0, 50000});
        if (!r.converged)
            throw ConvergenceError("integral of a normally ordered spectrum did not converge");
        total += 2.0 * r.value;
    }
    return total / (2.0 * std::numbers::pi);
}

} // namespace

double photon_flux(const OpoBeam& b)
{
    const double x = b.x();
    return check_flux(b.alpha() * b.alpha()
                      + b.gamma() / 16.0 * ((b.r_plus() - 1.0) * (1.0 - x) + (b.r_minus() - 1.0) * (1.0 + x)));
}

double photon_flux(const GeneralBeam& b)
{
    const double means = b.mean_x() * b.mean_x() + b.mean_y() * b.mean_y();
    return check_flux((means + correlation_at_zero(b.h_x()) + correlation_at_zero(b.h_y())) / 4.0);
}

double photon_flux(const BeamModel& beam)
{
    return std::visit(overloaded{
                          [](const CoherentBeam& b) { return check_flux(b.alpha() * b.alpha()); },
                          [](const OpoBeam& b) { return photon_flux(b); },
                          [](const GeneralBeam& b) { return photon_flux(b); },
                      },
                      beam);
}

PureDecomposition mixed_to_pure(const OpoBeam& beam)
{
    const double x = beam.x();
    // S_XX * S_YY >= 1 at every frequency reduces to this carrier-independent inequality.
    const double excess = (beam.r_plus() - 1.0) * (1.0 - x) * (1.0 - x);
    const double deficit = (1.0 - beam.r_minus()) * (1.0 + x) * (1.0 + x);
    if (excess < deficit * (1.0 - 1e-12))
        throw PhysicalityError("antisqueezing is too weak for the squeezing at high frequency: "
                               "the classical noise spectrum would be negative");

    const double r_plus_q = 1.0 / beam.r_minus();
    const double s = std::sqrt(r_plus_q);
    const double x_q = (s - 1.0) / (s + 1.0);
    const double gamma_q = beam.gamma() * (1.0 + x) / (1.0 + x_q);
    OpoBeam pure(beam.alpha(), r_plus_q, beam.r_minus(), gamma_q, x_q);

    const auto [plus, minus] = opo_correlation_terms(beam);
    auto noise = [plus, minus](double w) {
        return (1.0 + plus.spectrum(w)) - 1.0 / (1.0 + minus.spectrum(w));
    };
    const double tail_coeff = 2.0 * plus.amplitude * plus.rate + 2.0 * minus.amplitude * minus.rate;
    const double onset = 1e3 * std::max(plus.rate, minus.rate);
    Spectrum classical(noise, PowerTail{tail_coeff, -2.0, onset}, {plus.rate, minus.rate});
    return {pure, std::move(classical)};
}

} // namespace phasecrb
