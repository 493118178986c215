#pragma once

#include <utility>
#include <variant>

#include "phasecrb/spectrum.hpp"

namespace phasecrb {

// ---------------------------------------------------------------------------
// Phase-noise priors
// ---------------------------------------------------------------------------

/// Sigma(w) = kappa^(p-1) / |w|^p.
struct PowerLawPhase {
    double p;
    double kappa;
};

/// Sigma(w) = kappa / (lambda^2 + w^2). lambda = 0 is Brownian (Wiener) phase diffusion.
struct OrnsteinUhlenbeckPhase {
    double kappa;
    double lambda;
};

/// Stationary Gaussian prior on the imposed phase. Parameters are validated on construction.
class PhaseNoiseModel {
public:
    static PhaseNoiseModel power_law(double p, double kappa);
    static PhaseNoiseModel ornstein_uhlenbeck(double kappa, double lambda);
    static PhaseNoiseModel wiener(double kappa) { return ornstein_uhlenbeck(kappa, 0.0); }

    const std::variant<PowerLawPhase, OrnsteinUhlenbeckPhase>& variant() const noexcept { return model_; }

    double kappa() const noexcept;
    /// Damping rate; zero for power-law priors.
    double lambda() const noexcept;
    /// High-frequency exponent p of Sigma(w) ~ kappa^(p-1) |w|^-p.
    double exponent() const noexcept;
    bool is_markov() const noexcept;

private:
    explicit PhaseNoiseModel(std::variant<PowerLawPhase, OrnsteinUhlenbeckPhase> m) : model_(m) {}
    std::variant<PowerLawPhase, OrnsteinUhlenbeckPhase> model_;
};

/// Prior phase spectrum Sigma~(w) [rad^2 s]. Power-law priors are undefined at w = 0.
double phase_prior_spectrum(const PhaseNoiseModel& model, double omega);

/// Classical Fisher information density 1 / Sigma~(w); exact at w = 0 for every model.
double classical_fisher_spectrum(const PhaseNoiseModel& model, double omega);

/// The same quantity as a Spectrum with its |w|^p growth declared as the tail.
Spectrum classical_fisher(const PhaseNoiseModel& model);

// ---------------------------------------------------------------------------
// Beams
// ---------------------------------------------------------------------------

/// Coherent beam with real mean-field amplitude alpha [sqrt(photons/s)].
class CoherentBeam {
public:
    explicit CoherentBeam(double alpha);
    double alpha() const noexcept { return alpha_; }

private:
    double alpha_;
};

/// Mean field alpha added to the output of an optical parametric oscillator.
///
/// r_plus >= 1 and r_minus in (0, 1] are the antisqueezing and squeezing levels at the
/// carrier, gamma the cavity decay rate and x in [0, 1) the normalised pump amplitude.
/// Mixed states are allowed: r_plus * r_minus >= 1, with equality for pure states.
class OpoBeam {
public:
    OpoBeam(double alpha, double r_plus, double r_minus, double gamma, double x);

    /// Pure beam with r_minus = 1 / r_plus and pump x = (sqrt(r_plus) - 1) / (sqrt(r_plus) + 1).
    static OpoBeam pure(double alpha, double r_plus, double gamma);

    double alpha() const noexcept { return alpha_; }
    double r_plus() const noexcept { return r_plus_; }
    double r_minus() const noexcept { return r_minus_; }
    double gamma() const noexcept { return gamma_; }
    double x() const noexcept { return x_; }
    bool is_pure(double rel_tol = 1e-12) const noexcept;

private:
    double alpha_, r_plus_, r_minus_, gamma_, x_;
};

/// Arbitrary stationary Gaussian beam: quadrature means and the normally ordered fluctuation
/// spectra h~_X, h~_Y, h~_XY (fluctuations only; the means enter separately).
class GeneralBeam {
public:
    GeneralBeam(double mean_x, double mean_y, Spectrum h_x, Spectrum h_y, Spectrum h_xy);

    double mean_x() const noexcept { return mean_x_; }
    double mean_y() const noexcept { return mean_y_; }
    const Spectrum& h_x() const noexcept { return h_x_; }
    const Spectrum& h_y() const noexcept { return h_y_; }
    const Spectrum& h_xy() const noexcept { return h_xy_; }

private:
    double mean_x_, mean_y_;
    Spectrum h_x_, h_y_, h_xy_;
};

using BeamModel = std::variant<CoherentBeam, OpoBeam, GeneralBeam>;

/// Normally ordered quadrature correlations T+(t), T-(t) of the OPO output.
struct OpoCorrelations {
    double t_plus;
    double t_minus;
};
OpoCorrelations opo_correlations(const OpoBeam& beam, double t);

/// The two exponentials behind T+ and T-.
std::pair<ExpCorrelation, ExpCorrelation> opo_correlation_terms(const OpoBeam& beam);

/// Builds the General form of an OPO beam: <X> = 2 alpha, <Y> = 0, h_X = T+~, h_Y = T-~.
GeneralBeam to_general(const OpoBeam& beam);
GeneralBeam to_general(const CoherentBeam& beam);

/// Same as to_general(OpoBeam) but without any physicality checks on the parameters; used to
/// build deliberately invalid beams for validation.
GeneralBeam opo_general_unchecked(double alpha, double r_plus, double r_minus, double gamma, double x);

/// Mean photon flux N [photons/s]. Throws DomainError if the result is not positive.
double photon_flux(const BeamModel& beam);
double photon_flux(const OpoBeam& beam);
double photon_flux(const GeneralBeam& beam);

/// Result of splitting a mixed OPO beam into a pure squeezed beam plus classical X noise.
struct PureDecomposition {
    OpoBeam pure;
    Spectrum classical_noise;  ///< S_XX - 1/S_YY, nonnegative for physical beams
};

PureDecomposition mixed_to_pure(const OpoBeam& beam);

} // namespace phasecrb
