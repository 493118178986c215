#pragma once

#include <string>
#include <vector>

#include "phasecrb/convolution.hpp"
#include "phasecrb/models.hpp"
#include "phasecrb/spectrum.hpp"

namespace phasecrb {

/// Classical and quantum Fisher information spectra of one phase model and one beam.
struct FisherSpectra {
    Spectrum fc;
    Spectrum fq;
    double flux = 0.0;
};

/// Closed-form quantum Fisher spectrum of an OPO beam; the 4N floor is stored as the floor.
Spectrum opo_quantum_fisher_spectrum(const OpoBeam& beam);

/// Terms of the OPO spectrum carried by the mean field: 4 alpha^2 (1 + T+~(omega)).
Spectrum mean_field_fisher_spectrum(const OpoBeam& beam);

/// Closed form of f~ for an OPO beam: a sum of Lorentzians plus the spike pi (4 alpha^2)^2 delta(omega).
Spectrum opo_f_spectrum(const OpoBeam& beam);

/// f~, g~ and F~Q of a general beam, computed on a convolution grid.
///
/// f and g keep their spikes; fq = 4N + f~ - g~ has the spikes cancelled and 4N as its floor.
struct GeneralFisherComponents {
    Spectrum f;
    Spectrum g;
    Spectrum fq;
    double flux = 0.0;
    std::vector<double> omega;    ///< output grid, omega >= 0
    std::vector<double> f_values; ///< continuous part of f~ on `omega`
    std::vector<double> g_values; ///< continuous part of g~ on `omega`
    std::vector<double> fq_values;
};

GeneralFisherComponents general_fisher_components(const GeneralBeam& beam, const ConvolutionGrid& grid = {});

/// Quantum Fisher spectrum of a general beam. Throws PhysicalityError if the result dips below
/// -1e-8 * max|F~Q| anywhere on the grid.
Spectrum general_quantum_fisher_spectrum(const GeneralBeam& beam, const ConvolutionGrid& grid = {});

struct ValidationCheck {
    std::string name;
    double min_margin = 0.0;
    double argmin_omega = 0.0;
};

struct ValidationReport {
    bool pass = true;
    std::vector<ValidationCheck> checks;

    /// {"pass": bool, "checks": [{"name", "min_margin", "argmin_omega"}]}
    std::string to_json() const;
};

/// Physicality checks of a general beam on the convolution grid.
///
/// vacuum_x, vacuum_y: 1 + h~ >= 0. uncertainty: (1 + h~X)(1 + h~Y) - h~XY^2 - 1 >= 0.
/// f_nonnegative: f~ >= 0 and g_bound: 4N + g~ >= 0, both in units of 4N.
/// The beam passes iff every margin is >= -tolerance.
ValidationReport validate_beam_spectrum(const GeneralBeam& beam, double tolerance = 1e-6,
                                        const ConvolutionGrid& grid = {});

/// Converts any beam to its general form.
GeneralBeam as_general(const BeamModel& beam);

/// fc from the prior, fq in closed form for Coherent and OPO beams and by convolution otherwise.
FisherSpectra fisher_spectra(const PhaseNoiseModel& phase, const BeamModel& beam);

} // namespace phasecrb
