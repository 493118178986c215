#pragma once

#include <string>
#include <vector>

#include "phasecrb/bound.hpp"
#include "phasecrb/spectrum.hpp"

namespace phasecrb {

/// Dimensionless parameters of the large-flux p = 2 problem.
///
/// tau = gamma* sqrt(R*) / 8 in [0, 1]; R* = (8 tau / gamma*)^2 and alpha*^2 = 1 - tau.
class StarredParams {
public:
    StarredParams(double gamma_star, double tau);
    /// Same point given through R* instead of tau.
    static StarredParams from_r_star(double gamma_star, double r_star);

    double gamma_star() const noexcept { return gamma_; }
    double tau() const noexcept { return tau_; }
    double r_star() const noexcept;
    double alpha_star_sq() const noexcept { return 1.0 - tau_; }

private:
    double gamma_, tau_;
};

/// 4 g^2 a^2 / (g^2/R + w^2) + (g^3 sqrt(R) / 2) / (4 g^2/R + w^2), g = gamma*, a^2 = alpha*^2.
/// At tau = 0 both Lorentzians vanish and the result is 0.
double starred_fisher(const StarredParams& params, double omega_star);
Spectrum starred_fisher_spectrum(const StarredParams& params);

/// (1/2pi) \int dw / (w^2 + F*(w)); +infinity at tau = 0.
double C_value(const StarredParams& params, const CrbOptions& options = {});

/// Closed form of C on the tau = 1 slice.
double C_tau1_closed_form(double gamma_star);
/// Minimiser 2 [2 (sqrt 13 - 3)]^(1/3) and minimum (587 - 143 sqrt 13)^(1/6) / (4 sqrt 6) of the tau = 1 slice.
double gamma_star_optimal_exact();
double C0_exact();

struct SurfaceCell {
    double gamma_star = 0.0;
    double tau = 0.0;
    double c = 0.0;      ///< NaN when missing
    bool ok = false;
    std::string error;   ///< reason a cell is missing
};

/// C on every (gamma*, tau) pair, gamma fastest. Failing or infinite cells are marked missing.
std::vector<SurfaceCell> surface(const std::vector<double>& gamma_grid, const std::vector<double>& tau_grid,
                                 int threads = 1);

struct OptimizeOptions {
    double gamma_min = 0.0; ///< exclusive
    double gamma_max = 4.0;
    double tau_min = 0.0;
    double tau_max = 1.0;
    int gamma_points = 64;
    int tau_points = 32;
    double c_tol = 1e-6;
    int threads = 1;
};

struct OptimizeResult {
    double gamma_star = 0.0;
    double tau = 0.0;
    double c_min = 0.0;
    bool boundary_hit = false;
    int evaluations = 0;
};

/// Grid scan, Nelder-Mead refinement from the best cell, then a golden-section polish of gamma*
/// when the minimiser sits on tau = tau_max.
OptimizeResult optimize_C(const OptimizeOptions& options = {});

enum class StarMapping {
    /// x = 1 - 2/sqrt(R+), alpha^2 = alpha*^2 kappa N*: the approximations behind the starred limit.
    LeadingOrder,
    /// Exact pure-state pump and alpha^2 fixed by the photon flux N = kappa N*.
    Exact,
};

struct ConvergenceRow {
    double n_star = 0.0;
    double rescaled = 0.0;  ///< N*^(2/3) F^-1(0)
    double c_value = 0.0;
    double deviation = 0.0; ///< rescaled / C - 1
};

/// Full OPO bound at N = kappa N*, gamma = gamma* kappa N*^(5/6), R+ = 1/R- = R* N*^(1/3),
/// rescaled and compared with C_value. tau = 0 maps to a coherent beam of flux N.
std::vector<ConvergenceRow> asymptotic_convergence_check(const StarredParams& params,
                                                         const std::vector<double>& n_star_list,
                                                         StarMapping mapping = StarMapping::LeadingOrder,
                                                         double kappa = 1.0, int threads = 1);

/// Slope of log|deviation| against log N*.
double convergence_rate(const std::vector<ConvergenceRow>& rows);

} // namespace phasecrb
