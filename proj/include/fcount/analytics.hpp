#pragma once

#include <optional>
#include <vector>

#include "fcount/common.hpp"
#include "fcount/processes.hpp"
#include "fcount/rates.hpp"

namespace fcount::analytics {

/// Mean/variance (and, for a time pair, covariance) of a count process at
/// one or two times. Standard errors are present in empirical mode and for
/// Monte Carlo covariance terms.
struct MomentReport {
    double mean = 0.0;
    double variance = 0.0;
    std::optional<double> covariance;
    std::optional<double> se_mean;
    std::optional<double> se_variance;
    std::optional<double> se_covariance;
};

/// Power-law fit of a correlation curve with the theory constant alongside.
struct LrdReport {
    double fitted_exponent = 0.0;
    double fitted_constant = 0.0;      // exp(intercept) of the log-log fit
    double theoretical_constant = 0.0; // C(alpha, s) when supplied by caller
    double fit_lo = 0.0;
    double fit_hi = 0.0;
    double residual = 0.0;             // rms log-residual over the fit range
};

/// E[Y_alpha(t)^nu] = Gamma(nu+1)/Gamma(alpha nu + 1) t^{alpha nu}.
double inv_sub_moment(double alpha, double nu, double t);

/// Var[Y_alpha(t)] = t^{2 alpha} (2/Gamma(2 alpha + 1) - 1/Gamma(alpha+1)^2).
double inv_sub_variance(double alpha, double t);

/// Cov[Y_alpha(t), Y_alpha(s)] by adaptive quadrature of
///   (1/(Gamma(1+a)Gamma(a))) int_0^{min} ((t-tau)^a + (s-tau)^a) tau^{a-1} dtau
///     - (st)^a / Gamma(1+a)^2,
/// with the endpoint singularity removed exactly by tau = w^{1/a}.
double inv_sub_cov(double alpha, double t, double s);

// Severity moments of the two compounding laws.
double uniform_k_mean(int k);
double uniform_k_second_moment(int k);
double trunc_geom_mean(int k, double rho);
double trunc_geom_second_moment(int k, double rho);

MomentReport moments_ppk(int k, double lam, double t, std::optional<double> s = {});
MomentReport moments_fppk(int k, double lam, double alpha, double t,
                          std::optional<double> s = {});
MomentReport moments_pak(int k, double rho, double lam, double t, std::optional<double> s = {});
MomentReport moments_fpak(int k, double rho, double lam, double alpha, double t,
                          std::optional<double> s = {});
MomentReport moments_nppk(int k, const rates::RateFunction& rate, double t,
                          std::optional<double> s = {});
MomentReport moments_npak(int k, double rho, const rates::RateFunction& rate, double t,
                          std::optional<double> s = {});

/// E[Lambda(Y_alpha(t))^p] by quadrature against h_alpha(t, .).
double expected_rate_mass_power(const rates::RateFunction& rate, double alpha, double t,
                                int power, double v = 0.0);

struct FnppkOptions {
    /// Paths for the Monte Carlo cross term E[Lambda(Y_t) Lambda(Y_s)]
    /// (no bivariate density is available in closed form).
    int mc_paths = 100000;
    std::uint64_t mc_seed = 20260810;
    double step_scale = 1e-3;
};

MomentReport moments_fnppk(int k, const rates::RateFunction& rate, double alpha, double t,
                           std::optional<double> s = {}, const FnppkOptions& opts = {});
MomentReport moments_nfpak(int k, double rho, const rates::RateFunction& rate, double alpha,
                           double t, std::optional<double> s = {},
                           const FnppkOptions& opts = {});

/// Analytic moments for any family (dispatches on the spec).
MomentReport moments_for_spec(const processes::ProcessSpec& spec, double t,
                              std::optional<double> s = {});

/// Exact correlation Corr[N(t), N(s)] of the FPPk/FPAk families.
double exact_correlation(processes::Family family, int k, double rho, double lam, double alpha,
                         double s, double t);

/// Exact correlation curve t -> Corr[N(s), N(t)] on a log-spaced grid.
GridFunction correlation_curve(processes::Family family, int k, double rho, double lam,
                               double alpha, double s, double t_lo, double t_hi, int n_points);

/// Limit constant C(alpha, s) of Corr[N(t), N(s)] t^{alpha} as t -> infinity
/// for the FPPk and FPAk families, normalized with the exact Var[N_alpha(s)]so
/// that the exact correlation curve converges to it.
double lrd_constant(processes::Family family, int k, double rho, double lam, double alpha,
                    double s);

/// Least-squares power-law fit of log(corr) against log(t) over
/// [fit_lo, fit_hi].
LrdReport lrd_fit(const GridFunction& corr_curve, double fit_lo, double fit_hi,
                  double theoretical_constant = 0.0);

/// Unbiased sample mean/variance (and covariance against a second column)
/// with standard errors; the variance SE uses the fourth-moment formula.
MomentReport empirical_moments(const processes::Ensemble& e, int t_index,
                               std::optional<int> s_index = {});

}  // namespace fcount::analytics
