#pragma once

#include "fcount/common.hpp"

namespace fcount::specfun {

/// ln Gamma(x) for x > 0. Accurate to >= 12 significant digits on
/// [1e-3, 170]. Throws std::domain_error for x <= 0.
double log_gamma(double x);

/// Two-parameter Mittag-Leffler function
///     E_{alpha,beta}(z) = sum_{n>=0} z^n / Gamma(alpha n + beta)
/// for alpha in (0, 1], beta > 0 and real z.
///
/// Evaluation paths: plain series where it is numerically safe, the
/// algebraic asymptotic expansion for large negative z when it can reach
/// abs_tol, and otherwise inversion of the Laplace transform
/// s^{alpha-beta}/(s^alpha + x) on a fixed-node Talbot contour. alpha = 1
/// is handled through the confluent reduction E_{1,b}(z) = e^z M(b-1,b,-z)/Gamma(b).
///
/// Declared evaluation range: |z| <= 1e8, and for alpha = 1 additionally
/// z <= 700 (result would overflow). Outside it throws std::range_error.
double mittag_leffler(double alpha, double beta, double z, const SeriesControl& ctl = {});

/// Three-parameter (Prabhakar) Mittag-Leffler function
///     E^{gamma}_{alpha,beta}(z) = sum_{n>=0} (gamma)_n z^n / (n! Gamma(alpha n + beta))
/// with (gamma)_n the Pochhammer symbol. Same domains and evaluation
/// strategy as mittag_leffler; the contour path inverts
/// s^{alpha gamma - beta}/(s^alpha + x)^gamma.
double prabhakar_ml(double alpha, double beta, double gamma_, double z,
                    const SeriesControl& ctl = {});

/// Density g_alpha(x) of the positive alpha-stable law with Laplace
/// transform exp(-s^alpha), alpha in (0,1), x > 0.
///
/// Primary path is the large-argument series
///     (1/pi) sum_{k>=1} (-1)^{k+1} Gamma(alpha k + 1)/k! x^{-alpha k - 1} sin(pi k alpha);
/// when its partial sums fail a Cauchy-tail test the value is recovered by
/// Talbot inversion of exp(-s^alpha), and if that is ill-conditioned (small
/// x with alpha > ~0.6) by the Zolotarev integral representation.
double stable_density(double alpha, double x, const SeriesControl& ctl = {});

/// Density h_alpha(t, x) of the inverse alpha-stable subordinator Y_alpha(t):
///     h_alpha(t, x) = (t/alpha) x^{-1-1/alpha} g_alpha(t x^{-1/alpha}).
double inv_subordinator_density(double alpha, double t, double x, const SeriesControl& ctl = {});

/// Value of h_alpha(t, x) as x -> 0+, i.e. t^{-alpha}/Gamma(1-alpha).
/// Convenience for quadratures whose lower endpoint touches 0.
double inv_subordinator_density_at_zero(double alpha, double t);

/// Upper cutoff U with P[Y_alpha(t) > U] <= tail_tol, from the Chernoff
/// bound P[L_alpha(1) < y] <= exp(-(1-alpha) alpha^{alpha/(1-alpha)} y^{-alpha/(1-alpha)}).
/// Used to truncate integrals of h_alpha(t, .) that formally run to infinity.
double inv_subordinator_tail_cutoff(double alpha, double t, double tail_tol = 1e-12);

/// Caputo derivative of order alpha in (0, 1] by the L1 scheme on a uniform
/// grid. Returns the derivative sampled on the interior grid (all input
/// nodes except the first). alpha = 1 degenerates to the two-point backward
/// difference. Non-uniform grids and grids with fewer than 2 points are
/// rejected.
GridFunction caputo_l1(const GridFunction& f, double alpha);

}  // namespace fcount::specfun
