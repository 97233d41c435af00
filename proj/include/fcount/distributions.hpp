#pragma once

#include <span>
#include <vector>

#include "fcount/common.hpp"

namespace fcount::distributions {

/// Probabilities P[N = m] for m = 0..m_max, with a bound on the mass lost
/// to truncation: 1 - sum(probs) <= tail_mass_bound (when the generator
/// can certify one; otherwise it is the computed remainder itself).
struct PmfVector {
    std::vector<double> probs;
    int m_max = 0;
    double tail_mass_bound = 0.0;

    double total_mass() const;
    double mean() const;
    double second_moment() const;
    void check_invariants() const;  // nonnegativity, mass <= 1 + 1e-12
};

/// Compound-Poisson pmf by the Panjer-class recursion
///   p_0 = e^{-theta},  p_m = (theta/m) sum_{j=1}^{min(m,J)} j f_j p_{m-j}
/// for a Poisson(theta) count and severity pmf f on {1..J}.
std::vector<double> compound_poisson_pmf(double count_mean, std::span<const double> severity,
                                         int m_max);

/// P[Y > n] for Y ~ Poisson(mean).
double poisson_tail_above(double mean, int n);

/// Severity pmf of the truncated geometric law on {1..k}, parameter rho.
std::vector<double> trunc_geom_pmf(int k, double rho);

/// Poisson distribution of order k with parameter Lambda: the law of
/// X_1 + ... + X_Y with Y ~ Poisson(k Lambda) and X_i uniform on {1..k}.
/// tail_mass_bound comes from P[N > m] <= P[Y > floor(m/k)].
PmfVector pmf_poisson_order_k(int k, double big_lambda, int m_max);

/// Polya-Aeppli distribution of order k: Y ~ Poisson(Lambda), truncated
/// geometric severities.
PmfVector pmf_polya_aeppli_order_k(int k, double rho, double big_lambda, int m_max);

/// Marginal pmf of the fractional Poisson process of order k at time t:
///   p_m = sum_z A(z, m) (lam t^alpha)^z E^{z+1}_{alpha, alpha z + 1}(-k lam t^alpha),
/// where A(z, m) counts the {1..k}-valued z-tuples summing to m (the
/// Prabhakar resummation of the marginal double series). Beyond
/// k lam t^alpha = 50 the value is recovered by quadrature against the
/// inverse-subordinator density. alpha = 1 reduces to pmf_poisson_order_k.
PmfVector pmf_fppk(int k, double lam, double alpha, double t, int m_max,
                   const SeriesControl& ctl = {});

/// Increment law of the non-homogeneous Poisson process of order k over an
/// interval of cumulative mass Lambda(u, u+t).
PmfVector pmf_nppk_increment(int k, double mass, int m_max);

/// Increment law of the non-homogeneous Polya-Aeppli process of order k.
PmfVector pmf_polya_aeppli_increment(int k, double rho, double mass, int m_max);

/// Ordered-tuple counts A(z, m) = #{(x_1..x_z) in {1..k}^z : sum = m} for
/// z = 0..m, as used by pmf_fppk. Exposed for cross-checks.
std::vector<std::vector<double>> tuple_counts(int k, int m_max);

namespace oracle {
/// Direct enumeration of the Omega(k, m) sum
///   e^{-Lambda k} sum_{n_1 + 2 n_2 + ... + k n_k = m} Lambda^{z_k} / prod n_j!
/// Exponential in m; intended for small-m cross-checks only.
double poisson_order_k_by_enumeration(int k, double big_lambda, int m);

/// Brute-force count-times-severity convolution for any compound Poisson
/// law with severity on {1..J}; exact for finite m.
std::vector<double> compound_poisson_by_convolution(double count_mean,
                                                    std::span<const double> severity, int m_max);

/// The printed closed form of the Polya-Aeppli-of-order-k pmf in its
/// unambiguous regime m <= k:
///   q_m = e^{-Lambda} sum_{j=1}^m C(m-1, j-1) Q^j / j! rho^{m-j},
///   Q = Lambda (1 - rho) / (1 - rho^k).
double polya_aeppli_small_m_closed_form(int k, double rho, double big_lambda, int m);
}  // namespace oracle

}  // namespace fcount::distributions
