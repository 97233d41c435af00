#pragma once

#include <optional>
#include <span>
#include <vector>

#include "fcount/common.hpp"
#include "fcount/distributions.hpp"
#include "fcount/processes.hpp"
#include "fcount/rates.hpp"

namespace fcount::governing {

/// Generator of the lower-triangular fractional master system
///   D_t^alpha p_0 = -a p_0,
///   D_t^alpha p_m = -a p_m + sum_{j=1}^{min(m,k)} w_j p_{m-j},
/// with (a, w_j) = (k lam, lam) for FPPk and
/// (lam, lam (1-rho) rho^{j-1} / (1 - rho^k)) for FPAk.
struct GeneratorSpec {
    processes::Family family = processes::Family::fppk;  // fppk or fpak
    int k = 1;
    double rho = 0.0;  // FPAk only
    double lam = 1.0;
    double alpha = 1.0;
    int m_max = 0;

    void validate() const;
    double loss_rate() const;                  // a
    std::vector<double> gain_weights() const;  // w_1..w_k (index 0 unused)
};

/// Solve the system on a uniform grid starting at 0 by implicit L1
/// time-stepping from p_m(0) = delta_{m,0}. Truncation at m_max is exact
/// for the retained entries (the system is lower triangular). Throws a
/// refinement-hint error if negative probabilities beyond 1e-8 appear.
std::vector<distributions::PmfVector> solve_fractional_master(const GeneratorSpec& g,
                                                              std::span<const double> grid);

/// Max over m <= m_max and interior grid times t >= t_min of
/// |caputo_l1(p_m) - RHS_m| for supplied pmf curves sampled on `grid`
/// (curves[m][i] = p_m(grid[i])). t = 0 is always excluded.
double residual_homogeneous(const GeneratorSpec& g, std::span<const double> grid,
                            const std::vector<std::vector<double>>& pmf_curves,
                            double t_min = 0.0);

/// Marginal increment curves p*_m(t, v) of the non-homogeneous fractional
/// families, by quadrature of the increment pmf against h_alpha(t, .):
/// rows m = 0..m_max, columns follow `grid`.
std::vector<std::vector<double>> fractional_increment_curves(
    processes::Family family, int k, std::optional<double> rho,
    const rates::RateFunction& rate, double alpha, double v, std::span<const double> grid,
    int m_max, double quad_tol = 1e-9);

/// Residual of the governing integro-differential equations of FNPPk/NFPAk:
/// LHS = caputo_l1 of the quadrature curves of p*_m(t, v); RHS = quadrature
/// of the generator integrand against h_alpha(t, .). Returns the max
/// absolute mismatch over m <= m_max and interior grid times t >= t_min.
double residual_nonhomogeneous(processes::Family family, int k, std::optional<double> rho,
                               const rates::RateFunction& rate, double alpha, double v,
                               std::span<const double> grid, int m_max,
                               double quad_tol = 1e-9, double t_min = 0.0);

}  // namespace fcount::governing
