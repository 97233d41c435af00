#include "fcount/governing.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fcount/quadrature.hpp"
#include "fcount/specfun.hpp"

namespace fcount::governing {

using distributions::PmfVector;
using processes::Family;

namespace {

void check_uniform_grid(std::span<const double> grid) {
    if (grid.size() < 2) throw std::invalid_argument("governing: grid needs >= 2 points");
    if (grid[0] != 0.0) throw std::invalid_argument("governing: grid must start at 0");
    const double dt = grid[1] - grid[0];
    if (!(dt > 0.0)) throw std::invalid_argument("governing: grid must be increasing");
    for (std::size_t i = 0; i + 1 < grid.size(); ++i)
        if (std::abs((grid[i + 1] - grid[i]) - dt) > 1e-9 * dt)
            throw std::invalid_argument("governing: grid must be uniform");
}

// RHS_m of the master system for the column p (values p_0..p_m_max).
double rhs_entry(double a, const std::vector<double>& w, const std::vector<double>& p, int m) {
    double acc = -a * p[static_cast<std::size_t>(m)];
    const int jmax = std::min<int>(m, static_cast<int>(w.size()) - 1);
    for (int j = 1; j <= jmax; ++j)
        acc += w[static_cast<std::size_t>(j)] * p[static_cast<std::size_t>(m - j)];
    return acc;
}

}  // namespace

void GeneratorSpec::validate() const {
    if (family != Family::fppk && family != Family::fpak)
        throw std::invalid_argument("GeneratorSpec: family must be fppk or fpak");
    if (k < 1) throw std::invalid_argument("GeneratorSpec: k must be >= 1");
    if (!(lam > 0.0)) throw std::invalid_argument("GeneratorSpec: lambda must be > 0");
    if (!(alpha > 0.0) || alpha > 1.0)
        throw std::invalid_argument("GeneratorSpec: alpha must be in (0, 1]");
    if (family == Family::fpak && (!(rho >= 0.0) || rho >= 1.0))
        throw std::invalid_argument("GeneratorSpec: rho must be in [0, 1)");
    if (m_max < 0) throw std::invalid_argument("GeneratorSpec: m_max must be >= 0");
}

double GeneratorSpec::loss_rate() const {
    return family == Family::fppk ? k * lam : lam;
}

std::vector<double> GeneratorSpec::gain_weights() const {
    std::vector<double> w(static_cast<std::size_t>(k) + 1, 0.0);
    if (family == Family::fppk) {
        for (int j = 1; j <= k; ++j) w[static_cast<std::size_t>(j)] = lam;
    } else {
        const double norm = rho == 0.0 || k == 1
                                ? 1.0
                                : (1.0 - rho) / (1.0 - std::pow(rho, k));
        double r = 1.0;
        for (int j = 1; j <= k; ++j) {
            w[static_cast<std::size_t>(j)] = lam * norm * r;
            r *= rho;
        }
        if (k == 1) w[1] = lam;  // single-point severity regardless of rho
    }
    return w;
}

std::vector<PmfVector> solve_fractional_master(const GeneratorSpec& g,
                                               std::span<const double> grid) {
    g.validate();
    check_uniform_grid(grid);
    const std::size_t n = grid.size();
    const int mm = g.m_max;
    const double dt = grid[1] - grid[0];
    const double a = g.loss_rate();
    const auto w = g.gain_weights();

    // L1 discretization: D^alpha p(t_i) ~ c [ p_i - sum_{j=1}^{i-1} (b_{j-1}-b_j) p_{i-j}
    //                                          - b_{i-1} p_0 ]
    // with b_j = (j+1)^{1-alpha} - j^{1-alpha}; alpha = 1 collapses to
    // backward Euler (b_j = 0 for j >= 1).
    std::vector<double> b(n - 1);
    for (std::size_t j = 0; j + 1 < n; ++j)
        b[j] = std::pow(j + 1.0, 1.0 - g.alpha) - std::pow(static_cast<double>(j), 1.0 - g.alpha);
    const double c = std::pow(dt, -g.alpha) / std::tgamma(2.0 - g.alpha);

    std::vector<std::vector<double>> p(n, std::vector<double>(static_cast<std::size_t>(mm) + 1,
                                                              0.0));
    p[0][0] = 1.0;

    for (std::size_t i = 1; i < n; ++i) {
        for (int m = 0; m <= mm; ++m) {
            double hist = b[i - 1] * p[0][static_cast<std::size_t>(m)];
            for (std::size_t j = 1; j < i; ++j)
                hist += (b[j - 1] - b[j]) * p[i - j][static_cast<std::size_t>(m)];
            double gain = 0.0;
            for (int j = 1; j <= std::min(m, g.k); ++j)
                gain += w[static_cast<std::size_t>(j)] * p[i][static_cast<std::size_t>(m - j)];
            const double v = (c * hist + gain) / (c + a);
            if (v < -1e-8)
                throw std::runtime_error(
                    "solve_fractional_master: negative probability; refine the grid");
            p[i][static_cast<std::size_t>(m)] = v;
        }
    }

    std::vector<PmfVector> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        out[i].probs = std::move(p[i]);
        out[i].m_max = mm;
        out[i].tail_mass_bound = std::max(0.0, 1.0 - out[i].total_mass());
    }
    return out;
}

double residual_homogeneous(const GeneratorSpec& g, std::span<const double> grid,
                            const std::vector<std::vector<double>>& pmf_curves,
                            double t_min) {
    g.validate();
    check_uniform_grid(grid);
    if (pmf_curves.size() != static_cast<std::size_t>(g.m_max) + 1)
        throw std::invalid_argument("residual_homogeneous: need curves for m = 0..m_max");
    for (const auto& c : pmf_curves)
        if (c.size() != grid.size())
            throw std::invalid_argument("residual_homogeneous: curve/grid length mismatch");

    const double a = g.loss_rate();
    const auto w = g.gain_weights();
    const std::size_t n = grid.size();

    // Caputo derivative of every curve on the interior grid
    std::vector<std::vector<double>> deriv(pmf_curves.size());
    for (std::size_t m = 0; m < pmf_curves.size(); ++m) {
        GridFunction f{std::vector<double>(grid.begin(), grid.end()), pmf_curves[m]};
        deriv[m] = specfun::caputo_l1(f, g.alpha).values;
    }

    double worst = 0.0;
    std::vector<double> col(pmf_curves.size());
    for (std::size_t i = 1; i < n; ++i) {
        if (grid[i] < t_min) continue;
        for (std::size_t m = 0; m < pmf_curves.size(); ++m) col[m] = pmf_curves[m][i];
        for (int m = 0; m <= g.m_max; ++m) {
            const double rhs = rhs_entry(a, w, col, m);
            worst = std::max(worst,
                             std::abs(deriv[static_cast<std::size_t>(m)][i - 1] - rhs));
        }
    }
    return worst;
}

namespace {

struct IncrementLaw {
    // increment pmf over operational mass `mass`, entries 0..m_max
    std::vector<double> operator()(double mass) const {
        if (family == Family::fnppk)
            return distributions::pmf_nppk_increment(k, mass, m_max).probs;
        return distributions::pmf_polya_aeppli_increment(k, rho, mass, m_max).probs;
    }
    Family family;
    int k;
    double rho;
    int m_max;
};

}  // namespace

std::vector<std::vector<double>> fractional_increment_curves(
    Family family, int k, std::optional<double> rho, const rates::RateFunction& rate,
    double alpha, double v, std::span<const double> grid, int m_max, double quad_tol) {
    if (family != Family::fnppk && family != Family::nfpak)
        throw std::invalid_argument("fractional_increment_curves: family must be fnppk or nfpak");
    if (family == Family::nfpak && !rho)
        throw std::invalid_argument("fractional_increment_curves: nfpak requires rho");
    if (!(alpha > 0.0) || !(alpha < 1.0))
        throw std::domain_error("fractional_increment_curves: alpha must be in (0, 1)");
    const IncrementLaw law{family, k, rho.value_or(0.0), m_max};

    std::vector<std::vector<double>> curves(static_cast<std::size_t>(m_max) + 1,
                                            std::vector<double>(grid.size(), 0.0));
    for (std::size_t m = 0; m < curves.size(); ++m) curves[m][0] = m == 0 ? 1.0 : 0.0;

    quadrature::AdaptiveVec quad(quad_tol);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double t = grid[i];
        if (t == 0.0) continue;
        const double hi = specfun::inv_subordinator_tail_cutoff(alpha, t, 1e-12);
        auto integrand = [&](double u, std::vector<double>& out) {
            const double h = u == 0.0 ? specfun::inv_subordinator_density_at_zero(alpha, t)
                                      : specfun::inv_subordinator_density(alpha, t, u);
            const auto pm = law(rate.cum_mass(v, u + v));
            for (std::size_t m = 0; m < out.size(); ++m) out[m] = pm[m] * h;
        };
        const auto col = quad.integrate(integrand, curves.size(), 0.0, hi);
        for (std::size_t m = 0; m < curves.size(); ++m) curves[m][i] = col[m];
    }
    return curves;
}

double residual_nonhomogeneous(Family family, int k, std::optional<double> rho,
                               const rates::RateFunction& rate, double alpha, double v,
                               std::span<const double> grid, int m_max, double quad_tol,
                               double t_min) {
    check_uniform_grid(grid);
    if (!(v >= 0.0)) throw std::domain_error("residual_nonhomogeneous: v must be >= 0");
    const IncrementLaw law{family, k, rho.value_or(0.0), m_max};

    // LHS: Caputo derivative of the quadrature curves of p*_m(t, v)
    const auto curves =
        fractional_increment_curves(family, k, rho, rate, alpha, v, grid, m_max, quad_tol);
    std::vector<std::vector<double>> deriv(curves.size());
    for (std::size_t m = 0; m < curves.size(); ++m) {
        GridFunction f{std::vector<double>(grid.begin(), grid.end()), curves[m]};
        deriv[m] = specfun::caputo_l1(f, alpha).values;
    }

    // generator weights acting on the increment pmf inside the integral
    const double a = family == Family::fnppk ? static_cast<double>(k) : 1.0;
    std::vector<double> w(static_cast<std::size_t>(k) + 1, 0.0);
    if (family == Family::fnppk) {
        for (int j = 1; j <= k; ++j) w[static_cast<std::size_t>(j)] = 1.0;
    } else {
        const double r0 = rho.value_or(0.0);
        const double norm =
            r0 == 0.0 || k == 1 ? 1.0 : (1.0 - r0) / (1.0 - std::pow(r0, k));
        double r = 1.0;
        for (int j = 1; j <= k; ++j) {
            w[static_cast<std::size_t>(j)] = norm * r;
            r *= r0;
        }
    }

    quadrature::AdaptiveVec quad(quad_tol);
    double worst = 0.0;
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double t = grid[i];
        if (t < t_min) continue;
        const double hi = specfun::inv_subordinator_tail_cutoff(alpha, t, 1e-12);
        auto integrand = [&](double u, std::vector<double>& out) {
            const double h = u == 0.0 ? specfun::inv_subordinator_density_at_zero(alpha, t)
                                      : specfun::inv_subordinator_density(alpha, t, u);
            const double lam_uv = rate.rate_at(u + v);
            const auto pm = law(rate.cum_mass(v, u + v));
            for (int m = 0; m <= m_max; ++m) {
                double acc = -a * pm[static_cast<std::size_t>(m)];
                for (int j = 1; j <= std::min(m, k); ++j)
                    acc += w[static_cast<std::size_t>(j)] * pm[static_cast<std::size_t>(m - j)];
                out[static_cast<std::size_t>(m)] = lam_uv * acc * h;
            }
        };
        const auto rhs = quad.integrate(integrand, static_cast<std::size_t>(m_max) + 1, 0.0, hi);
        for (int m = 0; m <= m_max; ++m)
            worst = std::max(worst, std::abs(deriv[static_cast<std::size_t>(m)][i - 1] -
                                             rhs[static_cast<std::size_t>(m)]));
    }
    return worst;
}

}  // namespace fcount::governing
