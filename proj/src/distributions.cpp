#include "fcount/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "fcount/quadrature.hpp"
#include "fcount/specfun.hpp"

namespace fcount::distributions {

namespace {

void check_k(int k) {
    if (k < 1) throw std::domain_error("distributions: k must be >= 1");
}

void check_m_max(int m_max) {
    if (m_max < 0) throw std::domain_error("distributions: m_max must be >= 0");
}

void check_rho(double rho) {
    if (!(rho >= 0.0) || rho >= 1.0)
        throw std::domain_error("distributions: rho must be in [0, 1)");
}

// p_m(t) = int_0^inf P[PPk(u) = m] h_alpha(t, u) du for all m at once.
std::vector<double> fppk_pmf_by_quadrature(int k, double lam, double alpha, double t, int m_max,
                                           const SeriesControl& ctl) {
    const double hi = specfun::inv_subordinator_tail_cutoff(alpha, t, 1e-12);
    std::vector<double> sev(static_cast<std::size_t>(k) + 1, 1.0 / k);
    sev[0] = 0.0;
    quadrature::AdaptiveVec quad(std::max(1e-11, ctl.abs_tol));
    auto integrand = [&](double u, std::vector<double>& out) {
        const double h = u == 0.0 ? specfun::inv_subordinator_density_at_zero(alpha, t)
                                  : specfun::inv_subordinator_density(alpha, t, u, ctl);
        const auto p = compound_poisson_pmf(k * lam * u, sev, m_max);
        for (int m = 0; m <= m_max; ++m)
            out[static_cast<std::size_t>(m)] = p[static_cast<std::size_t>(m)] * h;
    };
    return quad.integrate(integrand, static_cast<std::size_t>(m_max) + 1, 0.0, hi);
}

}  // namespace

double PmfVector::total_mass() const {
    double s = 0.0;
    for (double p : probs) s += p;
    return s;
}

double PmfVector::mean() const {
    double s = 0.0;
    for (std::size_t m = 0; m < probs.size(); ++m) s += static_cast<double>(m) * probs[m];
    return s;
}

double PmfVector::second_moment() const {
    double s = 0.0;
    for (std::size_t m = 0; m < probs.size(); ++m)
        s += static_cast<double>(m) * static_cast<double>(m) * probs[m];
    return s;
}

void PmfVector::check_invariants() const {
    double s = 0.0;
    for (double p : probs) {
        if (!(p >= -1e-15) || !(p <= 1.0 + 1e-12))
            throw std::runtime_error("PmfVector: entry outside [0, 1]");
        s += p;
    }
    if (s > 1.0 + 1e-12) throw std::runtime_error("PmfVector: total mass exceeds 1");
}

std::vector<double> compound_poisson_pmf(double count_mean, std::span<const double> severity,
                                         int m_max) {
    if (!(count_mean >= 0.0))
        throw std::domain_error("compound_poisson_pmf: count mean must be >= 0");
    check_m_max(m_max);
    const int jmax = static_cast<int>(severity.size()) - 1;  // severity[1..jmax]
    std::vector<double> p(static_cast<std::size_t>(m_max) + 1, 0.0);
    p[0] = std::exp(-count_mean);
    for (int m = 1; m <= m_max; ++m) {
        double acc = 0.0;
        for (int j = 1; j <= std::min(m, jmax); ++j)
            acc += j * severity[static_cast<std::size_t>(j)] * p[static_cast<std::size_t>(m - j)];
        p[static_cast<std::size_t>(m)] = count_mean / m * acc;
    }
    return p;
}

double poisson_tail_above(double mean, int n) {
    if (mean == 0.0) return 0.0;
    // sum the tail upward from n+1 in log space
    double lt = (n + 1) * std::log(mean) - mean - std::lgamma(n + 2.0);
    double term = std::exp(lt);
    double sum = 0.0;
    for (int j = n + 1; j < n + 100000; ++j) {
        sum += term;
        term *= mean / (j + 1);
        if (term < 1e-18 * (sum + 1e-300)) break;
    }
    return std::min(sum, 1.0);
}

std::vector<double> trunc_geom_pmf(int k, double rho) {
    check_k(k);
    check_rho(rho);
    std::vector<double> f(static_cast<std::size_t>(k) + 1, 0.0);
    if (rho == 0.0 || k == 1) {
        f[1] = 1.0;
        return f;
    }
    const double norm = (1.0 - rho) / (1.0 - std::pow(rho, k));
    double r = 1.0;
    for (int m = 1; m <= k; ++m) {
        f[static_cast<std::size_t>(m)] = norm * r;
        r *= rho;
    }
    return f;
}

PmfVector pmf_poisson_order_k(int k, double big_lambda, int m_max) {
    check_k(k);
    check_m_max(m_max);
    if (!(big_lambda >= 0.0))
        throw std::domain_error("pmf_poisson_order_k: Lambda must be >= 0");
    std::vector<double> sev(static_cast<std::size_t>(k) + 1, 1.0 / k);
    sev[0] = 0.0;
    PmfVector out;
    out.probs = compound_poisson_pmf(k * big_lambda, sev, m_max);
    out.m_max = m_max;
    out.tail_mass_bound = poisson_tail_above(k * big_lambda, m_max / k);
    return out;
}

PmfVector pmf_polya_aeppli_order_k(int k, double rho, double big_lambda, int m_max) {
    check_k(k);
    check_m_max(m_max);
    check_rho(rho);
    if (!(big_lambda >= 0.0))
        throw std::domain_error("pmf_polya_aeppli_order_k: Lambda must be >= 0");
    PmfVector out;
    out.probs = compound_poisson_pmf(big_lambda, trunc_geom_pmf(k, rho), m_max);
    out.m_max = m_max;
    out.tail_mass_bound = poisson_tail_above(big_lambda, m_max / k);
    return out;
}

std::vector<std::vector<double>> tuple_counts(int k, int m_max) {
    check_k(k);
    check_m_max(m_max);
    // A(z, m) = sum_{j=1..k} A(z-1, m-j), A(0, 0) = 1
    std::vector<std::vector<double>> a(static_cast<std::size_t>(m_max) + 1,
                                       std::vector<double>(static_cast<std::size_t>(m_max) + 1,
                                                           0.0));
    a[0][0] = 1.0;
    for (int z = 1; z <= m_max; ++z)
        for (int m = z; m <= m_max; ++m) {
            double acc = 0.0;
            for (int j = 1; j <= std::min(k, m); ++j) acc += a[static_cast<std::size_t>(z - 1)]
                                                                [static_cast<std::size_t>(m - j)];
            a[static_cast<std::size_t>(z)][static_cast<std::size_t>(m)] = acc;
        }
    return a;
}

PmfVector pmf_fppk(int k, double lam, double alpha, double t, int m_max,
                   const SeriesControl& ctl) {
    check_k(k);
    check_m_max(m_max);
    if (!(lam > 0.0)) throw std::domain_error("pmf_fppk: lambda must be > 0");
    if (!(alpha > 0.0) || alpha > 1.0)
        throw std::domain_error("pmf_fppk: alpha must be in (0, 1]");
    if (!(t >= 0.0)) throw std::domain_error("pmf_fppk: t must be >= 0");

    if (alpha == 1.0) return pmf_poisson_order_k(k, lam * t, m_max);

    PmfVector out;
    out.m_max = m_max;
    if (t == 0.0) {
        out.probs.assign(static_cast<std::size_t>(m_max) + 1, 0.0);
        out.probs[0] = 1.0;
        out.tail_mass_bound = 0.0;
        return out;
    }

    const double x = k * lam * std::pow(t, alpha);
    if (x <= 50.0) {
        const auto a = tuple_counts(k, m_max);
        const double w = lam * std::pow(t, alpha);
        out.probs.assign(static_cast<std::size_t>(m_max) + 1, 0.0);
        for (int m = 0; m <= m_max; ++m) {
            double acc = 0.0;
            for (int z = (m == 0 ? 0 : 1); z <= m; ++z) {
                const double cnt = a[static_cast<std::size_t>(z)][static_cast<std::size_t>(m)];
                if (cnt == 0.0) continue;
                acc += cnt * std::pow(w, z) *
                       specfun::prabhakar_ml(alpha, alpha * z + 1.0, z + 1.0, -x, ctl);
            }
            out.probs[static_cast<std::size_t>(m)] = std::max(acc, 0.0);
        }
    } else {
        // quadrature against the inverse-subordinator density: the declared
        // validity range of the resummed series ends at k lam t^alpha = 50
        out.probs = fppk_pmf_by_quadrature(k, lam, alpha, t, m_max, ctl);
    }
    out.tail_mass_bound = std::max(0.0, 1.0 - out.total_mass());
    return out;
}

PmfVector pmf_nppk_increment(int k, double mass, int m_max) {
    if (!(mass >= 0.0)) throw std::domain_error("pmf_nppk_increment: mass must be >= 0");
    return pmf_poisson_order_k(k, mass, m_max);
}

PmfVector pmf_polya_aeppli_increment(int k, double rho, double mass, int m_max) {
    if (!(mass >= 0.0))
        throw std::domain_error("pmf_polya_aeppli_increment: mass must be >= 0");
    return pmf_polya_aeppli_order_k(k, rho, mass, m_max);
}

namespace oracle {

double poisson_order_k_by_enumeration(int k, double big_lambda, int m) {
    check_k(k);
    if (m < 0) throw std::domain_error("enumeration: m must be >= 0");
    // DFS over (n_1, ..., n_k) with n_1 + 2 n_2 + ... + k n_k = m
    double total = 0.0;
    std::function<void(int, int, double, double)> rec =
        [&](int part, int remaining, double z_k, double log_fact) {
            if (part > k) {
                if (remaining == 0)
                    total += std::exp(z_k * std::log(big_lambda + 1e-300) - log_fact);
                return;
            }
            for (int n = 0; n * part <= remaining; ++n)
                rec(part + 1, remaining - n * part, z_k + n, log_fact + std::lgamma(n + 1.0));
        };
    if (big_lambda == 0.0) return m == 0 ? 1.0 : 0.0;
    rec(1, m, 0.0, 0.0);
    return std::exp(-big_lambda * k) * total;
}

std::vector<double> compound_poisson_by_convolution(double count_mean,
                                                    std::span<const double> severity,
                                                    int m_max) {
    // P[N = m] = sum_y Poisson(theta)[y] * severity^{*y}[m]; severities are
    // >= 1, so y > m contributes nothing and the sum is exact.
    std::vector<double> out(static_cast<std::size_t>(m_max) + 1, 0.0);
    std::vector<double> conv(static_cast<std::size_t>(m_max) + 1, 0.0);
    conv[0] = 1.0;  // severity^{*0}
    double pois = std::exp(-count_mean);
    out[0] += pois;
    for (int y = 1; y <= m_max; ++y) {
        std::vector<double> next(static_cast<std::size_t>(m_max) + 1, 0.0);
        for (int m = 0; m <= m_max; ++m) {
            if (conv[static_cast<std::size_t>(m)] == 0.0) continue;
            for (int j = 1; j < static_cast<int>(severity.size()) && m + j <= m_max; ++j)
                next[static_cast<std::size_t>(m + j)] +=
                    conv[static_cast<std::size_t>(m)] * severity[static_cast<std::size_t>(j)];
        }
        conv.swap(next);
        pois *= count_mean / y;
        for (int m = 0; m <= m_max; ++m) out[static_cast<std::size_t>(m)] +=
            pois * conv[static_cast<std::size_t>(m)];
    }
    return out;
}

double polya_aeppli_small_m_closed_form(int k, double rho, double big_lambda, int m) {
    check_k(k);
    check_rho(rho);
    if (m < 0 || m > k)
        throw std::domain_error("polya_aeppli_small_m_closed_form: requires 0 <= m <= k");
    if (m == 0) return std::exp(-big_lambda);
    const double q = big_lambda * (1.0 - rho) / (1.0 - std::pow(rho, k));
    double sum = 0.0;
    for (int j = 1; j <= m; ++j) {
        const double log_binom = std::lgamma(m) - std::lgamma(j) - std::lgamma(m - j + 1.0);
        sum += std::exp(log_binom + j * std::log(q) - std::lgamma(j + 1.0) +
                        (m - j) * std::log(rho + 1e-300));
    }
    return std::exp(-big_lambda) * sum;
}

}  // namespace oracle

}  // namespace fcount::distributions
