#include "fcount/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fcount/quadrature.hpp"
#include "fcount/sampling.hpp"
#include "fcount/specfun.hpp"

namespace fcount::analytics {

using processes::Family;

namespace {

void check_alpha_closed(double alpha) {
    if (!(alpha > 0.0) || alpha > 1.0)
        throw std::domain_error("analytics: alpha must be in (0, 1]");
}

struct BaseMoments {
    double mean1 = 0.0;  // E[N(1)] of the un-time-changed process
    double var1 = 0.0;   // Var[N(1)]
};

BaseMoments base_moments(Family family, int k, double rho, double lam) {
    BaseMoments b;
    if (family == Family::fppk || family == Family::ppk) {
        b.mean1 = lam * k * (k + 1) / 2.0;
        b.var1 = lam * k * (k + 1) * (2 * k + 1) / 6.0;
    } else {
        b.mean1 = lam * trunc_geom_mean(k, rho);
        b.var1 = lam * trunc_geom_second_moment(k, rho);
    }
    return b;
}

}  // namespace

double inv_sub_moment(double alpha, double nu, double t) {
    check_alpha_closed(alpha);
    if (!(nu > 0.0)) throw std::domain_error("inv_sub_moment: nu must be > 0");
    if (!(t >= 0.0)) throw std::domain_error("inv_sub_moment: t must be >= 0");
    if (t == 0.0) return 0.0;
    return std::exp(std::lgamma(nu + 1.0) - std::lgamma(alpha * nu + 1.0) +
                    alpha * nu * std::log(t));
}

double inv_sub_variance(double alpha, double t) {
    check_alpha_closed(alpha);
    if (t == 0.0) return 0.0;
    const double g1 = std::tgamma(alpha + 1.0);
    const double g2 = std::tgamma(2.0 * alpha + 1.0);
    return std::pow(t, 2.0 * alpha) * (2.0 / g2 - 1.0 / (g1 * g1));
}

double inv_sub_cov(double alpha, double t, double s) {
    check_alpha_closed(alpha);
    if (!(t >= 0.0) || !(s >= 0.0)) throw std::domain_error("inv_sub_cov: times must be >= 0");
    const double lo = std::min(t, s), hi = std::max(t, s);
    if (lo == 0.0) return 0.0;
    if (alpha == 1.0) return 0.0;  // deterministic clock
    // substitute tau = w^{1/alpha}: integral over w in [0, lo^alpha]
    const double g1a = std::tgamma(1.0 + alpha);
    auto f = [&](double w) {
        const double tau = std::pow(w, 1.0 / alpha);
        return std::pow(hi - tau, alpha) + std::pow(std::max(lo - tau, 0.0), alpha);
    };
    const double integral =
        quadrature::Adaptive(1e-10, 1e-12).integrate(f, 0.0, std::pow(lo, alpha)) / alpha;
    return integral / (g1a * std::tgamma(alpha)) -
           std::pow(s * t, alpha) / (g1a * g1a);
}

double uniform_k_mean(int k) { return (k + 1) / 2.0; }

double uniform_k_second_moment(int k) { return (k + 1.0) * (2.0 * k + 1.0) / 6.0; }

double trunc_geom_mean(int k, double rho) {
    if (rho == 0.0 || k == 1) return 1.0;
    double num = 0.0, r = 1.0;
    for (int j = 0; j < k; ++j) {
        num += r;
        r *= rho;
    }
    // (1 + rho + ... + rho^{k-1} - k rho^k) / (1 - rho^k)
    return (num - k * r) / (1.0 - r);
}

double trunc_geom_second_moment(int k, double rho) {
    if (rho == 0.0 || k == 1) return 1.0;
    double acc = 0.0, r = 1.0;
    for (int m = 1; m <= k; ++m) {
        acc += m * static_cast<double>(m) * r;
        r *= rho;
    }
    return (1.0 - rho) / (1.0 - std::pow(rho, k)) * acc;
}

MomentReport moments_ppk(int k, double lam, double t, std::optional<double> s) {
    if (k < 1) throw std::domain_error("moments_ppk: k must be >= 1");
    if (!(lam >= 0.0) || !(t >= 0.0)) throw std::domain_error("moments_ppk: bad arguments");
    MomentReport r;
    r.mean = k * (k + 1) / 2.0 * lam * t;
    r.variance = k * (k + 1) * (2 * k + 1) / 6.0 * lam * t;
    if (s) r.covariance = k * (k + 1) * (2 * k + 1) / 6.0 * lam * std::min(t, *s);
    return r;
}

MomentReport moments_fppk(int k, double lam, double alpha, double t, std::optional<double> s) {
    if (k < 1) throw std::domain_error("moments_fppk: k must be >= 1");
    check_alpha_closed(alpha);
    if (alpha == 1.0) return moments_ppk(k, lam, t, s);
    const BaseMoments b = base_moments(Family::fppk, k, 0.0, lam);
    MomentReport r;
    const double ey = t == 0.0 ? 0.0 : inv_sub_moment(alpha, 1.0, t);
    r.mean = b.mean1 * ey;
    r.variance = b.var1 * ey + b.mean1 * b.mean1 * inv_sub_variance(alpha, t);
    if (s) {
        const double mn = std::min(t, *s);
        const double eymin = mn == 0.0 ? 0.0 : inv_sub_moment(alpha, 1.0, mn);
        r.covariance = b.var1 * eymin + b.mean1 * b.mean1 * inv_sub_cov(alpha, t, *s);
    }
    return r;
}

MomentReport moments_pak(int k, double rho, double lam, double t, std::optional<double> s) {
    if (k < 1) throw std::domain_error("moments_pak: k must be >= 1");
    if (!(rho >= 0.0) || rho >= 1.0) throw std::domain_error("moments_pak: rho in [0,1)");
    MomentReport r;
    r.mean = lam * t * trunc_geom_mean(k, rho);
    r.variance = lam * t * trunc_geom_second_moment(k, rho);
    if (s) r.covariance = lam * std::min(t, *s) * trunc_geom_second_moment(k, rho);
    return r;
}

MomentReport moments_fpak(int k, double rho, double lam, double alpha, double t,
                          std::optional<double> s) {
    if (k < 1) throw std::domain_error("moments_fpak: k must be >= 1");
    check_alpha_closed(alpha);
    if (alpha == 1.0) return moments_pak(k, rho, lam, t, s);
    const BaseMoments b = base_moments(Family::fpak, k, rho, lam);
    MomentReport r;
    const double ey = t == 0.0 ? 0.0 : inv_sub_moment(alpha, 1.0, t);
    r.mean = b.mean1 * ey;
    r.variance = b.var1 * ey + b.mean1 * b.mean1 * inv_sub_variance(alpha, t);
    if (s) {
        const double mn = std::min(t, *s);
        const double eymin = mn == 0.0 ? 0.0 : inv_sub_moment(alpha, 1.0, mn);
        r.covariance = b.var1 * eymin + b.mean1 * b.mean1 * inv_sub_cov(alpha, t, *s);
    }
    return r;
}

MomentReport moments_nppk(int k, const rates::RateFunction& rate, double t,
                          std::optional<double> s) {
    if (k < 1) throw std::domain_error("moments_nppk: k must be >= 1");
    MomentReport r;
    const double mass = rate.cum_mass(t);
    r.mean = k * (k + 1) / 2.0 * mass;
    r.variance = k * (k + 1) * (2 * k + 1) / 6.0 * mass;
    if (s) r.covariance = k * (k + 1) * (2 * k + 1) / 6.0 * rate.cum_mass(std::min(t, *s));
    return r;
}

MomentReport moments_npak(int k, double rho, const rates::RateFunction& rate, double t,
                          std::optional<double> s) {
    if (k < 1) throw std::domain_error("moments_npak: k must be >= 1");
    MomentReport r;
    const double mass = rate.cum_mass(t);
    r.mean = mass * trunc_geom_mean(k, rho);
    r.variance = mass * trunc_geom_second_moment(k, rho);
    if (s) r.covariance = rate.cum_mass(std::min(t, *s)) * trunc_geom_second_moment(k, rho);
    return r;
}

double expected_rate_mass_power(const rates::RateFunction& rate, double alpha, double t,
                                int power, double v) {
    check_alpha_closed(alpha);
    if (power < 1 || power > 2)
        throw std::domain_error("expected_rate_mass_power: power must be 1 or 2");
    if (t == 0.0) return 0.0;
    if (alpha == 1.0) return std::pow(rate.cum_mass(v, t + v), power);
    const double hi = specfun::inv_subordinator_tail_cutoff(alpha, t, 1e-13);
    auto f = [&](double u) {
        const double h = u == 0.0 ? specfun::inv_subordinator_density_at_zero(alpha, t)
                                  : specfun::inv_subordinator_density(alpha, t, u);
        return std::pow(rate.cum_mass(v, u + v), power) * h;
    };
    return quadrature::Adaptive(1e-10, 1e-10).integrate(f, 0.0, hi);
}

namespace {

// Monte Carlo cross moment E[Lambda(Y_t + v, ...) Lambda(Y_s + v, ...)] on
// joint subordinator paths; returns (estimate, standard error).
std::pair<double, double> mc_cross_mass(const rates::RateFunction& rate, double alpha, double t,
                                        double s, double v, const FnppkOptions& opts) {
    sampling::RngStream rng(opts.mc_seed, 0);
    const double t_hi = std::max(t, s);
    const double grid[2] = {std::min(t, s), t_hi};
    const double op_est = std::pow(t_hi, alpha) / std::tgamma(1.0 + alpha);
    const double step = std::max(opts.step_scale * op_est, 1e-300);
    double acc = 0.0, acc2 = 0.0;
    for (int p = 0; p < opts.mc_paths; ++p) {
        const auto y = sampling::sample_inverse_subordinator_path(rng, alpha, grid, step);
        const double a = rate.cum_mass(v, y[0] + v);
        const double b = rate.cum_mass(v, y[1] + v);
        acc += a * b;
        acc2 += a * b * a * b;
    }
    const double n = opts.mc_paths;
    const double mean = acc / n;
    const double var = std::max(acc2 / n - mean * mean, 0.0);
    return {mean, std::sqrt(var / n)};
}

MomentReport moments_time_changed_nonhom(double sev_mean, double sev_m2, int k_scale,
                                         const rates::RateFunction& rate, double alpha,
                                         double t, std::optional<double> s,
                                         const FnppkOptions& opts) {
    // Count process is N1(k Lambda(Y_t)) (k_scale = k) or N1(Lambda(Y_t))
    // (k_scale = 1, Polya-Aeppli), with severities riding on each epoch.
    MomentReport r;
    const double el = k_scale * expected_rate_mass_power(rate, alpha, t, 1);
    const double el2 = k_scale * k_scale * expected_rate_mass_power(rate, alpha, t, 2);
    const double var_count = el + std::max(el2 - el * el, 0.0);
    r.mean = sev_mean * el;
    r.variance = (sev_m2 - sev_mean * sev_mean) * el + var_count * sev_mean * sev_mean;
    if (s) {
        // Cov[N(t), N(s)] = E[X]^2 Cov[C_t, C_s] + Var[X] E[C_min] for
        // compound processes with common epochs up to the earlier time;
        // Cov[C_t, C_s] = E[min mass] + Cov[M_t, M_s] with M = k Lambda(Y).
        const double mn = std::min(t, *s);
        const double el_min = k_scale * expected_rate_mass_power(rate, alpha, mn, 1);
        const double el_t = el;
        const double el_s = k_scale * expected_rate_mass_power(rate, alpha, *s, 1);
        double cross, se;
        if (alpha == 1.0) {
            cross = k_scale * k_scale * rate.cum_mass(t) * rate.cum_mass(*s);
            se = 0.0;
        } else {
            auto [cm, cse] = mc_cross_mass(rate, alpha, t, *s, 0.0, opts);
            cross = k_scale * k_scale * cm;
            se = k_scale * k_scale * cse;
        }
        const double cov_mass = cross - el_t * el_s;
        const double cov_count = el_min + cov_mass;
        r.covariance = (sev_m2 - sev_mean * sev_mean) * el_min +
                       sev_mean * sev_mean * cov_count;
        r.se_covariance = sev_mean * sev_mean * se;
    }
    return r;
}

}  // namespace

MomentReport moments_fnppk(int k, const rates::RateFunction& rate, double alpha, double t,
                           std::optional<double> s, const FnppkOptions& opts) {
    if (k < 1) throw std::domain_error("moments_fnppk: k must be >= 1");
    check_alpha_closed(alpha);
    return moments_time_changed_nonhom(uniform_k_mean(k), uniform_k_second_moment(k), k, rate,
                                       alpha, t, s, opts);
}

MomentReport moments_nfpak(int k, double rho, const rates::RateFunction& rate, double alpha,
                           double t, std::optional<double> s, const FnppkOptions& opts) {
    if (k < 1) throw std::domain_error("moments_nfpak: k must be >= 1");
    check_alpha_closed(alpha);
    return moments_time_changed_nonhom(trunc_geom_mean(k, rho),
                                       trunc_geom_second_moment(k, rho), 1, rate, alpha, t, s,
                                       opts);
}

MomentReport moments_for_spec(const processes::ProcessSpec& spec, double t,
                              std::optional<double> s) {
    spec.validate();
    switch (spec.family) {
        case Family::ppk:
            return moments_ppk(spec.k, *spec.lam, t, s);
        case Family::pak:
            return moments_pak(spec.k, *spec.rho, *spec.lam, t, s);
        case Family::fppk:
            return moments_fppk(spec.k, *spec.lam, *spec.alpha, t, s);
        case Family::fpak:
            return moments_fpak(spec.k, *spec.rho, *spec.lam, *spec.alpha, t, s);
        case Family::nppk:
            return moments_nppk(spec.k, *spec.rate, t, s);
        case Family::npak:
            return moments_npak(spec.k, *spec.rho, *spec.rate, t, s);
        case Family::fnppk:
            return moments_fnppk(spec.k, *spec.rate, *spec.alpha, t, s);
        case Family::nfpak:
            return moments_nfpak(spec.k, *spec.rho, *spec.rate, *spec.alpha, t, s);
    }
    throw std::logic_error("moments_for_spec: unknown family");
}

double exact_correlation(Family family, int k, double rho, double lam, double alpha, double s,
                         double t) {
    MomentReport at_t, at_s;
    if (family == Family::fppk) {
        at_t = moments_fppk(k, lam, alpha, t, s);
        at_s = moments_fppk(k, lam, alpha, s);
    } else if (family == Family::fpak) {
        at_t = moments_fpak(k, rho, lam, alpha, t, s);
        at_s = moments_fpak(k, rho, lam, alpha, s);
    } else {
        throw std::domain_error("exact_correlation: family must be fppk or fpak");
    }
    return *at_t.covariance / std::sqrt(at_t.variance * at_s.variance);
}

GridFunction correlation_curve(Family family, int k, double rho, double lam, double alpha,
                               double s, double t_lo, double t_hi, int n_points) {
    if (!(t_lo > 0.0) || !(t_hi > t_lo) || n_points < 2)
        throw std::domain_error("correlation_curve: bad range");
    GridFunction out;
    out.grid.resize(static_cast<std::size_t>(n_points));
    out.values.resize(static_cast<std::size_t>(n_points));
    const double lr = std::log(t_hi / t_lo) / (n_points - 1);
    for (int i = 0; i < n_points; ++i) {
        const double t = t_lo * std::exp(lr * i);
        out.grid[static_cast<std::size_t>(i)] = t;
        out.values[static_cast<std::size_t>(i)] =
            exact_correlation(family, k, rho, lam, alpha, s, t);
    }
    return out;
}

double lrd_constant(Family family, int k, double rho, double lam, double alpha, double s) {
    if (family != Family::fppk && family != Family::fpak)
        throw std::domain_error("lrd_constant: family must be fppk or fpak");
    check_alpha_closed(alpha);
    if (alpha == 1.0) throw std::domain_error("lrd_constant: requires alpha < 1");
    const BaseMoments b = base_moments(family, k, rho, lam);
    const double g1a = std::tgamma(1.0 + alpha);
    const double g2a1 = std::tgamma(2.0 * alpha + 1.0);
    const double v = 2.0 / g2a1 - 1.0 / (g1a * g1a);  // Var[Y_alpha(1)] factor
    // limit of Cov[N(s), N(t)] as t -> infinity
    const double cov_inf =
        b.var1 * std::pow(s, alpha) / g1a + b.mean1 * b.mean1 * std::pow(s, 2.0 * alpha) / g2a1;
    const double var_s =
        b.var1 * std::pow(s, alpha) / g1a + b.mean1 * b.mean1 * v * std::pow(s, 2.0 * alpha);
    return cov_inf / (b.mean1 * std::sqrt(v) * std::sqrt(var_s));
}

LrdReport lrd_fit(const GridFunction& corr_curve, double fit_lo, double fit_hi,
                  double theoretical_constant) {
    corr_curve.validate();
    if (!(fit_lo < fit_hi)) throw std::domain_error("lrd_fit: empty fit range");
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    int n = 0;
    for (std::size_t i = 0; i < corr_curve.size(); ++i) {
        const double t = corr_curve.grid[i], c = corr_curve.values[i];
        if (t < fit_lo || t > fit_hi || !(c > 0.0)) continue;
        const double x = std::log(t), y = std::log(c);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
    }
    if (n < 2) throw std::domain_error("lrd_fit: fewer than 2 usable points in range");
    const double det = n * sxx - sx * sx;
    const double slope = (n * sxy - sx * sy) / det;
    const double intercept = (sy * sxx - sx * sxy) / det;
    double rss = 0.0;
    for (std::size_t i = 0; i < corr_curve.size(); ++i) {
        const double t = corr_curve.grid[i], c = corr_curve.values[i];
        if (t < fit_lo || t > fit_hi || !(c > 0.0)) continue;
        const double r = std::log(c) - (intercept + slope * std::log(t));
        rss += r * r;
    }
    LrdReport rep;
    rep.fitted_exponent = slope;
    rep.fitted_constant = std::exp(intercept);
    rep.theoretical_constant = theoretical_constant;
    rep.fit_lo = fit_lo;
    rep.fit_hi = fit_hi;
    rep.residual = std::sqrt(rss / n);
    return rep;
}

MomentReport empirical_moments(const processes::Ensemble& e, int t_index,
                               std::optional<int> s_index) {
    const int n = e.n_paths;
    if (n < 2) throw std::domain_error("empirical_moments: need at least 2 paths");
    if (t_index < 0 || static_cast<std::size_t>(t_index) >= e.grid.size())
        throw std::domain_error("empirical_moments: t_index out of range");
    const double dn = n;
    double mean = 0.0;
    for (int p = 0; p < n; ++p) mean += static_cast<double>(e.at(p, t_index));
    mean /= dn;
    double m2 = 0.0, m4 = 0.0;
    for (int p = 0; p < n; ++p) {
        const double d = static_cast<double>(e.at(p, t_index)) - mean;
        m2 += d * d;
        m4 += d * d * d * d;
    }
    const double var = m2 / (dn - 1.0);
    m2 /= dn;
    m4 /= dn;
    MomentReport r;
    r.mean = mean;
    r.variance = var;
    r.se_mean = std::sqrt(var / dn);
    // SE of the sample variance from the fourth central moment
    r.se_variance = std::sqrt(std::max(m4 - (dn - 3.0) / (dn - 1.0) * m2 * m2, 0.0) / dn);
    if (s_index) {
        if (*s_index < 0 || static_cast<std::size_t>(*s_index) >= e.grid.size())
            throw std::domain_error("empirical_moments: s_index out of range");
        double mean_s = 0.0;
        for (int p = 0; p < n; ++p) mean_s += static_cast<double>(e.at(p, *s_index));
        mean_s /= dn;
        double c = 0.0, c22 = 0.0;
        for (int p = 0; p < n; ++p) {
            const double a = static_cast<double>(e.at(p, t_index)) - mean;
            const double b = static_cast<double>(e.at(p, *s_index)) - mean_s;
            c += a * b;
            c22 += a * a * b * b;
        }
        const double cov = c / (dn - 1.0);
        c /= dn;
        c22 /= dn;
        r.covariance = cov;
        r.se_covariance = std::sqrt(std::max(c22 - c * c, 0.0) / dn);
    }
    return r;
}

}  // namespace fcount::analytics
