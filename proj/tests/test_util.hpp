#pragma once

// Shared oracles and statistics helpers for the test suites. Everything
// here is independent of the library's own evaluation paths: quadrature
// oracles use plain Simpson refinement, the chi-square and KS p-values are
// computed from their defining series, and the long-double series oracles
// sum the textbook definitions directly.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <vector>

namespace testutil {

// ---------------------------------------------------------------------------
// adaptive Simpson (independent of the library's Gauss-Kronrod machinery)
// ---------------------------------------------------------------------------
inline double simpson_rec(const std::function<double(double)>& f, double a, double b, double fa,
                          double fm, double fb, double tol, int depth, int force_depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 ||
        (force_depth <= 0 && std::abs(left + right - whole) < 15.0 * tol))
        return left + right + (left + right - whole) / 15.0;
    return simpson_rec(f, a, m, fa, flm, fm, 0.5 * tol, depth - 1, force_depth - 1) +
           simpson_rec(f, m, b, fm, frm, fb, 0.5 * tol, depth - 1, force_depth - 1);
}

// force_depth guards against integrands concentrated away from the initial
// probe points (the Simpson driver would otherwise accept 0 immediately).
inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-10, int force_depth = 6) {
    if (a == b) return 0.0;
    const double m = 0.5 * (a + b);
    return simpson_rec(f, a, b, f(a), f(m), f(b), tol, 40, force_depth);
}

// erfc by quadrature of the Gaussian tail (scaled form is cancellation-free)
inline double erfc_quadrature(double x) {
    // erfc(x) = (2/sqrt(pi)) e^{-x^2} int_0^inf e^{-t^2 - 2xt} dt
    const double tail = integrate([x](double t) { return std::exp(-t * t - 2.0 * x * t); },
                                  0.0, 30.0, 1e-14);
    return 2.0 / std::sqrt(M_PI) * std::exp(-x * x) * tail;
}

// exp(x^2) erfc(x) without underflow (oracle for E_{1/2}(-x))
inline double erfcx_quadrature(double x) {
    const double tail = integrate([x](double t) { return std::exp(-t * t - 2.0 * x * t); },
                                  0.0, 30.0, 1e-14);
    return 2.0 / std::sqrt(M_PI) * tail;
}

// ---------------------------------------------------------------------------
// long-double brute-force series
// ---------------------------------------------------------------------------
inline double prabhakar_series_ld(double alpha, double beta, double gamma, double z,
                                  int n_terms = 400) {
    long double sum = 0.0L;
    long double poch_over_fact = 1.0L;  // (gamma)_n / n!
    long double zn = 1.0L;
    for (int n = 0; n < n_terms; ++n) {
        sum += poch_over_fact * zn /
               std::tgammal(static_cast<long double>(alpha) * n + beta);
        poch_over_fact *= (static_cast<long double>(gamma) + n) / (n + 1.0L);
        zn *= z;
    }
    return static_cast<double>(sum);
}

// ---------------------------------------------------------------------------
// sample statistics
// ---------------------------------------------------------------------------
struct Summary {
    double mean = 0.0;
    double var = 0.0;
    double se_mean = 0.0;
    std::size_t n = 0;
};

template <typename C>
Summary summarize(const C& xs) {
    Summary s;
    s.n = xs.size();
    double acc = 0.0;
    for (double x : xs) acc += x;
    s.mean = acc / s.n;
    double m2 = 0.0;
    for (double x : xs) m2 += (x - s.mean) * (x - s.mean);
    s.var = m2 / (s.n - 1);
    s.se_mean = std::sqrt(s.var / s.n);
    return s;
}

// z-score of a sample mean against a reference value
template <typename C>
double mean_zscore(const C& xs, double reference) {
    const Summary s = summarize(xs);
    return (s.mean - reference) / s.se_mean;
}

// ---------------------------------------------------------------------------
// chi-square goodness of fit
// ---------------------------------------------------------------------------

// regularized upper incomplete gamma Q(a, x) by series / continued fraction
inline double gamma_q(double a, double x) {
    if (x < 0.0 || a <= 0.0) return 1.0;
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) {
        // P(a,x) series, Q = 1 - P
        double term = 1.0 / a, sum = term;
        for (int n = 1; n < 1000; ++n) {
            term *= x / (a + n);
            sum += term;
            if (std::abs(term) < 1e-16 * std::abs(sum)) break;
        }
        const double p = sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
        return 1.0 - p;
    }
    // Lentz continued fraction for Q
    const double tiny = 1e-300;
    double b = x + 1.0 - a, c = 1.0 / tiny, d = 1.0 / b, h = d;
    for (int i = 1; i < 1000; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-15) break;
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

// chi-square p-value of observed counts against expected probabilities;
// bins with expected count < 5 are pooled into the previous bin, and the
// residual tail mass is pooled into a final bin.
inline double chi_square_pvalue(const std::vector<std::int64_t>& observed_counts,
                                const std::vector<double>& probs, std::int64_t n_total) {
    std::vector<double> exp_c;
    std::vector<double> obs_c;
    double tail_p = 1.0;
    std::int64_t seen = 0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        tail_p -= probs[i];
        seen += observed_counts[i];
        const double e = probs[i] * n_total;
        if (!exp_c.empty() && e < 5.0) {
            exp_c.back() += e;
            obs_c.back() += static_cast<double>(observed_counts[i]);
        } else {
            exp_c.push_back(e);
            obs_c.push_back(static_cast<double>(observed_counts[i]));
        }
    }
    tail_p = std::max(tail_p, 0.0);
    const double tail_e = tail_p * n_total;
    const double tail_o = static_cast<double>(n_total - seen);
    if (tail_e > 0.5 || tail_o > 0.0) {
        if (tail_e < 5.0 && !exp_c.empty()) {
            exp_c.back() += tail_e;
            obs_c.back() += tail_o;
        } else {
            exp_c.push_back(tail_e);
            obs_c.push_back(tail_o);
        }
    }
    double stat = 0.0;
    std::size_t dof = 0;
    for (std::size_t i = 0; i < exp_c.size(); ++i) {
        if (exp_c[i] <= 0.0) continue;
        stat += (obs_c[i] - exp_c[i]) * (obs_c[i] - exp_c[i]) / exp_c[i];
        ++dof;
    }
    if (dof <= 1) return 1.0;
    return gamma_q(0.5 * (dof - 1), 0.5 * stat);
}

// histogram of integer samples on 0..m_max
inline std::vector<std::int64_t> histogram(const std::vector<std::int64_t>& xs, int m_max) {
    std::vector<std::int64_t> h(static_cast<std::size_t>(m_max) + 1, 0);
    for (auto x : xs)
        if (x >= 0 && x <= m_max) ++h[static_cast<std::size_t>(x)];
    return h;
}

// ---------------------------------------------------------------------------
// two-sample Kolmogorov-Smirnov (conservative for discrete data)
// ---------------------------------------------------------------------------
inline double ks_pvalue_from_stat(double d, double n_eff) {
    const double lambda = (std::sqrt(n_eff) + 0.12 + 0.11 / std::sqrt(n_eff)) * d;
    double sum = 0.0;
    for (int j = 1; j <= 100; ++j) {
        const double term = 2.0 * ((j & 1) ? 1.0 : -1.0) *
                            std::exp(-2.0 * j * j * lambda * lambda);
        sum += term;
        if (std::abs(term) < 1e-12) break;
    }
    return std::clamp(sum, 0.0, 1.0);
}

template <typename C>
double ks_two_sample_pvalue(C a, C b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const std::size_t n1 = a.size(), n2 = b.size();
    double d = 0.0;
    std::size_t i = 0, j = 0;
    while (i < n1 && j < n2) {
        const double x = std::min<double>(a[i], b[j]);
        while (i < n1 && a[i] <= x) ++i;
        while (j < n2 && b[j] <= x) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / n1 - static_cast<double>(j) / n2));
    }
    const double n_eff = static_cast<double>(n1) * n2 / (n1 + n2);
    return ks_pvalue_from_stat(d, n_eff);
}

}  // namespace testutil
