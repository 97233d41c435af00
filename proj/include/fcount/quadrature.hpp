#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

namespace fcount::quadrature {

// Gauss-Kronrod 7-15 pair (QUADPACK constants). Kronrod nodes are interior,
// so integrands may be singular at the interval endpoints.
inline constexpr std::array<double, 8> kGk15Nodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

inline constexpr std::array<double, 8> kGk15WeightsK = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

inline constexpr std::array<double, 4> kGk15WeightsG = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

/// Adaptive Gauss-Kronrod integration of a scalar function on [a, b].
/// Subdivides until the per-panel error estimate meets the proportional
/// share of abs_tol (plus rel_tol relative to the running integral).
class Adaptive {
public:
    explicit Adaptive(double abs_tol = 1e-10, double rel_tol = 1e-10, int max_depth = 28,
                      int min_depth = 4)
        : abs_tol_(abs_tol), rel_tol_(rel_tol), max_depth_(max_depth), min_depth_(min_depth) {}

    template <typename F>
    double integrate(const F& f, double a, double b) const {
        if (!(a <= b)) throw std::invalid_argument("quadrature: bad interval");
        if (a == b) return 0.0;
        double bad = 0.0;
        double v = recurse(f, a, b, abs_tol_, 0, bad);
        if (bad > 0.0)
            throw std::runtime_error("quadrature: failed to converge (residual error " +
                                     std::to_string(bad) + ")");
        return v;
    }

private:
    template <typename F>
    static void eval_panel(const F& f, double a, double b, double& k, double& g) {
        const double c = 0.5 * (a + b);
        const double h = 0.5 * (b - a);
        k = 0.0;
        g = 0.0;
        for (int i = 0; i < 7; ++i) {
            const double dx = kGk15Nodes[i] * h;
            const double fv = f(c - dx) + f(c + dx);
            k += kGk15WeightsK[i] * fv;
            if (i % 2 == 1) g += kGk15WeightsG[i / 2] * fv;
        }
        const double fc = f(c);
        k += kGk15WeightsK[7] * fc;
        g += kGk15WeightsG[3] * fc;
        k *= h;
        g *= h;
    }

    template <typename F>
    double recurse(const F& f, double a, double b, double tol, int depth, double& bad) const {
        double k, g;
        eval_panel(f, a, b, k, g);
        const double err = std::abs(k - g);
        if (depth >= min_depth_ &&
            (err <= tol || err <= rel_tol_ * std::abs(k) || depth >= max_depth_)) {
            if (depth >= max_depth_ && err > tol && err > rel_tol_ * std::abs(k)) bad += err;
            return k;
        }
        if (depth >= max_depth_) {
            bad += err;
            return k;
        }
        const double c = 0.5 * (a + b);
        return recurse(f, a, c, 0.5 * tol, depth + 1, bad) +
               recurse(f, c, b, 0.5 * tol, depth + 1, bad);
    }

    double abs_tol_;
    double rel_tol_;
    int max_depth_;
    int min_depth_;
};

/// Adaptive integration of a vector-valued integrand f(x, out). All
/// components share panels; the error criterion is the max over components.
class AdaptiveVec {
public:
    explicit AdaptiveVec(double abs_tol = 1e-10, int max_depth = 24, int min_depth = 4)
        : abs_tol_(abs_tol), max_depth_(max_depth), min_depth_(min_depth) {}

    using Fn = std::function<void(double, std::vector<double>&)>;

    std::vector<double> integrate(const Fn& f, std::size_t dim, double a, double b) const {
        if (!(a <= b)) throw std::invalid_argument("quadrature: bad interval");
        std::vector<double> out(dim, 0.0);
        if (a == b) return out;
        double bad = 0.0;
        recurse(f, dim, a, b, abs_tol_, 0, out, bad);
        if (bad > 0.0)
            throw std::runtime_error("quadrature: vector integrand failed to converge");
        return out;
    }

private:
    void recurse(const Fn& f, std::size_t dim, double a, double b, double tol, int depth,
                 std::vector<double>& acc, double& bad) const {
        const double c = 0.5 * (a + b);
        const double h = 0.5 * (b - a);
        std::vector<double> k(dim, 0.0), g(dim, 0.0), fv(dim), fw(dim);
        for (int i = 0; i < 7; ++i) {
            const double dx = kGk15Nodes[i] * h;
            f(c - dx, fv);
            f(c + dx, fw);
            for (std::size_t d = 0; d < dim; ++d) {
                const double s = fv[d] + fw[d];
                k[d] += kGk15WeightsK[i] * s;
                if (i % 2 == 1) g[d] += kGk15WeightsG[i / 2] * s;
            }
        }
        f(c, fv);
        double err = 0.0, mag = 0.0;
        for (std::size_t d = 0; d < dim; ++d) {
            k[d] = (k[d] + kGk15WeightsK[7] * fv[d]) * h;
            g[d] = (g[d] + kGk15WeightsG[3] * fv[d]) * h;
            err = std::max(err, std::abs(k[d] - g[d]));
            mag = std::max(mag, std::abs(k[d]));
        }
        if (depth >= min_depth_ && (err <= tol || err <= 1e-14 * mag || depth >= max_depth_)) {
            if (depth >= max_depth_ && err > tol && err > 1e-12 * std::max(1.0, mag)) bad += err;
            for (std::size_t d = 0; d < dim; ++d) acc[d] += k[d];
            return;
        }
        if (depth >= max_depth_) {
            bad += err;
            for (std::size_t d = 0; d < dim; ++d) acc[d] += k[d];
            return;
        }
        recurse(f, dim, a, c, 0.5 * tol, depth + 1, acc, bad);
        recurse(f, dim, c, b, 0.5 * tol, depth + 1, acc, bad);
    }

    double abs_tol_;
    int max_depth_;
    int min_depth_;
};

}  // namespace fcount::quadrature
