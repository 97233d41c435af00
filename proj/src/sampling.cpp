#include "fcount/sampling.hpp"

#include <cmath>
#include <stdexcept>

#include "fcount/common.hpp"

namespace fcount::sampling {

int sample_uniform_k(RngStream& rng, int k) {
    if (k < 1) throw std::domain_error("sample_uniform_k: k must be >= 1");
    if (k == 1) return 1;
    return 1 + static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(k)));
}

int sample_trunc_geom(RngStream& rng, double rho, int k) {
    if (k < 1) throw std::domain_error("sample_trunc_geom: k must be >= 1");
    if (!(rho >= 0.0) || rho >= 1.0)
        throw std::domain_error("sample_trunc_geom: rho must be in [0, 1)");
    if (k == 1 || rho == 0.0) return 1;
    // inverse cdf: F(m) = (1 - rho^m)/(1 - rho^k)
    const double u = rng.uniform01();
    const double target = 1.0 - u * (1.0 - std::pow(rho, k));
    int m = static_cast<int>(std::ceil(std::log(target) / std::log(rho)));
    if (m < 1) m = 1;
    if (m > k) m = k;
    return m;
}

double sample_mittag_leffler(RngStream& rng, double alpha, double scale) {
    if (!(alpha > 0.0) || alpha > 1.0)
        throw std::domain_error("sample_mittag_leffler: alpha must be in (0, 1]");
    if (!(scale > 0.0)) throw std::domain_error("sample_mittag_leffler: scale must be > 0");
    const double u = rng.uniform_open();
    if (alpha == 1.0) return -scale * std::log(u);
    const double v = rng.uniform_open();
    const double api = alpha * kPi;
    const double bracket = std::sin(api) / std::tan(api * v) - std::cos(api);
    return -scale * std::log(u) * std::pow(bracket, 1.0 / alpha);
}

double sample_pos_stable(RngStream& rng, double alpha) {
    if (!(alpha > 0.0) || !(alpha < 1.0))
        throw std::domain_error("sample_pos_stable: alpha must be in (0, 1)");
    // Kanter: X = (a(theta)/W)^{(1-alpha)/alpha}, theta ~ U(0, pi), W ~ Exp(1),
    // a(theta) = [sin(a th)^a sin((1-a) th)^{1-a} / sin th]^{1/(1-a)}.
    const double theta = kPi * rng.uniform_open();
    const double w = rng.exponential(1.0);
    const double log_a = (alpha * std::log(std::sin(alpha * theta)) +
                          (1.0 - alpha) * std::log(std::sin((1.0 - alpha) * theta)) -
                          std::log(std::sin(theta))) /
                         (1.0 - alpha);
    return std::exp((1.0 - alpha) / alpha * (log_a - std::log(w)));
}

double sample_inverse_subordinator_at(RngStream& rng, double alpha, double t) {
    if (!(alpha > 0.0) || !(alpha < 1.0))
        throw std::domain_error("sample_inverse_subordinator_at: alpha must be in (0, 1)");
    if (t < 0.0) throw std::domain_error("sample_inverse_subordinator_at: t must be >= 0");
    if (t == 0.0) return 0.0;
    const double s = sample_pos_stable(rng, alpha);
    return std::exp(alpha * (std::log(t) - std::log(s)));
}

std::vector<double> sample_inverse_subordinator_path(RngStream& rng, double alpha,
                                                     std::span<const double> grid,
                                                     double step) {
    if (!(alpha > 0.0) || !(alpha < 1.0))
        throw std::domain_error("sample_inverse_subordinator_path: alpha must be in (0, 1)");
    if (grid.empty()) throw std::domain_error("sample_inverse_subordinator_path: empty grid");
    if (!(step > 0.0)) throw std::domain_error("sample_inverse_subordinator_path: step must be > 0");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (grid[i] < 0.0 || (i > 0 && grid[i] < grid[i - 1]))
            throw std::domain_error("sample_inverse_subordinator_path: grid must be nondecreasing");
    }

    std::vector<double> out(grid.size());
    const double incr_scale = std::pow(step, 1.0 / alpha);
    double level = 0.0;  // L at the current lattice point
    std::uint64_t idx = 0;
    for (std::size_t j = 0; j < grid.size(); ++j) {
        const double t = grid[j];
        if (t == 0.0) {
            out[j] = 0.0;
            continue;
        }
        while (level <= t) {
            level += incr_scale * sample_pos_stable(rng, alpha);
            ++idx;
        }
        out[j] = static_cast<double>(idx) * step;
    }
    return out;
}

}  // namespace fcount::sampling
