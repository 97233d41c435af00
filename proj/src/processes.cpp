#include "fcount/processes.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <stdexcept>
#include <thread>

#include "fcount/sampling.hpp"

namespace fcount::processes {

using sampling::RngStream;

namespace {

void check_horizon(double horizon) {
    if (!(horizon > 0.0)) throw std::domain_error("simulate: horizon must be > 0");
}

void check_grid(std::span<const double> grid) {
    if (grid.empty()) throw std::domain_error("simulate: grid must be nonempty");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (grid[i] < 0.0 || (i > 0 && grid[i] < grid[i - 1]))
            throw std::domain_error("simulate: grid must be nondecreasing and nonnegative");
    }
}

void check_alpha_closed(double alpha) {
    if (!(alpha > 0.0) || alpha > 1.0)
        throw std::domain_error("simulate: alpha must be in (0, 1]");
}

// Inverse-subordinator values at the grid points; alpha = 1 is the identity
// clock (classical limit).
std::vector<double> subordinator_clock(RngStream& rng, double alpha,
                                       std::span<const double> grid, double step_scale) {
    if (alpha == 1.0) return std::vector<double>(grid.begin(), grid.end());
    const double t_end = grid.back();
    if (t_end == 0.0) return std::vector<double>(grid.size(), 0.0);
    const double op_est = std::pow(t_end, alpha) / std::tgamma(1.0 + alpha);
    const double step = std::max(step_scale * op_est, 1e-300);
    return sampling::sample_inverse_subordinator_path(rng, alpha, grid, step);
}

// Homogeneous compound Poisson skeleton: epoch rate `epoch_rate`, jump
// drawn by `draw_jump`.
template <typename DrawJump>
SamplePath compound_poisson_path(RngStream& rng, double epoch_rate, double horizon,
                                 DrawJump&& draw_jump) {
    SamplePath path;
    path.horizon = horizon;
    if (epoch_rate == 0.0) return path;
    double t = rng.exponential(1.0 / epoch_rate);
    while (t <= horizon) {
        path.event_times.push_back(t);
        path.jump_sizes.push_back(draw_jump());
        t += rng.exponential(1.0 / epoch_rate);
    }
    return path;
}

// Non-homogeneous epochs with cumulative epoch mass M(t): exact time
// transform of a unit-rate Poisson process when M is strictly increasing,
// otherwise thinning against the sup of the epoch rate.
template <typename DrawJump>
SamplePath nonhomogeneous_path(RngStream& rng, const rates::RateFunction& rate,
                               double mass_scale, double horizon, DrawJump&& draw_jump) {
    SamplePath path;
    path.horizon = horizon;
    const double total = mass_scale * rate.cum_mass(horizon);
    if (total == 0.0) return path;
    if (rate.strictly_increasing(horizon)) {
        double tau = rng.exponential(1.0);
        while (tau <= total) {
            const double t = rate.invert_cum_mass(tau / mass_scale);
            if (t > horizon) break;
            path.event_times.push_back(t);
            path.jump_sizes.push_back(draw_jump());
            tau += rng.exponential(1.0);
        }
    } else {
        const double bound = mass_scale * rate.sup_rate(horizon);
        if (!(bound > 0.0) || !std::isfinite(bound))
            throw std::runtime_error("simulate: unusable thinning bound for this rate");
        double t = rng.exponential(1.0 / bound);
        while (t <= horizon) {
            if (rng.uniform01() * bound <= mass_scale * rate.rate_at(t)) {
                path.event_times.push_back(t);
                path.jump_sizes.push_back(draw_jump());
            }
            t += rng.exponential(1.0 / bound);
        }
    }
    return path;
}

// Counts of a unit-rate compound Poisson process read at nondecreasing
// operational-time thresholds (shared by the time-changed families).
std::vector<std::int64_t> unit_compound_counts_at(RngStream& rng,
                                                  std::span<const double> thresholds,
                                                  const std::function<int()>& draw_jump) {
    std::vector<std::int64_t> out(thresholds.size(), 0);
    double tau = rng.exponential(1.0);
    std::int64_t count = 0;
    for (std::size_t i = 0; i < thresholds.size(); ++i) {
        while (tau <= thresholds[i]) {
            count += draw_jump();
            tau += rng.exponential(1.0);
        }
        out[i] = count;
    }
    return out;
}

int env_thread_cap() {
    if (const char* s = std::getenv("FCOUNT_THREADS")) {
        const long v = std::strtol(s, nullptr, 10);
        if (v >= 1) return static_cast<int>(v);
    }
    return 0;
}

}  // namespace

Family family_from_string(const std::string& s) {
    if (s == "ppk") return Family::ppk;
    if (s == "nppk") return Family::nppk;
    if (s == "fppk") return Family::fppk;
    if (s == "fnppk") return Family::fnppk;
    if (s == "pak") return Family::pak;
    if (s == "npak") return Family::npak;
    if (s == "fpak") return Family::fpak;
    if (s == "nfpak") return Family::nfpak;
    throw std::invalid_argument("unknown family: " + s);
}

std::string family_to_string(Family f) {
    switch (f) {
        case Family::ppk: return "ppk";
        case Family::nppk: return "nppk";
        case Family::fppk: return "fppk";
        case Family::fnppk: return "fnppk";
        case Family::pak: return "pak";
        case Family::npak: return "npak";
        case Family::fpak: return "fpak";
        case Family::nfpak: return "nfpak";
    }
    return "?";
}

bool family_is_fractional(Family f) {
    return f == Family::fppk || f == Family::fnppk || f == Family::fpak || f == Family::nfpak;
}

bool family_has_rho(Family f) {
    return f == Family::pak || f == Family::npak || f == Family::fpak || f == Family::nfpak;
}

bool family_has_rate(Family f) {
    return f == Family::nppk || f == Family::fnppk || f == Family::npak || f == Family::nfpak;
}

void ProcessSpec::validate() const {
    if (k < 1) throw std::invalid_argument("ProcessSpec: k must be >= 1");
    if (family_has_rho(family)) {
        if (!rho) throw std::invalid_argument("ProcessSpec: family requires rho");
        if (!(*rho >= 0.0) || *rho >= 1.0)
            throw std::invalid_argument("ProcessSpec: rho must be in [0, 1)");
    } else if (rho) {
        throw std::invalid_argument("ProcessSpec: rho not accepted by this family");
    }
    if (family_is_fractional(family)) {
        if (!alpha) throw std::invalid_argument("ProcessSpec: family requires alpha");
        if (!(*alpha > 0.0) || *alpha > 1.0)
            throw std::invalid_argument("ProcessSpec: alpha must be in (0, 1]");
    } else if (alpha) {
        throw std::invalid_argument("ProcessSpec: alpha not accepted by this family");
    }
    if (family_has_rate(family)) {
        if (!rate) throw std::invalid_argument("ProcessSpec: family requires a rate function");
        if (lam) throw std::invalid_argument("ProcessSpec: family takes a rate, not lambda");
    } else {
        if (!lam) throw std::invalid_argument("ProcessSpec: family requires lambda");
        if (!(*lam > 0.0)) throw std::invalid_argument("ProcessSpec: lambda must be > 0");
        if (rate) throw std::invalid_argument("ProcessSpec: family takes lambda, not a rate");
    }
}

std::string ProcessSpec::describe() const {
    std::string s = "family=" + family_to_string(family) + ",k=" + std::to_string(k);
    if (rho) s += ",rho=" + std::to_string(*rho);
    if (alpha) s += ",alpha=" + std::to_string(*alpha);
    if (lam) s += ",lambda=" + std::to_string(*lam);
    if (rate) s += ",rate=" + rate->describe();
    return s;
}

std::int64_t SamplePath::count_at(double t) const {
    std::int64_t c = 0;
    for (std::size_t i = 0; i < event_times.size() && event_times[i] <= t; ++i)
        c += jump_sizes[i];
    return c;
}

void SamplePath::check_invariants(int k) const {
    if (event_times.size() != jump_sizes.size())
        throw std::runtime_error("SamplePath: length mismatch");
    for (std::size_t i = 0; i < event_times.size(); ++i) {
        if (event_times[i] > horizon) throw std::runtime_error("SamplePath: event past horizon");
        if (i > 0 && !(event_times[i] > event_times[i - 1]))
            throw std::runtime_error("SamplePath: event times not strictly increasing");
        if (jump_sizes[i] < 1 || jump_sizes[i] > k)
            throw std::runtime_error("SamplePath: jump size outside [1, k]");
    }
}

CountGrid to_count_grid(const SamplePath& path, std::span<const double> grid) {
    check_grid(grid);
    CountGrid out;
    out.grid.assign(grid.begin(), grid.end());
    out.counts.resize(grid.size());
    std::size_t i = 0;
    std::int64_t c = 0;
    for (std::size_t j = 0; j < grid.size(); ++j) {
        while (i < path.event_times.size() && path.event_times[i] <= grid[j]) {
            c += path.jump_sizes[i];
            ++i;
        }
        out.counts[j] = c;
    }
    return out;
}

SamplePath simulate_ppk(RngStream& rng, int k, double lam, double horizon) {
    if (k < 1) throw std::domain_error("simulate_ppk: k must be >= 1");
    if (!(lam > 0.0)) throw std::domain_error("simulate_ppk: lambda must be > 0");
    check_horizon(horizon);
    return compound_poisson_path(rng, k * lam, horizon,
                                 [&] { return sampling::sample_uniform_k(rng, k); });
}

SamplePath simulate_pak(RngStream& rng, int k, double rho, double lam, double horizon) {
    if (k < 1) throw std::domain_error("simulate_pak: k must be >= 1");
    if (!(lam > 0.0)) throw std::domain_error("simulate_pak: lambda must be > 0");
    check_horizon(horizon);
    return compound_poisson_path(rng, lam, horizon,
                                 [&] { return sampling::sample_trunc_geom(rng, rho, k); });
}

SamplePath simulate_nppk(RngStream& rng, int k, const rates::RateFunction& rate,
                         double horizon) {
    if (k < 1) throw std::domain_error("simulate_nppk: k must be >= 1");
    check_horizon(horizon);
    return nonhomogeneous_path(rng, rate, static_cast<double>(k), horizon,
                               [&] { return sampling::sample_uniform_k(rng, k); });
}

SamplePath simulate_npak(RngStream& rng, int k, double rho, const rates::RateFunction& rate,
                         double horizon) {
    if (k < 1) throw std::domain_error("simulate_npak: k must be >= 1");
    check_horizon(horizon);
    return nonhomogeneous_path(rng, rate, 1.0, horizon,
                               [&] { return sampling::sample_trunc_geom(rng, rho, k); });
}

SamplePath simulate_fppk_renewal_path(RngStream& rng, int k, double lam, double alpha,
                                      double horizon, bool appendix_scale_compat) {
    if (k < 1) throw std::domain_error("simulate_fppk: k must be >= 1");
    if (!(lam > 0.0)) throw std::domain_error("simulate_fppk: lambda must be > 0");
    check_alpha_closed(alpha);
    check_horizon(horizon);
    const double scale =
        appendix_scale_compat ? lam : std::pow(k * lam, -1.0 / alpha);
    SamplePath path;
    path.horizon = horizon;
    double t = sampling::sample_mittag_leffler(rng, alpha, scale);
    while (t <= horizon) {
        path.event_times.push_back(t);
        path.jump_sizes.push_back(sampling::sample_uniform_k(rng, k));
        t += sampling::sample_mittag_leffler(rng, alpha, scale);
    }
    return path;
}

CountGrid simulate_fppk(RngStream& rng, int k, double lam, double alpha,
                        std::span<const double> grid, FppkMethod method,
                        const FppkOptions& opts) {
    if (k < 1) throw std::domain_error("simulate_fppk: k must be >= 1");
    if (!(lam > 0.0)) throw std::domain_error("simulate_fppk: lambda must be > 0");
    check_alpha_closed(alpha);
    check_grid(grid);
    if (method == FppkMethod::renewal) {
        const double t_end = grid.back();
        if (t_end == 0.0) {
            CountGrid out;
            out.grid.assign(grid.begin(), grid.end());
            out.counts.assign(grid.size(), 0);
            return out;
        }
        return to_count_grid(
            simulate_fppk_renewal_path(rng, k, lam, alpha, t_end, opts.appendix_scale_compat),
            grid);
    }
    const auto clock = subordinator_clock(rng, alpha, grid, opts.step_scale);
    auto jump = [&rng, k]() { return sampling::sample_uniform_k(rng, k); };
    // counts of a rate-(k lam) compound process at operational times clock[i]
    std::vector<double> thresholds(clock.size());
    for (std::size_t i = 0; i < clock.size(); ++i) thresholds[i] = k * lam * clock[i];
    CountGrid out;
    out.grid.assign(grid.begin(), grid.end());
    out.counts = unit_compound_counts_at(rng, thresholds, jump);
    return out;
}

CountGrid simulate_fnppk(RngStream& rng, int k, const rates::RateFunction& rate, double alpha,
                         std::span<const double> grid, double v, double step_scale) {
    if (k < 1) throw std::domain_error("simulate_fnppk: k must be >= 1");
    if (!(v >= 0.0)) throw std::domain_error("simulate_fnppk: v must be >= 0");
    check_alpha_closed(alpha);
    check_grid(grid);
    const auto clock = subordinator_clock(rng, alpha, grid, step_scale);
    std::vector<double> thresholds(clock.size());
    for (std::size_t i = 0; i < clock.size(); ++i)
        thresholds[i] = k * rate.cum_mass(v, clock[i] + v);
    CountGrid out;
    out.grid.assign(grid.begin(), grid.end());
    out.counts = unit_compound_counts_at(
        rng, thresholds, [&rng, k]() { return sampling::sample_uniform_k(rng, k); });
    return out;
}

CountGrid simulate_fpak(RngStream& rng, int k, double rho, double lam, double alpha,
                        std::span<const double> grid, double step_scale) {
    if (k < 1) throw std::domain_error("simulate_fpak: k must be >= 1");
    if (!(lam > 0.0)) throw std::domain_error("simulate_fpak: lambda must be > 0");
    check_alpha_closed(alpha);
    check_grid(grid);
    const auto clock = subordinator_clock(rng, alpha, grid, step_scale);
    std::vector<double> thresholds(clock.size());
    for (std::size_t i = 0; i < clock.size(); ++i) thresholds[i] = lam * clock[i];
    CountGrid out;
    out.grid.assign(grid.begin(), grid.end());
    out.counts = unit_compound_counts_at(
        rng, thresholds, [&rng, k, rho]() { return sampling::sample_trunc_geom(rng, rho, k); });
    return out;
}

CountGrid simulate_nfpak(RngStream& rng, int k, double rho, const rates::RateFunction& rate,
                         double alpha, std::span<const double> grid, double v,
                         double step_scale) {
    if (k < 1) throw std::domain_error("simulate_nfpak: k must be >= 1");
    if (!(v >= 0.0)) throw std::domain_error("simulate_nfpak: v must be >= 0");
    check_alpha_closed(alpha);
    check_grid(grid);
    const auto clock = subordinator_clock(rng, alpha, grid, step_scale);
    std::vector<double> thresholds(clock.size());
    for (std::size_t i = 0; i < clock.size(); ++i)
        thresholds[i] = rate.cum_mass(v, clock[i] + v);
    CountGrid out;
    out.grid.assign(grid.begin(), grid.end());
    out.counts = unit_compound_counts_at(
        rng, thresholds, [&rng, k, rho]() { return sampling::sample_trunc_geom(rng, rho, k); });
    return out;
}

CountGrid simulate_on_grid(RngStream& rng, const ProcessSpec& spec,
                           std::span<const double> grid) {
    spec.validate();
    check_grid(grid);
    const double t_end = grid.back();
    switch (spec.family) {
        case Family::ppk:
            if (t_end == 0.0) break;
            return to_count_grid(simulate_ppk(rng, spec.k, *spec.lam, t_end), grid);
        case Family::pak:
            if (t_end == 0.0) break;
            return to_count_grid(simulate_pak(rng, spec.k, *spec.rho, *spec.lam, t_end), grid);
        case Family::nppk:
            if (t_end == 0.0) break;
            return to_count_grid(simulate_nppk(rng, spec.k, *spec.rate, t_end), grid);
        case Family::npak:
            if (t_end == 0.0) break;
            return to_count_grid(simulate_npak(rng, spec.k, *spec.rho, *spec.rate, t_end), grid);
        case Family::fppk:
            return simulate_fppk(rng, spec.k, *spec.lam, *spec.alpha, grid,
                                 FppkMethod::renewal);
        case Family::fnppk:
            return simulate_fnppk(rng, spec.k, *spec.rate, *spec.alpha, grid);
        case Family::fpak:
            return simulate_fpak(rng, spec.k, *spec.rho, *spec.lam, *spec.alpha, grid);
        case Family::nfpak:
            return simulate_nfpak(rng, spec.k, *spec.rho, *spec.rate, *spec.alpha, grid);
    }
    CountGrid out;
    out.grid.assign(grid.begin(), grid.end());
    out.counts.assign(grid.size(), 0);
    return out;
}

Ensemble ensemble(std::uint64_t seed, const ProcessSpec& spec, int n_paths,
                  std::span<const double> grid) {
    spec.validate();
    check_grid(grid);
    if (n_paths < 1) throw std::domain_error("ensemble: n_paths must be >= 1");

    Ensemble e;
    e.spec = spec;
    e.grid.assign(grid.begin(), grid.end());
    e.n_paths = n_paths;
    e.seed = seed;
    e.counts.assign(static_cast<std::size_t>(n_paths) * grid.size(), 0);

    int n_threads = static_cast<int>(std::thread::hardware_concurrency());
    if (n_threads < 1) n_threads = 1;
    if (const int cap = env_thread_cap(); cap > 0) n_threads = std::min(n_threads, cap);
    n_threads = std::min(n_threads, n_paths);

    auto worker = [&](int lo, int hi) {
        for (int p = lo; p < hi; ++p) {
            RngStream rng(seed, static_cast<std::uint64_t>(p));
            const CountGrid cg = simulate_on_grid(rng, spec, grid);
            std::copy(cg.counts.begin(), cg.counts.end(),
                      e.counts.begin() + static_cast<std::size_t>(p) * grid.size());
        }
    };

    if (n_threads == 1) {
        worker(0, n_paths);
    } else {
        std::vector<std::thread> pool;
        const int chunk = (n_paths + n_threads - 1) / n_threads;
        for (int t = 0; t < n_threads; ++t) {
            const int lo = t * chunk;
            const int hi = std::min(n_paths, lo + chunk);
            if (lo >= hi) break;
            pool.emplace_back(worker, lo, hi);
        }
        for (auto& th : pool) th.join();
    }
    return e;
}

}  // namespace fcount::processes
