#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fcount/rates.hpp"
#include "fcount/rng.hpp"

namespace fcount::processes {

enum class Family { ppk, nppk, fppk, fnppk, pak, npak, fpak, nfpak };

Family family_from_string(const std::string& s);
std::string family_to_string(Family f);
bool family_is_fractional(Family f);
bool family_has_rho(Family f);
bool family_has_rate(Family f);

/// Full parameterization of one of the eight counting-process families.
/// alpha = 1 is permitted for the fractional families and reproduces the
/// classical (non-fractional) limit.
struct ProcessSpec {
    Family family = Family::ppk;
    int k = 1;
    std::optional<double> rho;                  // Polya-Aeppli families
    std::optional<double> alpha;                // fractional families
    std::optional<double> lam;                  // constant-rate families
    std::optional<rates::RateFunction> rate;    // non-homogeneous families

    void validate() const;
    std::string describe() const;
};

/// Event times with attached jump sizes on [0, horizon].
struct SamplePath {
    std::vector<double> event_times;  // strictly increasing
    std::vector<int> jump_sizes;      // in [1, k]
    double horizon = 0.0;

    std::int64_t count_at(double t) const;
    void check_invariants(int k) const;
};

/// Counts of one realization read on a fixed time grid.
struct CountGrid {
    std::vector<double> grid;
    std::vector<std::int64_t> counts;
};

CountGrid to_count_grid(const SamplePath& path, std::span<const double> grid);

/// Independent realizations on a shared grid, one derived RNG stream per
/// path: row i uses RngStream(seed, i).
struct Ensemble {
    ProcessSpec spec;
    std::vector<double> grid;
    int n_paths = 0;
    std::uint64_t seed = 0;
    std::vector<std::int64_t> counts;  // row-major n_paths x grid.size()

    std::int64_t at(int path, int j) const {
        return counts[static_cast<std::size_t>(path) * grid.size() +
                      static_cast<std::size_t>(j)];
    }
};

struct FppkOptions {
    /// Operational-lattice spacing for the time-change method, as a fraction
    /// of the operational-horizon estimate E[Y_alpha(t_end)].
    double step_scale = 1e-3;
    /// Reproduce the published simulation listing's waiting-time scale
    /// gamma = lambda instead of the correct (k lambda)^{-1/alpha}.
    bool appendix_scale_compat = false;
};

enum class FppkMethod { timechange, renewal };

/// Homogeneous Poisson process of order k: rate-(k lambda) epochs with
/// uniform jump sizes on {1..k}.
SamplePath simulate_ppk(sampling::RngStream& rng, int k, double lam, double horizon);

/// Polya-Aeppli process of order k: rate-lambda epochs, truncated-geometric
/// jump sizes.
SamplePath simulate_pak(sampling::RngStream& rng, int k, double rho, double lam, double horizon);

/// Non-homogeneous Poisson process of order k, N1(k Lambda(t)) with uniform
/// jumps: exact time transform through the inverse cumulative mass, or
/// thinning when Lambda has flat segments (tabulated rates).
SamplePath simulate_nppk(sampling::RngStream& rng, int k, const rates::RateFunction& rate,
                         double horizon);

/// Non-homogeneous Polya-Aeppli process of order k (epoch rate lambda(t)).
SamplePath simulate_npak(sampling::RngStream& rng, int k, double rho,
                         const rates::RateFunction& rate, double horizon);

/// Fractional Poisson process of order k on a grid, by either
/// representation: time change through a simulated inverse-subordinator
/// path, or the Mittag-Leffler renewal construction.
CountGrid simulate_fppk(sampling::RngStream& rng, int k, double lam, double alpha,
                        std::span<const double> grid, FppkMethod method,
                        const FppkOptions& opts = {});

/// The renewal representation also yields exact event times.
SamplePath simulate_fppk_renewal_path(sampling::RngStream& rng, int k, double lam, double alpha,
                                      double horizon, bool appendix_scale_compat = false);

/// Fractional non-homogeneous Poisson process of order k,
/// N^n(Y_alpha(t) + v) - N^n(v); v = 0 gives the marginal process.
CountGrid simulate_fnppk(sampling::RngStream& rng, int k, const rates::RateFunction& rate,
                         double alpha, std::span<const double> grid, double v = 0.0,
                         double step_scale = 1e-3);

/// Fractional Polya-Aeppli process of order k, N_PAk(Y_alpha(t)).
CountGrid simulate_fpak(sampling::RngStream& rng, int k, double rho, double lam, double alpha,
                        std::span<const double> grid, double step_scale = 1e-3);

/// Non-homogeneous fractional Polya-Aeppli process of order k,
/// N_PAk(Lambda(Y_alpha(t) + v)) - N_PAk(Lambda(v)) with a unit-intensity
/// underlying Poisson process.
CountGrid simulate_nfpak(sampling::RngStream& rng, int k, double rho,
                         const rates::RateFunction& rate, double alpha,
                         std::span<const double> grid, double v = 0.0,
                         double step_scale = 1e-3);

/// One realization of any family, read on a grid.
CountGrid simulate_on_grid(sampling::RngStream& rng, const ProcessSpec& spec,
                           std::span<const double> grid);

/// n_paths independent realizations; parallelized across worker threads
/// (capped by the FCOUNT_THREADS environment variable when set).
Ensemble ensemble(std::uint64_t seed, const ProcessSpec& spec, int n_paths,
                  std::span<const double> grid);

}  // namespace fcount::processes
