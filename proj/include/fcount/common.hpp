#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#define FCOUNT_VERSION "0.1.0"

namespace fcount {

inline constexpr double kPi = 3.14159265358979323846;

/// Truncation control for all series evaluations. Exceeding max_terms
/// without reaching abs_tol is an error, never a silent truncation.
struct SeriesControl {
    double abs_tol = 1e-12;
    int max_terms = 10000;

    void validate() const {
        if (!(abs_tol > 0.0)) throw std::domain_error("SeriesControl: abs_tol must be > 0");
        if (max_terms < 1) throw std::domain_error("SeriesControl: max_terms must be >= 1");
    }
};

/// A real-valued function sampled on a strictly increasing grid.
struct GridFunction {
    std::vector<double> grid;
    std::vector<double> values;

    GridFunction() = default;
    GridFunction(std::vector<double> g, std::vector<double> v)
        : grid(std::move(g)), values(std::move(v)) {
        validate();
    }

    std::size_t size() const { return grid.size(); }

    void validate() const {
        if (grid.size() != values.size())
            throw std::invalid_argument("GridFunction: grid/value length mismatch");
        for (std::size_t i = 0; i + 1 < grid.size(); ++i)
            if (!(grid[i] < grid[i + 1]))
                throw std::invalid_argument("GridFunction: grid must be strictly increasing");
        if (!grid.empty() && grid.front() < 0.0)
            throw std::invalid_argument("GridFunction: grid must be nonnegative");
    }
};

}  // namespace fcount
