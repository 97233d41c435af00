#pragma once

#include <span>
#include <vector>

#include "fcount/rng.hpp"

namespace fcount::sampling {

/// One draw of the discrete uniform distribution on {1, ..., k}.
int sample_uniform_k(RngStream& rng, int k);

/// One draw of the truncated geometric distribution on {1, ..., k}:
/// P[X = m] = (1 - rho) rho^{m-1} / (1 - rho^k), rho in [0, 1).
int sample_trunc_geom(RngStream& rng, double rho, int k);

/// One Mittag-Leffler waiting time with survival function
/// P[J > t] = E_alpha(-(t/scale)^alpha), via the Kozubowski inversion
/// j = -scale log(u) (sin(a pi)/tan(a pi v) - cos(a pi))^{1/a}.
/// alpha = 1 degenerates to an exponential with the given mean.
double sample_mittag_leffler(RngStream& rng, double alpha, double scale);

/// One draw of the positive alpha-stable law L_alpha(1) with Laplace
/// transform exp(-s^alpha), by the Kanter construction.
double sample_pos_stable(RngStream& rng, double alpha);

/// One draw of the inverse subordinator Y_alpha(t), exact in distribution
/// through Y_alpha(t) =d (t / L_alpha(1))^alpha.
double sample_inverse_subordinator_at(RngStream& rng, double alpha, double t);

/// One joint path of Y_alpha evaluated at every grid point, from a single
/// simulated stable-subordinator path on an operational-time lattice of
/// spacing `step` (first-passage inversion, right-continuous convention).
/// The grid must be nondecreasing; the output is nondecreasing.
std::vector<double> sample_inverse_subordinator_path(RngStream& rng, double alpha,
                                                     std::span<const double> grid, double step);

}  // namespace fcount::sampling
