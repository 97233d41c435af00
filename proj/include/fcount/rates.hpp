#pragma once

#include <string>
#include <vector>

namespace fcount::rates {

/// Deterministic intensity lambda(t) with exactly integrable cumulative
/// mass. Closed forms for the constant, Weibull and Makeham variants;
/// tabulated rates are piecewise constant so the cumulative mass is
/// piecewise linear and exactly invertible.
class RateFunction {
public:
    enum class Kind { Constant, Weibull, Makeham, Table };

    static RateFunction constant(double lam0);
    /// lambda(t) = (c/b) (t/b)^{c-1}, Lambda(t) = (t/b)^c; b > 0, c >= 0.
    static RateFunction weibull(double b, double c);
    /// lambda(t) = c e^{bt} + mu, Lambda(t) = (c/b) e^{bt} - c/b + mu t.
    static RateFunction makeham(double b, double c, double mu);
    /// Piecewise-constant rate: value[i] on [knot[i], knot[i+1]), extended
    /// by value[0] before the first knot and value.back() after the last.
    static RateFunction table(std::vector<double> knots, std::vector<double> values);
    /// Two-column CSV (time, rate); header row optional.
    static RateFunction table_from_csv(const std::string& path);

    Kind kind() const { return kind_; }

    /// lambda(t), t >= 0. Weibull with c < 1 returns +infinity at t = 0.
    double rate_at(double t) const;

    /// Interval mass Lambda(s, t) = Lambda(t) - Lambda(s), 0 <= s <= t.
    double cum_mass(double s, double t) const;

    /// Lambda(t) = Lambda(0, t).
    double cum_mass(double t) const { return cum_mass(0.0, t); }

    /// Smallest t with Lambda(t) = y, to |Lambda(t) - y| <= 1e-10 (1 + y).
    /// Throws when the mass y is unreachable or Lambda is flat at level y.
    double invert_cum_mass(double y) const;

    /// sup of lambda over [0, t_hi] (thinning bound).
    double sup_rate(double t_hi) const;

    /// True when Lambda is strictly increasing on [0, t_hi].
    bool strictly_increasing(double t_hi) const;

    /// Compact textual form, e.g. "weibull:b=1,c=2" (CLI/artifact headers).
    std::string describe() const;

private:
    RateFunction() = default;

    Kind kind_ = Kind::Constant;
    double a_ = 0.0, b_ = 0.0, c_ = 0.0;  // variant parameters
    std::vector<double> knots_;
    std::vector<double> values_;
    std::vector<double> cum_;  // cumulative mass at knots
};

}  // namespace fcount::rates
