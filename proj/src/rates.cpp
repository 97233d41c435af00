#include "fcount/rates.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace fcount::rates {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

void check_time(double t, const char* who) {
    if (!(t >= 0.0)) throw std::domain_error(std::string(who) + ": time must be >= 0");
}
}  // namespace

RateFunction RateFunction::constant(double lam0) {
    if (!(lam0 >= 0.0)) throw std::domain_error("RateFunction::constant: rate must be >= 0");
    RateFunction r;
    r.kind_ = Kind::Constant;
    r.a_ = lam0;
    return r;
}

RateFunction RateFunction::weibull(double b, double c) {
    if (!(b > 0.0)) throw std::domain_error("RateFunction::weibull: b must be > 0");
    if (!(c >= 0.0)) throw std::domain_error("RateFunction::weibull: c must be >= 0");
    RateFunction r;
    r.kind_ = Kind::Weibull;
    r.a_ = b;
    r.b_ = c;
    return r;
}

RateFunction RateFunction::makeham(double b, double c, double mu) {
    if (!(b > 0.0) || !(c > 0.0))
        throw std::domain_error("RateFunction::makeham: b and c must be > 0");
    if (!(mu >= 0.0)) throw std::domain_error("RateFunction::makeham: mu must be >= 0");
    RateFunction r;
    r.kind_ = Kind::Makeham;
    r.a_ = b;
    r.b_ = c;
    r.c_ = mu;
    return r;
}

RateFunction RateFunction::table(std::vector<double> knots, std::vector<double> values) {
    if (knots.empty() || knots.size() != values.size())
        throw std::invalid_argument("RateFunction::table: need equal nonzero knot/value counts");
    for (std::size_t i = 0; i < knots.size(); ++i) {
        if (!(values[i] >= 0.0))
            throw std::invalid_argument("RateFunction::table: rates must be >= 0");
        if (i > 0 && !(knots[i] > knots[i - 1]))
            throw std::invalid_argument("RateFunction::table: times must be strictly increasing");
    }
    if (!(knots.front() >= 0.0))
        throw std::invalid_argument("RateFunction::table: times must be >= 0");
    RateFunction r;
    r.kind_ = Kind::Table;
    r.knots_ = std::move(knots);
    r.values_ = std::move(values);
    // cumulative mass at each knot, with value[0] extended down to t = 0
    r.cum_.resize(r.knots_.size());
    r.cum_[0] = r.values_[0] * r.knots_[0];
    for (std::size_t i = 1; i < r.knots_.size(); ++i)
        r.cum_[i] = r.cum_[i - 1] + r.values_[i - 1] * (r.knots_[i] - r.knots_[i - 1]);
    return r;
}

RateFunction RateFunction::table_from_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("RateFunction: cannot open " + path);
    std::vector<double> knots, values;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ss(line);
        double t, v;
        if (!(ss >> t >> v)) {
            if (knots.empty()) continue;  // header row
            throw std::runtime_error("RateFunction: malformed CSV line: " + line);
        }
        knots.push_back(t);
        values.push_back(v);
    }
    return table(std::move(knots), std::move(values));
}

double RateFunction::rate_at(double t) const {
    check_time(t, "rate_at");
    switch (kind_) {
        case Kind::Constant:
            return a_;
        case Kind::Weibull: {
            const double b = a_, c = b_;
            if (c == 1.0) return 1.0 / b;
            if (t == 0.0) return c < 1.0 ? kInf : 0.0;
            return c / b * std::pow(t / b, c - 1.0);
        }
        case Kind::Makeham:
            return b_ * std::exp(a_ * t) + c_;
        case Kind::Table: {
            auto it = std::upper_bound(knots_.begin(), knots_.end(), t);
            if (it == knots_.begin()) return values_.front();
            return values_[static_cast<std::size_t>(it - knots_.begin()) - 1];
        }
    }
    return 0.0;
}

double RateFunction::cum_mass(double s, double t) const {
    check_time(s, "cum_mass");
    if (!(t >= s)) throw std::domain_error("cum_mass: need s <= t");
    auto lambda_big = [this](double u) -> double {
        switch (kind_) {
            case Kind::Constant:
                return a_ * u;
            case Kind::Weibull:
                return u == 0.0 ? 0.0 : std::pow(u / a_, b_);
            case Kind::Makeham:
                return b_ / a_ * (std::exp(a_ * u) - 1.0) + c_ * u;
            case Kind::Table: {
                auto it = std::upper_bound(knots_.begin(), knots_.end(), u);
                if (it == knots_.begin()) return values_.front() * u;
                const std::size_t i = static_cast<std::size_t>(it - knots_.begin()) - 1;
                return cum_[i] + values_[i] * (u - knots_[i]);
            }
        }
        return 0.0;
    };
    return lambda_big(t) - lambda_big(s);
}

double RateFunction::invert_cum_mass(double y) const {
    if (!(y >= 0.0)) throw std::domain_error("invert_cum_mass: y must be >= 0");
    if (y == 0.0) return 0.0;
    switch (kind_) {
        case Kind::Constant:
            if (a_ == 0.0) throw std::runtime_error("invert_cum_mass: mass unreachable (zero rate)");
            return y / a_;
        case Kind::Weibull: {
            const double b = a_, c = b_;
            if (c == 0.0)
                throw std::runtime_error("invert_cum_mass: cumulative mass not strictly increasing");
            return b * std::pow(y, 1.0 / c);
        }
        case Kind::Makeham: {
            // Newton with bracket growing; Lambda is smooth, convex, strictly increasing
            double lo = 0.0, hi = 1.0;
            while (cum_mass(0.0, hi) < y) {
                lo = hi;
                hi *= 2.0;
                if (hi > 1e12) throw std::runtime_error("invert_cum_mass: mass unreachable");
            }
            double t = 0.5 * (lo + hi);
            for (int it = 0; it < 200; ++it) {
                const double f = cum_mass(0.0, t) - y;
                if (std::abs(f) <= 1e-10 * (1.0 + y)) return t;
                if (f > 0.0) hi = t; else lo = t;
                const double d = rate_at(t);
                double step = d > 0.0 ? t - f / d : 0.0;
                t = (step > lo && step < hi) ? step : 0.5 * (lo + hi);
            }
            return t;
        }
        case Kind::Table: {
            const double total = cum_.back();
            if (y > total) {
                if (values_.back() == 0.0)
                    throw std::runtime_error("invert_cum_mass: mass unreachable (rate vanishes)");
                return knots_.back() + (y - total) / values_.back();
            }
            auto it = std::lower_bound(cum_.begin(), cum_.end(), y);
            const std::size_t i = static_cast<std::size_t>(it - cum_.begin());
            // y exactly at the level of a zero-rate stretch has no unique inverse
            if (i + 1 < values_.size() && cum_[i] == y && values_[i] == 0.0)
                throw std::runtime_error("invert_cum_mass: ambiguous inverse on flat segment");
            if (i == 0) {
                if (values_[0] == 0.0)
                    throw std::runtime_error("invert_cum_mass: ambiguous inverse on flat segment");
                return y / values_[0];
            }
            const std::size_t seg = i - 1;  // y in (cum_[seg], cum_[seg+1]]
            if (values_[seg] == 0.0)
                throw std::runtime_error("invert_cum_mass: ambiguous inverse on flat segment");
            return knots_[seg] + (y - cum_[seg]) / values_[seg];
        }
    }
    throw std::logic_error("invert_cum_mass: unknown variant");
}

double RateFunction::sup_rate(double t_hi) const {
    check_time(t_hi, "sup_rate");
    switch (kind_) {
        case Kind::Constant:
            return a_;
        case Kind::Weibull:
            return b_ >= 1.0 ? rate_at(t_hi) : rate_at(0.0);
        case Kind::Makeham:
            return rate_at(t_hi);
        case Kind::Table: {
            double m = 0.0;
            for (std::size_t i = 0; i < knots_.size(); ++i) {
                if (knots_[i] > t_hi && i > 0) break;
                m = std::max(m, values_[i]);
            }
            return std::max(m, values_.front());
        }
    }
    return 0.0;
}

bool RateFunction::strictly_increasing(double t_hi) const {
    switch (kind_) {
        case Kind::Constant:
            return a_ > 0.0;
        case Kind::Weibull:
            return b_ > 0.0;
        case Kind::Makeham:
            return true;  // c > 0
        case Kind::Table:
            for (std::size_t i = 0; i < knots_.size(); ++i) {
                if (knots_[i] >= t_hi && i > 0) break;
                if (values_[i] == 0.0) return false;
            }
            return values_.front() > 0.0;
    }
    return false;
}

std::string RateFunction::describe() const {
    std::ostringstream ss;
    ss.precision(17);
    switch (kind_) {
        case Kind::Constant:
            ss << "constant:" << a_;
            break;
        case Kind::Weibull:
            ss << "weibull:b=" << a_ << ",c=" << b_;
            break;
        case Kind::Makeham:
            ss << "makeham:b=" << a_ << ",c=" << b_ << ",mu=" << c_;
            break;
        case Kind::Table:
            ss << "table:" << knots_.size() << "knots";
            break;
    }
    return ss.str();
}

}  // namespace fcount::rates
