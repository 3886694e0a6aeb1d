#pragma once

#include "cesaro/rng.hpp"

#include <string>

namespace cesaro {

/// Named nonnegative laws used by sampled families and SLLN generators.
/// Sampling goes through the inverse CDF so a single uniform drives each draw.
class Distribution {
public:
    enum class Kind { Constant, Uniform, Exponential, Pareto };

    static Distribution constant(double value);
    static Distribution uniform(double low, double high);
    static Distribution exponential(double rate);
    /// P(X > x) = (scale / x)^shape for x ≥ scale.
    static Distribution pareto(double shape, double scale = 1.0);

    Kind kind() const noexcept { return kind_; }
    double first() const noexcept { return a_; }
    double second() const noexcept { return b_; }

    double mean() const;             // +inf for Pareto with shape ≤ 1
    double variance() const;         // +inf when the second moment diverges
    double upper_bound() const;      // +inf for unbounded support
    double quantile(double u) const; // u in (0,1)
    double sample(Engine& engine) const { return quantile(uniform_open(engine)); }

    std::string name() const;

private:
    Distribution(Kind kind, double a, double b) : kind_(kind), a_(a), b_(b) {}

    Kind kind_;
    double a_;
    double b_;
};

} // namespace cesaro
