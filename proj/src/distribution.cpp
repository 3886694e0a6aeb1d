#include "cesaro/distribution.hpp"
#include "cesaro/errors.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace cesaro {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

Distribution Distribution::constant(double value) {
    if (!(value >= 0.0) || !std::isfinite(value)) throw SpecError("constant law: value must be finite and >= 0");
    return {Kind::Constant, value, 0.0};
}

Distribution Distribution::uniform(double low, double high) {
    if (!(low >= 0.0) || !(high > low) || !std::isfinite(high))
        throw SpecError("uniform law: need 0 <= low < high < inf");
    return {Kind::Uniform, low, high};
}

Distribution Distribution::exponential(double rate) {
    if (!(rate > 0.0) || !std::isfinite(rate)) throw SpecError("exponential law: rate must be positive");
    return {Kind::Exponential, rate, 0.0};
}

Distribution Distribution::pareto(double shape, double scale) {
    if (!(shape > 0.0) || !std::isfinite(shape)) throw SpecError("pareto law: shape must be positive");
    if (!(scale > 0.0) || !std::isfinite(scale)) throw SpecError("pareto law: scale must be positive");
    return {Kind::Pareto, shape, scale};
}

double Distribution::mean() const {
    switch (kind_) {
    case Kind::Constant: return a_;
    case Kind::Uniform: return 0.5 * (a_ + b_);
    case Kind::Exponential: return 1.0 / a_;
    case Kind::Pareto: return a_ > 1.0 ? a_ * b_ / (a_ - 1.0) : kInf;
    }
    return kInf;
}

double Distribution::variance() const {
    switch (kind_) {
    case Kind::Constant: return 0.0;
    case Kind::Uniform: return (b_ - a_) * (b_ - a_) / 12.0;
    case Kind::Exponential: return 1.0 / (a_ * a_);
    case Kind::Pareto:
        if (a_ <= 2.0) return kInf;
        return b_ * b_ * a_ / ((a_ - 1.0) * (a_ - 1.0) * (a_ - 2.0));
    }
    return kInf;
}

double Distribution::upper_bound() const {
    switch (kind_) {
    case Kind::Constant: return a_;
    case Kind::Uniform: return b_;
    default: return kInf;
    }
}

double Distribution::quantile(double u) const {
    switch (kind_) {
    case Kind::Constant: return a_;
    case Kind::Uniform: return a_ + (b_ - a_) * u;
    case Kind::Exponential: return -std::log1p(-u) / a_;
    case Kind::Pareto: return b_ * std::pow(1.0 - u, -1.0 / a_);
    }
    return 0.0;
}

std::string Distribution::name() const {
    std::ostringstream os;
    switch (kind_) {
    case Kind::Constant: os << "Constant(" << a_ << ")"; break;
    case Kind::Uniform: os << "Uniform(" << a_ << "," << b_ << ")"; break;
    case Kind::Exponential: os << "Exponential(" << a_ << ")"; break;
    case Kind::Pareto: os << "Pareto(" << a_ << "," << b_ << ")"; break;
    }
    return os.str();
}

} // namespace cesaro
