#include "cesaro/growth.hpp"

#include <algorithm>
#include <cmath>

namespace cesaro {

std::vector<double> dyadic_block_maxima(std::span<const double> sequence) {
    std::vector<double> maxima;
    std::size_t start = 1;
    while (start <= sequence.size()) {
        const std::size_t stop = std::min(2 * start - 1, sequence.size());
        double m = sequence[start - 1];
        for (std::size_t k = start; k <= stop; ++k) m = std::max(m, sequence[k - 1]);
        maxima.push_back(m);
        start *= 2;
    }
    return maxima;
}

double fitted_block_growth(std::span<const double> sequence, const GrowthParams& params) {
    const auto maxima = dyadic_block_maxima(sequence);
    auto first = std::find_if(maxima.begin(), maxima.end(), [](double v) { return v > 0.0; });
    if (first == maxima.end()) return 1.0;
    std::vector<double> tail(first, maxima.end());
    if (tail.size() < params.span_blocks + 1) return 1.0;

    // Blocks that fall back to zero after a positive one count as the smallest
    // positive maximum seen: a collapse reads as decay, not as missing data.
    double floor = *std::min_element(tail.begin(), tail.end(), [](double a, double b) {
        if (a <= 0.0) return false;
        if (b <= 0.0) return true;
        return a < b;
    });
    const double n = static_cast<double>(tail.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t j = 0; j < tail.size(); ++j) {
        const double x = static_cast<double>(j);
        const double y = std::log(tail[j] > 0.0 ? tail[j] : floor);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return std::exp(slope * static_cast<double>(params.span_blocks));
}

bool diverges(std::span<const double> sequence, const GrowthParams& params) {
    return fitted_block_growth(sequence, params) >= params.factor;
}

ProbeResult probe_growth(std::span<const double> coefficients, const GrowthParams& params) {
    ProbeResult result;
    for (double c : coefficients) result.observed_max = std::max(result.observed_max, c);
    result.growth = fitted_block_growth(coefficients, params);
    result.unbounded = result.growth >= params.factor;
    result.bound = result.observed_max * 1.1;
    return result;
}

} // namespace cesaro
