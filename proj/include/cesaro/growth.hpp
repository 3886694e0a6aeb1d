#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace cesaro {

/// The one definition of "diverges" used by the family growth probe and the
/// limit classifier. Positions 1..K are grouped into dyadic blocks
/// [2^j, 2^{j+1}) (the last block may be partial), the block maxima are
/// log-linearly fitted against j, and the sequence is declared divergent when
/// the fitted growth across `span_blocks` consecutive blocks is at least
/// `factor`.
struct GrowthParams {
    double factor = 1.5;
    std::size_t span_blocks = 3;
};

std::vector<double> dyadic_block_maxima(std::span<const double> sequence);

/// Fitted multiplicative growth per `span_blocks` blocks. Leading all-zero
/// blocks are skipped; returns 1.0 when fewer than span_blocks + 1 blocks remain.
double fitted_block_growth(std::span<const double> sequence, const GrowthParams& params = {});

bool diverges(std::span<const double> sequence, const GrowthParams& params = {});

struct ProbeResult {
    bool unbounded = false;
    double bound = 0.0;        // observed max × 1.1 when bounded so far
    double observed_max = 0.0;
    double growth = 1.0;
};

/// Heuristic boundedness probe for one atom's coefficients along a window.
ProbeResult probe_growth(std::span<const double> coefficients, const GrowthParams& params = {});

} // namespace cesaro
