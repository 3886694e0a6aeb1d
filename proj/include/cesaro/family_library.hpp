#pragma once

#include "cesaro/distribution.hpp"
#include "cesaro/families.hpp"

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

namespace cesaro {

/// One atom's coefficient sequence n -> c_{n,m} together with its declared metadata.
struct AtomSeries {
    std::function<double(std::uint64_t)> values;
    AtomMeta meta;
    std::string description;
};

namespace series {

AtomSeries constant(double value);
/// scale · n^alpha. Unbounded for alpha > 0 and scale > 0.
AtomSeries power(double scale, double alpha);
/// amplitude · |sin n|.
AtomSeries abs_sine(double amplitude);
/// values[(n - 1) mod period].
AtomSeries periodic(std::vector<double> values);
/// scale · n^alpha when n ≡ offset (mod period), `base` otherwise.
AtomSeries burst(std::uint64_t period, std::uint64_t offset, double scale, double alpha, double base = 0.0);
/// scale · n on perfect squares, `base` elsewhere.
AtomSeries squares(double scale, double base = 0.0);
/// scale · log(1 + n).
AtomSeries logarithmic(double scale);

} // namespace series

/// Label m uses atoms[m - 1]; evaluating any other label is a structural error.
CoefficientFamily per_atom_family(std::vector<AtomSeries> atoms, std::string description = {});

/// c_{n,m} = value for every atom.
CoefficientFamily constant_family(double value);

/// c_{n,m} = n^alpha · g(m) with g given by `weights` (label m uses weights[m-1]);
/// an empty weight list means g ≡ 1 on every label.
CoefficientFamily power_family(double alpha, std::vector<double> weights = {});

/// c_{n,m} i.i.d. draws of `law`, computed from a counter-based hash of
/// (seed, n, m) so the evaluator stays pure. Declared Bounded(sup support) for
/// bounded laws, Unbounded otherwise.
CoefficientFamily sampled_family(Distribution law, std::uint64_t seed);

//==============================================================================
// Table families
//==============================================================================

struct FamilyTable {
    std::vector<std::string> atom_names;
    std::vector<std::vector<double>> rows;   // rows[n-1][m-1]
};

/// Header row names the atoms; row i (1-based) holds c_{i,m}. Every cell is required.
FamilyTable read_family_csv(const std::filesystem::path& path);
FamilyTable parse_family_csv(const std::string& text);

/// Table-backed family; meta[i] applies to column i, missing entries are Unknown.
CoefficientFamily table_family(FamilyTable table, std::vector<AtomMeta> meta = {}, std::string description = {});

} // namespace cesaro
