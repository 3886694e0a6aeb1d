#include "cesaro/family_library.hpp"
#include "cesaro/errors.hpp"
#include "cesaro/rng.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <sstream>

namespace cesaro {

namespace series {

AtomSeries constant(double value) {
    if (!(value >= 0.0) || !std::isfinite(value)) throw StructuralError("constant series: value must be finite and >= 0");
    std::ostringstream os;
    os << "const(" << value << ")";
    return {[value](std::uint64_t) { return value; }, Bounded{value}, os.str()};
}

AtomSeries power(double scale, double alpha) {
    if (!(scale >= 0.0)) throw StructuralError("power series: scale must be >= 0");
    std::ostringstream os;
    os << scale << "*n^" << alpha;
    AtomMeta meta = (alpha > 0.0 && scale > 0.0) ? AtomMeta{Unbounded{}} : AtomMeta{Bounded{scale}};
    return {[scale, alpha](std::uint64_t n) { return scale * std::pow(static_cast<double>(n), alpha); }, meta, os.str()};
}

AtomSeries abs_sine(double amplitude) {
    if (!(amplitude >= 0.0)) throw StructuralError("sine series: amplitude must be >= 0");
    std::ostringstream os;
    os << amplitude << "*|sin n|";
    return {[amplitude](std::uint64_t n) { return amplitude * std::abs(std::sin(static_cast<double>(n))); },
            Bounded{amplitude}, os.str()};
}

AtomSeries periodic(std::vector<double> values) {
    if (values.empty()) throw StructuralError("periodic series: need at least one value");
    for (double v : values) {
        if (!(v >= 0.0) || !std::isfinite(v)) throw StructuralError("periodic series: values must be finite and >= 0");
    }
    const double top = *std::max_element(values.begin(), values.end());
    std::ostringstream os;
    os << "periodic[";
    for (std::size_t i = 0; i < values.size(); ++i) os << (i ? "," : "") << values[i];
    os << "]";
    auto shared = std::make_shared<const std::vector<double>>(std::move(values));
    return {[shared](std::uint64_t n) { return (*shared)[(n - 1) % shared->size()]; }, Bounded{top}, os.str()};
}

AtomSeries burst(std::uint64_t period, std::uint64_t offset, double scale, double alpha, double base) {
    if (period == 0) throw StructuralError("burst series: period must be positive");
    if (!(scale >= 0.0) || !(base >= 0.0)) throw StructuralError("burst series: scale and base must be >= 0");
    offset %= period;
    std::ostringstream os;
    os << "burst(n%" << period << "==" << offset << ": " << scale << "*n^" << alpha << ", else " << base << ")";
    AtomMeta meta = (alpha > 0.0 && scale > 0.0) ? AtomMeta{Unbounded{}} : AtomMeta{Bounded{std::max(scale, base)}};
    return {[=](std::uint64_t n) {
                return n % period == offset ? scale * std::pow(static_cast<double>(n), alpha) : base;
            },
            meta, os.str()};
}

AtomSeries squares(double scale, double base) {
    if (!(scale > 0.0) || !(base >= 0.0)) throw StructuralError("squares series: need scale > 0, base >= 0");
    std::ostringstream os;
    os << "squares(" << scale << "*n on n=j^2, else " << base << ")";
    return {[=](std::uint64_t n) {
                auto r = static_cast<std::uint64_t>(std::llround(std::sqrt(static_cast<double>(n))));
                return r * r == n ? scale * static_cast<double>(n) : base;
            },
            Unbounded{}, os.str()};
}

AtomSeries logarithmic(double scale) {
    if (!(scale > 0.0)) throw StructuralError("log series: scale must be > 0");
    std::ostringstream os;
    os << scale << "*log(1+n)";
    return {[scale](std::uint64_t n) { return scale * std::log1p(static_cast<double>(n)); }, Unbounded{}, os.str()};
}

} // namespace series

CoefficientFamily per_atom_family(std::vector<AtomSeries> atoms, std::string description) {
    if (atoms.empty()) throw StructuralError("per-atom family needs at least one atom");
    if (description.empty()) {
        std::ostringstream os;
        for (std::size_t i = 0; i < atoms.size(); ++i) os << (i ? "; " : "") << atoms[i].description;
        description = os.str();
    }
    std::vector<AtomMeta> meta;
    for (const auto& a : atoms) meta.push_back(a.meta);
    auto shared = std::make_shared<const std::vector<AtomSeries>>(std::move(atoms));
    auto evaluator = [shared](std::uint64_t n, AtomLabel m) -> double {
        if (m.value == 0 || m.value > shared->size())
            throw StructuralError("per-atom family has no series for atom " + std::to_string(m.value));
        return (*shared)[m.value - 1].values(n);
    };
    return CoefficientFamily(std::move(evaluator), std::move(meta), std::move(description));
}

CoefficientFamily constant_family(double value) {
    if (!(value >= 0.0) || !std::isfinite(value)) throw StructuralError("constant family: value must be finite and >= 0");
    std::ostringstream os;
    os << "constant " << value;
    return CoefficientFamily([value](std::uint64_t, AtomLabel) { return value; },
                             [value](AtomLabel) -> AtomMeta { return Bounded{value}; }, os.str());
}

CoefficientFamily power_family(double alpha, std::vector<double> weights) {
    for (double w : weights) {
        if (!(w >= 0.0) || !std::isfinite(w)) throw StructuralError("power family: weights must be finite and >= 0");
    }
    auto g = std::make_shared<const std::vector<double>>(std::move(weights));
    auto weight = [g](AtomLabel m) -> double {
        if (g->empty()) return 1.0;
        if (m.value == 0 || m.value > g->size())
            throw StructuralError("power family has no weight for atom " + std::to_string(m.value));
        return (*g)[m.value - 1];
    };
    std::ostringstream os;
    os << "n^" << alpha << "*g(m)";
    return CoefficientFamily(
        [alpha, weight](std::uint64_t n, AtomLabel m) { return std::pow(static_cast<double>(n), alpha) * weight(m); },
        [alpha, weight](AtomLabel m) -> AtomMeta {
            const double w = weight(m);
            if (alpha > 0.0 && w > 0.0) return Unbounded{};
            return Bounded{w};
        },
        os.str());
}

CoefficientFamily sampled_family(Distribution law, std::uint64_t seed) {
    const double top = law.upper_bound();
    AtomMeta meta = std::isfinite(top) ? AtomMeta{Bounded{top}} : AtomMeta{Unbounded{}};
    return CoefficientFamily(
        [law, seed](std::uint64_t n, AtomLabel m) {
            return law.quantile(unit_open(child_seed(seed, m.value, n)));
        },
        [meta](AtomLabel) { return meta; }, "iid " + law.name());
}

//==============================================================================
// Table families
//==============================================================================

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream is(line);
    while (std::getline(is, cell, ',')) {
        auto b = cell.find_first_not_of(" \t\r");
        auto e = cell.find_last_not_of(" \t\r");
        cells.push_back(b == std::string::npos ? std::string{} : cell.substr(b, e - b + 1));
    }
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

} // namespace

FamilyTable parse_family_csv(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    FamilyTable table;
    std::size_t line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        auto cells = split_csv_line(line);
        if (table.atom_names.empty()) {
            for (const auto& c : cells) {
                if (c.empty()) throw StructuralError("family csv: empty atom name in header");
            }
            table.atom_names = std::move(cells);
            continue;
        }
        if (cells.size() != table.atom_names.size()) {
            throw StructuralError("family csv line " + std::to_string(line_no) + ": expected " +
                                  std::to_string(table.atom_names.size()) + " cells, got " +
                                  std::to_string(cells.size()));
        }
        std::vector<double> row;
        for (const auto& c : cells) {
            if (c.empty()) throw StructuralError("family csv line " + std::to_string(line_no) + ": missing cell");
            std::size_t used = 0;
            double v = 0.0;
            try {
                v = std::stod(c, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used != c.size() || !std::isfinite(v) || v < 0.0) {
                throw StructuralError("family csv line " + std::to_string(line_no) + ": invalid value '" + c + "'");
            }
            row.push_back(v);
        }
        table.rows.push_back(std::move(row));
    }
    if (table.atom_names.empty()) throw StructuralError("family csv: missing header row");
    if (table.rows.empty()) throw StructuralError("family csv: no data rows");
    return table;
}

FamilyTable read_family_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw StructuralError("cannot open family csv " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_family_csv(buffer.str());
}

CoefficientFamily table_family(FamilyTable table, std::vector<AtomMeta> meta, std::string description) {
    if (meta.size() > table.atom_names.size()) throw StructuralError("table family: more metadata than columns");
    if (description.empty()) description = "table " + std::to_string(table.rows.size()) + "x" +
                                            std::to_string(table.atom_names.size());
    auto shared = std::make_shared<const FamilyTable>(std::move(table));
    auto evaluator = [shared](std::uint64_t n, AtomLabel m) -> double {
        if (n < 1 || n > shared->rows.size())
            throw StructuralError("table family has no row for n = " + std::to_string(n));
        if (m.value == 0 || m.value > shared->atom_names.size())
            throw StructuralError("table family has no column for atom " + std::to_string(m.value));
        return shared->rows[n - 1][m.value - 1];
    };
    return CoefficientFamily(std::move(evaluator), std::move(meta), std::move(description));
}

} // namespace cesaro
