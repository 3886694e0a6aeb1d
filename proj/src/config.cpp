#include "cesaro/config.hpp"
#include "cesaro/errors.hpp"
#include "cesaro/family_library.hpp"
#include "cesaro/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace cesaro {

namespace {

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }
std::string item(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

[[noreturn]] void fail(const std::string& path, const std::string& message) {
    throw ConfigError((path.empty() ? std::string("config") : path) + ": " + message);
}

double as_number(const Json& j, const std::string& path) {
    if (!j.is_number()) fail(path, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) fail(path, "expected a finite number");
    return v;
}

std::uint64_t as_unsigned(const Json& j, const std::string& path) {
    if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0))
        fail(path, "expected a nonnegative integer");
    return j.get<std::uint64_t>();
}

std::string as_string(const Json& j, const std::string& path) {
    if (!j.is_string()) fail(path, "expected a string");
    return j.get<std::string>();
}

std::vector<double> as_numbers(const Json& j, const std::string& path) {
    if (!j.is_array()) fail(path, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(as_number(j[i], item(path, i)));
    return out;
}

std::vector<std::uint64_t> as_unsigneds(const Json& j, const std::string& path) {
    if (!j.is_array()) fail(path, "expected an array of integers");
    std::vector<std::uint64_t> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(as_unsigned(j[i], item(path, i)));
    return out;
}

AtomSet as_atoms(const Json& j, const std::string& path) {
    std::vector<AtomLabel> labels;
    for (auto v : as_unsigneds(j, path)) {
        if (v == 0 || v > UINT32_MAX) fail(path, "atom labels start at 1");
        labels.emplace_back(static_cast<std::uint32_t>(v));
    }
    return make_atom_set(std::move(labels));
}

/// Object reader that remembers which keys were consumed so leftovers can be reported.
class Reader {
public:
    Reader(const Json& json, std::string path) : json_(json), path_(std::move(path)) {
        if (!json_.is_object()) fail(path_, "expected an object");
    }

    bool has(const std::string& key) const { return json_.contains(key); }
    std::string at(const std::string& key) const { return join(path_, key); }
    const std::string& path() const { return path_; }

    const Json& raw(const std::string& key) {
        if (!has(key)) fail(at(key), "missing required key");
        seen_.insert(key);
        return json_.at(key);
    }

    double number(const std::string& key) { return as_number(raw(key), at(key)); }
    double number(const std::string& key, double fallback) { return has(key) ? number(key) : fallback; }
    std::uint64_t whole(const std::string& key) { return as_unsigned(raw(key), at(key)); }
    std::uint64_t whole(const std::string& key, std::uint64_t fallback) { return has(key) ? whole(key) : fallback; }
    std::string text(const std::string& key) { return as_string(raw(key), at(key)); }
    std::vector<double> numbers(const std::string& key) { return as_numbers(raw(key), at(key)); }
    Reader sub(const std::string& key) { return Reader(raw(key), at(key)); }

    void finish() const {
        for (const auto& [key, value] : json_.items()) {
            if (!seen_.contains(key)) fail(join(path_, key), "unknown key");
        }
    }

    /// Enforces exactly one of the given keys being present.
    std::string one_of(std::initializer_list<const char*> keys) const {
        std::string found;
        for (const char* k : keys) {
            if (!has(k)) continue;
            if (!found.empty()) fail(at(k), "conflicts with '" + found + "'");
            found = k;
        }
        if (found.empty()) {
            std::string list;
            for (const char* k : keys) list += (list.empty() ? "" : ", ") + std::string(k);
            fail(path_, "expected one of: " + list);
        }
        return found;
    }

private:
    const Json& json_;
    std::string path_;
    std::set<std::string> seen_;
};

//==============================================================================
// Laws, declarations, series
//==============================================================================

Distribution parse_law(const Json& json, const std::string& path) {
    Reader r(json, path);
    const auto name = r.text("name");
    try {
        Distribution law = Distribution::constant(0.0);
        if (name == "constant") law = Distribution::constant(r.number("value"));
        else if (name == "uniform") law = Distribution::uniform(r.number("low"), r.number("high"));
        else if (name == "exponential") law = Distribution::exponential(r.number("rate"));
        else if (name == "pareto") law = Distribution::pareto(r.number("shape"), r.number("scale", 1.0));
        else fail(r.at("name"), "unknown law '" + name + "'");
        r.finish();
        return law;
    } catch (const SpecError& e) {
        fail(path, e.what());
    }
}

AtomMeta parse_declaration(const Json& json, const std::string& path) {
    if (json.is_string()) {
        const auto s = json.get<std::string>();
        if (s == "unbounded") return Unbounded{};
        if (s == "unknown") return Unknown{};
        fail(path, "expected \"unbounded\", \"unknown\" or {\"bounded\": C}");
    }
    Reader r(json, path);
    const double c = r.number("bounded");
    if (c < 0) fail(r.at("bounded"), "bound must be nonnegative");
    r.finish();
    return Bounded{c};
}

AtomSeries parse_series(const Json& json, const std::string& path) {
    Reader r(json, path);
    const auto kind = r.text("series");
    std::optional<AtomMeta> declared;
    if (r.has("declare")) declared = parse_declaration(r.raw("declare"), r.at("declare"));
    AtomSeries s;
    try {
        if (kind == "constant") s = series::constant(r.number("value"));
        else if (kind == "power") s = series::power(r.number("scale", 1.0), r.number("alpha"));
        else if (kind == "abs_sine") s = series::abs_sine(r.number("amplitude", 1.0));
        else if (kind == "periodic") s = series::periodic(r.numbers("values"));
        else if (kind == "burst")
            s = series::burst(r.whole("period"), r.whole("offset", 0), r.number("scale", 1.0), r.number("alpha"),
                              r.number("base", 0.0));
        else if (kind == "squares") s = series::squares(r.number("scale", 1.0), r.number("base", 0.0));
        else if (kind == "logarithmic") s = series::logarithmic(r.number("scale", 1.0));
        else fail(r.at("series"), "unknown series '" + kind + "'");
    } catch (const SpecError& e) {
        fail(path, e.what());
    } catch (const StructuralError& e) {
        fail(path, e.what());
    }
    r.finish();
    if (declared) s.meta = *declared;
    return s;
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
    const std::filesystem::path path(p);
    return path.is_absolute() || base.empty() ? path : base / path;
}

CoefficientFamily parse_family(const Json& json, const std::string& path, const std::filesystem::path& base,
                               std::uint64_t default_seed) {
    Reader r(json, path);
    const auto form = r.one_of({"builtin", "atoms", "table"});
    std::optional<CoefficientFamily> family;
    if (form == "builtin") {
        const auto name = r.text("builtin");
        try {
            if (name == "constant") {
                family = constant_family(r.number("value"));
            } else if (name == "power") {
                std::vector<double> weights;
                if (r.has("weights")) weights = r.numbers("weights");
                family = power_family(r.number("alpha"), std::move(weights));
            } else if (name == "sampled") {
                family = sampled_family(parse_law(r.raw("law"), r.at("law")), r.whole("seed", default_seed));
            } else {
                fail(r.at("builtin"), "unknown family '" + name + "'");
            }
        } catch (const SpecError& e) {
            fail(path, e.what());
        } catch (const StructuralError& e) {
            fail(path, e.what());
        }
    } else if (form == "atoms") {
        const auto& atoms = r.raw("atoms");
        if (!atoms.is_array() || atoms.empty()) fail(r.at("atoms"), "expected a nonempty array");
        std::vector<AtomSeries> list;
        for (std::size_t i = 0; i < atoms.size(); ++i) list.push_back(parse_series(atoms[i], item(r.at("atoms"), i)));
        family = per_atom_family(std::move(list));
    } else {
        const auto file = resolve(base, r.text("table"));
        std::vector<AtomMeta> meta;
        if (r.has("meta")) {
            const auto& m = r.raw("meta");
            if (!m.is_array()) fail(r.at("meta"), "expected an array");
            for (std::size_t i = 0; i < m.size(); ++i) meta.push_back(parse_declaration(m[i], item(r.at("meta"), i)));
        }
        try {
            family = table_family(read_family_csv(file), std::move(meta), file.filename().string());
        } catch (const std::exception& e) {
            fail(r.at("table"), e.what());
        }
    }
    r.finish();
    return *family;
}

//==============================================================================
// Generators
//==============================================================================

GeneratorSpec parse_generator(const Json& json, const std::string& path, std::uint64_t seed) {
    Reader r(json, path);
    const auto kind = r.text("kind");
    GeneratorSpec spec;
    spec.seed = seed;
    spec.length = r.whole("length");
    spec.paths = r.whole("paths", 1);
    if (spec.length == 0) fail(r.at("length"), "must be positive");
    if (spec.paths == 0) fail(r.at("paths"), "must be positive");
    if (kind == "iid") {
        spec.kind = IIDKind{parse_law(r.raw("law"), r.at("law"))};
    } else if (kind == "m_dependent") {
        MDependentKind k{parse_law(r.raw("innovation"), r.at("innovation")), r.whole("lag", 1), {}};
        if (r.has("kernel")) k.kernel = r.numbers("kernel");
        spec.kind = std::move(k);
    } else if (kind == "correlated_variance") {
        CorrelatedVarianceKind k;
        k.mean = r.number("mean");
        k.variance = r.number("variance");
        k.decay = r.number("decay", 0.0);
        k.c = r.number("c", 1.0);
        if (r.has("rule")) {
            try {
                k.rule = parse_correlation_rule(r.text("rule"));
            } catch (const std::exception& e) {
                fail(r.at("rule"), e.what());
            }
        }
        if (k.mean < 0) fail(r.at("mean"), "must be nonnegative");
        if (k.variance < 0) fail(r.at("variance"), "must be nonnegative");
        if (k.decay < 0) fail(r.at("decay"), "must be nonnegative");
        if (k.c <= 0) fail(r.at("c"), "must be positive");
        spec.kind = k;
    } else {
        fail(r.at("kind"), "unknown generator kind '" + kind + "'");
    }
    r.finish();
    try {
        validate(spec);
    } catch (const SpecError& e) {
        fail(path, e.what());
    }
    return spec;
}

} // namespace

//==============================================================================
// Top level
//==============================================================================

ExperimentConfig parse_config(const Json& json, std::filesystem::path base_dir) {
    Reader r(json, "");
    ExperimentConfig c;
    c.base_dir = std::move(base_dir);
    c.command = r.text("command");
    if (c.command != "partition" && c.command != "slln") fail("command", "expected \"partition\" or \"slln\"");
    if (r.has("name")) c.name = r.text("name");
    c.seed = r.whole("seed", 0);
    if (r.has("mode")) {
        try {
            c.mode = parse_mode(r.text("mode"));
        } catch (const std::exception& e) {
            fail("mode", e.what());
        }
    }
    if (r.has("output")) c.output = r.text("output");

    if (r.has("tolerances")) {
        auto t = r.sub("tolerances");
        if (t.has("tol")) {
            c.tolerances.tol = t.number("tol");
            if (*c.tolerances.tol <= 0) fail(t.at("tol"), "must be positive");
        }
        if (t.has("stability_span")) c.tolerances.stability_span = t.whole("stability_span");
        if (t.has("eps_grid")) {
            c.tolerances.eps_grid = t.numbers("eps_grid");
            if (c.tolerances.eps_grid.empty()) fail(t.at("eps_grid"), "must not be empty");
            for (std::size_t i = 0; i < c.tolerances.eps_grid.size(); ++i) {
                const double e = c.tolerances.eps_grid[i];
                if (!(e > 0 && e < 1)) fail(item(t.at("eps_grid"), i), "epsilon must lie in (0,1)");
            }
        }
        t.finish();
    }

    if (r.has("oracle")) {
        auto o = r.sub("oracle");
        c.oracle_samples = o.whole("samples", 1000);
        if (c.oracle_samples == 0) fail(o.at("samples"), "must be positive");
        if (o.has("grid")) {
            auto g = o.sub("grid");
            GridSpec grid;
            const auto scale = g.has("scale") ? g.text("scale") : std::string("linear");
            if (scale != "linear" && scale != "geometric") fail(g.at("scale"), "expected \"linear\" or \"geometric\"");
            grid.geometric = scale == "geometric";
            grid.low = g.number("low");
            grid.high = g.number("high");
            grid.points = g.whole("points", 64);
            if (!(grid.high > grid.low) || grid.low < 0 || (grid.geometric && grid.low <= 0))
                fail(g.path(), "need 0 <= low < high (low > 0 for a geometric grid)");
            if (grid.points < 2) fail(g.at("points"), "need at least 2 points");
            g.finish();
            c.oracle_grid = grid;
        }
        o.finish();
    }

    if (r.has("expect")) {
        auto e = r.sub("expect");
        if (e.has("J_b")) c.expect.bounded = as_atoms(e.raw("J_b"), e.at("J_b"));
        if (e.has("finite_set")) c.expect.finite_set = as_atoms(e.raw("finite_set"), e.at("finite_set"));
        if (e.has("regime")) c.expect.regime = e.text("regime");
        e.finish();
    }

    if (c.command == "partition") {
        auto s = r.sub("space");
        const auto form = s.one_of({"masses", "uniform", "geometric"});
        try {
            if (form == "masses") {
                c.masses = s.numbers("masses");
                c.tail_mass = s.number("tail_mass", 0.0);
            } else if (form == "uniform") {
                const auto space = AtomicSpace::uniform(s.whole("uniform"));
                c.masses.assign(space.masses().begin(), space.masses().end());
            } else {
                auto g = s.sub("geometric");
                const auto space = AtomicSpace::geometric(g.whole("atoms"), g.number("ratio"));
                g.finish();
                c.masses.assign(space.masses().begin(), space.masses().end());
                c.tail_mass = space.tail_mass();
            }
            AtomicSpace(c.masses, c.tail_mass);
        } catch (const StructuralError& e) {
            fail("space", e.what());
        }
        s.finish();

        c.family = r.raw("family");
        parse_family(c.family, "family", c.base_dir, c.seed);

        auto w = r.sub("window");
        WindowSpec window;
        const auto wform = w.one_of({"horizon", "indices", "komlos"});
        if (wform == "horizon") {
            window.kind = WindowSpec::Kind::Horizon;
            window.horizon = w.whole("horizon");
            if (window.horizon == 0) fail(w.at("horizon"), "must be positive");
        } else if (wform == "indices") {
            window.kind = WindowSpec::Kind::Indices;
            window.indices = as_unsigneds(w.raw("indices"), w.at("indices"));
            if (window.indices.empty()) fail(w.at("indices"), "must not be empty");
            for (std::size_t i = 0; i < window.indices.size(); ++i) {
                if (window.indices[i] == 0 || (i > 0 && window.indices[i] <= window.indices[i - 1]))
                    fail(item(w.at("indices"), i), "indices must be positive and strictly increasing");
            }
        } else {
            auto k = w.sub("komlos");
            window.kind = WindowSpec::Kind::Komlos;
            window.horizon = k.whole("horizon");
            window.block = k.whole("block", 64);
            if (window.horizon == 0) fail(k.at("horizon"), "must be positive");
            if (window.block == 0) fail(k.at("block"), "must be positive");
            k.finish();
        }
        w.finish();
        c.window = window;
    } else {
        c.generator = r.raw("generator");
        parse_generator(c.generator, "generator", c.seed);
    }
    r.finish();
    return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError(path.string() + ": cannot open");
    Json json;
    try {
        json = Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
    try {
        return parse_config(json, path.parent_path());
    } catch (const ConfigError& e) {
        throw ConfigError(path.filename().string() + ": " + e.what());
    }
}

Json to_json(const ExperimentConfig& c) {
    Json out = Json::object();
    if (!c.name.empty()) out["name"] = c.name;
    out["command"] = c.command;
    out["seed"] = c.seed;
    out["mode"] = to_string(c.mode);
    if (!c.output.empty()) out["output"] = c.output;
    if (c.command == "partition") {
        out["space"] = Json{{"masses", c.masses}, {"tail_mass", c.tail_mass}};
        out["family"] = c.family;
        const auto& w = *c.window;
        switch (w.kind) {
        case WindowSpec::Kind::Horizon: out["window"] = Json{{"horizon", w.horizon}}; break;
        case WindowSpec::Kind::Indices: out["window"] = Json{{"indices", w.indices}}; break;
        case WindowSpec::Kind::Komlos:
            out["window"] = Json{{"komlos", Json{{"horizon", w.horizon}, {"block", w.block}}}};
            break;
        }
    } else {
        out["generator"] = c.generator;
    }
    Json tol = Json::object();
    if (c.tolerances.tol) tol["tol"] = *c.tolerances.tol;
    if (c.tolerances.stability_span) tol["stability_span"] = *c.tolerances.stability_span;
    tol["eps_grid"] = c.tolerances.eps_grid;
    out["tolerances"] = tol;
    Json oracle{{"samples", c.oracle_samples}};
    if (c.oracle_grid) {
        const auto& g = *c.oracle_grid;
        oracle["grid"] = Json{{"scale", g.geometric ? "geometric" : "linear"},
                              {"low", g.low},
                              {"high", g.high},
                              {"points", g.points}};
    }
    out["oracle"] = oracle;
    Json expect = Json::object();
    if (c.expect.bounded) expect["J_b"] = to_json(*c.expect.bounded);
    if (c.expect.finite_set) expect["finite_set"] = to_json(*c.expect.finite_set);
    if (c.expect.regime) expect["regime"] = *c.expect.regime;
    if (!expect.empty()) out["expect"] = expect;
    return out;
}

bool equivalent(const ExperimentConfig& a, const ExperimentConfig& b) { return to_json(a) == to_json(b); }

//==============================================================================
// Builders
//==============================================================================

AtomicSpace build_space(const ExperimentConfig& config) { return AtomicSpace(config.masses, config.tail_mass); }

LimitParams build_limit_params(const ExperimentConfig& config) {
    LimitParams params;
    if (config.command == "slln") params.tol = 0.05;
    if (config.tolerances.tol) params.tol = *config.tolerances.tol;
    if (config.tolerances.stability_span) params.stability_span = *config.tolerances.stability_span;
    return params;
}

std::vector<double> build_oracle_grid(const ExperimentConfig& config, const Partition& part) {
    if (config.oracle_grid) {
        const auto& g = *config.oracle_grid;
        return g.geometric ? geometric_grid(g.low, g.high, g.points) : linear_grid(g.low, g.high, g.points);
    }
    double top = 1.0;
    for (const auto& [label, c] : part.bounds) top = std::max(top, c);
    return linear_grid(0.0, 2.0 * top, 64);
}

CoefficientFamily build_family(const ExperimentConfig& config) {
    if (config.command != "partition") throw ConfigError("family: only partition configs carry a family");
    return parse_family(config.family, "family", config.base_dir, config.seed);
}

GeneratorSpec build_generator(const ExperimentConfig& config) {
    if (config.command != "slln") throw ConfigError("generator: only slln configs carry a generator");
    return parse_generator(config.generator, "generator", config.seed);
}

} // namespace cesaro
