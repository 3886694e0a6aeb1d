#include "cesaro/slln.hpp"
#include "cesaro/errors.hpp"
#include "cesaro/family_library.hpp"
#include "cesaro/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <thread>

namespace cesaro {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::uint64_t kPathStream = 0x9A7B5ULL;

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::vector<double> normalized_kernel(const MDependentKind& kind) {
    std::vector<double> w = kind.kernel.empty() ? std::vector<double>(kind.lag + 1, 1.0) : kind.kernel;
    const double total = std::accumulate(w.begin(), w.end(), 0.0);
    for (auto& x : w) x /= total;
    return w;
}

double cv_variance(const CorrelatedVarianceKind& k, std::size_t n) {
    return k.variance * std::pow(static_cast<double>(n), -k.decay);
}

} // namespace

std::string to_string(CorrelationRule rule) {
    switch (rule) {
    case CorrelationRule::Antithetic: return "antithetic";
    case CorrelationRule::Independent: return "independent";
    case CorrelationRule::FullyCorrelated: return "fully_correlated";
    }
    return "antithetic";
}

CorrelationRule parse_correlation_rule(const std::string& text) {
    if (text == "antithetic") return CorrelationRule::Antithetic;
    if (text == "independent") return CorrelationRule::Independent;
    if (text == "fully_correlated") return CorrelationRule::FullyCorrelated;
    throw ConfigError("unknown correlation rule '" + text + "'");
}

//==============================================================================
// GeneratorSpec
//==============================================================================

double GeneratorSpec::declared_mean() const {
    return std::visit(overloaded{[](const IIDKind& k) { return k.law.mean(); },
                                 [](const MDependentKind& k) { return k.innovation.mean(); },
                                 [](const CorrelatedVarianceKind& k) { return k.mean; }},
                      kind);
}

double GeneratorSpec::variance(std::size_t n) const {
    return std::visit(overloaded{[](const IIDKind& k) { return k.law.variance(); },
                                 [](const MDependentKind& k) {
                                     const auto w = normalized_kernel(k);
                                     double s = 0.0;
                                     for (double x : w) s += x * x;
                                     return k.innovation.variance() * s;
                                 },
                                 [n](const CorrelatedVarianceKind& k) { return cv_variance(k, n); }},
                      kind);
}

std::string GeneratorSpec::describe() const {
    std::ostringstream os;
    std::visit(overloaded{[&](const IIDKind& k) { os << "iid " << k.law.name(); },
                          [&](const MDependentKind& k) {
                              os << "m-dependent lag " << k.lag << " over " << k.innovation.name();
                          },
                          [&](const CorrelatedVarianceKind& k) {
                              os << "correlated-variance mean " << k.mean << " var " << k.variance << " decay "
                                 << k.decay << " rule " << to_string(k.rule) << " c " << k.c;
                          }},
               kind);
    return os.str();
}

double analytic_variance_ratio(const CorrelatedVarianceKind& kind, std::size_t N) {
    double sum_var = 0.0;
    for (std::size_t n = 1; n <= N; ++n) sum_var += cv_variance(kind, n);
    if (sum_var == 0.0) return 1.0;
    switch (kind.rule) {
    case CorrelationRule::Independent: return 1.0;
    case CorrelationRule::Antithetic: {
        double cov = 0.0;
        for (std::size_t n = 2; n <= N; n += 2) cov += std::sqrt(cv_variance(kind, n - 1) * cv_variance(kind, n));
        return (sum_var - 2.0 * cov) / sum_var;
    }
    case CorrelationRule::FullyCorrelated: {
        double sd_sum = 0.0;
        for (std::size_t n = 1; n <= N; ++n) sd_sum += std::sqrt(cv_variance(kind, n));
        return sd_sum * sd_sum / sum_var;
    }
    }
    return kInf;
}

void validate(const GeneratorSpec& spec) {
    if (spec.length == 0) throw SpecError("length: must be positive");
    if (spec.paths == 0) throw SpecError("paths: must be positive");
    std::visit(overloaded{
                   [](const IIDKind&) {},
                   [](const MDependentKind& k) {
                       if (k.lag < 1) throw SpecError("lag: dependence lag must be >= 1");
                       if (!k.kernel.empty() && k.kernel.size() != k.lag + 1)
                           throw SpecError("kernel: need exactly lag + 1 weights");
                       double total = 0.0;
                       for (double w : k.kernel) {
                           if (!(w >= 0.0) || !std::isfinite(w)) throw SpecError("kernel: weights must be finite and >= 0");
                           total += w;
                       }
                       if (!k.kernel.empty() && !(total > 0.0)) throw SpecError("kernel: weights must not all vanish");
                       if (!std::isfinite(k.innovation.mean()))
                           throw SpecError("innovation: mixing constructions need a finite mean");
                       if (!std::isfinite(k.innovation.variance()))
                           throw SpecError("innovation: mixing constructions need xi_1 in L2 (finite variance)");
                   },
                   [&spec](const CorrelatedVarianceKind& k) {
                       if (!(k.mean >= 0.0) || !std::isfinite(k.mean)) throw SpecError("mean: must be finite and >= 0");
                       if (!(k.variance >= 0.0) || !std::isfinite(k.variance))
                           throw SpecError("variance: must be finite and >= 0");
                       if (!(k.decay >= 0.0))
                           throw SpecError("decay: must be >= 0 so that sum Var[xi_n]/n^2 converges");
                       if (!(k.c > 0.0) || !std::isfinite(k.c)) throw SpecError("c: must lie in (0, inf)");
                       if (std::sqrt(3.0 * k.variance) > k.mean)
                           throw SpecError("variance: sqrt(3 * variance) must not exceed mean (terms must stay nonnegative)");
                       double worst = 0.0;
                       std::size_t at = 1;
                       for (std::size_t N = 1; N <= spec.length; N = (N == spec.length) ? N + 1 : std::min(2 * N, spec.length)) {
                           const double r = analytic_variance_ratio(k, N);
                           if (r > worst) {
                               worst = r;
                               at = N;
                           }
                       }
                       if (worst > k.c) {
                           std::ostringstream os;
                           os << "rule: Var[sum_{n<=N} xi_n] <= c * sum Var[xi_n] fails (ratio " << worst << " at N = " << at
                              << " exceeds c = " << k.c << ")";
                           throw SpecError(os.str());
                       }
                   }},
               spec.kind);
}

//==============================================================================
// Generation
//==============================================================================

std::vector<double> EmpiricalRun::cesaro_path(std::size_t p) const {
    std::vector<double> out(length);
    double sum = 0.0;
    const auto xs = path(p);
    for (std::size_t n = 1; n <= length; ++n) {
        sum += xs[n - 1];
        out[n - 1] = sum / static_cast<double>(n);
    }
    return out;
}

double EmpiricalRun::final_cesaro(std::size_t p) const {
    const auto xs = path(p);
    return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(length);
}

namespace {

void fill_path(const GeneratorSpec& spec, std::size_t p, std::span<double> out) {
    Engine engine(child_seed(spec.seed, kPathStream, p));
    const std::size_t length = out.size();
    std::visit(overloaded{
                   [&](const IIDKind& k) {
                       for (auto& x : out) x = k.law.sample(engine);
                   },
                   [&](const MDependentKind& k) {
                       const auto w = normalized_kernel(k);
                       std::vector<double> eps(length + k.lag);
                       for (auto& e : eps) e = k.innovation.sample(engine);
                       for (std::size_t n = 0; n < length; ++n) {
                           double v = 0.0;
                           for (std::size_t j = 0; j <= k.lag; ++j) v += w[j] * eps[n + j];
                           out[n] = v;
                       }
                   },
                   [&](const CorrelatedVarianceKind& k) {
                       double shared = 0.0;
                       if (k.rule == CorrelationRule::FullyCorrelated) shared = 2.0 * uniform_open(engine) - 1.0;
                       double u = 0.0;
                       for (std::size_t n = 1; n <= length; ++n) {
                           const double s = std::sqrt(3.0 * cv_variance(k, n));
                           switch (k.rule) {
                           case CorrelationRule::Independent: u = 2.0 * uniform_open(engine) - 1.0; break;
                           case CorrelationRule::FullyCorrelated: u = shared; break;
                           case CorrelationRule::Antithetic:
                               u = (n % 2 == 1) ? 2.0 * uniform_open(engine) - 1.0 : -u;
                               break;
                           }
                           out[n - 1] = std::max(0.0, k.mean + s * u);
                       }
                   }},
               spec.kind);
}

} // namespace

EmpiricalRun generate(const GeneratorSpec& spec, unsigned jobs) {
    validate(spec);
    EmpiricalRun run;
    run.length = spec.length;
    run.paths = spec.paths;
    run.values.assign(spec.length * spec.paths, 0.0);
    jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(spec.paths)));

    auto work = [&](unsigned worker) {
        for (std::size_t p = worker; p < spec.paths; p += jobs)
            fill_path(spec, p, std::span<double>(run.values.data() + p * spec.length, spec.length));
    };
    if (jobs == 1) {
        work(0);
    } else {
        std::vector<std::jthread> threads;
        for (unsigned w = 0; w < jobs; ++w) threads.emplace_back(work, w);
    }
    return run;
}

//==============================================================================
// Variance condition
//==============================================================================

VarianceReport verify_variance_condition(const EmpiricalRun& run, double c) {
    if (run.paths < 200) throw StructuralError("variance condition needs >= 200 Monte Carlo paths");
    if (!(c > 0.0)) throw StructuralError("variance condition: c must be positive");

    VarianceReport report;
    report.c = c;
    report.slack = 3.0 / std::sqrt(static_cast<double>(run.paths));
    const double P = static_cast<double>(run.paths);

    std::vector<double> partial(run.paths, 0.0);
    double sum_of_vars = 0.0;
    std::size_t next = 1;
    report.holds = true;
    for (std::size_t n = 1; n <= run.length; ++n) {
        double m = 0.0, m2 = 0.0;
        for (std::size_t p = 0; p < run.paths; ++p) {
            const double x = run.at(p, n);
            partial[p] += x;
            m += x;
        }
        m /= P;
        for (std::size_t p = 0; p < run.paths; ++p) m2 += (run.at(p, n) - m) * (run.at(p, n) - m);
        sum_of_vars += m2 / (P - 1.0);

        if (n == next || n == run.length) {
            const double mean_sum = std::accumulate(partial.begin(), partial.end(), 0.0) / P;
            double v = 0.0;
            for (double s : partial) v += (s - mean_sum) * (s - mean_sum);
            v /= (P - 1.0);
            VarianceCheckRow row{n, v, sum_of_vars, 0.0, false};
            row.ratio = sum_of_vars > 0.0 ? v / sum_of_vars : (v > 0.0 ? kInf : 1.0);
            row.holds = row.ratio <= c * (1.0 + report.slack);
            report.holds = report.holds && row.holds;
            report.rows.push_back(row);
            if (n == next) next *= 2;
        }
    }
    return report;
}

//==============================================================================
// Regime check
//==============================================================================

std::string to_string(RegimeVerdict verdict) {
    switch (verdict) {
    case RegimeVerdict::FiniteBranchHolds: return "finite_branch_holds";
    case RegimeVerdict::InfiniteBranchHolds: return "infinite_branch_holds";
    case RegimeVerdict::Broken: return "broken";
    case RegimeVerdict::Inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

AtomicSpace path_space(std::size_t paths) {
    if (paths == 0) throw StructuralError("path space needs at least one path");
    std::vector<double> masses(paths, 1.0 / static_cast<double>(paths));
    const double drift = 1.0 - std::accumulate(masses.begin(), masses.end(), 0.0);
    masses.back() += drift;
    return AtomicSpace(std::move(masses), 0.0);
}

CoefficientFamily run_family(const EmpiricalRun& run) {
    FamilyTable table;
    for (std::size_t p = 0; p < run.paths; ++p) table.atom_names.push_back("path" + std::to_string(p));
    table.rows.assign(run.length, std::vector<double>(run.paths));
    for (std::size_t p = 0; p < run.paths; ++p) {
        for (std::size_t n = 1; n <= run.length; ++n) table.rows[n - 1][p] = run.at(p, n);
    }
    return table_family(std::move(table), {}, "empirical run");
}

namespace {

/// At most `cap` members, evenly strided and always including the last one.
std::vector<std::size_t> member_times(std::size_t length, std::size_t cap) {
    std::vector<std::size_t> times;
    const std::size_t stride = std::max<std::size_t>(1, (length + cap - 1) / cap);
    for (std::size_t n = length; n >= 1 && times.size() < cap; n = n > stride ? n - stride : 0) times.push_back(n);
    std::reverse(times.begin(), times.end());
    return times;
}

double median_value(const EmpiricalRun& run) {
    std::vector<double> xs(run.values);
    auto mid = xs.begin() + static_cast<std::ptrdiff_t>(xs.size() / 2);
    std::nth_element(xs.begin(), mid, xs.end());
    return *mid;
}

} // namespace

RegimeReport slln_regime_check(const GeneratorSpec& spec, const EmpiricalRun& run, const RegimeParams& params) {
    if (run.paths < params.min_paths)
        throw StructuralError("regime check needs at least " + std::to_string(params.min_paths) + " paths");
    if (run.length != spec.length || run.paths != spec.paths)
        throw StructuralError("run does not match its generator spec");

    RegimeReport report;
    report.mean_finite = std::isfinite(spec.declared_mean());

    const auto one_atom = AtomicSpace::uniform(1);
    Trajectory means(run.length, run.paths);
    for (std::size_t p = 0; p < run.paths; ++p) {
        const auto c = run.cesaro_path(p);
        Trajectory single(run.length, 1);
        for (std::size_t n = 1; n <= run.length; ++n) {
            single.at(n, 0) = c[n - 1];
            means.at(n, p) = c[n - 1];
        }
        const auto profile = limit_profile(one_atom, single, params.limits);
        switch (profile.limits.front().kind) {
        case LimitKind::Finite: ++report.paths_finite; break;
        case LimitKind::Infinite: ++report.paths_infinite; break;
        case LimitKind::NoLimit: ++report.paths_no_limit; break;
        }
    }
    const double quorum = params.majority * static_cast<double>(run.paths);
    if (static_cast<double>(report.paths_finite) >= quorum) report.cesaro_converges = true;
    else if (static_cast<double>(report.paths_infinite) >= quorum) report.cesaro_converges = false;

    const auto space = path_space(run.paths);
    const double scale = std::max(median_value(run), 1e-12);
    const auto grid = geometric_grid(scale * 1e-3, scale * 1e3, params.grid_points);
    const auto times = member_times(run.length, 4096);

    std::vector<SimpleRV> members, cesaro_members;
    for (auto n : times) {
        std::vector<double> x(run.paths), c(run.paths);
        for (std::size_t p = 0; p < run.paths; ++p) {
            x[p] = run.at(p, n);
            c[p] = means.at(n, p);
        }
        members.emplace_back(std::move(x));
        cesaro_members.emplace_back(std::move(c));
    }
    const HullTailProfile hull(members, space, grid, params.oracle);
    const HullTailProfile cesaro_hull(cesaro_members, space, grid, params.oracle);
    report.hull_bounded = true;
    report.cesaro_hull_bounded = true;
    for (double eps : params.eps_grid) {
        const auto a = hull.least_level(eps);
        const auto b = cesaro_hull.least_level(eps);
        report.hull_levels.push_back(a ? *a : std::numeric_limits<double>::quiet_NaN());
        report.cesaro_hull_levels.push_back(b ? *b : std::numeric_limits<double>::quiet_NaN());
        report.hull_bounded = report.hull_bounded && a.has_value();
        report.cesaro_hull_bounded = report.cesaro_hull_bounded && b.has_value();
    }

    if (!report.cesaro_converges) {
        report.verdict = RegimeVerdict::Inconclusive;
        return report;
    }
    const bool finite = report.mean_finite;
    if (*report.cesaro_converges != finite) report.broken_edges.push_back("declared mean vs Cesaro classifier");
    if (report.hull_bounded != finite) report.broken_edges.push_back("declared mean vs hull C boundedness");
    if (report.cesaro_hull_bounded != finite) report.broken_edges.push_back("declared mean vs hull C-bar boundedness");
    if (report.broken_edges.empty())
        report.verdict = finite ? RegimeVerdict::FiniteBranchHolds : RegimeVerdict::InfiniteBranchHolds;
    else
        report.verdict = RegimeVerdict::Broken;
    return report;
}

} // namespace cesaro
