#include "sawmap/classify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <string>

#include "sawmap/errors.hpp"

namespace sawmap::classify {

const char* to_string(Type t) noexcept
{
    switch (t) {
    case Type::I:
        return "I";
    case Type::II:
        return "II";
    case Type::III:
        return "III";
    }
    return "?";
}

const char* to_string(Boundary b) noexcept
{
    switch (b) {
    case Boundary::none:
        return "none";
    case Boundary::beta_eq_1:
        return "beta_eq_1";
    case Boundary::sum_eq_1:
        return "sum_eq_1";
    }
    return "?";
}

IntervalType classify_interval(double alpha, double beta, double eps)
{
    if (!std::isfinite(alpha) || !std::isfinite(beta)) {
        throw MalformedInputError("classify_interval: non-finite slope");
    }
    if (!(alpha > 1.0) || !(beta > 0.0)) {
        throw PreconditionError("classify_interval requires alpha > 1 and beta > 0");
    }
    const double sum = 1.0 / alpha + 1.0 / beta;
    IntervalType out;
    if (std::abs(beta - 1.0) <= eps) {
        out.boundary = Boundary::beta_eq_1;
    } else if (std::abs(sum - 1.0) <= eps) {
        out.boundary = Boundary::sum_eq_1;
    }
    if (beta <= 1.0) {
        out.tag = Type::I;
    } else if (sum >= 1.0) {
        out.tag = Type::II;
    } else {
        out.tag = Type::III;
    }
    return out;
}

RenormTrace renorm_index(double alpha, double beta, int max_iter)
{
    if (!std::isfinite(alpha) || !std::isfinite(beta)) {
        throw MalformedInputError("renorm_index: non-finite slope");
    }
    if (!(alpha > 1.0) || !(beta > 1.0) || !(1.0 / alpha + 1.0 / beta > 1.0)) {
        throw PreconditionError("renorm_index requires beta > 1 and 1/alpha + 1/beta > 1");
    }
    RenormTrace trace;
    trace.xi.push_back(alpha);
    trace.nu.push_back(beta);
    for (int i = 0; i < max_iter; ++i) {
        const double xi = trace.xi.back();
        const double nu = trace.nu.back();
        trace.xi.push_back(nu * nu);
        trace.nu.push_back(xi * nu);
        const double sum = 1.0 / trace.xi.back() + 1.0 / trace.nu.back();
        if (sum <= 1.0 + boundary_epsilon) {
            trace.j = i + 1;
            trace.boundary = std::abs(sum - 1.0) <= boundary_epsilon;
            return trace;
        }
    }
    throw ConvergenceError("renorm_index: no level with 1/xi + 1/nu <= 1 within "
                           + std::to_string(max_iter) + " iterations");
}

std::vector<int> sigma_permutation(int N)
{
    if (N < 0 || N > 20) {
        throw DomainError("sigma_permutation: N must lie in [0, 20]");
    }
    std::vector<int> sigma{1};
    for (int level = 0; level < N; ++level) {
        const std::size_t m = sigma.size();
        std::vector<int> next(2 * m);
        // 1-based: next[m+i] = 2 sigma[i] - 1, next[i] = next[2m+1-i] + 1.
        for (std::size_t i = 0; i < m; ++i) {
            next[m + i] = 2 * sigma[i] - 1;
        }
        for (std::size_t i = 0; i < m; ++i) {
            next[i] = next[2 * m - 1 - i] + 1;
        }
        sigma = std::move(next);
    }
    return sigma;
}

SkewTent tent_of(const SawMap& map, int k)
{
    const auto& s = map.sequences();
    return {s.r(k), s.p(k), s.alpha(k), s.beta(k)};
}

namespace {

using MapFn = std::function<double(double)>;

constexpr double endpoint_tolerance = 1e-9;
constexpr double periodic_tolerance = 1e-10;

std::vector<Interval> build_orbit(const std::vector<SkewTent>& levels, std::size_t level)
{
    const SkewTent& m = levels[level];
    if (level + 1 == levels.size()) {
        return {{m(m.peak), m.peak}};
    }
    const auto inner = build_orbit(levels, level + 1);
    std::vector<Interval> out;
    out.reserve(2 * inner.size());
    for (const auto& b : inner) {
        // b sits on the falling branch of m, so the image reverses endpoints.
        out.push_back(b);
        out.push_back({m(b.hi), m(b.lo)});
    }
    return out;
}

// Image of [lo, hi] under a unimodal map with a single turning point.
Interval image(const MapFn& f, double apex, const Interval& iv)
{
    const double a = f(iv.lo);
    const double b = f(iv.hi);
    Interval out{std::min(a, b), std::max(a, b)};
    if (iv.lo < apex && apex < iv.hi) {
        out.hi = std::max(out.hi, f(apex));
        out.lo = std::min(out.lo, f(apex));
    }
    return out;
}

std::vector<int> spatial_order(const std::vector<Interval>& a)
{
    std::vector<int> idx(a.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](int x, int y) { return a[x].lo < a[y].lo; });
    for (auto& i : idx) {
        ++i;
    }
    return idx;
}

void verify_cycle(const AttractorStructure& s, const MapFn& f, double apex, double peak)
{
    const double scale = std::abs(peak);
    auto close = [&](double x, double y) {
        return std::abs(x - y) <= endpoint_tolerance * std::max(std::abs(x), scale);
    };

    std::vector<double> orbit{peak};
    double x = peak;
    const std::size_t len = std::size_t{2} << s.N;
    for (std::size_t m = 0; m < len; ++m) {
        x = f(x);
        orbit.push_back(x);
    }
    for (std::size_t i = 0; i < s.A.size(); ++i) {
        for (double end : {s.A[i].lo, s.A[i].hi}) {
            const bool on_orbit
                = std::any_of(orbit.begin(), orbit.end(), [&](double o) { return close(o, end); });
            if (!on_orbit) {
                throw InternalConsistencyError("attractor endpoint " + std::to_string(end)
                                               + " of A_" + std::to_string(i + 1)
                                               + " is not on the critical orbit");
            }
        }
        const Interval img = image(f, apex, s.A[i]);
        const Interval& next = s.A[(i + 1) % s.A.size()];
        if (!close(img.lo, next.lo) || !close(img.hi, next.hi)) {
            throw InternalConsistencyError("T(A_" + std::to_string(i + 1) + ") != A_"
                                           + std::to_string((i + 1) % s.A.size() + 1));
        }
    }
    if (s.sigma != sigma_permutation(s.N)) {
        throw InternalConsistencyError("spatial order of attractor intervals differs from the "
                                       "doubling permutation");
    }
    std::vector<Interval> sorted = s.A;
    std::sort(sorted.begin(), sorted.end(), [](auto& a, auto& b) { return a.lo < b.lo; });
    for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
        if (!(sorted[i].hi < sorted[i + 1].lo)) {
            throw InternalConsistencyError("attractor intervals overlap");
        }
    }
    const Interval g{f(peak), peak};
    for (const auto& a : s.A) {
        if (!g.contains(a, endpoint_tolerance * scale)) {
            throw InternalConsistencyError("attractor interval outside [T(p), p]");
        }
    }
}

std::vector<std::vector<double>> build_skeleton(const std::vector<SkewTent>& levels, int N,
                                                const MapFn& f, const std::vector<Interval>& a)
{
    std::vector<std::vector<double>> out;
    const double peak = levels.front().peak;
    const Interval g{f(peak), peak};
    for (int i = 0; i < N; ++i) {
        const std::size_t period = std::size_t{1} << i;
        std::vector<double> orbit;
        double x = levels[static_cast<std::size_t>(i)].falling_fixed_point();
        for (std::size_t m = 0; m < period; ++m) {
            orbit.push_back(x);
            x = f(x);
        }
        std::sort(orbit.begin(), orbit.end());
        for (double pt : orbit) {
            double y = pt;
            for (std::size_t m = 0; m < period; ++m) {
                y = f(y);
            }
            if (std::abs(y - pt) > periodic_tolerance) {
                throw InternalConsistencyError("skeleton point " + std::to_string(pt)
                                               + " fails its period-" + std::to_string(period)
                                               + " residual");
            }
            const bool in_lambda
                = std::any_of(a.begin(), a.end(), [&](const Interval& iv) { return iv.contains(pt); });
            if (!g.contains(pt) || in_lambda) {
                throw InternalConsistencyError("skeleton point " + std::to_string(pt)
                                               + " not in G minus the attractor");
            }
        }
        out.push_back(std::move(orbit));
    }
    return out;
}

AttractorStructure construct(const SkewTent& tent, const MapFn& f)
{
    const auto type = classify_interval(tent.rise, tent.fall);
    if (type.tag != Type::II || type.flagged()) {
        throw PreconditionError(std::string("attractor construction requires a non-boundary type II "
                                            "interval, got type ")
                                + to_string(type.tag)
                                + (type.flagged() ? std::string(" (") + to_string(type.boundary) + ")"
                                                  : std::string()));
    }
    const auto trace = renorm_index(tent.rise, tent.fall);

    AttractorStructure s;
    s.N = trace.N();
    s.levels.push_back(tent);
    for (int i = 0; i < s.N; ++i) {
        s.levels.push_back(s.levels.back().renormalized());
    }
    for (const auto& m : s.levels) {
        s.partition.push_back({m.apex - (m.peak - m.apex) / m.rise, m.apex + (m.peak - m.apex) / m.fall});
    }
    s.A = build_orbit(s.levels, 0);
    s.sigma = spatial_order(s.A);
    verify_cycle(s, f, tent.apex, tent.peak);
    s.skeleton = build_skeleton(s.levels, s.N, f, s.A);
    return s;
}

} // namespace

AttractorStructure attractor_intervals(const SkewTent& tent)
{
    return construct(tent, [tent](double x) { return tent(x); });
}

AttractorStructure attractor_intervals(const SawMap& map, int k)
{
    if (k < 1 || k > map.k_star()) {
        throw DomainError("attractor_intervals: k must lie in [1, k*]");
    }
    return construct(tent_of(map, k), [&map](double x) { return map.eval(x); });
}

std::vector<std::vector<double>> skeleton_orbits(const SkewTent& tent)
{
    return attractor_intervals(tent).skeleton;
}

std::vector<std::vector<double>> skeleton_orbits(const SawMap& map, int k)
{
    return attractor_intervals(map, k).skeleton;
}

DomainMembership domain_D_membership(double sigma, double lambda, int max_i)
{
    if (!(sigma > 1.0) || !(lambda > -1.0 && lambda < 0.0)) {
        throw DomainError("parameters outside sigma > 1, -1 < lambda < 0");
    }
    const double v = -1.0 / lambda;
    DomainMembership out;
    out.margin = INFINITY;
    double lo = 1.0;      // (sigma^i - 1)/(sigma - 1)
    double hi = sigma;    // sigma^i
    for (int i = 1; i <= max_i; ++i) {
        out.margin = std::min({out.margin, std::abs(v - lo) / v, std::abs(v - hi) / v});
        if (lo > v) {
            return out;
        }
        if (v < hi) {
            out.inside = true;
            out.witness = i;
            return out;
        }
        lo += hi;
        hi *= sigma;
    }
    out.capped = true;
    return out;
}

} // namespace sawmap::classify
