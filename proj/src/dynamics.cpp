#include "sawmap/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>

#include "sawmap/classify.hpp"
#include "sawmap/errors.hpp"

namespace sawmap::dynamics {

const char* to_string(EventKind kind) noexcept
{
    switch (kind) {
    case EventKind::entered_j_star:
        return "entered_j_star";
    case EventKind::entered_J:
        return "entered_J";
    case EventKind::entered_lambda:
        return "entered_lambda";
    case EventKind::dropped_below_e:
        return "dropped_below_e";
    }
    return "?";
}

std::optional<int> OrbitRecord::first(EventKind kind, int k) const
{
    for (const auto& e : events) {
        if (e.kind == kind && (kind == EventKind::entered_j_star || e.k == k)) {
            return e.step;
        }
    }
    return std::nullopt;
}

double distance_to_union(std::span<const Interval> sets, double x) noexcept
{
    double d = INFINITY;
    for (const auto& s : sets) {
        d = std::min(d, s.distance(x));
    }
    return d;
}

namespace {

bool on_breakpoint(const Piece& piece, double x)
{
    return x == piece.domain.lo || x == piece.domain.hi;
}

void require_in_domain(const SawMap& map, double x0)
{
    if (!map.domain().contains(x0) || !std::isfinite(x0)) {
        throw DomainError("x0 = " + std::to_string(x0) + " outside [0, r_0]");
    }
}

void require_k(int k, int hi)
{
    if (k < 1 || k > hi) {
        throw PreconditionError("interval index k = " + std::to_string(k) + " outside [1, "
                                + std::to_string(hi) + "]");
    }
}

classify::Type type_of(const SawMap& map, int k)
{
    return classify::classify_interval(map.sequences().alpha(k), map.sequences().beta(k)).tag;
}

} // namespace

OrbitRecord orbit(const SawMap& map, double x0, int n, std::span<const Interval> lambda,
                  int lambda_k)
{
    if (n < 0) {
        throw DomainError("orbit: negative length");
    }
    require_in_domain(map, x0);
    const auto family = map.intervals();
    const int ks = map.k_star();

    OrbitRecord rec;
    rec.points.reserve(static_cast<std::size_t>(n) + 1);
    std::vector<bool> in_J(static_cast<std::size_t>(ks) + 1, false);
    std::vector<bool> dropped(static_cast<std::size_t>(ks) + 1, false);
    bool seen_j_star = false;
    bool seen_lambda = false;

    double x = x0;
    for (int i = 0; i <= n; ++i) {
        rec.points.push_back(x);
        if (x >= SawMap::zero_floor) {
            const Piece pc = map.piece_at(x);
            rec.pieces.emplace_back(pc.index);
            if (on_breakpoint(pc, x)) {
                rec.breakpoint_steps.push_back(i);
            }
        } else {
            rec.pieces.emplace_back(std::nullopt);
        }
        if (!seen_j_star && family.j_star.contains(x)) {
            seen_j_star = true;
            rec.events.push_back({EventKind::entered_j_star, i, 0});
        }
        for (int k = 1; k <= ks; ++k) {
            const auto uk = static_cast<std::size_t>(k);
            const Interval& J = family.J[uk - 1];
            if (!in_J[uk] && J.contains(x)) {
                in_J[uk] = true;
                rec.events.push_back({EventKind::entered_J, i, k});
            } else if (in_J[uk] && !dropped[uk] && x < J.lo) {
                dropped[uk] = true;
                rec.events.push_back({EventKind::dropped_below_e, i, k});
            }
        }
        if (!lambda.empty() && !seen_lambda
            && distance_to_union(lambda, x) <= lambda_enter_tolerance) {
            seen_lambda = true;
            rec.events.push_back({EventKind::entered_lambda, i, lambda_k});
        }
        if (i < n) {
            x = map.eval(x);
        }
    }
    return rec;
}

StepCount entry_time(const SawMap& map, double x0, std::int64_t cap)
{
    require_in_domain(map, x0);
    const auto family = map.intervals();
    auto inside = [&](double x) {
        if (family.j_star.contains(x)) {
            return true;
        }
        return std::any_of(family.J.begin(), family.J.end(),
                           [x](const Interval& J) { return J.contains(x); });
    };
    double x = x0;
    for (std::int64_t n = 0; n <= cap; ++n) {
        if (inside(x)) {
            return n;
        }
        x = map.eval(x);
    }
    return std::nullopt;
}

StepCount escape_time_type3(const SawMap& map, int k, double x0, std::int64_t cap)
{
    require_k(k, map.k_star() - 1);
    if (type_of(map, k) != classify::Type::III) {
        throw PreconditionError("escape_time_type3 requires J_" + std::to_string(k)
                                + " of type III");
    }
    const Interval J = map.J(k);
    if (!J.contains(x0)) {
        throw PreconditionError("x0 outside J_" + std::to_string(k));
    }
    if (x0 == J.lo) {
        return std::nullopt;
    }
    double x = x0;
    for (std::int64_t n = 0; n <= cap; ++n) {
        if (x < J.lo) {
            return n;
        }
        x = map.eval(x);
    }
    return std::nullopt;
}

StepCount converge_type1(const SawMap& map, int k, double x0, double tol, std::int64_t cap)
{
    require_k(k, map.k_star());
    if (type_of(map, k) != classify::Type::I) {
        throw PreconditionError("converge_type1 requires J_" + std::to_string(k) + " of type I");
    }
    const Interval J = map.J(k);
    if (!J.contains(x0) || x0 == J.lo) {
        throw PreconditionError("x0 must lie in J_" + std::to_string(k) + " minus e_"
                                + std::to_string(k));
    }
    const double target = map.fixed_points(k).falling;
    double x = x0;
    for (std::int64_t n = 0; n <= cap; ++n) {
        if (std::abs(x - target) <= tol) {
            return n;
        }
        x = map.eval(x);
    }
    return std::nullopt;
}

Absorption absorb_into_lambda(const SawMap& map, std::span<const Interval> lambda, double x0,
                              std::int64_t cap, std::int64_t stay)
{
    require_in_domain(map, x0);
    Absorption out;
    double x = x0;
    for (std::int64_t n = 0; n <= cap; ++n) {
        if (distance_to_union(lambda, x) <= lambda_enter_tolerance) {
            out.entered = n;
            break;
        }
        x = map.eval(x);
    }
    if (!out.entered) {
        return out;
    }
    out.stayed = true;
    for (std::int64_t i = 0; i < stay; ++i) {
        x = map.eval(x);
        const double d = distance_to_union(lambda, x);
        out.max_excursion = std::max(out.max_excursion, d);
        if (d > lambda_stay_tolerance) {
            out.stayed = false;
        }
    }
    return out;
}

PreimageTree preimage_tree(const SawMap& map, int depth, std::size_t max_nodes, int piece_limit)
{
    if (depth < 1) {
        throw DomainError("preimage_tree requires depth >= 1");
    }
    const auto& s = map.sequences();
    const Interval js = map.j_star();
    int kmax = piece_limit;
    if (const auto d = s.depth()) {
        kmax = std::min(kmax, *d);
    }

    // Pieces touching J* and lying above q_K for tabulated depth K.
    std::vector<Piece> pieces;
    for (int k = 0; k <= kmax; ++k) {
        if (s.depth() && k + 1 > *s.depth()) {
            break;
        }
        const Piece rise = map.piece({k, Branch::rising});
        if (rise.domain.lo <= js.hi) {
            pieces.push_back(rise);
        }
        if (k >= 1) {
            const Piece fall = map.piece({k, Branch::falling});
            if (fall.domain.lo <= js.hi) {
                pieces.push_back(fall);
            }
        }
    }

    PreimageTree tree;
    tree.depth = depth;
    tree.piece_limit = kmax;
    tree.nodes.push_back({0.0, 0, -1, {}});
    std::vector<int> frontier{0};
    std::vector<PreimageNode> next;
    for (int level = 1; level <= depth && !frontier.empty() && !tree.truncated; ++level) {
        next.clear();
        for (int parent : frontier) {
            const double y = tree.nodes[static_cast<std::size_t>(parent)].x;
            for (const auto& pc : pieces) {
                const double top = s.p(pc.index.k);
                if (y > top) {
                    continue;
                }
                double x = 0.0;
                if (pc.index.branch == Branch::rising) {
                    x = pc.domain.lo + y / pc.slope;
                } else {
                    // Shared with the neighbouring rising piece at y = 0 and y = p_k.
                    if (y == 0.0 || y == top) {
                        continue;
                    }
                    x = pc.domain.hi + y / pc.slope;
                }
                if (x > js.hi || x <= 0.0) {
                    continue;
                }
                next.push_back({x, level, parent, pc.index});
            }
        }
        std::stable_sort(next.begin(), next.end(),
                         [](const PreimageNode& a, const PreimageNode& b) { return a.x < b.x; });
        next.erase(std::unique(next.begin(), next.end(),
                               [](const PreimageNode& a, const PreimageNode& b) {
                                   return a.x == b.x;
                               }),
                   next.end());
        frontier.clear();
        for (const auto& nd : next) {
            if (tree.nodes.size() >= max_nodes) {
                tree.truncated = true;
                break;
            }
            frontier.push_back(static_cast<int>(tree.nodes.size()));
            tree.nodes.push_back(nd);
        }
    }

    for (const auto& nd : tree.nodes) {
        double x = nd.x;
        const PreimageNode* cur = &nd;
        while (cur->parent >= 0) {
            x = map.piece(cur->piece)(x);
            cur = &tree.nodes[static_cast<std::size_t>(cur->parent)];
        }
        tree.max_residual = std::max(tree.max_residual, std::abs(x));
    }
    if (tree.max_residual > 1e-10) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.3g", tree.max_residual);
        throw InternalConsistencyError(std::string("preimage residual ") + buf + " exceeds 1e-10");
    }
    return tree;
}

ExpansionEstimate expansion_estimate(const SawMap& map, double x0, int n)
{
    if (n < 1) {
        throw DomainError("expansion_estimate requires n >= 1");
    }
    require_in_domain(map, x0);
    ExpansionEstimate out;
    double sum = 0.0;
    double x = x0;
    for (int i = 0; i < n; ++i) {
        if (x < SawMap::zero_floor) {
            out.reached_zero = true;
            break;
        }
        const Piece pc = map.piece_at(x);
        if (on_breakpoint(pc, x)) {
            out.breakpoint_steps.push_back(i);
        }
        sum += std::log(std::abs(pc.slope));
        ++out.steps;
        x = pc(x);
    }
    out.value = out.steps > 0 ? sum / out.steps : 0.0;
    return out;
}

double tent_domain_end(double alpha, double beta)
{
    return 1.0 + alpha / beta;
}

double tent_image_length(double alpha, double beta, double a, double b)
{
    auto F = [&](double x) { return x <= 1.0 ? alpha * x : alpha - beta * (x - 1.0); };
    double lo = std::min(F(a), F(b));
    double hi = std::max(F(a), F(b));
    if (a < 1.0 && 1.0 < b) {
        hi = alpha;
    }
    return hi - lo;
}

bool tent_expansion_trial(double alpha, double beta, double a, double b, double* margin)
{
    const double bound = (b - a) * alpha * beta / (alpha + beta);
    const double m = tent_image_length(alpha, beta, a, b) - bound;
    if (margin) {
        *margin = m;
    }
    return m >= -tent_expansion_slack;
}

TentExpansionResult tent_expansion_check(double alpha, double beta, int trials, std::uint64_t seed)
{
    if (!(alpha > 0.0) || !(beta > 0.0) || !(1.0 / alpha + 1.0 / beta < 1.0)) {
        throw PreconditionError("tent_expansion_check requires 1/alpha + 1/beta < 1");
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, tent_domain_end(alpha, beta));
    TentExpansionResult out;
    out.worst_margin = INFINITY;
    for (int t = 0; t < trials; ++t) {
        double a = u(rng);
        double b = u(rng);
        if (a > b) {
            std::swap(a, b);
        }
        double m = 0.0;
        if (!tent_expansion_trial(alpha, beta, a, b, &m)) {
            ++out.failures;
        }
        out.worst_margin = std::min(out.worst_margin, m);
        ++out.trials;
    }
    out.passed = out.failures == 0;
    return out;
}

double coverage_histogram(const SawMap& map, const Interval& region, double x0, std::int64_t n,
                          int bins)
{
    if (bins < 1 || !(region.hi > region.lo)) {
        throw DomainError("coverage_histogram requires bins >= 1 and a non-degenerate region");
    }
    if (!region.contains(x0)) {
        throw PreconditionError("x0 outside the region");
    }
    std::vector<char> seen(static_cast<std::size_t>(bins), 0);
    const double width = region.length() / bins;
    auto mark = [&](double x) {
        if (!region.contains(x)) {
            return;
        }
        auto b = static_cast<std::int64_t>((x - region.lo) / width);
        b = std::clamp<std::int64_t>(b, 0, bins - 1);
        seen[static_cast<std::size_t>(b)] = 1;
    };
    double x = x0;
    mark(x);
    for (std::int64_t i = 0; i < n; ++i) {
        x = map.eval(x);
        mark(x);
    }
    const auto visited = std::count(seen.begin(), seen.end(), 1);
    return static_cast<double>(visited) / bins;
}

PeriodicPoint periodic_orbit_from_itinerary(const SawMap& map,
                                            std::span<const PieceIndex> itinerary)
{
    if (itinerary.empty()) {
        throw DomainError("itinerary must be non-empty");
    }
    std::vector<Piece> pieces;
    pieces.reserve(itinerary.size());
    for (const auto& idx : itinerary) {
        pieces.push_back(map.piece(idx));
    }
    // Composition x -> A x + B.
    double A = 1.0;
    double B = 0.0;
    for (const auto& pc : pieces) {
        A = pc.slope * A;
        B = pc.slope * (B - pc.root);
    }
    PeriodicPoint out;
    if (A == 1.0) {
        out.degenerate = true;
        return out;
    }
    const double x = B / (1.0 - A);
    const double slack = 1e-12 * std::max(1.0, std::abs(x));
    double y = x;
    for (const auto& pc : pieces) {
        if (!pc.domain.contains(y, slack)) {
            return out;
        }
        y = pc(y);
    }
    if (!map.domain().contains(x)) {
        return out;
    }
    double z = x;
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        z = map.eval(z);
    }
    out.residual = std::abs(z - x);
    if (out.residual <= 1e-10) {
        out.x = x;
    }
    return out;
}

} // namespace sawmap::dynamics
