#include "sawmap/validate.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace sawmap {

bool ValidationReport::has(const std::string& rule) const
{
    return std::any_of(violations.begin(), violations.end(),
                       [&](const Violation& v) { return v.rule == rule; });
}

std::string ValidationReport::summary() const
{
    if (ok()) {
        return "ok";
    }
    std::ostringstream out;
    for (const auto& v : violations) {
        out << v.rule << " violated at k=" << v.index;
        if (!v.detail.empty()) {
            out << " (" << v.detail << ")";
        }
        out << '\n';
    }
    return out.str();
}

ValidationError::ValidationError(ValidationReport report)
    : Error("saw map validation failed:\n" + report.summary()), report_(std::move(report))
{
}

namespace {

std::string pair_detail(const char* a, double va, const char* b, double vb)
{
    std::ostringstream out;
    out.precision(17);
    out << a << " = " << va << ", " << b << " = " << vb;
    return out.str();
}

} // namespace

ValidationReport validate(const SawSequences& seqs, int depth, double tolerance)
{
    if (depth < 2) {
        throw PreconditionError("validation depth must be >= 2");
    }
    if (const auto d = seqs.depth(); d && depth > *d) {
        throw PreconditionError("tabulated sequences have depth " + std::to_string(*d)
                                + " < requested " + std::to_string(depth));
    }

    ValidationReport rep;
    rep.depth = depth;
    auto fail = [&](std::string rule, int k, std::string detail) {
        rep.violations.push_back({std::move(rule), k, std::move(detail)});
    };

    for (int k = 0; k <= depth; ++k) {
        if (!std::isfinite(seqs.r(k)) || !std::isfinite(seqs.p(k))
            || (k >= 1 && !std::isfinite(seqs.q(k)))) {
            throw MalformedInputError("non-finite sequence value at k = " + std::to_string(k));
        }
    }

    // Ordering.
    for (int k = 1; k <= depth; ++k) {
        if (!(seqs.r(k - 1) > seqs.q(k))) {
            fail("r_{k-1} > q_k", k, pair_detail("r_{k-1}", seqs.r(k - 1), "q_k", seqs.q(k)));
        }
        if (!(seqs.q(k) > seqs.r(k))) {
            fail("q_k > r_k", k, pair_detail("q_k", seqs.q(k), "r_k", seqs.r(k)));
        }
        if (!(seqs.p(k - 1) > seqs.p(k))) {
            fail("p_{k-1} > p_k", k, pair_detail("p_{k-1}", seqs.p(k - 1), "p_k", seqs.p(k)));
        }
        if (!(seqs.p(k) > seqs.r(k))) {
            fail("p_k > r_k", k, pair_detail("p_k", seqs.p(k), "r_k", seqs.r(k)));
        }
    }
    if (!(seqs.r(depth) > 0.0)) {
        fail("r_k > 0", depth, "");
    }
    if (!(seqs.p(depth) > 0.0)) {
        fail("p_k > 0", depth, "");
    }
    if (!(seqs.p(0) < seqs.r(0))) {
        fail("p_0 < r_0", 0, pair_detail("p_0", seqs.p(0), "r_0", seqs.r(0)));
    }

    // Slopes. alpha_k needs q_{k+1}.
    for (int k = 1; k + 1 <= depth; ++k) {
        const double a = seqs.alpha(k);
        if (!(a > 1.0)) {
            fail("alpha_k > 1", k, pair_detail("alpha_k", a, "bound", 1.0));
        }
        if (k + 2 <= depth && !(seqs.alpha(k + 1) > a)) {
            fail("alpha_k increasing", k,
                 pair_detail("alpha_k", a, "alpha_{k+1}", seqs.alpha(k + 1)));
        }
    }
    for (int k = 1; k + 1 <= depth; ++k) {
        if (!(seqs.beta(k + 1) > seqs.beta(k))) {
            fail("beta_k increasing", k,
                 pair_detail("beta_k", seqs.beta(k), "beta_{k+1}", seqs.beta(k + 1)));
        }
    }

    // Fixed points: q_{k+1} < e_k < r_k < ê_k < q_k with small residuals.
    for (int k = 1; k + 1 <= depth; ++k) {
        const double a = seqs.alpha(k);
        const double b = seqs.beta(k);
        const double e = rising_fixed_point(seqs, k);
        const double eh = (seqs.p(k) + b * seqs.r(k)) / (1.0 + b);
        if (!(seqs.q(k + 1) < e && e < seqs.r(k) && seqs.r(k) < eh && eh < seqs.q(k))) {
            fail("q_{k+1} < e_k < r_k < ê_k < q_k", k, pair_detail("e_k", e, "ê_k", eh));
        }
        const double res_e = std::abs(a * (e - seqs.q(k + 1)) - e);
        const double res_eh = std::abs(b * (seqs.q(k) - eh) - eh);
        if (res_e > tolerance * std::max(1.0, e) || res_eh > tolerance * std::max(1.0, eh)) {
            fail("fixed point residual", k, pair_detail("|T(e)-e|", res_e, "|T(ê)-ê|", res_eh));
        }
    }

    // Fixed point of the top piece, if it falls inside (q_1, r_0).
    {
        const double a0 = seqs.alpha(0);
        if (a0 > 1.0) {
            const double e0 = rising_fixed_point(seqs, 0);
            rep.e0_exists = e0 > seqs.q(1) && e0 < seqs.r(0);
        }
    }

    // k* and the conditions that depend on it.
    try {
        const auto ks = compute_k_star(seqs, depth, tolerance);
        rep.k_star = ks.k_star;
        rep.k_star_boundary = ks.boundary;
    } catch (const DomainError& e) {
        fail("k* exists", depth, e.what());
    }
    if (rep.k_star) {
        const int ks = *rep.k_star;
        for (int k = 1; k <= ks - 1 && k + 1 <= depth; ++k) {
            const double lhs = seqs.q(k) + rising_fixed_point(seqs, k) / seqs.alpha(k - 1);
            if (!(lhs > seqs.p(k))) {
                fail("q_k + e_k/alpha_{k-1} > p_k", k,
                     pair_detail("q_k + e_k/alpha_{k-1}", lhs, "p_k", seqs.p(k)));
            }
        }
        // T(J*) within J*: every peak inside J* is at most p_{k*}, and so is T(p_{k*}).
        const double top = seqs.p(ks);
        if (ks >= 1 && !(seqs.r(ks - 1) > top)) {
            fail("T(J*) within J*", ks, pair_detail("r_{k*-1}", seqs.r(ks - 1), "p_{k*}", top));
        }
        try {
            const int j = seqs.bracket(top);
            double image = 0.0;
            if (j == 0 || top <= seqs.r(j)) {
                image = seqs.alpha(j) * (top - seqs.q(j + 1));
            } else {
                image = seqs.beta(j) * (seqs.q(j) - top);
            }
            if (image > top * (1.0 + tolerance)) {
                fail("T(J*) within J*", ks, pair_detail("T(p_{k*})", image, "p_{k*}", top));
            }
        } catch (const TruncationError&) {
            // p_{k*} below the table: nothing further to check at this depth.
        }
    }
    return rep;
}

SawMap make_saw_map(std::shared_ptr<const SawSequences> seqs, int depth, MapOptions options)
{
    if (!seqs) {
        throw MalformedInputError("null sequence source");
    }
    auto report = validate(*seqs, depth, options.tolerance);
    if (!report.ok()) {
        throw ValidationError(std::move(report));
    }
    return SawMap(std::move(seqs), options);
}

} // namespace sawmap
