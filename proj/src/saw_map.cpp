#include "sawmap/saw_map.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sawmap/errors.hpp"

namespace sawmap {

double rising_fixed_point(const SawSequences& seqs, int k)
{
    const double a = seqs.alpha(k);
    return a * seqs.q(k + 1) / (a - 1.0);
}

KStarResult compute_k_star(const SawSequences& seqs, int max_depth, double tolerance)
{
    const auto depth = seqs.depth();
    int limit = max_depth;
    if (depth) {
        limit = std::min(limit, *depth);
    }
    const auto p_lim = seqs.p_limit();

    KStarResult result;
    int first_above = 0;
    for (int k = 2; k <= limit; ++k) {
        const double e = rising_fixed_point(seqs, k - 1);
        const double pk = seqs.p(k);
        if (std::abs(pk - e) <= tolerance * std::max(std::abs(pk), std::abs(e))) {
            result.boundary = true;
        }
        const bool above = pk > e;
        if (first_above == 0) {
            if (above) {
                first_above = k;
            }
        } else if (!above) {
            throw DomainError("k* undetermined: p_" + std::to_string(k) + " <= e_"
                              + std::to_string(k - 1) + " after p_" + std::to_string(first_above)
                              + " > e_" + std::to_string(first_above - 1));
        }
        result.checked_depth = k;
        // Beyond this index e_{j-1} < r_{j-1} <= r_k <= lim p < p_j.
        if (first_above != 0 && p_lim && seqs.r(k) <= *p_lim) {
            result.k_star = first_above - 1;
            return result;
        }
    }
    if (first_above == 0) {
        throw DomainError("k* undetermined at depth " + std::to_string(limit));
    }
    if (!depth) {
        throw DomainError("k* tail not confirmed up to depth " + std::to_string(limit));
    }
    result.k_star = first_above - 1;
    return result;
}

SawMap::SawMap(std::shared_ptr<const SawSequences> seqs, MapOptions options)
    : seqs_(std::move(seqs)), options_(options)
{
    if (!seqs_) {
        throw MalformedInputError("null sequence source");
    }
    k_star_ = compute_k_star(*seqs_, options_.max_depth, options_.tolerance);
}

void SawMap::check_domain(double x) const
{
    if (!std::isfinite(x) || x < 0.0 || x > seqs_->r(0)) {
        throw DomainError("x = " + std::to_string(x) + " outside [0, r_0] = [0, "
                          + std::to_string(seqs_->r(0)) + "]");
    }
}

PieceIndex SawMap::locate_piece(double x) const
{
    check_domain(x);
    if (x < zero_floor) {
        throw DomainError("locate_piece requires x > 0");
    }
    const int k = seqs_->bracket(x);
    if (k == 0 || x <= seqs_->r(k)) {
        return {k, Branch::rising};
    }
    return {k, Branch::falling};
}

Piece SawMap::piece(PieceIndex index) const
{
    const int k = index.k;
    if (k < 0 || (k == 0 && index.branch == Branch::falling)) {
        throw DomainError("no piece with index " + std::to_string(k));
    }
    Piece out;
    out.index = index;
    if (index.branch == Branch::rising) {
        out.domain = {seqs_->q(k + 1), seqs_->r(k)};
        out.slope = seqs_->alpha(k);
        out.root = out.domain.lo;
    } else {
        out.domain = {seqs_->r(k), seqs_->q(k)};
        out.slope = -seqs_->beta(k);
        out.root = out.domain.hi;
    }
    return out;
}

double SawMap::eval(double x) const
{
    check_domain(x);
    if (x < zero_floor) {
        return 0.0;
    }
    return piece_at(x)(x);
}

FixedPoints SawMap::fixed_points(int k) const
{
    if (k < 1) {
        throw DomainError("fixed points are indexed from k = 1");
    }
    const double b = seqs_->beta(k);
    return {rising_fixed_point(*seqs_, k), (seqs_->p(k) + b * seqs_->r(k)) / (1.0 + b)};
}

Crossings SawMap::crossings(int k) const
{
    if (k < 1 || k > k_star()) {
        throw DomainError("crossings defined for 1 <= k <= k* = " + std::to_string(k_star()));
    }
    const double e = rising_fixed_point(*seqs_, k);
    const double f = seqs_->r(k) + (seqs_->p(k) - e) / seqs_->beta(k);
    const double g = seqs_->q(k) + e / seqs_->alpha(k - 1);
    return {f, g};
}

Interval SawMap::J(int k) const
{
    if (k < 1 || k > k_star()) {
        throw DomainError("J_k defined for 1 <= k <= k* = " + std::to_string(k_star()));
    }
    return {rising_fixed_point(*seqs_, k), seqs_->p(k)};
}

Interval SawMap::G(int k) const
{
    if (k < 1 || k > k_star()) {
        throw DomainError("G_k defined for 1 <= k <= k* = " + std::to_string(k_star()));
    }
    const double pk = seqs_->p(k);
    return {eval(pk), pk};
}

IntervalFamily SawMap::intervals() const
{
    IntervalFamily out;
    out.j_star = j_star();
    for (int k = 1; k <= k_star(); ++k) {
        out.J.push_back(J(k));
        out.G.push_back(G(k));
    }
    return out;
}

} // namespace sawmap
