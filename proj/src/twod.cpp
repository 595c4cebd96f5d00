#include "sawmap/twod.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace sawmap::twod {

const char* const admissible_region = "sigma > 1 and -1 < lambda < 0";

bool Params::admissible(double sigma, double lambda) noexcept
{
    return std::isfinite(sigma) && std::isfinite(lambda) && sigma > 1.0 && lambda > -1.0
        && lambda < 0.0;
}

Params Params::make(double sigma, double lambda)
{
    if (!admissible(sigma, lambda)) {
        throw DomainError("parameters (sigma = " + std::to_string(sigma) + ", lambda = "
                          + std::to_string(lambda) + ") outside the admissible region "
                          + admissible_region);
    }
    return {sigma, lambda};
}

State step(const Params& params, const State& state)
{
    if (!std::isfinite(state.x) || !std::isfinite(state.s)) {
        throw DomainError("step: non-finite state");
    }
    State out = state;
    step_inplace(params.sigma, params.lambda, out.x, out.s);
    return out;
}

std::vector<State> trajectory(const Params& params, const State& start, int steps)
{
    if (steps < 0) {
        throw DomainError("trajectory: negative step count");
    }
    if (!(start.s >= -1.0 && start.s <= 1.0) || !std::isfinite(start.x)) {
        throw DomainError("initial state outside the strip -1 <= s <= 1");
    }
    std::vector<State> out;
    out.reserve(static_cast<std::size_t>(steps) + 1);
    out.push_back(start);
    for (int n = 0; n < steps; ++n) {
        out.push_back(step(params, out.back()));
    }
    return out;
}

std::vector<double> stop_apply(double s0, std::span<const double> xs)
{
    if (!(std::abs(s0) <= 1.0)) {
        throw DomainError("stop_apply requires |s0| <= 1");
    }
    std::vector<double> out;
    out.reserve(xs.size());
    double s = s0;
    for (std::size_t n = 0; n < xs.size(); ++n) {
        if (n > 0) {
            s = saturation(s + xs[n] - xs[n - 1]);
        }
        out.push_back(s);
    }
    return out;
}

Power power(double sigma, std::int64_t m)
{
    if (m < 0) {
        throw DomainError("power: negative exponent");
    }
    if (m == 0) {
        return {1.0, 0.0};
    }
    // sigma^m = exp(m log sigma), G_m = expm1(m log sigma) / (sigma - 1).
    const long double d = static_cast<long double>(sigma) - 1.0L;
    const long double L = static_cast<long double>(m) * std::log1p(d);
    return {static_cast<double>(std::exp(L)), static_cast<double>(std::expm1(L) / d)};
}

double q_hat(const Params& params, int k)
{
    const auto [a, g] = power(params.sigma, k);
    const double sl = params.sigma - params.lambda;
    return (-1.0 / (1.0 - params.lambda) - g) / (a / sl - g);
}

double r_hat(const Params& params, int k)
{
    const auto [a, g] = power(params.sigma, k);
    const double sl = params.sigma - params.lambda;
    return (2.0 + sl * g) / (1.0 - a + sl * g);
}

double p_hat(const Params& params, int k)
{
    return params.sigma - params.lambda * (r_hat(params, k) - 1.0);
}

KDoubleStar k_double_star(const Params& params, int cap)
{
    const double mag = -params.lambda;
    auto value = [&](int k) { return power(params.sigma, k).a * mag; };
    auto reached = [&](int k) { return value(k) >= 1.0 - 1e-12; };
    auto too_large = [&] {
        return ConvergenceError("k** exceeds " + std::to_string(cap) + " at sigma = "
                                + std::to_string(params.sigma) + ", lambda = "
                                + std::to_string(params.lambda));
    };
    // Estimate from sigma^k |lambda| = 1, then settle on the least k.
    const double est = std::ceil(-std::log(mag) / std::log1p(params.sigma - 1.0));
    if (!(est <= static_cast<double>(cap) + 1.0)) {
        throw too_large();
    }
    int k = std::max(1, static_cast<int>(est));
    while (k > 1 && reached(k - 1)) {
        --k;
    }
    while (!reached(k)) {
        if (++k > cap) {
            throw too_large();
        }
    }
    if (k > cap) {
        throw too_large();
    }
    return {k, std::abs(value(k) - 1.0) <= 1e-12};
}

ClosedFormSequences::ClosedFormSequences(Params params, int k_double_star_cap)
    : params_(Params::make(params.sigma, params.lambda)),
      kss_(twod::k_double_star(params_, k_double_star_cap)),
      p_limit_(2.0 * -params_.lambda * (params_.sigma - 1.0) / (1.0 - params_.lambda))
{
}

// Shifted closed forms in terms of sigma^m and G_m = (sigma^m - 1)/(sigma - 1):
//   q = 2 (sigma - lambda) / ((1 - lambda) (G (1 - lambda) - 1))
//   r = 2 / ((1 - lambda) G)
//   p = 2 |lambda| sigma^m / ((1 - lambda) G)
double ClosedFormSequences::q_at(std::int64_t m) const
{
    const auto pw = power(params_.sigma, m);
    if (!std::isfinite(pw.g)) {
        return 0.0;
    }
    const double ml = 1.0 - params_.lambda;
    return 2.0 * (params_.sigma - params_.lambda) / (ml * (pw.g * ml - 1.0));
}

double ClosedFormSequences::r_at(std::int64_t m) const
{
    const auto pw = power(params_.sigma, m);
    if (!std::isfinite(pw.g)) {
        return 0.0;
    }
    return 2.0 / ((1.0 - params_.lambda) * pw.g);
}

double ClosedFormSequences::p_at(std::int64_t m) const
{
    const auto pw = power(params_.sigma, m);
    if (!std::isfinite(pw.a) || !std::isfinite(pw.g)) {
        return p_limit_;
    }
    return 2.0 * -params_.lambda / (1.0 - params_.lambda) * (pw.a / pw.g);
}

double ClosedFormSequences::q(int k) const
{
    if (k < 1) {
        throw DomainError("q_k is defined for k >= 1");
    }
    return q_at(hat_index(k));
}

double ClosedFormSequences::r(int k) const
{
    if (k < 0) {
        throw DomainError("r_k is defined for k >= 0");
    }
    if (k == 0 && canonical_top()) {
        return q_at(1) + 2.0 * p_at(1) / -params_.lambda;
    }
    return r_at(hat_index(k));
}

double ClosedFormSequences::p(int k) const
{
    if (k < 0) {
        throw DomainError("p_k is defined for k >= 0");
    }
    if (k == 0 && canonical_top()) {
        return 2.0 * p_at(1);
    }
    return p_at(hat_index(k));
}

double ClosedFormSequences::alpha_closed(int k) const
{
    if (k < 0) {
        throw DomainError("alpha_k is defined for k >= 0");
    }
    if (k == 0 && canonical_top()) {
        return -params_.lambda;
    }
    const auto pw = power(params_.sigma, hat_index(k) + 1);
    return (params_.sigma - params_.lambda) * pw.g - pw.a;
}

double ClosedFormSequences::beta_closed(int k) const
{
    if (k < 1) {
        throw DomainError("beta_k is defined for k >= 1");
    }
    const auto pw = power(params_.sigma, hat_index(k));
    return -params_.lambda * ((params_.sigma - params_.lambda) * pw.g - pw.a);
}

int ClosedFormSequences::bracket_hint(double x) const
{
    if (!(x > 0.0)) {
        return 0;
    }
    // q at hat index m is >= x iff G_m <= (H + 1)/(1 - lambda).
    const double ml = 1.0 - params_.lambda;
    const double h = 2.0 * (params_.sigma - params_.lambda) / (ml * x);
    const double gt = (h + 1.0) / ml;
    const double m = std::log1p((params_.sigma - 1.0) * gt) / std::log1p(params_.sigma - 1.0);
    if (!std::isfinite(m)) {
        return 0;
    }
    const double k = std::floor(m) - kss_.k + 1;
    return static_cast<int>(std::clamp(k, 0.0, static_cast<double>(max_descent)));
}

std::shared_ptr<const ClosedFormSequences> closed_form_sequences(const Params& params)
{
    return std::make_shared<const ClosedFormSequences>(params);
}

SawMap make_closed_form_map(const Params& params, MapOptions options)
{
    return SawMap(closed_form_sequences(params), options);
}

double simulated_T(const Params& params, double x)
{
    if (!(x > 0.0)) {
        throw DomainError("simulated_T requires x > 0");
    }
    const WideReal sigma = params.sigma;
    const WideReal lambda = params.lambda;
    const WideReal c = (sigma - lambda) / (WideReal(1) - lambda);
    const auto hit = first_hit<WideReal>(params, c + WideReal(x));
    return static_cast<double>(hit.fx - c);
}

std::int64_t simulated_steps(const Params& params, double x)
{
    const WideReal sigma = params.sigma;
    const WideReal lambda = params.lambda;
    const WideReal c = (sigma - lambda) / (WideReal(1) - lambda);
    return first_hit<WideReal>(params, c + WideReal(x)).steps;
}

double analytic_T(const SawMap& map, double x)
{
    return map.eval(x);
}

double relative_deviation(double analytic, double simulated, double peak) noexcept
{
    const double scale = std::max({std::abs(analytic), std::abs(simulated), std::abs(peak)});
    if (scale == 0.0) {
        return 0.0;
    }
    return std::abs(analytic - simulated) / scale;
}

ConsistencyReport consistency_check(const Params& params, int n, std::uint64_t seed)
{
    return consistency_check(make_closed_form_map(params), params, n, seed);
}

ConsistencyReport consistency_check(const SawMap& map, const Params& params, int n,
                                    std::uint64_t seed)
{
    if (n < 0) {
        throw DomainError("consistency_check: negative sample count");
    }
    const double r0 = map.sequences().r(0);
    const double lo = std::log(r0 * sample_floor);
    const double hi = std::log(r0);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(lo, hi);

    ConsistencyReport report;
    report.samples.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double x = std::min(r0, std::exp(u(rng)));
        ConsistencySample s;
        s.x = x;
        s.analytic = analytic_T(map, x);
        s.simulated = simulated_T(params, x);
        const double peak = map.sequences().p(map.locate_piece(x).k);
        s.rel_dev = relative_deviation(s.analytic, s.simulated, peak);
        report.max_rel_dev = std::max(report.max_rel_dev, s.rel_dev);
        report.samples.push_back(s);
    }
    return report;
}

} // namespace sawmap::twod
