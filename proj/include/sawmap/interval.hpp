#ifndef SAWMAP_INTERVAL_HPP
#define SAWMAP_INTERVAL_HPP

#include <algorithm>
#include <cmath>

namespace sawmap {

// Closed interval [lo, hi]; lo <= hi is the caller's responsibility.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    double length() const noexcept { return hi - lo; }

    bool contains(double x, double slack = 0.0) const noexcept
    {
        return x >= lo - slack && x <= hi + slack;
    }

    bool contains(const Interval& other, double slack = 0.0) const noexcept
    {
        return other.lo >= lo - slack && other.hi <= hi + slack;
    }

    // Distance from x to the interval (0 inside).
    double distance(double x) const noexcept
    {
        if (x < lo) {
            return lo - x;
        }
        if (x > hi) {
            return x - hi;
        }
        return 0.0;
    }

    friend bool operator==(const Interval&, const Interval&) = default;
};

} // namespace sawmap

#endif
