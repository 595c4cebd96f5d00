#ifndef SAWMAP_TESTS_SUPPORT_HPP
#define SAWMAP_TESTS_SUPPORT_HPP

#include <memory>
#include <string>
#include <vector>

#include "sawmap/saw_map.hpp"
#include "sawmap/sequences.hpp"
#include "sawmap/validate.hpp"

namespace testing {

inline std::string fixture(const std::string& name)
{
    return std::string(SAWMAP_FIXTURE_DIR) + "/" + name;
}

inline std::shared_ptr<const sawmap::TabulatedSequences> load(const std::string& name)
{
    return std::make_shared<const sawmap::TabulatedSequences>(
        sawmap::TabulatedSequences::from_json_file(fixture(name)));
}

inline sawmap::SawMap tm1()
{
    return sawmap::make_saw_map(load("tm1.json"), 3);
}

inline sawmap::SawMap tm2()
{
    return sawmap::make_saw_map(load("tm2.json"), 4);
}

// TM1 continued geometrically: q and r shrink by 0.4 per level past k = 3,
// p_k relaxes halfway towards 0.2.
inline std::shared_ptr<const sawmap::TabulatedSequences> tm1_extended_sequences(int depth = 30)
{
    std::vector<double> r{1.0, 0.3, 0.12, 0.05};
    std::vector<double> q{0.5, 0.2, 0.08};
    std::vector<double> p{0.9, 0.8, 0.45, 0.3};
    while (static_cast<int>(q.size()) < depth) {
        q.push_back(0.4 * q.back());
        r.push_back(0.4 * r.back());
        p.push_back(0.2 + 0.5 * (p.back() - 0.2));
    }
    return std::make_shared<const sawmap::TabulatedSequences>(r, q, p);
}

inline sawmap::SawMap tm1_extended(int depth = 30)
{
    return sawmap::make_saw_map(tm1_extended_sequences(depth), depth);
}

} // namespace testing

#endif
