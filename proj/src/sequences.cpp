#include "sawmap/sequences.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "sawmap/errors.hpp"

namespace sawmap {

int SawSequences::bracket(double x) const
{
    const auto d = depth();
    int k = std::max(0, bracket_hint(x));
    if (d && k > *d - 1) {
        k = *d - 1;
    }
    while (k >= 1 && x >= q(k)) {
        --k;
    }
    for (;;) {
        if (d && k + 1 > *d) {
            throw TruncationError("x = " + std::to_string(x) + " lies below q_" + std::to_string(*d)
                                      + " = " + std::to_string(q(*d)) + "; requires depth > "
                                      + std::to_string(*d),
                                  *d + 1);
        }
        if (x >= q(k + 1)) {
            return k;
        }
        if (++k > max_descent) {
            throw ConvergenceError("piece descent exceeded " + std::to_string(max_descent)
                                   + " for x = " + std::to_string(x));
        }
    }
}

namespace {

void require_finite(const std::vector<double>& v, const char* name)
{
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!std::isfinite(v[i])) {
            throw MalformedInputError(std::string("non-finite value in ") + name + " at position "
                                      + std::to_string(i));
        }
    }
}

} // namespace

TabulatedSequences::TabulatedSequences(std::vector<double> r, std::vector<double> q,
                                       std::vector<double> p)
    : r_(std::move(r)), q_(std::move(q)), p_(std::move(p))
{
    if (q_.empty() || r_.empty() || p_.empty()) {
        throw MalformedInputError("tabulated sequences must be non-empty");
    }
    if (r_.size() != q_.size() + 1 || p_.size() != r_.size()) {
        throw MalformedInputError("expected sizes |r| = |p| = |q| + 1, got |r| = "
                                  + std::to_string(r_.size()) + ", |q| = "
                                  + std::to_string(q_.size()) + ", |p| = "
                                  + std::to_string(p_.size()));
    }
    require_finite(r_, "r");
    require_finite(q_, "q");
    require_finite(p_, "p");
}

TabulatedSequences TabulatedSequences::from_json(std::istream& in)
{
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw MalformedInputError(std::string("invalid JSON: ") + e.what());
    }
    auto array = [&](const char* key) {
        if (!doc.is_object() || !doc.contains(key) || !doc[key].is_array()) {
            throw MalformedInputError(std::string("missing array \"") + key + "\"");
        }
        std::vector<double> out;
        for (const auto& v : doc[key]) {
            if (!v.is_number()) {
                throw MalformedInputError(std::string("non-numeric entry in \"") + key + "\"");
            }
            out.push_back(v.get<double>());
        }
        return out;
    };
    return TabulatedSequences(array("r"), array("q"), array("p"));
}

TabulatedSequences TabulatedSequences::from_json_string(const std::string& text)
{
    std::istringstream in(text);
    return from_json(in);
}

TabulatedSequences TabulatedSequences::from_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw MalformedInputError("cannot open " + path);
    }
    return from_json(in);
}

double TabulatedSequences::q(int k) const
{
    if (k < 1) {
        throw DomainError("q_k is defined for k >= 1");
    }
    if (k > static_cast<int>(q_.size())) {
        throw TruncationError("q_" + std::to_string(k) + " beyond tabulated depth", k);
    }
    return q_[static_cast<std::size_t>(k - 1)];
}

double TabulatedSequences::r(int k) const
{
    if (k < 0) {
        throw DomainError("r_k is defined for k >= 0");
    }
    if (k >= static_cast<int>(r_.size())) {
        throw TruncationError("r_" + std::to_string(k) + " beyond tabulated depth", k);
    }
    return r_[static_cast<std::size_t>(k)];
}

double TabulatedSequences::p(int k) const
{
    if (k < 0) {
        throw DomainError("p_k is defined for k >= 0");
    }
    if (k >= static_cast<int>(p_.size())) {
        throw TruncationError("p_" + std::to_string(k) + " beyond tabulated depth", k);
    }
    return p_[static_cast<std::size_t>(k)];
}

int TabulatedSequences::bracket_hint(double x) const
{
    // q_ is decreasing: count entries strictly greater than x.
    const auto it = std::partition_point(q_.begin(), q_.end(), [x](double v) { return v > x; });
    return static_cast<int>(it - q_.begin());
}

} // namespace sawmap
