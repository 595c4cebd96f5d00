#ifndef SAWMAP_VALIDATE_HPP
#define SAWMAP_VALIDATE_HPP

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sawmap/errors.hpp"
#include "sawmap/saw_map.hpp"
#include "sawmap/sequences.hpp"

namespace sawmap {

struct Violation {
    std::string rule;   // e.g. "p_k > r_k"
    int index = 0;      // offending k
    std::string detail; // values involved
};

struct ValidationReport {
    std::vector<Violation> violations;
    std::optional<int> k_star;
    bool k_star_boundary = false;
    // An interior fixed point of the top piece [q_1, r_0] exists.
    bool e0_exists = false;
    int depth = 0;

    bool ok() const noexcept { return violations.empty(); }
    bool has(const std::string& rule) const;
    std::string summary() const;
};

class ValidationError : public Error {
public:
    explicit ValidationError(ValidationReport report);
    const ValidationReport& report() const noexcept { return report_; }

private:
    ValidationReport report_;
};

// Checks ordering, slope monotonicity, k*, the technical condition
// q_k + e_k / alpha_{k-1} > p_k for k < k*, fixed-point residuals and
// T(J*) within J*, all up to `depth`. Requires depth >= 2; tabulated data
// must reach depth. Non-finite data raises MalformedInputError instead.
ValidationReport validate(const SawSequences& seqs, int depth, double tolerance = 1e-12);

// Validates and builds; throws ValidationError listing every violation.
SawMap make_saw_map(std::shared_ptr<const SawSequences> seqs, int depth, MapOptions options = {});

} // namespace sawmap

#endif
