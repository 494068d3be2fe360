#ifndef JOINTSLAB_CONFIG_HPP
#define JOINTSLAB_CONFIG_HPP

#include <string>
#include <vector>

#include <json.hpp>

#include "jointslab/scalar.hpp"

namespace jointslab {

struct Line {
    std::size_t base = 0;  // index into points
    Vec dir;
    unsigned deg = 1;
};

struct Joint {
    std::size_t point = 0;
    std::vector<std::size_t> lines;  // ordered labels l_{p,1..d}
};

struct JointsConfiguration {
    Field field = Field::rational();
    std::size_t dim = 0;
    std::vector<Vec> points;
    std::vector<Line> lines;
    std::vector<Joint> joints;
    // Degrees other than 1 are accepted only in curve mode.
    bool curve_mode = false;
    nlohmann::json meta = nlohmann::json::object();

    std::size_t J() const { return joints.size(); }
    std::size_t L() const { return lines.size(); }
};

struct IncidenceStats {
    std::size_t J = 0;
    std::size_t L = 0;
    std::vector<std::size_t> joints_per_line;
    std::vector<std::vector<std::size_t>> joints_on_line;
    std::vector<std::vector<std::size_t>> components;
    std::size_t incidence_sum = 0;  // equals d*J
};

struct Violation {
    std::string where;      // e.g. "joint 3" or "line 5"
    std::string predicate;  // the failed check
};

struct VerificationResult {
    bool ok = false;
    IncidenceStats stats;
    std::vector<Violation> violations;
};

// Incidence bookkeeping only; no geometric checks.
IncidenceStats incidence_stats(const JointsConfiguration& cfg);

VerificationResult verify_configuration(const JointsConfiguration& cfg);

// Throws a Verification error listing the violations.
IncidenceStats require_valid(const JointsConfiguration& cfg);

// Reduces a rational configuration into F_p (or copies it if the field already matches).
JointsConfiguration map_to_field(const JointsConfiguration& cfg, Field f);

// True when point x lies on the affine line through `base` with direction `dir`.
bool point_on_line(const Vec& x, const Vec& base, const Vec& dir);

std::size_t shared_hyperplanes(const JointsConfiguration& cfg, std::size_t p, std::size_t q);

struct RatioViolation {
    std::vector<std::size_t> joints;
    std::size_t inner_lines = 0;  // lines all of whose joints are in the subset
    std::size_t dummy_lines = 0;  // remaining incidences of subset joints
};

struct SubsetScanReport {
    std::size_t size_cap = 0;
    std::size_t subsets_checked = 0;
    bool truncated = false;
    std::vector<RatioViolation> violations;
};

// Necessary-condition scan for criticality over joint subsets up to size_cap.
SubsetScanReport subset_ratio_scan(const JointsConfiguration& cfg, std::size_t size_cap);

}  // namespace jointslab

#endif
