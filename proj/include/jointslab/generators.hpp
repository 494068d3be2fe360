#ifndef JOINTSLAB_GENERATORS_HPP
#define JOINTSLAB_GENERATORS_HPP

#include <cstdint>
#include <vector>

#include "jointslab/config.hpp"
#include "jointslab/setsys.hpp"

namespace jointslab {

constexpr unsigned kDefaultRetryBudget = 64;

// s_j(x) = normals[j] . x + constants[j]
struct HyperplaneArrangement {
    Field field = Field::rational();
    std::size_t dim = 0;
    std::vector<Vec> normals;
    std::vector<Scalar> constants;
    std::uint64_t seed = 0;

    std::size_t M() const { return normals.size(); }
};

// Point where the hyperplanes in `subset` (d of them) meet; throws if they do not meet in a point.
Vec intersection_point(const HyperplaneArrangement& arr, const std::vector<std::size_t>& subset);

// Direction of the line cut out by d-1 hyperplanes.
Vec intersection_direction(const HyperplaneArrangement& arr, const std::vector<std::size_t>& subset);

// Exact general-position certificate: every d-subset meets in a point and all those points differ.
// Returns an empty string on success, otherwise the failed predicate.
std::string generality_failure(const HyperplaneArrangement& arr);

HyperplaneArrangement general_position_hyperplanes(std::size_t M, std::size_t d, Field field, std::uint64_t seed,
                                                   unsigned retry_budget = kDefaultRetryBudget);

// Joints are the d-wise intersections, lines the (d-1)-wise ones.
JointsConfiguration tight_configuration(const HyperplaneArrangement& arr);
JointsConfiguration tight_configuration(std::size_t M, std::size_t d, Field field, std::uint64_t seed);

// Realizes a (1; d; delta) joint set system in F^{d+delta} and projects it generically to F^d.
JointsConfiguration project_generic(const JointSetSystem& sys, Field field, std::uint64_t seed,
                                    unsigned retry_budget = kDefaultRetryBudget);

// d coordinate axes through the origin: one joint, d lines.
JointsConfiguration axes_configuration(std::size_t d, Field field);

enum class ReguliPolicy { Primes, Random };

struct ReguliParameters {
    std::vector<mpq_class> c;
    std::vector<mpq_class> d;
};

// Empty string when the distinctness conditions hold, else the failed one.
std::string reguli_condition_failure(const ReguliParameters& params);

JointsConfiguration reguli_configuration(std::size_t n, ReguliPolicy policy = ReguliPolicy::Primes,
                                         std::uint64_t seed = 0);
JointsConfiguration reguli_configuration(const ReguliParameters& params);

}  // namespace jointslab

#endif
