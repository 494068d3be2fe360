#ifndef JOINTSLAB_HYPERGRAPH_HPP
#define JOINTSLAB_HYPERGRAPH_HPP

#include <cstdint>
#include <vector>

#include "jointslab/setsys.hpp"

namespace jointslab {

struct Hypergraph {
    std::size_t vertices = 0;
    std::vector<std::vector<std::size_t>> edges;  // sorted vertex lists
    std::vector<Member> vertex_members;           // provenance when built from a system
};

// Vertices are the members taking part in some certifying selection of P.
Hypergraph joint_hypergraph(const JointSetSystem& sys, const Set& P);

struct PackingResult {
    std::size_t lower = 0;
    std::size_t upper = 0;
    bool exact = false;
    std::vector<std::size_t> matching;  // edge indices achieving `lower`
    std::uint64_t nodes = 0;
};

PackingResult packing_number(const Hypergraph& g, std::uint64_t node_budget = 50'000'000);

struct NuStarResult {
    double value = 0;        // exp of the best objective found
    double upper = 0;        // exp(objective + Frank-Wolfe gap)
    double log_value = 0;
    double gap = 0;
    std::vector<double> mu;  // edge distribution
    std::size_t iterations = 0;
    bool converged = false;
};

// max over edge distributions of prod_V mu(V)^{-mu(V)/s}, by mirror ascent with multistart.
NuStarResult nu_star(const Hypergraph& g, std::size_t uniformity, double tol = 1e-6,
                     unsigned starts = 8, std::uint64_t seed = 0);

struct JointMultiplicity {
    std::size_t set_index = 0;
    std::size_t M = 0;
    PackingResult nu;
    NuStarResult nu_star;
    double entropy_bound = 0;  // (prod m_i!/m_i^{m_i} * M)^{1/s}
    bool nu_ok = false;
    bool entropy_ok = false;
};

struct MultiplicityReport {
    std::vector<JointMultiplicity> joints;
    double lhs = 0;  // sum nu*^{s/(s-1)}
    double rhs = 0;  // C * (prod |F_i|^{m_i})^{1/(s-1)}
    bool sum_ok = false;
    bool pass = false;
    double tol = 1e-6;
};

MultiplicityReport multiplicity_report(const JointSetSystem& sys, double tol = 1e-6, unsigned threads = 1);

struct WeightedReport {
    double lhs = 0;
    double rhs = 0;
    double slack = 0;
    bool pass = false;
    std::vector<std::vector<double>> weights;  // per class, per member
};

// Weighted corollary for the given member weights, using one certificate per joint set.
WeightedReport weighted_corollary_check(const JointSetSystem& sys,
                                        const std::vector<std::vector<double>>& weights);

struct PointCountReport {
    std::vector<std::uint64_t> class_weight;  // w(V_i), must equal m_i * J
    bool class_weight_ok = false;
    std::vector<std::uint64_t> omega;         // per joint set
    double lhs = 0;  // (1/J) sum omega^{1/(s-1)}
    double rhs = 0;  // (d! J / prod k_i!^{m_i})^{1/(s-1)}
    bool pass = false;
    WeightedReport weighted;
};

PointCountReport point_count_check(const JointSetSystem& sys);

// ((1/n) sum x^q)^{1/q}
double power_mean(const std::vector<double>& values, double q);

}  // namespace jointslab

#endif
