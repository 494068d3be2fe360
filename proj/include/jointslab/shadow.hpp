#ifndef JOINTSLAB_SHADOW_HPP
#define JOINTSLAB_SHADOW_HPP

#include <cstdint>
#include <vector>

#include "jointslab/real.hpp"
#include "jointslab/setsys.hpp"

namespace jointslab {

// All (|A|-1)-subsets of members of the family, sorted and deduplicated.
std::vector<Set> shadow(const std::vector<Set>& family);

struct LovaszReport {
    std::vector<Set> shadow;
    Real x;      // C(x, d) = |family|
    Real bound;  // C(x, d-1) <= |shadow|
    bool integral = false;
};

LovaszReport shadow_and_lovasz(const std::vector<Set>& family, unsigned d);

// Lower bound C(x, r-k-1) where m = C(x, r-k).
struct PartialShadowBound {
    Real x;
    Real lower;
};

PartialShadowBound partial_shadow_lower_bound(unsigned r, unsigned m, unsigned k);

struct PartialShadowCertificate {
    bool ok = false;
    std::size_t b_size = 0;
    unsigned max_missing = 0;
    std::vector<std::size_t> offending;  // members of A with more than k missing subsets
};

// Each A has at most k of its (r-1)-subsets missing from B; then f(r, |A|, k) <= |B|.
PartialShadowCertificate check_partial_shadow(const std::vector<Set>& A, const std::vector<Set>& B, unsigned k);

struct PartialShadowSearch {
    bool complete = false;      // search finished inside the budget
    unsigned value = 0;         // best |B| found (exact when complete)
    std::vector<Set> best_A;
    std::vector<Set> best_B;
    std::uint64_t nodes = 0;
    PartialShadowBound theorem;
};

// min |B| over m-families of r-subsets of [ground_cap]; canonical-labeling pruning.
PartialShadowSearch partial_shadow_exhaustive(unsigned r, unsigned m, unsigned k, unsigned ground_cap,
                                              std::uint64_t node_budget = 2'000'000'000ULL);

}  // namespace jointslab

#endif
