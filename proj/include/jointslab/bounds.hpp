#ifndef JOINTSLAB_BOUNDS_HPP
#define JOINTSLAB_BOUNDS_HPP

#include <vector>

#include <gmpxx.h>

#include "jointslab/real.hpp"

namespace jointslab {

// x(x-1)...(x-d+1)/d!
Real binom_real(const Real& x, unsigned d);

struct BinomSolution {
    Real x;
    bool integral = false;  // C(x, d) = J for an integer x
    unsigned long exact_x = 0;
};

// Unique x >= d with C(x, d) = J, by bisection on [d, d + J].
BinomSolution solve_binom_real(const mpz_class& J, unsigned d, const Real& tol);

struct SharpBound {
    BinomSolution x;
    Real l_min;       // C(x, d-1)
    Real l_min_alt;   // d J / (x - d + 1)
    bool exact = false;
    mpz_class exact_l_min;  // set when x is an integer
};

// Minimum number of lines (or total curve degree) forming J joints in d dimensions.
SharpBound sharp_bound(const mpz_class& J, unsigned d);

enum class ConstantVariant { NuStar, Nu, UpperKM, Lower1M };

ConstantVariant parse_constant_variant(const std::string& name);

// (d!/prod k_i!^{m_i} m_i^{m_i})^{1/(s-1)} and the single-class bounds.
Real constant_C(const std::vector<unsigned>& k, const std::vector<unsigned>& m, ConstantVariant variant);

// Leading constant J / N^{m/(m-1)} of the generically induced construction with one class.
Real generic_construction_ratio(unsigned k, unsigned m);

mpz_class factorial(unsigned n);

}  // namespace jointslab

#endif
