#ifndef JOINTSLAB_REAL_HPP
#define JOINTSLAB_REAL_HPP

#include <string>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <gmpxx.h>

#ifndef JOINTSLAB_REAL_BITS
#define JOINTSLAB_REAL_BITS 128
#endif

namespace jointslab {

// Mantissa width is a build-time setting (JOINTSLAB_REAL_BITS).
using Real = boost::multiprecision::number<
    boost::multiprecision::cpp_bin_float<JOINTSLAB_REAL_BITS, boost::multiprecision::digit_base_2>,
    boost::multiprecision::et_off>;

inline constexpr unsigned kRealBits = JOINTSLAB_REAL_BITS;

Real to_real(const mpq_class& q);
Real to_real(const mpz_class& z);
// Exact: every finite binary float is a dyadic rational.
mpq_class to_rational(const Real& x);
// 12 significant digits unless asked otherwise.
std::string format_real(const Real& x, int digits = 12);

}  // namespace jointslab

#endif
