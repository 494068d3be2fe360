#include "jointslab/real.hpp"

#include <sstream>

#include <boost/multiprecision/cpp_int.hpp>

#include "jointslab/error.hpp"

namespace jointslab {

Real to_real(const mpz_class& z) { return Real(z.get_str()); }

Real to_real(const mpq_class& q) { return to_real(q.get_num()) / to_real(q.get_den()); }

mpq_class to_rational(const Real& x) {
    if (!boost::multiprecision::isfinite(x)) fail(ErrorKind::InvalidArgument, "non-finite real");
    if (x == 0) return mpq_class(0);
    int e = 0;
    Real m = boost::multiprecision::frexp(x, &e);
    Real scaled = boost::multiprecision::ldexp(m, static_cast<int>(kRealBits));
    boost::multiprecision::cpp_int i = static_cast<boost::multiprecision::cpp_int>(scaled);
    mpz_class num(i.str());
    long shift = static_cast<long>(e) - static_cast<long>(kRealBits);
    mpq_class out(num);
    if (shift >= 0) {
        mpz_class pow2;
        mpz_ui_pow_ui(pow2.get_mpz_t(), 2, static_cast<unsigned long>(shift));
        out *= pow2;
    } else {
        mpz_class pow2;
        mpz_ui_pow_ui(pow2.get_mpz_t(), 2, static_cast<unsigned long>(-shift));
        out /= pow2;
    }
    out.canonicalize();
    return out;
}

std::string format_real(const Real& x, int digits) {
    std::ostringstream os;
    os.precision(digits);
    os << x;
    return os.str();
}

}  // namespace jointslab
