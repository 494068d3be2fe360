#include "jointslab/bounds.hpp"

#include "jointslab/error.hpp"

namespace jointslab {

mpz_class factorial(unsigned n) {
    mpz_class r;
    mpz_fac_ui(r.get_mpz_t(), n);
    return r;
}

Real binom_real(const Real& x, unsigned d) {
    Real prod = 1;
    for (unsigned i = 0; i < d; ++i) prod *= x - i;
    return prod / to_real(factorial(d));
}

BinomSolution solve_binom_real(const mpz_class& J, unsigned d, const Real& tol) {
    if (J < 1) fail(ErrorKind::InvalidArgument, "J must be at least 1");
    if (d < 1) fail(ErrorKind::InvalidArgument, "d must be at least 1");
    const Real target = to_real(J);
    Real lo = d;
    Real hi = Real(d) + target;
    // C(x, d) is increasing on [d, inf); run the bracket down to the working precision.
    for (unsigned it = 0; it < kRealBits + 64; ++it) {
        Real mid = (lo + hi) / 2;
        if (mid == lo || mid == hi) break;
        if (binom_real(mid, d) < target)
            lo = mid;
        else
            hi = mid;
    }
    BinomSolution sol;
    sol.x = (lo + hi) / 2;
    if (boost::multiprecision::abs(binom_real(sol.x, d) - target) > tol * target)
        fail(ErrorKind::Internal, "real binomial bisection missed its tolerance");
    Real rounded = boost::multiprecision::round(sol.x);
    if (rounded >= d) {
        unsigned long cand = static_cast<unsigned long>(rounded);
        mpz_class c;
        mpz_bin_uiui(c.get_mpz_t(), cand, d);
        if (c == J) {
            sol.integral = true;
            sol.exact_x = cand;
            sol.x = Real(cand);
        }
    }
    return sol;
}

SharpBound sharp_bound(const mpz_class& J, unsigned d) {
    SharpBound b;
    b.x = solve_binom_real(J, d, Real(1e-30));
    b.l_min = binom_real(b.x.x, d - 1);
    b.l_min_alt = Real(d) * to_real(J) / (b.x.x - d + 1);
    if (boost::multiprecision::abs(b.l_min - b.l_min_alt) > Real(1e-25) * b.l_min)
        fail(ErrorKind::Internal, "the two L_min formulas disagree");
    if (b.x.integral) {
        b.exact = true;
        mpz_bin_uiui(b.exact_l_min.get_mpz_t(), b.x.exact_x, d - 1);
    }
    return b;
}

ConstantVariant parse_constant_variant(const std::string& name) {
    if (name == "nu-star" || name == "nu_star" || name == "nustar") return ConstantVariant::NuStar;
    if (name == "nu") return ConstantVariant::Nu;
    if (name == "upper-kM" || name == "upper_kM" || name == "upper-km") return ConstantVariant::UpperKM;
    if (name == "lower-1m" || name == "lower_1m") return ConstantVariant::Lower1M;
    fail(ErrorKind::InvalidArgument, "unknown constant variant '" + name + "'");
}

Real constant_C(const std::vector<unsigned>& k, const std::vector<unsigned>& m, ConstantVariant variant) {
    if (k.empty() || k.size() != m.size())
        fail(ErrorKind::InvalidArgument, "k and m must be nonempty and of equal length");
    unsigned d = 0, s = 0;
    for (std::size_t i = 0; i < k.size(); ++i) {
        if (k[i] == 0 || m[i] == 0) fail(ErrorKind::InvalidArgument, "k and m entries must be positive");
        d += k[i] * m[i];
        s += m[i];
    }
    if (s < 2) fail(ErrorKind::InvalidArgument, "constants need at least two varieties per joint");
    const Real expo = Real(1) / Real(s - 1);
    switch (variant) {
        case ConstantVariant::NuStar:
        case ConstantVariant::Nu: {
            mpz_class den = 1;
            for (std::size_t i = 0; i < k.size(); ++i) {
                mpz_class t;
                mpz_pow_ui(t.get_mpz_t(), factorial(k[i]).get_mpz_t(), m[i]);
                den *= t;
                mpz_ui_pow_ui(t.get_mpz_t(), m[i], m[i]);
                den *= t;
            }
            return boost::multiprecision::pow(to_real(mpq_class(factorial(d), den)), expo);
        }
        case ConstantVariant::UpperKM: {
            if (k.size() != 1) fail(ErrorKind::InvalidArgument, "upper-kM is a single-class bound");
            mpz_class den, t;
            mpz_ui_pow_ui(den.get_mpz_t(), k[0], m[0]);
            mpz_ui_pow_ui(t.get_mpz_t(), m[0], m[0]);
            den *= t;
            return boost::multiprecision::pow(to_real(mpq_class(factorial(k[0] * m[0]), den)), expo);
        }
        case ConstantVariant::Lower1M: {
            if (k.size() != 1 || k[0] != 1) fail(ErrorKind::InvalidArgument, "lower-1m needs k = 1");
            return boost::multiprecision::pow(to_real(factorial(m[0] - 1)), expo) / Real(m[0]);
        }
    }
    fail(ErrorKind::Internal, "unhandled constant variant");
}

Real generic_construction_ratio(unsigned k, unsigned m) {
    if (k == 0 || m < 2) fail(ErrorKind::InvalidArgument, "need k >= 1 and m >= 2");
    const unsigned d = k * m;
    Real num = boost::multiprecision::pow(to_real(factorial(d - k)), Real(m) / Real(m - 1));
    return num / to_real(factorial(d));
}

}  // namespace jointslab
