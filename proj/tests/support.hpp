#ifndef JOINTSLAB_TESTS_SUPPORT_HPP
#define JOINTSLAB_TESTS_SUPPORT_HPP

#include <random>

#include <doctest.h>

#include "jointslab/config.hpp"
#include "jointslab/poly.hpp"
#include "jointslab/scalar.hpp"

namespace testsupport {

using namespace jointslab;

inline Scalar random_scalar(Field f, std::mt19937_64& rng) {
    if (f.is_prime()) return Scalar(f, static_cast<long>(rng() % f.modulus()));
    long num = static_cast<long>(rng() % 41) - 20;
    long den = static_cast<long>(rng() % 5) + 1;
    return Scalar(f, mpq_class(num, den));
}

inline Vec random_vec(Field f, std::size_t n, std::mt19937_64& rng) {
    Vec v;
    for (std::size_t i = 0; i < n; ++i) v.push_back(random_scalar(f, rng));
    return v;
}

inline MultiPoly random_poly(Field f, std::size_t dim, unsigned deg, std::size_t terms, std::mt19937_64& rng) {
    MultiPoly p(f, dim);
    auto mons = monomials_up_to(dim, deg);
    for (std::size_t t = 0; t < terms; ++t) p.add_term(mons[rng() % mons.size()], random_scalar(f, rng));
    return p;
}

// Disjoint union of two configurations over the same field and dimension; b is translated by `shift`.
inline JointsConfiguration disjoint_union(const JointsConfiguration& a, const JointsConfiguration& b,
                                          const Vec& shift) {
    JointsConfiguration out = a;
    const std::size_t po = a.points.size(), lo = a.lines.size();
    for (auto p : b.points) {
        for (std::size_t i = 0; i < p.size(); ++i) p[i] += shift[i];
        out.points.push_back(p);
    }
    for (auto l : b.lines) {
        l.base += po;
        out.lines.push_back(l);
    }
    for (auto j : b.joints) {
        j.point += po;
        for (auto& l : j.lines) l += lo;
        out.joints.push_back(j);
    }
    return out;
}

inline Vec qvec(std::initializer_list<long> xs) {
    Vec v;
    for (long x : xs) v.emplace_back(Field::rational(), x);
    return v;
}

}  // namespace testsupport

#endif
