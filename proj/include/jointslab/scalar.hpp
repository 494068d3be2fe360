#ifndef JOINTSLAB_SCALAR_HPP
#define JOINTSLAB_SCALAR_HPP

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include <gmpxx.h>

#include "jointslab/error.hpp"

namespace jointslab {

// Base field: F_p for a prime p < 2^32, or the rationals.
class Field {
public:
    enum class Kind { Prime, Rational };

    static Field prime(std::uint64_t p);
    static Field rational() { return Field(Kind::Rational, 0); }
    // Accepts "Q", "rational", "p:<p>" or a bare prime.
    static Field parse(const std::string& text);

    Kind kind() const { return kind_; }
    bool is_prime() const { return kind_ == Kind::Prime; }
    std::uint64_t modulus() const { return p_; }
    std::string describe() const;

    friend bool operator==(const Field& a, const Field& b) {
        return a.kind_ == b.kind_ && a.p_ == b.p_;
    }

private:
    Field(Kind kind, std::uint64_t p) : kind_(kind), p_(p) {}
    Kind kind_;
    std::uint64_t p_;
};

bool is_prime_u64(std::uint64_t n);

class Scalar {
public:
    explicit Scalar(Field f = Field::rational());
    Scalar(Field f, long value);
    Scalar(Field f, const mpz_class& value);
    // Rationals are mapped into F_p through the inverse of the denominator.
    Scalar(Field f, const mpq_class& value);

    static Scalar zero(Field f) { return Scalar(f); }
    static Scalar one(Field f) { return Scalar(f, 1L); }
    // "a/b", "a" or a residue; residues are reduced into [0, p).
    static Scalar parse(Field f, const std::string& text);

    const Field& field() const { return field_; }
    bool is_zero() const;
    bool is_one() const;
    std::string str() const;

    std::uint64_t residue() const;
    const mpq_class& rational() const;

    Scalar operator-() const;
    Scalar inverse() const;

    Scalar& operator+=(const Scalar& o);
    Scalar& operator-=(const Scalar& o);
    Scalar& operator*=(const Scalar& o);
    Scalar& operator/=(const Scalar& o);

    friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
    friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
    friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
    friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }
    friend bool operator==(const Scalar& a, const Scalar& b);
    friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

private:
    void check_same(const Scalar& o) const;

    Field field_;
    std::variant<std::uint64_t, mpq_class> v_;
};

using Vec = std::vector<Scalar>;

Vec zero_vec(Field f, std::size_t n);
Vec parse_vec(Field f, const std::vector<std::string>& items);

}  // namespace jointslab

#endif
