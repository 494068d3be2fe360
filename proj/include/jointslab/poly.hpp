#ifndef JOINTSLAB_POLY_HPP
#define JOINTSLAB_POLY_HPP

#include <compare>
#include <map>
#include <optional>
#include <vector>

#include "jointslab/scalar.hpp"

namespace jointslab {

using Exponent = std::vector<unsigned>;

unsigned total_degree(const Exponent& e);

// All exponents of the given dimension with |e| <= n, graded then lexicographic.
std::vector<Exponent> monomials_up_to(std::size_t dim, unsigned n);
std::vector<Exponent> monomials_of_degree(std::size_t dim, unsigned n);

// Sparse polynomial in `dim` variables; zero coefficients are never stored.
class MultiPoly {
public:
    using Terms = std::map<Exponent, Scalar>;

    MultiPoly(Field f, std::size_t dim) : field_(f), dim_(dim) {}

    static MultiPoly constant(Field f, std::size_t dim, const Scalar& c);
    static MultiPoly variable(Field f, std::size_t dim, std::size_t i);
    static MultiPoly monomial(Field f, const Exponent& e, const Scalar& c);
    // a . x + c
    static MultiPoly affine(Field f, const Vec& a, const Scalar& c);

    const Field& field() const { return field_; }
    std::size_t dim() const { return dim_; }
    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    // -1 for the zero polynomial.
    long degree() const;
    // Smallest total degree of a stored term; -1 for the zero polynomial.
    long low_degree() const;
    Scalar coeff(const Exponent& e) const;

    void add_term(const Exponent& e, const Scalar& c);

    MultiPoly operator-() const;
    MultiPoly& operator+=(const MultiPoly& o);
    MultiPoly& operator-=(const MultiPoly& o);
    MultiPoly& operator*=(const Scalar& c);
    friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
    friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }
    friend MultiPoly operator*(MultiPoly a, const Scalar& c) { return a *= c; }
    friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b);
    friend bool operator==(const MultiPoly& a, const MultiPoly& b) {
        return a.field_ == b.field_ && a.dim_ == b.dim_ && a.terms_ == b.terms_;
    }

    MultiPoly pow(unsigned e) const;
    Scalar evaluate(const Vec& x) const;

    // g(y) = f(origin + sum_j y_j * columns[j]); g has columns.size() variables.
    MultiPoly substitute(const Vec& origin, const std::vector<Vec>& columns) const;

private:
    void check_compatible(const MultiPoly& o) const;

    Field field_;
    std::size_t dim_;
    Terms terms_;
};

// Binomial C(n, k) as an integer.
mpz_class binomial(unsigned n, unsigned k);

MultiPoly hasse_derivative(const MultiPoly& f, const Exponent& alpha);

// Natural number or infinity; infinity compares above every natural.
struct Multiplicity {
    bool infinite = false;
    unsigned value = 0;

    static Multiplicity inf() { return {true, 0}; }
    static Multiplicity of(unsigned v) { return {false, v}; }

    friend bool operator==(const Multiplicity&, const Multiplicity&) = default;
    friend std::strong_ordering operator<=>(const Multiplicity& a, const Multiplicity& b) {
        if (a.infinite || b.infinite) return a.infinite <=> b.infinite;
        return a.value <=> b.value;
    }
    std::string str() const { return infinite ? "inf" : std::to_string(value); }
};

Multiplicity multiplicity_at_point(const MultiPoly& f, const Vec& point);
Multiplicity multiplicity_on_line(const MultiPoly& f, const Vec& base, const Vec& dir);

// f(base + t * dir) as a univariate polynomial in t.
MultiPoly restrict_to_line(const MultiPoly& f, const Vec& base, const Vec& dir);

// Origin plus an invertible basis; basis[i] is the image of the i-th unit vector.
struct CoordinateFrame {
    Vec origin;
    std::vector<Vec> basis;
};

void validate_frame(const CoordinateFrame& frame);

// f(origin + A y) with A the frame basis; its y^alpha coefficient is D^alpha f at the origin.
MultiPoly frame_expansion(const MultiPoly& f, const CoordinateFrame& frame);

Scalar frame_derivative(const MultiPoly& f, const CoordinateFrame& frame, const Exponent& alpha);

}  // namespace jointslab

#endif
