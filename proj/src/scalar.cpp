#include "jointslab/scalar.hpp"

#include <cctype>

namespace jointslab {

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::DimensionMismatch: return "dimension_mismatch";
        case ErrorKind::FieldMismatch: return "field_mismatch";
        case ErrorKind::InvalidArgument: return "invalid_argument";
        case ErrorKind::SingularFrame: return "singular_frame";
        case ErrorKind::Verification: return "verification_failure";
        case ErrorKind::BudgetExceeded: return "budget_exceeded";
        case ErrorKind::Internal: return "internal";
        case ErrorKind::Parse: return "parse";
    }
    return "unknown";
}

bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t q = 2; q * q <= n; ++q)
        if (n % q == 0) return false;
    return true;
}

Field Field::prime(std::uint64_t p) {
    if (p >= (std::uint64_t{1} << 32) || !is_prime_u64(p))
        fail(ErrorKind::InvalidArgument, "modulus must be a prime below 2^32, got " + std::to_string(p));
    return Field(Kind::Prime, p);
}

Field Field::parse(const std::string& text) {
    if (text == "Q" || text == "q" || text == "rational") return rational();
    std::string digits = text;
    if (digits.rfind("p:", 0) == 0) digits = digits.substr(2);
    if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
        fail(ErrorKind::Parse, "bad field descriptor '" + text + "'");
    return prime(std::stoull(digits));
}

std::string Field::describe() const {
    return is_prime() ? "p:" + std::to_string(p_) : "Q";
}

namespace {

std::uint64_t reduce(const mpz_class& v, std::uint64_t p) {
    mpz_class r = v % mpz_class(static_cast<unsigned long>(p));
    if (r < 0) r += static_cast<unsigned long>(p);
    return r.get_ui();
}

std::uint64_t inv_mod(std::uint64_t a, std::uint64_t p) {
    std::int64_t t = 0, nt = 1;
    std::int64_t r = static_cast<std::int64_t>(p), nr = static_cast<std::int64_t>(a);
    while (nr != 0) {
        std::int64_t q = r / nr;
        std::int64_t tmp = t - q * nt;
        t = nt;
        nt = tmp;
        tmp = r - q * nr;
        r = nr;
        nr = tmp;
    }
    if (r != 1) fail(ErrorKind::InvalidArgument, "element not invertible");
    if (t < 0) t += static_cast<std::int64_t>(p);
    return static_cast<std::uint64_t>(t);
}

}  // namespace

Scalar::Scalar(Field f) : field_(f) {
    if (f.is_prime())
        v_ = std::uint64_t{0};
    else
        v_ = mpq_class(0);
}

Scalar::Scalar(Field f, long value) : Scalar(f, mpz_class(value)) {}

Scalar::Scalar(Field f, const mpz_class& value) : field_(f) {
    if (f.is_prime())
        v_ = reduce(value, f.modulus());
    else
        v_ = mpq_class(value);
}

Scalar::Scalar(Field f, const mpq_class& value) : field_(f) {
    if (f.is_prime()) {
        std::uint64_t den = reduce(value.get_den(), f.modulus());
        if (den == 0)
            fail(ErrorKind::InvalidArgument,
                 "denominator of " + value.get_str() + " vanishes in " + f.describe());
        v_ = reduce(value.get_num(), f.modulus()) * inv_mod(den, f.modulus()) % f.modulus();
    } else {
        mpq_class q = value;
        q.canonicalize();
        v_ = q;
    }
}

Scalar Scalar::parse(Field f, const std::string& text) {
    mpq_class q;
    std::string t;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) t += c;
    if (t.empty() || q.set_str(t, 10) != 0 || q.get_den() == 0)
        fail(ErrorKind::Parse, "bad scalar '" + text + "'");
    q.canonicalize();
    return Scalar(f, q);
}

bool Scalar::is_zero() const {
    if (auto r = std::get_if<std::uint64_t>(&v_)) return *r == 0;
    return std::get<mpq_class>(v_) == 0;
}

bool Scalar::is_one() const {
    if (auto r = std::get_if<std::uint64_t>(&v_)) return *r == 1;
    return std::get<mpq_class>(v_) == 1;
}

std::string Scalar::str() const {
    if (auto r = std::get_if<std::uint64_t>(&v_)) return std::to_string(*r);
    return std::get<mpq_class>(v_).get_str();
}

std::uint64_t Scalar::residue() const {
    if (auto r = std::get_if<std::uint64_t>(&v_)) return *r;
    fail(ErrorKind::FieldMismatch, "residue requested from a rational scalar");
}

const mpq_class& Scalar::rational() const {
    if (auto q = std::get_if<mpq_class>(&v_)) return *q;
    fail(ErrorKind::FieldMismatch, "rational value requested from a prime-field scalar");
}

void Scalar::check_same(const Scalar& o) const {
    if (!(field_ == o.field_))
        fail(ErrorKind::FieldMismatch, "mixing " + field_.describe() + " and " + o.field_.describe());
}

Scalar Scalar::operator-() const {
    Scalar out(field_);
    if (auto r = std::get_if<std::uint64_t>(&v_))
        out.v_ = *r == 0 ? 0 : field_.modulus() - *r;
    else
        out.v_ = mpq_class(-std::get<mpq_class>(v_));
    return out;
}

Scalar Scalar::inverse() const {
    if (is_zero()) fail(ErrorKind::InvalidArgument, "division by zero");
    Scalar out(field_);
    if (auto r = std::get_if<std::uint64_t>(&v_))
        out.v_ = inv_mod(*r, field_.modulus());
    else
        out.v_ = mpq_class(1 / std::get<mpq_class>(v_));
    return out;
}

Scalar& Scalar::operator+=(const Scalar& o) {
    check_same(o);
    if (auto r = std::get_if<std::uint64_t>(&v_)) {
        std::uint64_t s = *r + std::get<std::uint64_t>(o.v_);
        *r = s >= field_.modulus() ? s - field_.modulus() : s;
    } else {
        std::get<mpq_class>(v_) += std::get<mpq_class>(o.v_);
    }
    return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) {
    check_same(o);
    if (auto r = std::get_if<std::uint64_t>(&v_)) {
        std::uint64_t b = std::get<std::uint64_t>(o.v_);
        *r = *r >= b ? *r - b : *r + field_.modulus() - b;
    } else {
        std::get<mpq_class>(v_) -= std::get<mpq_class>(o.v_);
    }
    return *this;
}

Scalar& Scalar::operator*=(const Scalar& o) {
    check_same(o);
    if (auto r = std::get_if<std::uint64_t>(&v_))
        *r = *r * std::get<std::uint64_t>(o.v_) % field_.modulus();
    else
        std::get<mpq_class>(v_) *= std::get<mpq_class>(o.v_);
    return *this;
}

Scalar& Scalar::operator/=(const Scalar& o) {
    check_same(o);
    return *this *= o.inverse();
}

bool operator==(const Scalar& a, const Scalar& b) {
    return a.field_ == b.field_ && a.v_ == b.v_;
}

Vec zero_vec(Field f, std::size_t n) { return Vec(n, Scalar(f)); }

Vec parse_vec(Field f, const std::vector<std::string>& items) {
    Vec out;
    out.reserve(items.size());
    for (const auto& s : items) out.push_back(Scalar::parse(f, s));
    return out;
}

}  // namespace jointslab
