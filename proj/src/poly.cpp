#include "jointslab/poly.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

#include "jointslab/linalg.hpp"

namespace jointslab {

unsigned total_degree(const Exponent& e) {
    return std::accumulate(e.begin(), e.end(), 0u);
}

std::vector<Exponent> monomials_of_degree(std::size_t dim, unsigned n) {
    std::vector<Exponent> out;
    if (dim == 0) {
        if (n == 0) out.emplace_back();
        return out;
    }
    Exponent e(dim, 0);
    std::function<void(std::size_t, unsigned)> rec = [&](std::size_t i, unsigned left) {
        if (i + 1 == dim) {
            e[i] = left;
            out.push_back(e);
            return;
        }
        for (unsigned a = left + 1; a-- > 0;) {
            e[i] = a;
            rec(i + 1, left - a);
        }
    };
    rec(0, n);
    return out;
}

std::vector<Exponent> monomials_up_to(std::size_t dim, unsigned n) {
    std::vector<Exponent> out;
    for (unsigned k = 0; k <= n; ++k) {
        auto level = monomials_of_degree(dim, k);
        out.insert(out.end(), level.begin(), level.end());
    }
    return out;
}

MultiPoly MultiPoly::constant(Field f, std::size_t dim, const Scalar& c) {
    MultiPoly p(f, dim);
    p.add_term(Exponent(dim, 0), c);
    return p;
}

MultiPoly MultiPoly::variable(Field f, std::size_t dim, std::size_t i) {
    if (i >= dim) fail(ErrorKind::DimensionMismatch, "variable index out of range");
    Exponent e(dim, 0);
    e[i] = 1;
    return monomial(f, e, Scalar::one(f));
}

MultiPoly MultiPoly::monomial(Field f, const Exponent& e, const Scalar& c) {
    MultiPoly p(f, e.size());
    p.add_term(e, c);
    return p;
}

MultiPoly MultiPoly::affine(Field f, const Vec& a, const Scalar& c) {
    MultiPoly p = constant(f, a.size(), c);
    for (std::size_t i = 0; i < a.size(); ++i) {
        Exponent e(a.size(), 0);
        e[i] = 1;
        p.add_term(e, a[i]);
    }
    return p;
}

long MultiPoly::degree() const {
    long d = -1;
    for (const auto& [e, c] : terms_) d = std::max<long>(d, total_degree(e));
    return d;
}

long MultiPoly::low_degree() const {
    long d = -1;
    for (const auto& [e, c] : terms_) {
        long t = total_degree(e);
        if (d < 0 || t < d) d = t;
    }
    return d;
}

Scalar MultiPoly::coeff(const Exponent& e) const {
    if (e.size() != dim_) fail(ErrorKind::DimensionMismatch, "exponent dimension mismatch");
    auto it = terms_.find(e);
    return it == terms_.end() ? Scalar(field_) : it->second;
}

void MultiPoly::add_term(const Exponent& e, const Scalar& c) {
    if (e.size() != dim_) fail(ErrorKind::DimensionMismatch, "exponent dimension mismatch");
    if (!(c.field() == field_)) fail(ErrorKind::FieldMismatch, "coefficient from another field");
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

void MultiPoly::check_compatible(const MultiPoly& o) const {
    if (!(field_ == o.field_)) fail(ErrorKind::FieldMismatch, "polynomials over different fields");
    if (dim_ != o.dim_) fail(ErrorKind::DimensionMismatch, "polynomials of different dimension");
}

MultiPoly MultiPoly::operator-() const {
    MultiPoly out(field_, dim_);
    for (const auto& [e, c] : terms_) out.terms_.emplace(e, -c);
    return out;
}

MultiPoly& MultiPoly::operator+=(const MultiPoly& o) {
    check_compatible(o);
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
}

MultiPoly& MultiPoly::operator-=(const MultiPoly& o) {
    check_compatible(o);
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
}

MultiPoly& MultiPoly::operator*=(const Scalar& c) {
    if (c.is_zero()) {
        terms_.clear();
        return *this;
    }
    for (auto& [e, v] : terms_) v *= c;
    return *this;
}

MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
    a.check_compatible(b);
    MultiPoly out(a.field_, a.dim_);
    Exponent e(a.dim_);
    for (const auto& [ea, ca] : a.terms_)
        for (const auto& [eb, cb] : b.terms_) {
            for (std::size_t i = 0; i < a.dim_; ++i) e[i] = ea[i] + eb[i];
            out.add_term(e, ca * cb);
        }
    return out;
}

MultiPoly MultiPoly::pow(unsigned e) const {
    MultiPoly result = constant(field_, dim_, Scalar::one(field_));
    MultiPoly base = *this;
    while (e) {
        if (e & 1) result = result * base;
        e >>= 1;
        if (e) base = base * base;
    }
    return result;
}

Scalar MultiPoly::evaluate(const Vec& x) const {
    if (x.size() != dim_) fail(ErrorKind::DimensionMismatch, "evaluation point dimension mismatch");
    Scalar total(field_);
    for (const auto& [e, c] : terms_) {
        Scalar t = c;
        for (std::size_t i = 0; i < dim_; ++i)
            for (unsigned k = 0; k < e[i]; ++k) t *= x[i];
        total += t;
    }
    return total;
}

MultiPoly MultiPoly::substitute(const Vec& origin, const std::vector<Vec>& columns) const {
    if (origin.size() != dim_) fail(ErrorKind::DimensionMismatch, "substitution origin dimension mismatch");
    const std::size_t k = columns.size();
    for (const auto& col : columns)
        if (col.size() != dim_) fail(ErrorKind::DimensionMismatch, "substitution column dimension mismatch");

    std::vector<unsigned> max_pow(dim_, 0);
    for (const auto& [e, c] : terms_)
        for (std::size_t i = 0; i < dim_; ++i) max_pow[i] = std::max(max_pow[i], e[i]);

    // powers[i][a] = (origin_i + sum_j columns[j][i] y_j)^a
    std::vector<std::vector<MultiPoly>> powers(dim_);
    for (std::size_t i = 0; i < dim_; ++i) {
        Vec a(k, Scalar(field_));
        for (std::size_t j = 0; j < k; ++j) a[j] = columns[j][i];
        MultiPoly lin = affine(field_, a, origin[i]);
        powers[i].push_back(constant(field_, k, Scalar::one(field_)));
        for (unsigned p = 1; p <= max_pow[i]; ++p) powers[i].push_back(powers[i].back() * lin);
    }

    MultiPoly out(field_, k);
    for (const auto& [e, c] : terms_) {
        MultiPoly t = constant(field_, k, c);
        for (std::size_t i = 0; i < dim_; ++i)
            if (e[i] > 0) t = t * powers[i][e[i]];
        out += t;
    }
    return out;
}

mpz_class binomial(unsigned n, unsigned k) {
    mpz_class r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

MultiPoly hasse_derivative(const MultiPoly& f, const Exponent& alpha) {
    if (alpha.size() != f.dim())
        fail(ErrorKind::DimensionMismatch, "derivative order has dimension " + std::to_string(alpha.size()) +
                                               ", polynomial has " + std::to_string(f.dim()));
    MultiPoly out(f.field(), f.dim());
    Exponent e(f.dim());
    for (const auto& [beta, c] : f.terms()) {
        bool dominates = true;
        mpz_class coef = 1;
        for (std::size_t i = 0; i < f.dim() && dominates; ++i) {
            if (beta[i] < alpha[i]) {
                dominates = false;
                break;
            }
            coef *= binomial(beta[i], alpha[i]);
            e[i] = beta[i] - alpha[i];
        }
        if (!dominates) continue;
        out.add_term(e, c * Scalar(f.field(), coef));
    }
    return out;
}

Multiplicity multiplicity_at_point(const MultiPoly& f, const Vec& point) {
    if (point.size() != f.dim()) fail(ErrorKind::DimensionMismatch, "point dimension mismatch");
    if (f.is_zero()) return Multiplicity::inf();
    std::vector<Vec> identity;
    for (std::size_t j = 0; j < f.dim(); ++j) {
        Vec col = zero_vec(f.field(), f.dim());
        col[j] = Scalar::one(f.field());
        identity.push_back(col);
    }
    MultiPoly shifted = f.substitute(point, identity);
    return Multiplicity::of(static_cast<unsigned>(shifted.low_degree()));
}

MultiPoly restrict_to_line(const MultiPoly& f, const Vec& base, const Vec& dir) {
    return f.substitute(base, {dir});
}

Multiplicity multiplicity_on_line(const MultiPoly& f, const Vec& base, const Vec& dir) {
    if (base.size() != f.dim() || dir.size() != f.dim())
        fail(ErrorKind::DimensionMismatch, "line dimension mismatch");
    if (f.is_zero()) return Multiplicity::inf();
    const unsigned cap = static_cast<unsigned>(f.degree()) + 1;
    for (unsigned v = 0; v < cap; ++v)
        for (const auto& alpha : monomials_of_degree(f.dim(), v))
            if (!restrict_to_line(hasse_derivative(f, alpha), base, dir).is_zero())
                return Multiplicity::of(v);
    fail(ErrorKind::Internal, "nonzero polynomial vanished to order deg+1 along a line");
}

void validate_frame(const CoordinateFrame& frame) {
    const std::size_t d = frame.origin.size();
    if (frame.basis.size() != d) fail(ErrorKind::DimensionMismatch, "frame needs d basis vectors");
    if (d == 0) return;
    for (const auto& b : frame.basis)
        if (b.size() != d) fail(ErrorKind::DimensionMismatch, "frame basis vector dimension mismatch");
    if (rank(frame.origin[0].field(), frame.basis, d) != d)
        fail(ErrorKind::SingularFrame, "frame basis is singular");
}

MultiPoly frame_expansion(const MultiPoly& f, const CoordinateFrame& frame) {
    if (frame.origin.size() != f.dim()) fail(ErrorKind::DimensionMismatch, "frame dimension mismatch");
    validate_frame(frame);
    return f.substitute(frame.origin, frame.basis);
}

Scalar frame_derivative(const MultiPoly& f, const CoordinateFrame& frame, const Exponent& alpha) {
    if (alpha.size() != f.dim()) fail(ErrorKind::DimensionMismatch, "derivative order dimension mismatch");
    return frame_expansion(f, frame).coeff(alpha);
}

}  // namespace jointslab
