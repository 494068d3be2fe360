#ifndef JOINTSLAB_VANISHING_HPP
#define JOINTSLAB_VANISHING_HPP

#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "jointslab/config.hpp"
#include "jointslab/generators.hpp"
#include "jointslab/poly.hpp"

namespace jointslab {

// Bijection (p, r) -> {1, ..., (n+1)J}, increasing in r.
struct VanishingSchedule {
    unsigned n = 0;
    std::size_t joints = 0;
    std::vector<std::vector<std::size_t>> T;            // T[p][r], 1-based
    std::vector<std::pair<std::size_t, unsigned>> order;  // order[t-1] = (p, r)
    std::string tie_break = "joint index, then level";
    std::size_t length() const { return order.size(); }
};

// Ranks (p, r) by (r - n)/z_p, ties by joint index then r.
VanishingSchedule associated_timestamp(const JointsConfiguration& cfg, const std::vector<mpq_class>& z, unsigned n);
std::vector<mpq_class> uniform_weights(const JointsConfiguration& cfg);

// Value of v_l, possibly infinite when the line carries too few joints for its degree.
struct LineOrder {
    enum class Kind { NegInf, Finite, PosInf };
    Kind kind = Kind::NegInf;
    mpq_class value;
    std::string str() const;
    friend bool operator==(const LineOrder& a, const LineOrder& b) {
        return a.kind == b.kind && (a.kind != Kind::Finite || a.value == b.value);
    }
};

// (sum v_p - n deg) / (count - deg); a nonpositive denominator gives -inf unless the numerator is positive.
LineOrder line_order(long sum_v, std::size_t count, unsigned deg, unsigned n);

// v_p(t) for every joint.
std::vector<unsigned> joint_orders(const VanishingSchedule& sched, std::size_t t);
// v_l(t) for every line; curve mode uses the stored degrees, line mode treats them as 1.
std::vector<LineOrder> line_orders(const JointsConfiguration& cfg, const VanishingSchedule& sched, std::size_t t);

struct SpEntry {
    Exponent alpha;
    std::size_t time = 0;  // T(p, |alpha|)
};

struct SpSet {
    std::size_t t_f = 0;
    std::vector<std::vector<SpEntry>> per_joint;
    std::size_t size(std::size_t p) const { return per_joint[p].size(); }
    std::size_t total() const;
};

SpSet enumerate_Sp(const JointsConfiguration& cfg, const VanishingSchedule& sched, std::size_t t_f);
// Per-joint terminating times.
SpSet enumerate_Sp(const JointsConfiguration& cfg, const VanishingSchedule& sched,
                   const std::vector<std::size_t>& t_f);

// Local frame at a joint: origin at its point, basis the directions of its labeled lines.
CoordinateFrame joint_frame(const JointsConfiguration& cfg, std::size_t p);

// Linear functionals f -> D_p^alpha f(p) on the coefficient space of degree <= n polynomials,
// whose coordinates follow monomials_up_to(d, n).
std::vector<Vec> derivative_rows(const JointsConfiguration& cfg, std::size_t p, unsigned n,
                                 const std::vector<Exponent>& alphas);

MultiPoly poly_from_coefficients(Field f, std::size_t dim, unsigned n, const Vec& coeffs);

struct VanishingCertificate {
    Field field = Field::prime(1009);
    unsigned n = 0;
    std::size_t ambient = 0;  // C(n+d, d)
    std::size_t rank = 0;
    std::size_t nullity = 0;
    std::size_t sum_Sp = 0;
    std::vector<std::size_t> per_joint_Sp;
    std::string tie_break;
    std::optional<MultiPoly> witness;
    bool pass = false;
};

VanishingCertificate certify_vanishing(const JointsConfiguration& cfg, const std::vector<mpq_class>& z, unsigned n,
                                       Field field = Field::prime(1009), unsigned threads = 1);

struct ShavedBoxReport {
    std::size_t M = 0, d = 0;
    unsigned n = 0;
    std::size_t box_size = 0;  // |B'|
    bool f_nonzero = false;
    bool all_vanish = false;
    std::vector<std::pair<std::size_t, Exponent>> nonvanishing;  // offending (joint, alpha)
    Exponent apex;
    std::vector<bool> apex_nonzero;  // per joint
    bool apex_ok = false;            // some apex derivative is nonzero
    bool pass = false;
};

// (M - d) alpha_i + |alpha| < n for every i.
bool in_shaved_box(const Exponent& alpha, std::size_t M, unsigned n);
std::vector<Exponent> shaved_box(std::size_t d, std::size_t M, unsigned n);

// f = (s_1 ... s_M)^{n/M} against the shaved box at every joint of the tight configuration.
ShavedBoxReport shaved_box_check(const HyperplaneArrangement& arr, unsigned n);

struct RelaxedReport {
    std::size_t joint = 0;
    unsigned n = 0;
    mpq_class epsilon;
    unsigned target_order = 0;  // ceil((1 - eps) d n / M)
    std::size_t t_f = 0;
    std::size_t conditions = 0;
    std::size_t ambient = 0;
    std::size_t nullity = 0;
    MultiPoly f{Field::prime(1009), 1};
    std::vector<Multiplicity> point_mult;
    bool point_mult_ok = false;  // mult(f, p') >= (1 - eps) d n / M
    std::vector<Multiplicity> line_mult;
    std::vector<LineOrder> line_bound;  // v_l(t_f)
    bool line_mult_ok = false;
    std::optional<Exponent> witness_alpha;  // in S_p \ S_p(t_f) with D^alpha f(p) != 0
    bool pass = false;
};

RelaxedReport relaxed_nonzero_polynomial(const JointsConfiguration& cfg, std::size_t p, const mpq_class& epsilon,
                                         unsigned n, Field field = Field::prime(1009));

}  // namespace jointslab

#endif
