#include "jointslab/vanishing.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "jointslab/linalg.hpp"
#include "jointslab/parallel.hpp"

namespace jointslab {

namespace {

mpz_class ceil_of(const mpq_class& q) {
    mpz_class out;
    mpz_cdiv_q(out.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return out;
}

// All alpha with |alpha| = r and alpha_i <= cap[i].
void bounded_compositions(unsigned r, const std::vector<long>& cap, std::vector<Exponent>& out) {
    const std::size_t d = cap.size();
    Exponent cur(d, 0);
    std::vector<long> tail(d + 1, 0);  // sum of caps from i onwards
    for (std::size_t i = d; i-- > 0;) tail[i] = tail[i + 1] + cap[i];
    auto rec = [&](auto&& self, std::size_t i, long left) -> void {
        if (i + 1 == d) {
            if (left <= cap[i]) {
                cur[i] = static_cast<unsigned>(left);
                out.push_back(cur);
            }
            return;
        }
        long lo = std::max(0L, left - tail[i + 1]);
        long hi = std::min(cap[i], left);
        for (long a = lo; a <= hi; ++a) {
            cur[i] = static_cast<unsigned>(a);
            self(self, i + 1, left - a);
        }
    };
    if (d == 0 || static_cast<long>(r) > tail[0]) return;
    rec(rec, 0, static_cast<long>(r));
}

unsigned line_degree(const JointsConfiguration& cfg, std::size_t l) {
    return cfg.curve_mode ? cfg.lines[l].deg : 1u;
}

std::map<Exponent, std::size_t> index_of(const std::vector<Exponent>& monos) {
    std::map<Exponent, std::size_t> idx;
    for (std::size_t i = 0; i < monos.size(); ++i) idx[monos[i]] = i;
    return idx;
}

}  // namespace

std::string LineOrder::str() const {
    switch (kind) {
        case Kind::NegInf: return "-inf";
        case Kind::PosInf: return "inf";
        default: return value.get_str();
    }
}

std::vector<mpq_class> uniform_weights(const JointsConfiguration& cfg) {
    return std::vector<mpq_class>(cfg.J(), mpq_class(1));
}

VanishingSchedule associated_timestamp(const JointsConfiguration& cfg, const std::vector<mpq_class>& z, unsigned n) {
    const std::size_t J = cfg.J();
    if (z.size() != J) fail(ErrorKind::DimensionMismatch, "weight vector length differs from the joint count");
    for (std::size_t p = 0; p < J; ++p)
        if (z[p] <= 0) fail(ErrorKind::InvalidArgument, "weight of joint " + std::to_string(p) + " is not positive");
    VanishingSchedule s;
    s.n = n;
    s.joints = J;
    for (std::size_t p = 0; p < J; ++p)
        for (unsigned r = 0; r <= n; ++r) s.order.emplace_back(p, r);
    std::stable_sort(s.order.begin(), s.order.end(), [&](const auto& a, const auto& b) {
        // (r_a - n)/z_a < (r_b - n)/z_b with positive weights
        mpq_class lhs = mpq_class(static_cast<long>(a.second) - static_cast<long>(n)) * z[b.first];
        mpq_class rhs = mpq_class(static_cast<long>(b.second) - static_cast<long>(n)) * z[a.first];
        if (lhs != rhs) return lhs < rhs;
        if (a.first != b.first) return a.first < b.first;
        return a.second < b.second;
    });
    s.T.assign(J, std::vector<std::size_t>(n + 1, 0));
    for (std::size_t t = 0; t < s.order.size(); ++t) s.T[s.order[t].first][s.order[t].second] = t + 1;
    return s;
}

LineOrder line_order(long sum_v, std::size_t count, unsigned deg, unsigned n) {
    mpz_class num = mpz_class(sum_v) - mpz_class(static_cast<unsigned long>(n)) * deg;
    long den = static_cast<long>(count) - static_cast<long>(deg);
    if (den <= 0) return {num <= 0 ? LineOrder::Kind::NegInf : LineOrder::Kind::PosInf, mpq_class(0)};
    mpq_class v(num, mpz_class(den));
    v.canonicalize();
    return {LineOrder::Kind::Finite, v};
}

std::vector<unsigned> joint_orders(const VanishingSchedule& sched, std::size_t t) {
    std::vector<unsigned> v(sched.joints, 0);
    for (std::size_t k = 0; k < std::min(t, sched.order.size()); ++k) ++v[sched.order[k].first];
    return v;
}

std::vector<LineOrder> line_orders(const JointsConfiguration& cfg, const VanishingSchedule& sched, std::size_t t) {
    auto v = joint_orders(sched, t);
    IncidenceStats st = incidence_stats(cfg);
    std::vector<LineOrder> out;
    for (std::size_t l = 0; l < cfg.L(); ++l) {
        long sum = 0;
        for (auto p : st.joints_on_line[l]) sum += v[p];
        out.push_back(line_order(sum, st.joints_on_line[l].size(), line_degree(cfg, l), sched.n));
    }
    return out;
}

std::size_t SpSet::total() const {
    std::size_t s = 0;
    for (const auto& v : per_joint) s += v.size();
    return s;
}

SpSet enumerate_Sp(const JointsConfiguration& cfg, const VanishingSchedule& sched, std::size_t t_f) {
    SpSet s = enumerate_Sp(cfg, sched, std::vector<std::size_t>(cfg.J(), t_f));
    s.t_f = t_f;
    return s;
}

SpSet enumerate_Sp(const JointsConfiguration& cfg, const VanishingSchedule& sched,
                   const std::vector<std::size_t>& t_f) {
    const std::size_t J = cfg.J(), d = cfg.dim;
    if (t_f.size() != J || sched.joints != J) fail(ErrorKind::DimensionMismatch, "schedule does not match configuration");
    IncidenceStats st = incidence_stats(cfg);
    SpSet out;
    out.t_f = t_f.empty() ? 0 : *std::max_element(t_f.begin(), t_f.end());
    out.per_joint.assign(J, {});
    std::vector<unsigned> v(J, 0);
    std::vector<long> line_sum(cfg.L(), 0);
    const std::size_t horizon = std::min(out.t_f, sched.length());
    std::vector<Exponent> alphas;
    for (std::size_t t = 1; t <= horizon; ++t) {
        const auto [p, r] = sched.order[t - 1];
        if (t <= t_f[p]) {
            std::vector<long> cap(d);
            bool empty = false;
            for (std::size_t i = 0; i < d; ++i) {
                std::size_t l = cfg.joints[p].lines[i];
                LineOrder lo = line_order(line_sum[l], st.joints_on_line[l].size(), line_degree(cfg, l), sched.n);
                if (lo.kind == LineOrder::Kind::NegInf) {
                    cap[i] = r;
                } else if (lo.kind == LineOrder::Kind::PosInf) {
                    empty = true;
                } else {
                    cap[i] = std::min<long>(r, static_cast<long>(r) - ceil_of(lo.value).get_si());
                    if (cap[i] < 0) empty = true;
                }
            }
            if (!empty) {
                alphas.clear();
                bounded_compositions(r, cap, alphas);
                for (auto& a : alphas) out.per_joint[p].push_back({std::move(a), t});
            }
        }
        ++v[p];
        for (std::size_t l : cfg.joints[p].lines) ++line_sum[l];
    }
    return out;
}

CoordinateFrame joint_frame(const JointsConfiguration& cfg, std::size_t p) {
    const Joint& j = cfg.joints.at(p);
    CoordinateFrame fr{cfg.points.at(j.point), {}};
    for (auto l : j.lines) fr.basis.push_back(cfg.lines.at(l).dir);
    return fr;
}

std::vector<Vec> derivative_rows(const JointsConfiguration& cfg, std::size_t p, unsigned n,
                                 const std::vector<Exponent>& alphas) {
    const std::size_t d = cfg.dim;
    const Field F = cfg.field;
    CoordinateFrame fr = joint_frame(cfg, p);
    validate_frame(fr);
    auto monos = monomials_up_to(d, n);
    auto idx = index_of(monos);
    const std::size_t N = monos.size();
    std::vector<std::vector<std::size_t>> succ(N, std::vector<std::size_t>(d, N));
    for (std::size_t k = 0; k < N; ++k) {
        if (total_degree(monos[k]) == n) continue;
        for (std::size_t j = 0; j < d; ++j) {
            Exponent e = monos[k];
            ++e[j];
            succ[k][j] = idx.at(e);
        }
    }
    // table[beta] holds the y-coefficients of prod_i (p_i + sum_j A_ij y_j)^{beta_i}.
    std::vector<Vec> table(N);
    table[0] = zero_vec(F, N);
    table[0][0] = Scalar::one(F);
    const Scalar zero = Scalar::zero(F);
    for (std::size_t k = 1; k < N; ++k) {
        const Exponent& b = monos[k];
        std::size_t i = 0;
        while (b[i] == 0) ++i;
        Exponent prev = b;
        --prev[i];
        const Vec& src = table[idx.at(prev)];
        const unsigned deg_prev = total_degree(prev);
        Vec dst = zero_vec(F, N);
        for (std::size_t g = 0; g < N && total_degree(monos[g]) <= deg_prev; ++g) {
            if (src[g].is_zero()) continue;
            dst[g] += src[g] * fr.origin[i];
            for (std::size_t j = 0; j < d; ++j) {
                const Scalar& a = fr.basis[j][i];
                if (!a.is_zero()) dst[succ[g][j]] += src[g] * a;
            }
        }
        table[k] = std::move(dst);
    }
    std::vector<Vec> rows;
    rows.reserve(alphas.size());
    for (const auto& a : alphas) {
        std::size_t col = idx.at(a);
        Vec row(N, zero);
        for (std::size_t k = 0; k < N; ++k) row[k] = table[k][col];
        rows.push_back(std::move(row));
    }
    return rows;
}

MultiPoly poly_from_coefficients(Field f, std::size_t dim, unsigned n, const Vec& coeffs) {
    auto monos = monomials_up_to(dim, n);
    if (coeffs.size() != monos.size()) fail(ErrorKind::DimensionMismatch, "coefficient vector has the wrong length");
    MultiPoly out(f, dim);
    for (std::size_t k = 0; k < monos.size(); ++k) out.add_term(monos[k], coeffs[k]);
    return out;
}

namespace {

std::vector<Vec> assemble(const JointsConfiguration& cfg, const SpSet& S, unsigned n, unsigned threads) {
    std::vector<std::vector<Vec>> per(cfg.J());
    parallel_for(cfg.J(), threads, [&](std::size_t p) {
        std::vector<Exponent> alphas;
        for (const auto& e : S.per_joint[p]) alphas.push_back(e.alpha);
        if (!alphas.empty()) per[p] = derivative_rows(cfg, p, n, alphas);
    });
    std::vector<Vec> rows;
    for (auto& r : per)
        for (auto& row : r) rows.push_back(std::move(row));
    return rows;
}

}  // namespace

VanishingCertificate certify_vanishing(const JointsConfiguration& cfg_in, const std::vector<mpq_class>& z, unsigned n,
                                       Field field, unsigned threads) {
    JointsConfiguration cfg = map_to_field(cfg_in, field);
    require_valid(cfg);
    VanishingSchedule sched = associated_timestamp(cfg, z, n);
    SpSet S = enumerate_Sp(cfg, sched, sched.length());

    VanishingCertificate c;
    c.field = field;
    c.n = n;
    c.tie_break = sched.tie_break;
    c.ambient = binomial(n + static_cast<unsigned>(cfg.dim), static_cast<unsigned>(cfg.dim)).get_ui();
    for (std::size_t p = 0; p < cfg.J(); ++p) c.per_joint_Sp.push_back(S.size(p));
    c.sum_Sp = S.total();

    auto rows = assemble(cfg, S, n, threads);
    RowEchelon re = row_reduce(field, rows, c.ambient);
    c.rank = re.rank;
    c.nullity = c.ambient - c.rank;
    if (c.nullity > 0) {
        auto basis = nullspace_basis(field, rows, c.ambient);
        c.witness = poly_from_coefficients(field, cfg.dim, n, basis.front());
    }
    c.pass = c.nullity == 0 && c.sum_Sp >= c.ambient;
    return c;
}

bool in_shaved_box(const Exponent& alpha, std::size_t M, unsigned n) {
    const long total = total_degree(alpha);
    const long d = static_cast<long>(alpha.size());
    for (unsigned a : alpha)
        if ((static_cast<long>(M) - d) * a + total >= static_cast<long>(n)) return false;
    return true;
}

std::vector<Exponent> shaved_box(std::size_t d, std::size_t M, unsigned n) {
    std::vector<Exponent> out;
    for (auto& a : monomials_up_to(d, n))
        if (in_shaved_box(a, M, n)) out.push_back(a);
    return out;
}

ShavedBoxReport shaved_box_check(const HyperplaneArrangement& arr, unsigned n) {
    const std::size_t M = arr.M(), d = arr.dim;
    if (n % M != 0) fail(ErrorKind::InvalidArgument, "n must be a multiple of M");
    JointsConfiguration cfg = tight_configuration(arr);
    ShavedBoxReport rep;
    rep.M = M;
    rep.d = d;
    rep.n = n;
    MultiPoly prod = MultiPoly::constant(arr.field, d, Scalar::one(arr.field));
    for (std::size_t j = 0; j < M; ++j) prod = prod * MultiPoly::affine(arr.field, arr.normals[j], arr.constants[j]);
    MultiPoly f = prod.pow(n / static_cast<unsigned>(M));
    rep.f_nonzero = !f.is_zero();

    auto box = shaved_box(d, M, n);
    rep.box_size = box.size();
    rep.apex = Exponent(d, n / static_cast<unsigned>(M));
    for (std::size_t p = 0; p < cfg.J(); ++p) {
        MultiPoly g = frame_expansion(f, joint_frame(cfg, p));
        for (const auto& a : box)
            if (!g.coeff(a).is_zero()) rep.nonvanishing.emplace_back(p, a);
        rep.apex_nonzero.push_back(!g.coeff(rep.apex).is_zero());
    }
    rep.all_vanish = rep.nonvanishing.empty();
    rep.apex_ok = std::any_of(rep.apex_nonzero.begin(), rep.apex_nonzero.end(), [](bool b) { return b; });
    rep.pass = rep.f_nonzero && rep.all_vanish && rep.apex_ok;
    return rep;
}

RelaxedReport relaxed_nonzero_polynomial(const JointsConfiguration& cfg_in, std::size_t p, const mpq_class& epsilon,
                                         unsigned n, Field field) {
    JointsConfiguration cfg = map_to_field(cfg_in, field);
    IncidenceStats st = require_valid(cfg);
    if (p >= cfg.J()) fail(ErrorKind::InvalidArgument, "joint index out of range");
    if (epsilon <= 0 || epsilon >= 1) fail(ErrorKind::InvalidArgument, "epsilon must lie in (0, 1)");
    const std::size_t d = cfg.dim;
    const std::size_t per_line = st.joints_per_line.front();
    for (auto c : st.joints_per_line)
        if (c != per_line) fail(ErrorKind::InvalidArgument, "lines carry different joint counts; not a tight configuration");
    const std::size_t M = per_line + d - 1;

    RelaxedReport rep;
    rep.joint = p;
    rep.n = n;
    rep.epsilon = epsilon;
    const mpq_class target = (1 - epsilon) * mpq_class(static_cast<unsigned long>(d * n), static_cast<unsigned long>(M));
    rep.target_order = static_cast<unsigned>(ceil_of(target).get_ui());
    if (rep.target_order > n + 1) fail(ErrorKind::InvalidArgument, "target order exceeds n + 1");

    VanishingSchedule sched = associated_timestamp(cfg, uniform_weights(cfg), n);
    std::size_t t_f = 0;
    if (rep.target_order > 0)
        for (std::size_t q = 0; q < cfg.J(); ++q) t_f = std::max(t_f, sched.T[q][rep.target_order - 1]);
    for (unsigned v : joint_orders(sched, t_f))
        if (v != rep.target_order) fail(ErrorKind::Internal, "no terminating time with uniform joint orders");
    rep.t_f = t_f;

    std::vector<std::size_t> cut(cfg.J(), sched.length());
    cut[p] = t_f;
    SpSet relaxed = enumerate_Sp(cfg, sched, cut);
    SpSet full = enumerate_Sp(cfg, sched, sched.length());
    rep.conditions = relaxed.total();
    rep.ambient = binomial(n + static_cast<unsigned>(d), static_cast<unsigned>(d)).get_ui();

    auto rows = assemble(cfg, relaxed, n, 1);
    auto basis = nullspace_basis(field, rows, rep.ambient);
    rep.nullity = basis.size();
    if (basis.empty())
        fail(ErrorKind::Verification, "relaxed system has only the zero solution at n = " + std::to_string(n));
    rep.f = poly_from_coefficients(field, d, n, basis.front());

    rep.point_mult_ok = true;
    for (std::size_t q = 0; q < cfg.J(); ++q) {
        Multiplicity m = multiplicity_at_point(rep.f, cfg.points[cfg.joints[q].point]);
        rep.point_mult.push_back(m);
        if (!m.infinite && mpq_class(m.value) < target) rep.point_mult_ok = false;
    }
    rep.line_bound = line_orders(cfg, sched, t_f);
    rep.line_mult_ok = true;
    for (std::size_t l = 0; l < cfg.L(); ++l) {
        const Line& line = cfg.lines[l];
        Multiplicity m = multiplicity_on_line(rep.f, cfg.points[line.base], line.dir);
        rep.line_mult.push_back(m);
        const LineOrder& b = rep.line_bound[l];
        if (m.infinite || b.kind == LineOrder::Kind::NegInf) continue;
        if (b.kind == LineOrder::Kind::PosInf || mpq_class(m.value) < b.value) rep.line_mult_ok = false;
    }
    MultiPoly g = frame_expansion(rep.f, joint_frame(cfg, p));
    for (const auto& e : full.per_joint[p])
        if (e.time > t_f && !g.coeff(e.alpha).is_zero()) {
            rep.witness_alpha = e.alpha;
            break;
        }
    rep.pass = rep.point_mult_ok && rep.line_mult_ok && rep.witness_alpha.has_value();
    return rep;
}

}  // namespace jointslab
