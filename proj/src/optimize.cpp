#include "jointslab/optimize.hpp"

#include <algorithm>
#include <numeric>

#include "jointslab/bounds.hpp"
#include "jointslab/parallel.hpp"

namespace jointslab {

namespace {

unsigned line_degree(const JointsConfiguration& cfg, std::size_t l) {
    return cfg.curve_mode ? cfg.lines[l].deg : 1u;
}

// Coefficient (#{p in l} - deg l) for every line.
std::vector<long> line_excess(const JointsConfiguration& cfg, const IncidenceStats& st) {
    std::vector<long> out(cfg.L());
    for (std::size_t l = 0; l < cfg.L(); ++l)
        out[l] = static_cast<long>(st.joints_on_line[l].size()) - static_cast<long>(line_degree(cfg, l));
    return out;
}

}  // namespace

WeightState weight_state(const JointsConfiguration& cfg, const std::vector<mpq_class>& z) {
    const std::size_t J = cfg.J();
    if (z.size() != J) fail(ErrorKind::DimensionMismatch, "weight vector length differs from the joint count");
    for (const auto& w : z)
        if (w <= 0) fail(ErrorKind::InvalidArgument, "weights must be positive");
    IncidenceStats st = incidence_stats(cfg);
    auto excess = line_excess(cfg, st);
    std::vector<mpq_class> line_sum(cfg.L(), mpq_class(0));
    for (std::size_t l = 0; l < cfg.L(); ++l)
        for (auto p : st.joints_on_line[l]) line_sum[l] += z[p];

    WeightState ws;
    ws.z = z;
    ws.b.assign(J, {});
    ws.beta.assign(J, {});
    ws.sigma.assign(J, mpq_class(0));
    for (std::size_t p = 0; p < J; ++p)
        for (auto l : cfg.joints[p].lines) {
            mpq_class b = z[p] / line_sum[l];
            ws.b[p].push_back(b);
            ws.beta[p].push_back(1 - excess[l] * b);
            ws.sigma[p] += excess[l] * b;
            ws.beta_total += ws.beta[p].back();
        }

    // Per-line identities: sum of b is 1, sum of beta is deg l.
    std::vector<mpq_class> b_sum(cfg.L(), mpq_class(0)), beta_sum(cfg.L(), mpq_class(0));
    for (std::size_t p = 0; p < J; ++p)
        for (std::size_t i = 0; i < cfg.joints[p].lines.size(); ++i) {
            b_sum[cfg.joints[p].lines[i]] += ws.b[p][i];
            beta_sum[cfg.joints[p].lines[i]] += ws.beta[p][i];
        }
    mpq_class total_degree(0);
    for (std::size_t l = 0; l < cfg.L(); ++l) {
        total_degree += line_degree(cfg, l);
        if (st.joints_on_line[l].empty()) continue;
        if (b_sum[l] != 1 || beta_sum[l] != line_degree(cfg, l))
            fail(ErrorKind::Internal, "weight identities fail on line " + std::to_string(l));
    }
    mpq_class used_degree(0);
    for (std::size_t l = 0; l < cfg.L(); ++l)
        if (!st.joints_on_line[l].empty()) used_degree += line_degree(cfg, l);
    if (ws.beta_total != used_degree) fail(ErrorKind::Internal, "total beta differs from the total line degree");
    return ws;
}

namespace {

struct ComponentProblem {
    std::vector<std::size_t> joints;  // global indices
    std::vector<std::vector<std::size_t>> lines_of;  // local joint -> local lines
    std::vector<std::vector<std::size_t>> members;   // local line -> local joints
    std::vector<Real> excess;
    Real mean;

    std::vector<Real> sigma(const std::vector<Real>& z) const {
        std::vector<Real> sums(members.size(), Real(0));
        for (std::size_t l = 0; l < members.size(); ++l)
            for (auto p : members[l]) sums[l] += z[p];
        std::vector<Real> s(joints.size(), Real(0));
        for (std::size_t p = 0; p < joints.size(); ++p)
            for (auto l : lines_of[p]) s[p] += excess[l] * z[p] / sums[l];
        return s;
    }

    Real energy(const std::vector<Real>& s) const {
        Real e = 0;
        for (const auto& v : s) e += (v - mean) * (v - mean);
        return e;
    }
};

Real spread_of(const std::vector<Real>& s) {
    auto [lo, hi] = std::minmax_element(s.begin(), s.end());
    return *hi - *lo;
}

}  // namespace

SolveResult solve_z(const JointsConfiguration& cfg, double tol, std::size_t max_iter) {
    IncidenceStats st = incidence_stats(cfg);
    auto excess = line_excess(cfg, st);
    const std::size_t J = cfg.J();
    SolveResult res;
    res.components = st.components.size();
    std::vector<Real> z_all(J, Real(1));
    const Real tol_r(tol);
    const Real r_min = boost::multiprecision::ldexp(Real(1), -100);
    bool all_converged = true;

    for (const auto& comp : st.components) {
        ComponentProblem pr;
        pr.joints = comp;
        std::vector<long> local(J, -1);
        for (std::size_t k = 0; k < comp.size(); ++k) local[comp[k]] = static_cast<long>(k);
        pr.lines_of.assign(comp.size(), {});
        long excess_total = 0;
        for (std::size_t l = 0; l < cfg.L(); ++l) {
            const auto& on = st.joints_on_line[l];
            if (on.empty() || local[on.front()] < 0) continue;
            std::size_t id = pr.members.size();
            pr.members.emplace_back();
            for (auto p : on) {
                pr.members.back().push_back(static_cast<std::size_t>(local[p]));
                pr.lines_of[static_cast<std::size_t>(local[p])].push_back(id);
            }
            pr.excess.push_back(Real(excess[l]));
            excess_total += excess[l];
        }
        const std::size_t n = comp.size();
        pr.mean = Real(excess_total) / Real(static_cast<long>(n));
        const Real decay = 1 - Real(1) / (4 * Real(static_cast<long>(n)) * n * n);

        // Non-uniform start so that the trace is informative.
        std::vector<Real> z(n);
        for (std::size_t k = 0; k < n; ++k) z[k] = Real(static_cast<long>(comp[k] + 1));
        auto s = pr.sigma(z);
        Real E = pr.energy(s), spread = spread_of(s);
        res.trace.energy.push_back(E);
        res.trace.spread.push_back(spread);

        std::size_t it = 0;
        while (spread > tol_r && it < max_iter) {
            ++it;
            std::vector<std::size_t> ord(n);
            std::iota(ord.begin(), ord.end(), 0);
            std::stable_sort(ord.begin(), ord.end(), [&](auto a, auto b) { return s[a] < s[b]; });
            std::size_t cut = 1;
            Real delta = s[ord[1]] - s[ord[0]];
            for (std::size_t k = 2; k < n; ++k)
                if (s[ord[k]] - s[ord[k - 1]] > delta) {
                    delta = s[ord[k]] - s[ord[k - 1]];
                    cut = k;
                }
            std::vector<bool> upper(n, false);
            for (std::size_t k = cut; k < n; ++k) upper[ord[k]] = true;

            auto scaled = [&](const Real& r) {
                std::vector<Real> w = z;
                for (std::size_t k = 0; k < n; ++k)
                    if (upper[k]) w[k] *= r;
                return w;
            };
            auto gap_at = [&](const Real& r, std::vector<Real>* out) {
                auto w = scaled(r);
                auto sg = pr.sigma(w);
                Real lo_a = 0, hi_b = 0;
                bool first_a = true, first_b = true;
                for (std::size_t k = 0; k < n; ++k) {
                    if (upper[k]) {
                        if (first_a || sg[k] < lo_a) lo_a = sg[k];
                        first_a = false;
                    } else {
                        if (first_b || sg[k] > hi_b) hi_b = sg[k];
                        first_b = false;
                    }
                }
                if (out) *out = std::move(sg);
                return lo_a - hi_b;
            };

            const Real stop = std::min(delta / 4, tol_r / (8 * Real(static_cast<long>(n))));
            Real hi = 1, lo = 0;
            Real r = Real(1) / 2;
            while (true) {
                if (gap_at(r, nullptr) > 0) {
                    hi = r;
                    if (r <= r_min) break;
                    r /= 2;
                } else {
                    lo = r;
                    break;
                }
            }
            std::vector<Real> s_hi;
            Real g = gap_at(hi, &s_hi);
            while (g > stop && lo > 0 && hi - lo > hi * boost::multiprecision::ldexp(Real(1), -static_cast<int>(kRealBits) + 8)) {
                Real mid = (lo + hi) / 2;
                std::vector<Real> s_mid;
                Real gm = gap_at(mid, &s_mid);
                if (gm >= 0) {
                    hi = mid;
                    g = gm;
                    s_hi = std::move(s_mid);
                } else {
                    lo = mid;
                }
            }
            z = scaled(hi);
            Real zmax = *std::max_element(z.begin(), z.end());
            for (auto& w : z) w /= zmax;
            s = std::move(s_hi);
            Real E_new = pr.energy(s), spread_new = spread_of(s);
            if (E_new > decay * E) res.trace.decay_ok = false;
            if (spread_new > spread) res.trace.spread_monotone = false;
            E = E_new;
            spread = spread_new;
            res.trace.energy.push_back(E);
            res.trace.spread.push_back(spread);
        }
        res.iterations += it;
        if (spread > tol_r) all_converged = false;
        Real zmax = *std::max_element(z.begin(), z.end());
        for (std::size_t k = 0; k < n; ++k) z_all[comp[k]] = z[k] / zmax;
    }

    for (std::size_t p = 0; p < J; ++p) {
        res.z.push_back(to_rational(z_all[p]));
        if (res.z.back() <= 0) fail(ErrorKind::Internal, "weight underflowed to zero");
    }
    WeightState ws = weight_state(cfg, res.z);
    res.sigma = ws.sigma;
    res.target.assign(J, mpq_class(0));
    res.residual = 0;
    for (const auto& comp : st.components) {
        long excess_total = 0;
        std::vector<bool> in(J, false);
        for (auto p : comp) in[p] = true;
        for (std::size_t l = 0; l < cfg.L(); ++l)
            if (!st.joints_on_line[l].empty() && in[st.joints_on_line[l].front()]) excess_total += excess[l];
        mpq_class target(excess_total, static_cast<long>(comp.size()));
        target.canonicalize();
        mpq_class lo = ws.sigma[comp.front()], hi = lo;
        for (auto p : comp) {
            res.target[p] = target;
            lo = std::min(lo, ws.sigma[p]);
            hi = std::max(hi, ws.sigma[p]);
        }
        res.residual = std::max(res.residual, to_real(mpq_class(hi - lo)));
    }
    res.converged = all_converged && res.residual <= tol_r;
    return res;
}

mpq_class polytope_volume_equal(const mpq_class& beta, unsigned d) {
    if (beta <= 0) return 0;
    mpq_class inv = 1 / beta, out = 1;
    for (unsigned i = 1; i <= d; ++i) out /= inv + (i - 1);
    return out;
}

Real polytope_volume_equal(const Real& beta, unsigned d) {
    if (beta <= 0) return 0;
    Real inv = 1 / beta, out = 1;
    for (unsigned i = 1; i <= d; ++i) out /= inv + (i - 1);
    return out;
}

mpq_class slice_area(const mpq_class& b1, const mpq_class& b2, const std::vector<mpq_class>& gamma,
                     const std::vector<mpq_class>& beta_rest) {
    if (gamma.size() != beta_rest.size()) fail(ErrorKind::DimensionMismatch, "gamma and beta lists differ in length");
    if (b1 > 1 || b2 > 1) fail(ErrorKind::InvalidArgument, "beta must be at most 1");
    for (const auto& b : beta_rest)
        if (b > 1 || b <= 0) fail(ErrorKind::InvalidArgument, "the fixed betas must lie in (0, 1]");
    if (b1 <= 0 || b2 <= 0) return 0;
    mpq_class g(0);
    for (const auto& x : gamma) {
        if (x < 0) fail(ErrorKind::InvalidArgument, "gamma must be nonnegative");
        g += x;
    }
    if (g >= 1) return 0;
    const mpq_class one_g = 1 - g;
    mpq_class r;
    if (b1 == 1 && b2 == 1) {
        r = one_g;
    } else {
        const mpq_class den = 1 - b1 * b2;
        r = (b1 * (1 - b2) + b2 * (1 - b1)) * one_g / den;
    }
    for (std::size_t i = 0; i < gamma.size(); ++i) r = std::min(r, mpq_class(1 - gamma[i] / beta_rest[i] - g + gamma[i]));
    if (r <= 0) return 0;
    auto cut = [&](const mpq_class& b) -> mpq_class {
        mpq_class t = r - b * one_g;
        if (t <= 0) return 0;
        return t * t / (2 * (1 - b));
    };
    return r * r / 2 - cut(b1) - cut(b2);
}

bool in_shaved_polytope(const ShavedPolytope& poly, const std::vector<mpq_class>& a) {
    if (a.size() != poly.beta.size()) fail(ErrorKind::DimensionMismatch, "point dimension differs from the polytope");
    mpq_class s(0);
    for (const auto& x : a) {
        if (x < 0) return false;
        s += x;
    }
    if (s > poly.r) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] + poly.beta[i] * (s - a[i]) > poly.beta[i]) return false;
    return true;
}

namespace {

using i128 = __int128;

i128 floor_div(i128 a, i128 b) {
    i128 q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

i128 ceil_div(i128 a, i128 b) { return -floor_div(-a, b); }

long long small_int(const mpz_class& v) {
    if (!v.fits_slong_p()) fail(ErrorKind::InvalidArgument, "rational too large for lattice enumeration");
    return v.get_si();
}

struct LatticeProblem {
    std::size_t d;
    long long n;
    std::vector<long long> P, Q;  // beta_i = P_i / Q_i
    long long Ra, Rb;             // r = Ra / Rb
    long long smax;               // floor(r n)

    // Number of valid last coordinates for the prefix (alpha_1..alpha_{d-1}) with sum s.
    i128 tail_count(const std::vector<long long>& prefix, long long s) const {
        i128 lo = 0;
        i128 hi = floor_div(static_cast<i128>(Ra) * n - static_cast<i128>(Rb) * s, Rb);
        const std::size_t last = d - 1;
        hi = std::min(hi, floor_div(static_cast<i128>(P[last]) * (n - s), Q[last]));
        for (std::size_t i = 0; i < last; ++i) {
            // Q_i a_i + P_i (s - a_i + x) <= P_i n
            i128 e = static_cast<i128>(P[i]) * n - static_cast<i128>(Q[i]) * prefix[i] -
                     static_cast<i128>(P[i]) * (s - prefix[i]);
            if (P[i] > 0) {
                hi = std::min(hi, floor_div(e, P[i]));
            } else if (P[i] < 0) {
                lo = std::max(lo, ceil_div(e, P[i]));
            } else if (e < 0) {
                return 0;
            }
        }
        return hi >= lo ? hi - lo + 1 : 0;
    }
};

}  // namespace

LatticeVolume polytope_volume_lattice(const ShavedPolytope& poly, unsigned n, unsigned threads, std::uint64_t budget) {
    if (n == 0) fail(ErrorKind::InvalidArgument, "n must be positive");
    const std::size_t d = poly.beta.size();
    if (d == 0) fail(ErrorKind::InvalidArgument, "empty beta list");
    LatticeProblem lp;
    lp.d = d;
    lp.n = n;
    for (const auto& b : poly.beta) {
        if (b > 1) fail(ErrorKind::InvalidArgument, "beta must be at most 1");
        lp.P.push_back(small_int(b.get_num()));
        lp.Q.push_back(small_int(b.get_den()));
    }
    lp.Ra = small_int(poly.r.get_num());
    lp.Rb = small_int(poly.r.get_den());
    lp.smax = static_cast<long long>(floor_div(static_cast<i128>(lp.Ra) * n, lp.Rb));

    LatticeVolume out;
    out.n = n;
    if (lp.smax < 0) {
        out.volume = 0;
        return out;
    }
    if (d == 1) {
        out.count = static_cast<long>(lp.tail_count({}, 0));
    } else {
        const long long slabs = lp.smax + 1;
        std::vector<mpz_class> partial(static_cast<std::size_t>(slabs));
        std::vector<std::uint64_t> nodes(static_cast<std::size_t>(slabs), 0);
        const std::uint64_t per_slab = std::max<std::uint64_t>(1, budget / static_cast<std::uint64_t>(slabs));
        std::vector<char> cut(static_cast<std::size_t>(slabs), 0);
        parallel_for(static_cast<std::size_t>(slabs), threads, [&](std::size_t a1) {
            std::vector<long long> prefix(d - 1, 0);
            prefix[0] = static_cast<long long>(a1);
            i128 total = 0;
            std::uint64_t visited = 0;
            bool stopped = false;
            auto rec = [&](auto&& self, std::size_t i, long long s) -> void {
                if (stopped) return;
                if (i == d - 1) {
                    if (++visited > per_slab) {
                        stopped = true;
                        return;
                    }
                    total += lp.tail_count(prefix, s);
                    return;
                }
                for (long long a = 0; s + a <= lp.smax; ++a) {
                    prefix[i] = a;
                    self(self, i + 1, s + a);
                    if (stopped) return;
                }
                prefix[i] = 0;
            };
            rec(rec, 1, static_cast<long long>(a1));
            // i128 to mpz through two 64-bit halves
            unsigned long long low = static_cast<unsigned long long>(total & 0xffffffffffffffffULL);
            long long high = static_cast<long long>(total >> 64);
            mpz_class h(static_cast<long>(high));
            h <<= 64;
            mpz_class l;
            mpz_import(l.get_mpz_t(), 1, -1, sizeof(low), 0, 0, &low);
            partial[a1] = h + l;
            nodes[a1] = visited;
            cut[a1] = stopped;
        });
        out.count = 0;
        for (std::size_t k = 0; k < partial.size(); ++k) {
            out.count += partial[k];
            if (cut[k]) out.complete = false;
        }
    }
    mpz_class denom;
    mpz_ui_pow_ui(denom.get_mpz_t(), n, static_cast<unsigned long>(d));
    out.volume = mpq_class(out.count, denom);
    out.volume.canonicalize();
    return out;
}

CountingReport counting_report(const JointsConfiguration& cfg, const std::vector<mpq_class>& z, unsigned n,
                               unsigned threads) {
    WeightState ws = weight_state(cfg, z);
    const unsigned d = static_cast<unsigned>(cfg.dim);
    CountingReport rep;
    rep.n = n;
    rep.inverse_factorial = mpq_class(1, factorial(d));
    for (std::size_t p = 0; p < cfg.J(); ++p) {
        // Shrinking beta shrinks the polytope, so rounding down keeps the lattice sum a lower estimate.
        std::vector<mpq_class> beta = ws.beta[p];
        for (auto& b : beta) {
            if (mpz_sizeinbase(b.get_den().get_mpz_t(), 2) <= 24) continue;
            mpz_class scaled = b.get_num() << 24;
            mpz_fdiv_q(scaled.get_mpz_t(), scaled.get_mpz_t(), b.get_den().get_mpz_t());
            b = mpq_class(scaled, mpz_class(1) << 24);
            b.canonicalize();
            rep.beta_rounded = true;
        }
        LatticeVolume lv = polytope_volume_lattice({beta, 1}, n, threads);
        rep.lattice_volume.push_back(lv.volume);
        rep.sum_lattice += lv.volume;
        mpq_class mean(0);
        for (const auto& b : ws.beta[p]) mean += b;
        mean /= d;
        rep.equal_volume.push_back(polytope_volume_equal(mean, d));
        rep.sum_equal += rep.equal_volume.back();
    }
    rep.lattice_tolerance = static_cast<double>(cfg.J()) * d / n;
    rep.lattice_ok = to_real(rep.sum_lattice) >= to_real(rep.inverse_factorial) - Real(rep.lattice_tolerance);
    rep.equal_ok = rep.sum_equal >= rep.inverse_factorial;

    mpq_class total_deg(0);
    for (std::size_t l = 0; l < cfg.L(); ++l) total_deg += cfg.curve_mode ? cfg.lines[l].deg : 1u;
    const mpz_class J(static_cast<unsigned long>(cfg.J()));
    SharpBound sb = sharp_bound(J, d);
    rep.x = sb.x.x;
    rep.bound_L = sb.l_min;
    // C(dJ/L + d - 1, d) evaluated exactly.
    mpq_class y = mpq_class(d * J) / total_deg + (d - 1);
    mpq_class c(1);
    for (unsigned i = 0; i < d; ++i) c *= y - i;
    c /= factorial(d);
    rep.param_bound = to_real(c);
    bool l_ok = sb.exact ? total_deg >= mpq_class(sb.exact_l_min) : to_real(total_deg) >= sb.l_min - Real(1e-20);
    rep.chain_ok = mpq_class(J) >= c && l_ok;
    rep.pass = rep.lattice_ok && rep.equal_ok && rep.chain_ok;
    return rep;
}

}  // namespace jointslab
