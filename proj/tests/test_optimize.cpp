#include "support.hpp"

#include "jointslab/bounds.hpp"
#include "jointslab/error.hpp"
#include "jointslab/generators.hpp"
#include "jointslab/optimize.hpp"
#include "jointslab/vanishing.hpp"

using namespace jointslab;
using namespace testsupport;

namespace {

const Field Q = Field::rational();
const Field F1009 = Field::prime(1009);

using Pt = std::pair<mpq_class, mpq_class>;

// Keeps the part of the polygon with a*x + b*y <= c.
std::vector<Pt> clip(const std::vector<Pt>& poly, const mpq_class& a, const mpq_class& b, const mpq_class& c) {
    std::vector<Pt> out;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Pt& P = poly[i];
        const Pt& R = poly[(i + 1) % n];
        mpq_class fp = a * P.first + b * P.second - c, fr = a * R.first + b * R.second - c;
        if (fp <= 0) out.push_back(P);
        if ((fp < 0 && fr > 0) || (fp > 0 && fr < 0)) {
            mpq_class s = fp / (fp - fr);
            out.push_back({P.first + s * (R.first - P.first), P.second + s * (R.second - P.second)});
        }
    }
    return out;
}

mpq_class shoelace(const std::vector<Pt>& poly) {
    mpq_class s = 0;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Pt& P = poly[i];
        const Pt& R = poly[(i + 1) % poly.size()];
        s += P.first * R.second - R.first * P.second;
    }
    return abs(s) / 2;
}

// Area of the section a_3 = gamma_3, ... of S(beta) by clipping the unit square.
mpq_class slice_by_clipping(const mpq_class& b1, const mpq_class& b2, const std::vector<mpq_class>& gamma,
                            const std::vector<mpq_class>& rest) {
    mpq_class g = 0;
    for (const auto& x : gamma) g += x;
    std::vector<Pt> poly = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    poly = clip(poly, 1, 1, 1 - g);
    poly = clip(poly, 1, b1, b1 - b1 * g);
    poly = clip(poly, b2, 1, b2 - b2 * g);
    for (std::size_t i = 0; i < rest.size(); ++i)
        poly = clip(poly, rest[i], rest[i], rest[i] - gamma[i] - rest[i] * (g - gamma[i]));
    if (poly.size() < 3) return 0;
    return shoelace(poly);
}

bool in_region(const std::vector<mpq_class>& beta, const mpq_class& r, const std::vector<mpq_class>& a) {
    mpq_class s = 0;
    for (const auto& x : a) s += x;
    if (s > r) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] + beta[i] * (s - a[i]) > beta[i]) return false;
    return true;
}

// Lattice points of nS with every coordinate >= lo.
unsigned long brute_count(const std::vector<mpq_class>& beta, unsigned n, unsigned lo) {
    const std::size_t d = beta.size();
    std::vector<unsigned> x(d, lo);
    unsigned long count = 0;
    while (true) {
        std::vector<mpq_class> a;
        for (auto v : x) a.emplace_back(v, n);
        if (in_region(beta, 1, a)) ++count;
        std::size_t i = 0;
        while (i < d && ++x[i] > n) x[i++] = lo;
        if (i == d) break;
    }
    return count;
}

mpq_class random_beta(std::mt19937_64& rng) {
    long den = static_cast<long>(rng() % 12) + 1;
    long num = static_cast<long>(rng() % static_cast<unsigned long>(den)) + 1;
    mpq_class q(num, den);
    q.canonicalize();
    return q;
}

}  // namespace

TEST_CASE("weight state examples and identities") {
    for (auto [M, d] : std::vector<std::pair<std::size_t, std::size_t>>{{3, 2}, {4, 3}, {5, 3}}) {
        auto cfg = tight_configuration(M, d, Q, 0);
        WeightState ws = weight_state(cfg, uniform_weights(cfg));
        for (const auto& row : ws.beta)
            for (const auto& b : row) CHECK(b == mpq_class(1, static_cast<long>(M - d + 1)));
    }
    auto one = axes_configuration(3, Q);
    CHECK(weight_state(one, {mpq_class(5)}).sigma[0] == 0);

    auto be = project_generic(construction_be(), F1009, 0);
    auto solved = solve_z(be);
    CHECK(solved.converged);
    for (const auto& s : weight_state(be, solved.z).sigma) CHECK(abs(to_real(s) - 2) < Real(1e-9));

    std::mt19937_64 rng(3);
    std::vector<JointsConfiguration> cfgs = {be, reguli_configuration(3), tight_configuration(5, 3, F1009, 0)};
    for (const auto& cfg : cfgs) {
        IncidenceStats st = incidence_stats(cfg);
        for (int t = 0; t < 10; ++t) {
            std::vector<mpq_class> z;
            for (std::size_t p = 0; p < cfg.J(); ++p) z.emplace_back(static_cast<long>(rng() % 20 + 1), static_cast<long>(rng() % 3 + 1));
            for (auto& q : z) q.canonicalize();
            WeightState ws = weight_state(cfg, z);
            std::vector<mpq_class> b_sum(cfg.L()), beta_sum(cfg.L());
            mpq_class total = 0;
            for (std::size_t p = 0; p < cfg.J(); ++p)
                for (std::size_t i = 0; i < cfg.dim; ++i) {
                    std::size_t l = cfg.joints[p].lines[i];
                    b_sum[l] += ws.b[p][i];
                    beta_sum[l] += ws.beta[p][i];
                    total += ws.beta[p][i];
                    // Independent recomputation of b.
                    mpq_class line_z = 0;
                    for (auto q : st.joints_on_line[l]) line_z += z[q];
                    CHECK(ws.b[p][i] == z[p] / line_z);
                }
            for (std::size_t l = 0; l < cfg.L(); ++l) {
                CHECK(b_sum[l] == 1);
                CHECK(beta_sum[l] == 1);
            }
            CHECK(total == static_cast<long>(cfg.L()));
            CHECK(ws.beta_total == static_cast<long>(cfg.L()));

            mpq_class c(static_cast<long>(rng() % 30 + 1), 7);
            c.canonicalize();
            std::vector<mpq_class> cz;
            for (const auto& q : z) cz.push_back(c * q);
            WeightState wc = weight_state(cfg, cz);
            CHECK(wc.beta == ws.beta);
            CHECK(wc.sigma == ws.sigma);
        }
    }
}

TEST_CASE("z-solver on tight configurations") {
    for (auto [d, M] : std::vector<std::pair<std::size_t, std::size_t>>{{2, 4}, {3, 4}, {3, 5}}) {
        auto cfg = tight_configuration(M, d, Q, 0);
        SolveResult r = solve_z(cfg, 1e-9);
        CHECK(r.converged);
        CHECK(r.residual < Real(1e-9));
        const Real J = Real(static_cast<long>(cfg.J()));
        const Real target = (Real(static_cast<long>(d * cfg.J())) - Real(static_cast<long>(cfg.L()))) / J;
        for (const auto& s : r.sigma) CHECK(abs(to_real(s) - target) < Real(1e-9));
        auto [lo, hi] = std::minmax_element(r.z.begin(), r.z.end());
        CHECK(to_real(*hi) == 1);
        CHECK(to_real(*hi) - to_real(*lo) < Real(1e-8));
        // Energy decay and spread monotonicity recomputed from the trace.
        const Real decay = 1 - 1 / (4 * J * J * J);
        for (std::size_t k = 0; k + 1 < r.trace.energy.size(); ++k) {
            CHECK(r.trace.energy[k + 1] <= decay * r.trace.energy[k]);
            CHECK(r.trace.spread[k + 1] <= r.trace.spread[k]);
        }
        CHECK(r.trace.decay_ok);
        CHECK(r.trace.spread_monotone);
    }
    auto one = axes_configuration(3, Q);
    SolveResult r = solve_z(one);
    CHECK(r.iterations == 0);
    CHECK(r.converged);
    CHECK(r.sigma[0] == 0);

    // Components are solved separately.
    auto tri = tight_configuration(3, 2, Q, 0);
    auto two = disjoint_union(tri, tight_configuration(4, 2, Q, 1), qvec({500, 700}));
    SolveResult rt = solve_z(two);
    CHECK(rt.components == 2);
    CHECK(rt.converged);
}

TEST_CASE("equal-beta volume") {
    for (unsigned d = 1; d <= 6; ++d) CHECK(polytope_volume_equal(mpq_class(1), d) == mpq_class(mpz_class(1), factorial(d)));
    CHECK(polytope_volume_equal(mpq_class(1, 3), 3) == mpq_class(1, 60));
    for (unsigned M = 3; M <= 8; ++M)
        for (unsigned d = 2; d < M; ++d) {
            mpq_class beta(1, M - d + 1);
            mpz_class expect = factorial(d) * binomial(M, d);
            CHECK(polytope_volume_equal(beta, d) == mpq_class(mpz_class(1), expect));
        }
    CHECK(polytope_volume_equal(mpq_class(0), 3) == 0);
    CHECK(polytope_volume_equal(mpq_class(-1, 2), 3) == 0);
    CHECK(abs(polytope_volume_equal(Real(1) / 3, 3) - Real(1) / 60) < Real(1e-30));
}

TEST_CASE("slice area against polygon clipping") {
    CHECK(slice_area(mpq_class(1, 2), mpq_class(1, 2), {}, {}) == mpq_class(1, 6));
    CHECK(slice_area(mpq_class(1, 2), mpq_class(1, 2), {}, {}) == polytope_volume_equal(mpq_class(1, 2), 2));
    CHECK(slice_area(mpq_class(1, 2), mpq_class(1, 3), {mpq_class(1)}, {mpq_class(1, 2)}) == 0);
    CHECK(slice_area(mpq_class(0), mpq_class(1, 3), {}, {}) == 0);

    std::mt19937_64 rng(71);
    for (int t = 0; t < 300; ++t) {
        mpq_class b1 = random_beta(rng), b2 = random_beta(rng);
        std::size_t extra = rng() % 3;
        std::vector<mpq_class> gamma, rest;
        for (std::size_t i = 0; i < extra; ++i) {
            rest.push_back(random_beta(rng));
            mpq_class g(static_cast<long>(rng() % 5), 12);
            g.canonicalize();
            gamma.push_back(g);
        }
        CHECK(slice_area(b1, b2, gamma, rest) == slice_by_clipping(b1, b2, gamma, rest));
    }
}

TEST_CASE("slice area peaks at equal betas") {
    std::mt19937_64 rng(73);
    for (int t = 0; t < 100; ++t) {
        mpq_class b1 = random_beta(rng), b2 = random_beta(rng);
        mpq_class mid = (b1 + b2) / 2;
        mpq_class a = slice_area(b1, b2, {}, {}), m = slice_area(mid, mid, {}, {});
        if (b1 != b2) CHECK(a < m);
        else CHECK(a == m);
    }
}

TEST_CASE("lattice volumes") {
    CHECK(polytope_volume_lattice({{1, 1}, 1}, 10).volume == mpq_class(33, 50));
    CHECK(polytope_volume_lattice({{1, 1}, 1}, 10).count == brute_count({1, 1}, 10, 0));

    std::mt19937_64 rng(79);
    for (int t = 0; t < 20; ++t) {
        std::vector<mpq_class> beta;
        std::size_t d = 1 + rng() % 3;
        for (std::size_t i = 0; i < d; ++i) beta.push_back(random_beta(rng));
        unsigned n = 5 + static_cast<unsigned>(rng() % 20);
        LatticeVolume lv = polytope_volume_lattice({beta, 1}, n, 2);
        CHECK(lv.complete);
        CHECK(lv.count == brute_count(beta, n, 0));
    }
    // Partial shaved polytopes (r < 1).
    LatticeVolume half = polytope_volume_lattice({{mpq_class(1, 2), mpq_class(1, 2)}, mpq_class(1, 2)}, 40);
    unsigned long direct = 0;
    for (unsigned a = 0; a <= 40; ++a)
        for (unsigned b = 0; b <= 40; ++b)
            if (in_region({mpq_class(1, 2), mpq_class(1, 2)}, mpq_class(1, 2), {mpq_class(a, 40), mpq_class(b, 40)})) ++direct;
    CHECK(half.count == direct);

    const mpq_class third(1, 3);
    LatticeVolume big = polytope_volume_lattice({{third, third, third}, 1}, 300, 2);
    CHECK(abs(to_real(big.volume) / to_real(mpq_class(1, 60)) - 1) < Real(0.05));
    // Down-closed region: the count over-covers, and doubling n moves closer.
    LatticeVolume small = polytope_volume_lattice({{third, third, third}, 1}, 150, 2);
    CHECK(small.volume >= mpq_class(1, 60));
    CHECK(big.volume >= mpq_class(1, 60));
    CHECK(big.volume - mpq_class(1, 60) <= small.volume - mpq_class(1, 60));

    LatticeVolume cut = polytope_volume_lattice({{third, third, third}, 1}, 200, 1, 1000);
    CHECK_FALSE(cut.complete);
}

TEST_CASE("volume comparison with the equal-beta polytope on random samples") {
    std::mt19937_64 rng(83);
    for (int t = 0; t < 100; ++t) {
        const std::size_t d = 2 + static_cast<std::size_t>(t % 2);
        const unsigned n = d == 2 ? 60 : 24;
        std::vector<mpq_class> beta;
        mpq_class mean = 0;
        for (std::size_t i = 0; i < d; ++i) {
            beta.push_back(random_beta(rng));
            mean += beta.back();
        }
        mean /= static_cast<long>(d);
        const mpq_class closed = polytope_volume_equal(mean, static_cast<unsigned>(d));
        mpz_class nd;
        mpz_ui_pow_ui(nd.get_mpz_t(), n, d);
        // Unit cubes below the interior lattice points sit inside nS.
        mpq_class inner(mpz_class(brute_count(beta, n, 1)), nd);
        inner.canonicalize();
        CHECK(inner <= closed);
        LatticeVolume lv = polytope_volume_lattice({beta, 1}, n);
        mpq_class layer = lv.volume - inner;
        CHECK(lv.volume <= closed + layer);
        if (d == 2) {
            mpq_class exact = slice_area(beta[0], beta[1], {}, {});
            CHECK(exact <= closed);
            if (beta[0] != beta[1]) CHECK(exact < closed);
        }
    }
}

TEST_CASE("counting report") {
    for (auto [M, d] : std::vector<std::pair<std::size_t, std::size_t>>{{3, 2}, {4, 3}, {5, 3}}) {
        auto cfg = tight_configuration(M, d, Q, 0);
        CountingReport r = counting_report(cfg, uniform_weights(cfg), 40);
        CHECK(r.sum_equal == mpq_class(mpz_class(1), factorial(static_cast<unsigned>(d))));
        CHECK(r.equal_ok);
        CHECK(r.lattice_ok);
        CHECK(r.chain_ok);
        CHECK(r.pass);
        CHECK(abs(r.bound_L - Real(static_cast<long>(cfg.L()))) < Real(1e-9));
    }
    auto be = project_generic(construction_be(), F1009, 0);
    CountingReport rb = counting_report(be, solve_z(be).z, 30);
    CHECK(rb.pass);
    CHECK(rb.sum_equal > mpq_class(1, 24));
    CHECK(Real(12) > rb.bound_L);

    auto one = axes_configuration(3, Q);
    CountingReport r1 = counting_report(one, {mpq_class(1)}, 20);
    CHECK(r1.sum_equal == mpq_class(1, 6));
    CHECK(r1.pass);
}
