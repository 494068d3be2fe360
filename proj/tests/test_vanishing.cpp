#include "support.hpp"

#include <set>

#include "jointslab/error.hpp"
#include "jointslab/generators.hpp"
#include "jointslab/linalg.hpp"
#include "jointslab/optimize.hpp"
#include "jointslab/vanishing.hpp"

using namespace jointslab;
using namespace testsupport;

namespace {

const Field Q = Field::rational();
const Field F1009 = Field::prime(1009);

// S_p straight from the definition: T(p,|alpha|) <= t_f and |alpha| - alpha_i >= v_l(T - 1).
std::set<Exponent> brute_Sp(const JointsConfiguration& cfg, const VanishingSchedule& s, std::size_t p, std::size_t t_f) {
    const unsigned n = s.n;
    IncidenceStats st = incidence_stats(cfg);
    auto v_at = [&](std::size_t q, std::size_t t) {
        unsigned r = 0;
        while (r <= n && s.T[q][r] <= t) ++r;
        return r;
    };
    std::set<Exponent> out;
    for (const auto& a : monomials_up_to(cfg.dim, n)) {
        unsigned r = total_degree(a);
        std::size_t t = s.T[p][r];
        if (t > t_f) continue;
        bool ok = true;
        for (std::size_t i = 0; i < cfg.dim && ok; ++i) {
            std::size_t l = cfg.joints[p].lines[i];
            long sum = 0;
            for (auto q : st.joints_on_line[l]) sum += v_at(q, t - 1);
            long num = sum - static_cast<long>(n);
            long den = static_cast<long>(st.joints_on_line[l].size()) - 1;
            long lhs = static_cast<long>(r) - static_cast<long>(a[i]);
            if (den == 0) ok = num <= 0;
            else ok = mpq_class(lhs) >= mpq_class(num, den);
        }
        if (ok) out.insert(a);
    }
    return out;
}

std::set<Exponent> as_set(const SpSet& s, std::size_t p) {
    std::set<Exponent> out;
    for (const auto& e : s.per_joint[p]) out.insert(e.alpha);
    return out;
}

}  // namespace

TEST_CASE("timestamp examples") {
    SUBCASE("equal weights visit joints round robin") {
        auto cfg = tight_configuration(4, 3, Q, 0);
        auto s = associated_timestamp(cfg, uniform_weights(cfg), 5);
        for (std::size_t k = 0; k < s.length(); ++k) {
            CHECK(s.order[k].first == k % cfg.J());
            CHECK(s.order[k].second == k / cfg.J());
        }
    }
    SUBCASE("single joint") {
        auto cfg = axes_configuration(3, Q);
        auto s = associated_timestamp(cfg, {mpq_class(7, 3)}, 6);
        for (unsigned r = 0; r <= 6; ++r) CHECK(s.T[0][r] == r + 1);
    }
    SUBCASE("weights 1 and 2") {
        auto tri = tight_configuration(3, 2, Q, 0);
        std::vector<mpq_class> z = {mpq_class(1), mpq_class(2), mpq_class(1)};
        const unsigned n = 40;
        auto s = associated_timestamp(tri, z, n);
        // Oracle: sort all (p, r) by the key ((r - n)/z_p, p, r).
        std::vector<std::tuple<mpq_class, std::size_t, unsigned>> keys;
        for (std::size_t p = 0; p < 3; ++p)
            for (unsigned r = 0; r <= n; ++r)
                keys.emplace_back(mpq_class(static_cast<long>(r) - static_cast<long>(n)) / z[p], p, r);
        std::sort(keys.begin(), keys.end());
        for (std::size_t k = 0; k < keys.size(); ++k) {
            CHECK(s.order[k].first == std::get<1>(keys[k]));
            CHECK(s.order[k].second == std::get<2>(keys[k]));
        }
        // Joint 1 starts later but then runs at twice the rate of joint 0.
        auto v_mid = joint_orders(s, s.T[1][n]);
        CHECK(v_mid[1] == n + 1);
        auto v_early = joint_orders(s, s.T[0][n / 2 + 10]);
        auto v_late = joint_orders(s, s.T[0][n]);
        long d0 = static_cast<long>(v_late[0]) - static_cast<long>(v_early[0]);
        long d1 = static_cast<long>(v_late[1]) - static_cast<long>(v_early[1]);
        CHECK(std::abs(d1 - 2 * d0) <= 2);
    }
    CHECK_THROWS_AS(associated_timestamp(axes_configuration(2, Q), {mpq_class(0)}, 3), Error);
}

TEST_CASE("timestamps are bijective, increasing in r and scale invariant") {
    std::mt19937_64 rng(5);
    auto cfg = project_generic(construction_be(), F1009, 0);
    for (int t = 0; t < 20; ++t) {
        std::vector<mpq_class> z;
        for (std::size_t p = 0; p < cfg.J(); ++p) z.emplace_back(static_cast<long>(rng() % 9 + 1), static_cast<long>(rng() % 4 + 1));
        for (auto& q : z) q.canonicalize();
        const unsigned n = 3 + static_cast<unsigned>(rng() % 6);
        auto s = associated_timestamp(cfg, z, n);
        std::vector<bool> hit(s.length() + 1, false);
        for (std::size_t p = 0; p < cfg.J(); ++p)
            for (unsigned r = 0; r <= n; ++r) {
                std::size_t v = s.T[p][r];
                REQUIRE(v >= 1);
                REQUIRE(v <= s.length());
                CHECK_FALSE(hit[v]);
                hit[v] = true;
                if (r > 0) CHECK(s.T[p][r] > s.T[p][r - 1]);
            }
        mpq_class c(static_cast<long>(rng() % 50 + 1), static_cast<long>(rng() % 7 + 1));
        c.canonicalize();
        std::vector<mpq_class> cz;
        for (const auto& q : z) cz.push_back(c * q);
        CHECK(associated_timestamp(cfg, cz, n).T == s.T);

        // v_p steps by one exactly at T(p, v_p(t-1)) and stays within 0..n+1.
        auto prev = joint_orders(s, 0);
        for (std::size_t time = 1; time <= s.length(); ++time) {
            auto cur = joint_orders(s, time);
            for (std::size_t p = 0; p < cfg.J(); ++p) {
                CHECK(cur[p] <= n + 1);
                bool step = prev[p] <= n && s.T[p][prev[p]] == time;
                CHECK(cur[p] == prev[p] + (step ? 1 : 0));
            }
            prev = cur;
        }
    }
}

TEST_CASE("line order conventions") {
    CHECK(line_order(3, 1, 1, 5).kind == LineOrder::Kind::NegInf);
    CHECK(line_order(5, 1, 1, 5).kind == LineOrder::Kind::NegInf);
    CHECK(line_order(6, 1, 1, 5).kind == LineOrder::Kind::PosInf);
    LineOrder f = line_order(9, 3, 1, 5);
    CHECK(f.kind == LineOrder::Kind::Finite);
    CHECK(f.value == mpq_class(2));
    CHECK(line_order(8, 3, 1, 5).value == mpq_class(3, 2));
    // Curve degrees enter numerator and denominator.
    CHECK(line_order(12, 4, 2, 5).value == mpq_class(1));
    CHECK(line_order(12, 2, 2, 5).kind == LineOrder::Kind::PosInf);
}

TEST_CASE("curve bookkeeping with unit degrees matches line mode") {
    for (auto cfg : {tight_configuration(5, 3, F1009, 0), reguli_configuration(3)}) {
        auto curve = cfg;
        curve.curve_mode = true;
        auto s = associated_timestamp(cfg, uniform_weights(cfg), 4);
        for (std::size_t t = 0; t <= s.length(); ++t) CHECK(line_orders(cfg, s, t) == line_orders(curve, s, t));
        auto a = enumerate_Sp(cfg, s, s.length()), b = enumerate_Sp(curve, s, s.length());
        for (std::size_t p = 0; p < cfg.J(); ++p) CHECK(as_set(a, p) == as_set(b, p));
    }
}

TEST_CASE("S_p enumeration against the definition") {
    std::mt19937_64 rng(13);
    std::vector<JointsConfiguration> cfgs = {tight_configuration(3, 2, Q, 0), tight_configuration(4, 3, F1009, 0),
                                             reguli_configuration(3), project_generic(construction_be(), F1009, 0),
                                             axes_configuration(3, Q)};
    for (const auto& cfg : cfgs) {
        std::vector<mpq_class> z;
        for (std::size_t p = 0; p < cfg.J(); ++p) z.emplace_back(static_cast<long>(rng() % 5 + 1));
        const unsigned n = 5;
        auto s = associated_timestamp(cfg, z, n);
        std::vector<std::size_t> stops = {0, s.length() / 3, s.length() / 2, s.length()};
        std::vector<std::set<Exponent>> before(cfg.J());
        for (auto t_f : stops) {
            SpSet S = enumerate_Sp(cfg, s, t_f);
            for (std::size_t p = 0; p < cfg.J(); ++p) {
                auto mine = as_set(S, p);
                CHECK(mine == brute_Sp(cfg, s, p, t_f));
                CHECK(std::includes(mine.begin(), mine.end(), before[p].begin(), before[p].end()));
                before[p] = mine;
                if (t_f == 0) CHECK(mine.empty());
            }
        }
    }
    for (unsigned n : {0u, 3u, 8u}) {
        auto one = axes_configuration(3, Q);
        auto s = associated_timestamp(one, uniform_weights(one), n);
        CHECK(enumerate_Sp(one, s, s.length()).size(0) == binomial(n + 3, 3).get_ui());
    }
}

TEST_CASE("S_p sizes approach the shaved polytope") {
    auto tri = tight_configuration(3, 2, Q, 0);
    const unsigned n = 120;
    auto s = associated_timestamp(tri, uniform_weights(tri), n);
    SpSet S = enumerate_Sp(tri, s, s.length());
    WeightState ws = weight_state(tri, uniform_weights(tri));
    for (std::size_t p = 0; p < tri.J(); ++p) {
        LatticeVolume lv = polytope_volume_lattice({ws.beta[p], 1}, n);
        mpq_class sp(static_cast<unsigned long>(S.size(p)), static_cast<unsigned long>(n * n));
        // Both counts see the same region up to a boundary layer of width O(1/n).
        mpq_class diff = abs(sp - lv.volume);
        CHECK(diff <= mpq_class(2, n));
        CHECK(abs(sp - mpq_class(1, 6)) <= mpq_class(2, n));
    }
}

TEST_CASE("derivative rows match frame derivatives of monomials") {
    std::mt19937_64 rng(17);
    auto cfg = tight_configuration(4, 3, F1009, 2);
    const unsigned n = 4;
    auto monos = monomials_up_to(3, n);
    for (std::size_t p = 0; p < cfg.J(); ++p) {
        std::vector<Exponent> alphas;
        for (int k = 0; k < 6; ++k) alphas.push_back(monos[rng() % monos.size()]);
        auto rows = derivative_rows(cfg, p, n, alphas);
        CoordinateFrame fr = joint_frame(cfg, p);
        for (std::size_t a = 0; a < alphas.size(); ++a)
            for (std::size_t c = 0; c < monos.size(); ++c)
                CHECK(rows[a][c] == frame_derivative(MultiPoly::monomial(F1009, monos[c], Scalar::one(F1009)), fr, alphas[a]));
    }
}

TEST_CASE("vanishing certificates") {
    SUBCASE("triangle, n = 6") {
        auto tri = tight_configuration(3, 2, F1009, 0);
        auto c = certify_vanishing(tri, uniform_weights(tri), 6);
        CHECK(c.rank == 28);
        CHECK(c.ambient == 28);
        CHECK(c.nullity == 0);
        CHECK(c.sum_Sp >= 28);
        CHECK(c.pass);
        CHECK_FALSE(c.witness.has_value());
    }
    SUBCASE("single joint") {
        for (unsigned n : {1u, 4u, 7u}) {
            auto one = axes_configuration(2, Q);
            auto c = certify_vanishing(one, uniform_weights(one), n, Q);
            CHECK(c.rank == binomial(n + 2, 2).get_ui());
            CHECK(c.pass);
        }
    }
    SUBCASE("parameter count on every certified run") {
        std::vector<JointsConfiguration> cfgs = {tight_configuration(4, 3, F1009, 0), reguli_configuration(3),
                                                 project_generic(construction_be(), F1009, 0)};
        for (const auto& cfg : cfgs)
            for (unsigned n : {2u, 4u}) {
                auto c = certify_vanishing(cfg, uniform_weights(cfg), n, F1009, 2);
                CHECK(c.pass);
                CHECK(c.nullity == 0);
                CHECK(c.sum_Sp >= c.ambient);
                std::size_t sum = 0;
                for (auto k : c.per_joint_Sp) sum += k;
                CHECK(sum == c.sum_Sp);
            }
    }
    SUBCASE("dropping one joint's conditions leaves nonzero solutions") {
        auto tri = tight_configuration(3, 2, F1009, 0);
        const unsigned n = 6;
        auto s = associated_timestamp(tri, uniform_weights(tri), n);
        SpSet S = enumerate_Sp(tri, s, s.length());
        std::vector<Vec> rows;
        for (std::size_t p = 1; p < tri.J(); ++p) {
            std::vector<Exponent> alphas;
            for (const auto& e : S.per_joint[p]) alphas.push_back(e.alpha);
            for (auto& r : derivative_rows(tri, p, n, alphas)) rows.push_back(r);
        }
        auto basis = nullspace_basis(F1009, rows, 28);
        REQUIRE_FALSE(basis.empty());
        MultiPoly f = poly_from_coefficients(F1009, 2, n, basis.front());
        CHECK_FALSE(f.is_zero());
        for (std::size_t p = 1; p < tri.J(); ++p)
            for (const auto& e : S.per_joint[p]) CHECK(frame_derivative(f, joint_frame(tri, p), e.alpha).is_zero());
    }
}

TEST_CASE("shaved box") {
    auto brute_box = [](std::size_t d, std::size_t M, unsigned n) {
        std::set<Exponent> out;
        const mpq_class w(1, static_cast<long>(M - d + 1));
        for (const auto& a : monomials_up_to(d, n)) {
            bool in = true;
            for (std::size_t i = 0; i < d; ++i)
                if (a[i] + (mpq_class(total_degree(a)) - a[i]) * w >= mpq_class(n) * w) in = false;
            if (in) out.insert(a);
        }
        return out;
    };
    for (auto [d, M, n] : std::vector<std::tuple<std::size_t, std::size_t, unsigned>>{{2, 3, 6}, {3, 4, 4}, {2, 4, 8}}) {
        auto box = shaved_box(d, M, n);
        CHECK(std::set<Exponent>(box.begin(), box.end()) == brute_box(d, M, n));

        auto arr = general_position_hyperplanes(M, d, Q, 0);
        auto rep = shaved_box_check(arr, n);
        CHECK(rep.f_nonzero);
        CHECK(rep.all_vanish);
        CHECK(rep.nonvanishing.empty());
        CHECK(rep.apex_ok);
        CHECK(rep.pass);
        CHECK(rep.box_size == box.size());

        // Re-evaluate f = (s_1 ... s_M)^{n/M} at every joint directly.
        MultiPoly f = MultiPoly::constant(Q, d, Scalar::one(Q));
        for (std::size_t j = 0; j < M; ++j) f = f * MultiPoly::affine(Q, arr.normals[j], arr.constants[j]);
        f = f.pow(n / static_cast<unsigned>(M));
        auto cfg = tight_configuration(arr);
        for (std::size_t p = 0; p < cfg.J(); ++p) {
            CoordinateFrame fr = joint_frame(cfg, p);
            for (const auto& a : box) CHECK(frame_derivative(f, fr, a).is_zero());
        }
    }
    auto apex = shaved_box_check(general_position_hyperplanes(3, 2, Q, 0), 6);
    CHECK(apex.apex == Exponent{2, 2});
    CHECK_THROWS_AS(shaved_box_check(general_position_hyperplanes(3, 2, Q, 0), 5), Error);
}

TEST_CASE("relaxed nonzero polynomial") {
    auto tri = tight_configuration(3, 2, F1009, 0);
    const mpq_class eps(1, 4);
    auto rep = relaxed_nonzero_polynomial(tri, 0, eps, 12);
    CHECK(rep.pass);
    CHECK(rep.nullity > 0);
    CHECK_FALSE(rep.f.is_zero());
    CHECK(rep.target_order == 6);
    const mpq_class need = (1 - eps) * mpq_class(2 * 12, 3);
    for (std::size_t q = 0; q < tri.J(); ++q) {
        Multiplicity m = multiplicity_at_point(rep.f, tri.points[tri.joints[q].point]);
        CHECK((m.infinite || mpq_class(m.value) >= need));
    }
    REQUIRE(rep.witness_alpha.has_value());
    auto s = associated_timestamp(tri, uniform_weights(tri), 12);
    const Exponent& a = *rep.witness_alpha;
    CHECK(s.T[0][total_degree(a)] > rep.t_f);
    CHECK(as_set(enumerate_Sp(tri, s, s.length()), 0).count(a) == 1);
    CHECK_FALSE(frame_derivative(rep.f, joint_frame(tri, 0), a).is_zero());

    // Without the relaxation the full system forces f = 0.
    auto full = certify_vanishing(tri, uniform_weights(tri), 12);
    CHECK(full.nullity == 0);
    CHECK_THROWS_AS(relaxed_nonzero_polynomial(tri, 0, mpq_class(0), 12), Error);
}
