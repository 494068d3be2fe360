#include "support.hpp"

#include "jointslab/error.hpp"
#include "jointslab/generators.hpp"
#include "jointslab/json_io.hpp"
#include "jointslab/linalg.hpp"

using namespace jointslab;
using namespace testsupport;

namespace {

const Field Q = Field::rational();

// Counts planes through a shared line, spanned by it and another line of p, that hold another line of q.
std::size_t shared_planes_by_cross_product(const JointsConfiguration& cfg, std::size_t p, std::size_t q) {
    const auto& lp = cfg.joints[p].lines;
    const auto& lq = cfg.joints[q].lines;
    std::size_t ell = 0;
    for (auto l : lp)
        if (std::find(lq.begin(), lq.end(), l) != lq.end()) ell = l;
    const Vec& u = cfg.lines[ell].dir;
    std::size_t count = 0;
    for (auto a : lp) {
        if (a == ell) continue;
        const Vec& v = cfg.lines[a].dir;
        Vec n = {u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]};
        bool held = false;
        for (auto b : lq) {
            if (b == ell) continue;
            Vec diff = cfg.points[cfg.joints[q].point];
            const Vec& pp = cfg.points[cfg.joints[p].point];
            for (std::size_t i = 0; i < 3; ++i) diff[i] -= pp[i];
            if (dot(n, cfg.lines[b].dir).is_zero() && dot(n, diff).is_zero()) held = true;
        }
        if (held) ++count;
    }
    return count;
}

std::vector<std::pair<std::size_t, std::size_t>> collinear_pairs(const JointsConfiguration& cfg) {
    IncidenceStats st = incidence_stats(cfg);
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (const auto& on : st.joints_on_line)
        for (std::size_t a = 0; a < on.size(); ++a)
            for (std::size_t b = a + 1; b < on.size(); ++b) out.emplace_back(on[a], on[b]);
    return out;
}

}  // namespace

TEST_CASE("coordinate axes form one joint") {
    for (std::size_t d : {1u, 2u, 3u, 5u}) {
        auto cfg = axes_configuration(d, Q);
        VerificationResult r = verify_configuration(cfg);
        CHECK(r.ok);
        CHECK(r.stats.J == 1);
        CHECK(r.stats.L == d);
    }
}

TEST_CASE("concurrent coplanar lines are not a joint") {
    JointsConfiguration cfg;
    cfg.field = Q;
    cfg.dim = 3;
    cfg.points = {qvec({0, 0, 0})};
    cfg.lines = {{0, qvec({1, 0, 0}), 1}, {0, qvec({0, 1, 0}), 1}, {0, qvec({1, 1, 0}), 1}};
    cfg.joints = {{0, {0, 1, 2}}};
    VerificationResult r = verify_configuration(cfg);
    CHECK_FALSE(r.ok);
    REQUIRE(r.violations.size() == 1);
    CHECK(r.violations[0].predicate.find("linearly dependent") != std::string::npos);
    CHECK_THROWS_AS(require_valid(cfg), Error);
}

TEST_CASE("malformed configurations are rejected") {
    auto base = axes_configuration(3, Q);
    auto off = base;
    off.points.push_back(qvec({1, 1, 1}));
    off.joints[0].point = 1;
    CHECK_FALSE(verify_configuration(off).ok);

    auto dup = base;
    dup.points.push_back(qvec({5, 0, 0}));
    dup.lines.push_back({1, qvec({2, 0, 0}), 1});
    CHECK_FALSE(verify_configuration(dup).ok);

    auto deg = base;
    deg.lines[0].deg = 2;
    CHECK_FALSE(verify_configuration(deg).ok);
    deg.curve_mode = true;
    CHECK(verify_configuration(deg).ok);
}

TEST_CASE("tight configuration d=3 M=4") {
    auto cfg = tight_configuration(4, 3, Q, 0);
    VerificationResult r = verify_configuration(cfg);
    CHECK(r.ok);
    CHECK(r.stats.J == 4);
    CHECK(r.stats.L == 6);
    for (auto c : r.stats.joints_per_line) CHECK(c == 2);
}

TEST_CASE("verification is idempotent and double counts incidences") {
    for (std::uint64_t seed : {0u, 1u, 2u}) {
        auto cfg = tight_configuration(5, 3, Field::prime(1009), seed);
        VerificationResult a = verify_configuration(cfg), b = verify_configuration(cfg);
        CHECK(a.ok == b.ok);
        CHECK(a.stats.joints_per_line == b.stats.joints_per_line);
        CHECK(a.violations.size() == b.violations.size());
        std::size_t sum = 0;
        for (auto c : a.stats.joints_per_line) sum += c;
        CHECK(sum == cfg.dim * cfg.J());
        CHECK(a.stats.incidence_sum == sum);
    }
}

TEST_CASE("shared hyperplanes") {
    SUBCASE("tight configurations share all d-1") {
        for (auto [M, d] : std::vector<std::pair<std::size_t, std::size_t>>{{4, 3}, {5, 3}, {5, 4}, {4, 2}}) {
            auto cfg = tight_configuration(M, d, Q, 0);
            for (auto [p, q] : collinear_pairs(cfg)) {
                CHECK(shared_hyperplanes(cfg, p, q) == d - 1);
                CHECK(shared_hyperplanes(cfg, q, p) == d - 1);
                if (d == 3) CHECK(shared_planes_by_cross_product(cfg, p, q) == 2);
            }
        }
    }
    SUBCASE("reguli pairs on l_ij share nothing") {
        auto cfg = reguli_configuration(3);
        std::size_t on_ij = 0;
        for (auto [p, q] : collinear_pairs(cfg)) {
            std::size_t s = shared_hyperplanes(cfg, p, q);
            CHECK(s == shared_hyperplanes(cfg, q, p));
            CHECK(s == shared_planes_by_cross_product(cfg, p, q));
            CHECK(s < 2);
            // The x-direction lines are the l_ij.
            const auto& lp = cfg.joints[p].lines;
            const auto& lq = cfg.joints[q].lines;
            for (auto l : lp)
                if (std::find(lq.begin(), lq.end(), l) != lq.end() && cfg.lines[l].dir[1].is_zero()) {
                    CHECK(s == 0);
                    ++on_ij;
                }
        }
        CHECK(on_ij == 9);
    }
    SUBCASE("non-collinear pair is an error") {
        auto cfg = reguli_configuration(3);
        auto pairs = collinear_pairs(cfg);
        for (std::size_t p = 0; p < cfg.J(); ++p)
            for (std::size_t q = p + 1; q < cfg.J(); ++q) {
                bool col = std::find(pairs.begin(), pairs.end(), std::make_pair(p, q)) != pairs.end();
                if (!col) CHECK_THROWS_AS(shared_hyperplanes(cfg, p, q), Error);
            }
    }
}

TEST_CASE("subset ratio scan") {
    auto tri = tight_configuration(3, 2, Q, 0);
    SubsetScanReport r = subset_ratio_scan(tri, 3);
    CHECK(r.violations.empty());
    CHECK(r.subsets_checked == 6);
    CHECK_FALSE(r.truncated);

    auto two = disjoint_union(tri, tight_configuration(3, 2, Q, 5), qvec({1000, 1000}));
    REQUIRE(verify_configuration(two).ok);
    CHECK_FALSE(subset_ratio_scan(two, 3).violations.empty());

    auto one = axes_configuration(3, Q);
    SubsetScanReport s = subset_ratio_scan(one, 3);
    CHECK(s.subsets_checked == 0);
    CHECK(s.violations.empty());
}

TEST_CASE("field mapping and JSON round trip") {
    auto cfg = tight_configuration(5, 3, Q, 4);
    auto mod = map_to_field(cfg, Field::prime(1000003));
    CHECK(verify_configuration(mod).ok);
    CHECK_THROWS_AS(map_to_field(mod, Q), Error);

    json j = config_to_json(cfg);
    CHECK(j["field"]["type"] == "rational");
    auto back = config_from_json(j);
    CHECK(config_to_json(back) == j);
    json jp = config_to_json(tight_configuration(4, 3, Field::prime(1009), 0));
    CHECK(jp["field"]["type"] == "prime");
    CHECK(jp["field"]["p"] == 1009);
    CHECK_THROWS_AS(config_from_json(json::parse(R"({"dim": 2})")), Error);
}
