#include "support.hpp"

#include "jointslab/bounds.hpp"
#include "jointslab/combinatorics.hpp"
#include "jointslab/error.hpp"
#include "jointslab/generators.hpp"
#include "jointslab/json_io.hpp"
#include "jointslab/linalg.hpp"

using namespace jointslab;
using namespace testsupport;

namespace {

const Field Q = Field::rational();
const Field F1009 = Field::prime(1009);

}  // namespace

TEST_CASE("three lines in general position in the plane") {
    auto arr = general_position_hyperplanes(3, 2, Q, 0);
    CHECK(generality_failure(arr).empty());
    for (std::size_t a = 0; a < 3; ++a)
        for (std::size_t b = a + 1; b < 3; ++b)
            CHECK(rank(Q, {arr.normals[a], arr.normals[b]}, 2) == 2);
    // Not concurrent: the three points differ.
    Vec p01 = intersection_point(arr, {0, 1}), p02 = intersection_point(arr, {0, 2}), p12 = intersection_point(arr, {1, 2});
    CHECK(p01 != p02);
    CHECK(p01 != p12);
    CHECK(p02 != p12);
}

TEST_CASE("general position certificates") {
    auto arr = general_position_hyperplanes(6, 5, F1009, 0);
    CHECK(generality_failure(arr).empty());
    CHECK(arr.M() == 6);

    auto single = tight_configuration(4, 4, Q, 0);
    CHECK(single.J() == 1);

    // Three concurrent lines fail the distinct-points predicate.
    HyperplaneArrangement bad;
    bad.field = Q;
    bad.dim = 2;
    bad.normals = {qvec({1, 0}), qvec({0, 1}), qvec({1, 1})};
    bad.constants = {Scalar(Q), Scalar(Q), Scalar(Q)};
    CHECK_FALSE(generality_failure(bad).empty());

    // F_7 cannot host C(5,3) = 10 distinct joints.
    CHECK_THROWS_AS(general_position_hyperplanes(5, 3, Field::prime(7), 0), Error);
}

TEST_CASE("tight configurations") {
    struct Case {
        std::size_t M, d, J, L;
    };
    for (auto c : {Case{4, 3, 4, 6}, Case{5, 3, 10, 10}, Case{3, 2, 3, 3}, Case{6, 4, 15, 20}, Case{4, 2, 6, 4}}) {
        for (Field f : {Q, F1009}) {
            auto cfg = tight_configuration(c.M, c.d, f, 1);
            VerificationResult r = verify_configuration(cfg);
            CHECK(r.ok);
            CHECK(cfg.J() == c.J);
            CHECK(cfg.L() == c.L);
            CHECK(r.stats.components.size() == 1);
            for (auto n : r.stats.joints_per_line) CHECK(n == c.M - c.d + 1);
            SharpBound sb = sharp_bound(mpz_class(static_cast<unsigned long>(c.J)), static_cast<unsigned>(c.d));
            CHECK(sb.exact);
            CHECK(sb.x.exact_x == c.M);
            CHECK(sb.exact_l_min == static_cast<unsigned long>(c.L));
        }
    }
}

TEST_CASE("generators are deterministic") {
    CHECK(config_to_json(tight_configuration(5, 3, F1009, 9)) == config_to_json(tight_configuration(5, 3, F1009, 9)));
    CHECK(config_to_json(project_generic(construction_be(), F1009, 3)) ==
          config_to_json(project_generic(construction_be(), F1009, 3)));
    CHECK(config_to_json(reguli_configuration(3, ReguliPolicy::Random, 5)) ==
          config_to_json(reguli_configuration(3, ReguliPolicy::Random, 5)));
}

TEST_CASE("generic projection") {
    SUBCASE("six joints and twelve lines in four dimensions") {
        for (Field f : {Q, F1009}) {
            auto cfg = project_generic(construction_be(), f, 0);
            VerificationResult r = verify_configuration(cfg);
            CHECK(r.ok);
            CHECK(cfg.dim == 4);
            CHECK(cfg.J() == 6);
            CHECK(cfg.L() == 12);
            for (std::size_t l = 0; l < cfg.L(); ++l)
                for (std::size_t a = 0; a < r.stats.joints_on_line[l].size(); ++a)
                    for (std::size_t b = a + 1; b < r.stats.joints_on_line[l].size(); ++b)
                        CHECK(shared_hyperplanes(cfg, r.stats.joints_on_line[l][a], r.stats.joints_on_line[l][b]) == 1);
        }
    }
    SUBCASE("delta zero gives the generically induced configuration") {
        auto cfg = project_generic(tight_system(5, 3), F1009, 0);
        VerificationResult r = verify_configuration(cfg);
        CHECK(r.ok);
        CHECK(cfg.J() == 10);
        CHECK(cfg.L() == 10);
        for (auto n : r.stats.joints_per_line) CHECK(n == 3);
    }
    SUBCASE("only line systems") {
        CHECK_THROWS_AS(project_generic(construction_2_3(), F1009, 0), Error);
    }
}

TEST_CASE("reguli configurations") {
    for (std::size_t n : {2u, 3u, 4u, 5u}) {
        auto cfg = reguli_configuration(n);
        CHECK(verify_configuration(cfg).ok);
        CHECK(cfg.L() == n * (n - 1) / 2 + n * n);
        CHECK(cfg.J() == n * (n - 1) / 2 * n);
        CHECK(cfg.field == Q);
        CHECK(cfg.meta.contains("omitted_lines"));
        // With d_i = c_i^2 the y_ij are -(c_i + c_j); from n = 4 on two prime pairs share a sum
        // (5 + 13 = 7 + 11) and the seeded fallback takes over.
        CHECK(cfg.meta["policy"] == (n <= 3 ? "primes" : "random"));
    }
    auto r = reguli_configuration(3, ReguliPolicy::Random, 11);
    CHECK(verify_configuration(r).ok);
    CHECK(r.meta["policy"] == "random");

    // Equal slopes collapse the y_ij.
    ReguliParameters p{{mpq_class(2), mpq_class(2), mpq_class(3)}, {mpq_class(1), mpq_class(5), mpq_class(7)}};
    CHECK_FALSE(reguli_condition_failure(p).empty());
    CHECK_THROWS_AS(reguli_configuration(p), Error);
    CHECK_THROWS_AS(reguli_configuration(1), Error);
}
