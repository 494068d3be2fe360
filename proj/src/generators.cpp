#include "jointslab/generators.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "jointslab/combinatorics.hpp"
#include "jointslab/linalg.hpp"
#include "jointslab/poly.hpp"

namespace jointslab {

namespace {

constexpr long kRationalRange = 60;

Scalar random_scalar(Field f, std::mt19937_64& rng) {
    if (f.is_prime()) return Scalar(f, static_cast<long>(rng() % f.modulus()));
    return Scalar(f, static_cast<long>(rng() % (2 * kRationalRange + 1)) - kRationalRange);
}

std::string key_of(const Vec& v) {
    std::string k;
    for (const auto& s : v) k += s.str() + ",";
    return k;
}

Vec linear_image(const std::vector<Vec>& rows, const Vec& x) {
    Vec out;
    for (const auto& r : rows) out.push_back(dot(r, x));
    return out;
}

}  // namespace

Vec intersection_point(const HyperplaneArrangement& arr, const std::vector<std::size_t>& subset) {
    if (subset.size() != arr.dim) fail(ErrorKind::InvalidArgument, "need exactly d hyperplanes for a point");
    std::vector<Vec> a;
    Vec b;
    for (auto j : subset) {
        a.push_back(arr.normals.at(j));
        b.push_back(-arr.constants.at(j));
    }
    auto x = solve_square(arr.field, a, b);
    if (!x) fail(ErrorKind::Verification, "hyperplanes do not meet in a single point");
    return *x;
}

Vec intersection_direction(const HyperplaneArrangement& arr, const std::vector<std::size_t>& subset) {
    if (subset.size() + 1 != arr.dim) fail(ErrorKind::InvalidArgument, "need d-1 hyperplanes for a line");
    std::vector<Vec> rows;
    for (auto j : subset) rows.push_back(arr.normals.at(j));
    auto basis = nullspace_basis(arr.field, rows, arr.dim);
    if (basis.size() != 1) fail(ErrorKind::Verification, "hyperplanes do not cut out a line");
    return basis.front();
}

std::string generality_failure(const HyperplaneArrangement& arr) {
    const std::size_t d = arr.dim;
    if (arr.normals.size() != arr.constants.size()) return "normals/constants length mismatch";
    std::set<std::string> seen;
    for (const auto& sub : combinations(arr.M(), d)) {
        std::vector<Vec> a;
        Vec b;
        for (auto j : sub) {
            a.push_back(arr.normals[j]);
            b.push_back(-arr.constants[j]);
        }
        auto x = solve_square(arr.field, a, b);
        if (!x) return "linear part of a d-subset is singular";
        if (!seen.insert(key_of(*x)).second) return "two d-wise intersection points coincide";
    }
    return "";
}

HyperplaneArrangement general_position_hyperplanes(std::size_t M, std::size_t d, Field field, std::uint64_t seed,
                                                   unsigned retry_budget) {
    if (d == 0 || M < d) fail(ErrorKind::InvalidArgument, "need 1 <= d <= M");
    if (field.is_prime()) {
        mpz_class points = binomial(static_cast<unsigned>(M), static_cast<unsigned>(d));
        if (mpz_class(static_cast<unsigned long>(field.modulus())) <= points)
            fail(ErrorKind::InvalidArgument,
                 "field " + field.describe() + " is too small for " + points.get_str() +
                     " distinct intersection points; use a prime above " + points.get_str() + " or Q");
    }
    std::mt19937_64 rng(seed);
    std::string last;
    for (unsigned attempt = 0; attempt < std::max(1u, retry_budget); ++attempt) {
        HyperplaneArrangement arr{field, d, {}, {}, seed};
        for (std::size_t j = 0; j < M; ++j) {
            Vec a;
            for (std::size_t i = 0; i < d; ++i) a.push_back(random_scalar(field, rng));
            arr.normals.push_back(a);
            arr.constants.push_back(random_scalar(field, rng));
        }
        last = generality_failure(arr);
        if (last.empty()) return arr;
    }
    fail(ErrorKind::BudgetExceeded,
         "no arrangement in general position after " + std::to_string(retry_budget) + " attempts: " + last);
}

JointsConfiguration tight_configuration(const HyperplaneArrangement& arr) {
    const std::size_t M = arr.M(), d = arr.dim;
    JointsConfiguration cfg;
    cfg.field = arr.field;
    cfg.dim = d;

    auto joint_sets = combinations(M, d);
    std::map<std::vector<std::size_t>, std::size_t> joint_index;
    for (const auto& P : joint_sets) {
        joint_index[P] = cfg.points.size();
        cfg.points.push_back(intersection_point(arr, P));
    }
    std::map<std::vector<std::size_t>, std::size_t> line_index;
    for (const auto& F : combinations(M, d - 1)) {
        // Base at the lexicographically first joint on the line.
        std::size_t extra = 0;
        while (std::find(F.begin(), F.end(), extra) != F.end()) ++extra;
        std::vector<std::size_t> P = F;
        P.push_back(extra);
        std::sort(P.begin(), P.end());
        line_index[F] = cfg.lines.size();
        cfg.lines.push_back({joint_index.at(P), intersection_direction(arr, F), 1});
    }
    for (const auto& P : joint_sets) {
        Joint j{joint_index.at(P), {}};
        for (std::size_t i = 0; i < d; ++i) {
            std::vector<std::size_t> F;
            for (std::size_t t = 0; t < d; ++t)
                if (t != i) F.push_back(P[t]);
            j.lines.push_back(line_index.at(F));
        }
        cfg.joints.push_back(std::move(j));
    }
    cfg.meta = {{"construction", "tight"}, {"M", M}, {"d", d}, {"seed", arr.seed}};
    require_valid(cfg);
    return cfg;
}

JointsConfiguration tight_configuration(std::size_t M, std::size_t d, Field field, std::uint64_t seed) {
    return tight_configuration(general_position_hyperplanes(M, d, field, seed));
}

JointsConfiguration project_generic(const JointSetSystem& sys, Field field, std::uint64_t seed,
                                    unsigned retry_budget) {
    validate_system(sys);
    if (sys.classes() != 1 || sys.k[0] != 1)
        fail(ErrorKind::InvalidArgument, "projection is implemented for line systems (k = 1, one class)");
    SystemVerification ver = verify_system(sys);
    if (!ver.ok) fail(ErrorKind::Verification, "set system does not verify; cannot realize it");
    const std::size_t d = sys.m[0];
    const std::size_t D = d + sys.delta;

    std::string last;
    for (unsigned attempt = 0; attempt < std::max(1u, retry_budget); ++attempt) {
        const std::uint64_t s = seed + 0x9e3779b97f4a7c15ULL * attempt;
        HyperplaneArrangement arr = general_position_hyperplanes(sys.ground, D, field, s);
        std::mt19937_64 rng(s ^ 0x5851f42d4c957f2dULL);
        std::vector<Vec> proj(d);
        for (auto& row : proj)
            for (std::size_t i = 0; i < D; ++i) row.push_back(random_scalar(field, rng));

        auto zero_based = [](const Set& s) {
            std::vector<std::size_t> out;
            for (int e : s) out.push_back(static_cast<std::size_t>(e - 1));
            return out;
        };

        JointsConfiguration cfg;
        cfg.field = field;
        cfg.dim = d;
        std::map<std::vector<std::size_t>, std::size_t> point_of;
        for (const auto& P : sys.J) {
            auto idx = zero_based(P);
            point_of[idx] = cfg.points.size();
            cfg.points.push_back(linear_image(proj, intersection_point(arr, idx)));
        }
        for (const auto& F : sys.F[0]) {
            auto idx = zero_based(F);
            std::size_t extra = 0;
            while (std::find(idx.begin(), idx.end(), extra) != idx.end()) ++extra;
            auto P = idx;
            P.push_back(extra);
            std::sort(P.begin(), P.end());
            std::size_t base;
            if (auto it = point_of.find(P); it != point_of.end()) {
                base = it->second;
            } else {
                base = cfg.points.size();
                point_of[P] = base;
                cfg.points.push_back(linear_image(proj, intersection_point(arr, P)));
            }
            cfg.lines.push_back({base, linear_image(proj, intersection_direction(arr, idx)), 1});
        }
        for (std::size_t j = 0; j < sys.J.size(); ++j) {
            Joint jt{j, {}};
            for (const Member& mem : *ver.certificates[j]) jt.lines.push_back(mem.idx);
            cfg.joints.push_back(std::move(jt));
        }
        cfg.meta = {{"construction", "projected"}, {"source_dim", D}, {"seed", s}, {"attempt", attempt}};
        VerificationResult vr = verify_configuration(cfg);
        if (vr.ok) return cfg;
        last = vr.violations.front().where + ": " + vr.violations.front().predicate;
    }
    fail(ErrorKind::BudgetExceeded, "no generic projection found: " + last);
}

JointsConfiguration axes_configuration(std::size_t d, Field field) {
    if (d == 0) fail(ErrorKind::InvalidArgument, "dimension must be positive");
    JointsConfiguration cfg;
    cfg.field = field;
    cfg.dim = d;
    cfg.points.push_back(zero_vec(field, d));
    Joint j{0, {}};
    for (std::size_t i = 0; i < d; ++i) {
        Vec e = zero_vec(field, d);
        e[i] = Scalar::one(field);
        j.lines.push_back(cfg.lines.size());
        cfg.lines.push_back({0, e, 1});
    }
    cfg.joints.push_back(j);
    cfg.meta = {{"construction", "axes"}, {"d", d}};
    return cfg;
}

std::string reguli_condition_failure(const ReguliParameters& p) {
    const std::size_t n = p.c.size();
    if (n < 2 || p.d.size() != n) return "need n >= 2 values of c and d";
    std::set<mpq_class> all;
    for (std::size_t i = 0; i < n; ++i) {
        if (p.c[i] <= 0 || p.d[i] <= 0) return "c_i and d_i must be positive";
        all.insert(p.c[i]);
        all.insert(p.d[i]);
    }
    if (all.size() != 2 * n) return "c_i, d_i are not pairwise distinct";
    std::set<mpq_class> ys;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (!ys.insert(mpq_class((p.d[j] - p.d[i]) / (p.c[i] - p.c[j]))).second) return "y_ij are not distinct";
    std::set<mpq_class> kc;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 1; k <= n; ++k)
            if (!kc.insert(mpq_class(p.c[i] * static_cast<unsigned long>(k))).second) return "k*c_i are not distinct";
    return "";
}

JointsConfiguration reguli_configuration(const ReguliParameters& params) {
    if (auto why = reguli_condition_failure(params); !why.empty())
        fail(ErrorKind::InvalidArgument, "reguli parameters rejected: " + why);
    const std::size_t n = params.c.size();
    const Field Q = Field::rational();
    auto S = [&](const mpq_class& q) { return Scalar(Q, q); };

    JointsConfiguration cfg;
    cfg.field = Q;
    cfg.dim = 3;
    std::map<std::tuple<std::size_t, std::size_t, std::size_t>, std::size_t> point_of;
    std::vector<std::vector<mpq_class>> y(n, std::vector<mpq_class>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            y[i][j] = (params.d[j] - params.d[i]) / (params.c[i] - params.c[j]);
            for (std::size_t k = 1; k <= n; ++k) {
                mpq_class kk(static_cast<unsigned long>(k));
                point_of[{i, j, k}] = cfg.points.size();
                cfg.points.push_back({S(kk), S(y[i][j]), S(kk * (params.c[i] * y[i][j] + params.d[i]))});
            }
        }
    // Lines l_ij along the x-direction inside R_i and R_j.
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> line_ij, line_ik;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            line_ij[{i, j}] = cfg.lines.size();
            mpq_class slope = params.c[i] * y[i][j] + params.d[i];
            cfg.lines.push_back({point_of.at({i, j, 1}), {S(1), S(0), S(slope)}, 1});
        }
    // Lines l'_ik = R_i cut by the plane x = k.
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 1; k <= n; ++k) {
            std::size_t other = i == 0 ? 1 : 0;
            auto key = std::make_tuple(std::min(i, other), std::max(i, other), k);
            line_ik[{i, k}] = cfg.lines.size();
            mpq_class kk(static_cast<unsigned long>(k));
            cfg.lines.push_back({point_of.at(key), {S(0), S(1), S(kk * params.c[i])}, 1});
        }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            for (std::size_t k = 1; k <= n; ++k)
                cfg.joints.push_back({point_of.at({i, j, k}), {line_ij.at({i, j}), line_ik.at({i, k}), line_ik.at({j, k})}});

    std::vector<std::string> cs, ds;
    for (std::size_t i = 0; i < n; ++i) {
        cs.push_back(params.c[i].get_str());
        ds.push_back(params.d[i].get_str());
    }
    cfg.meta = {{"construction", "reguli"},
                {"n", n},
                {"c", cs},
                {"d", ds},
                {"omitted_lines", {"{(0,t,0)}: shared by every regulus, carries no labeled joint"}},
                {"line_ij_direction", "(1, 0, c_i*y_ij + d_i)"}};
    require_valid(cfg);
    return cfg;
}

JointsConfiguration reguli_configuration(std::size_t n, ReguliPolicy policy, std::uint64_t seed) {
    if (n < 2) fail(ErrorKind::InvalidArgument, "reguli configuration needs n >= 2");
    ReguliParameters p;
    if (policy == ReguliPolicy::Primes) {
        unsigned long q = n;
        while (p.c.size() < n) {
            ++q;
            if (is_prime_u64(q)) {
                p.c.emplace_back(q);
                p.d.emplace_back(q * q);
            }
        }
        if (reguli_condition_failure(p).empty()) {
            auto cfg = reguli_configuration(p);
            cfg.meta["policy"] = "primes";
            return cfg;
        }
    }
    std::mt19937_64 rng(seed);
    std::string last;
    for (unsigned attempt = 0; attempt < kDefaultRetryBudget; ++attempt) {
        p.c.clear();
        p.d.clear();
        for (std::size_t i = 0; i < n; ++i) {
            p.c.emplace_back(static_cast<long>(rng() % 1000 + 1), static_cast<long>(rng() % 20 + 1));
            p.d.emplace_back(static_cast<long>(rng() % 1000 + 1), static_cast<long>(rng() % 20 + 1));
            p.c.back().canonicalize();
            p.d.back().canonicalize();
        }
        last = reguli_condition_failure(p);
        if (last.empty()) {
            auto cfg = reguli_configuration(p);
            cfg.meta["policy"] = "random";
            cfg.meta["seed"] = seed;
            return cfg;
        }
    }
    fail(ErrorKind::BudgetExceeded, "random reguli parameters kept failing: " + last);
}

}  // namespace jointslab
