#include "jointslab/shadow.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "jointslab/bounds.hpp"
#include "jointslab/error.hpp"

namespace jointslab {

std::vector<Set> shadow(const std::vector<Set>& family) {
    std::set<Set> out;
    for (const auto& a : family)
        for (std::size_t drop = 0; drop < a.size(); ++drop) {
            Set s;
            for (std::size_t i = 0; i < a.size(); ++i)
                if (i != drop) s.push_back(a[i]);
            out.insert(std::move(s));
        }
    return {out.begin(), out.end()};
}

LovaszReport shadow_and_lovasz(const std::vector<Set>& family, unsigned d) {
    if (d == 0) fail(ErrorKind::InvalidArgument, "d must be positive");
    if (family.empty()) fail(ErrorKind::InvalidArgument, "family must be nonempty");
    for (const auto& a : family)
        if (a.size() != d) fail(ErrorKind::InvalidArgument, "every member must be a d-set");
    LovaszReport rep;
    rep.shadow = shadow(family);
    BinomSolution sol = solve_binom_real(mpz_class(static_cast<unsigned long>(family.size())), d, Real(1e-30));
    rep.x = sol.x;
    rep.integral = sol.integral;
    rep.bound = binom_real(sol.x, d - 1);
    return rep;
}

PartialShadowBound partial_shadow_lower_bound(unsigned r, unsigned m, unsigned k) {
    if (m == 0) fail(ErrorKind::InvalidArgument, "m must be positive");
    if (k >= r) return {Real(0), Real(0)};
    BinomSolution sol = solve_binom_real(mpz_class(m), r - k, Real(1e-30));
    return {sol.x, binom_real(sol.x, r - k - 1)};
}

PartialShadowCertificate check_partial_shadow(const std::vector<Set>& A, const std::vector<Set>& B, unsigned k) {
    PartialShadowCertificate cert;
    std::set<Set> b(B.begin(), B.end());
    cert.b_size = b.size();
    for (std::size_t i = 0; i < A.size(); ++i) {
        unsigned missing = 0;
        for (const auto& sub : shadow({A[i]}))
            if (!b.count(sub)) ++missing;
        cert.max_missing = std::max(cert.max_missing, missing);
        if (missing > k) cert.offending.push_back(i);
    }
    cert.ok = cert.offending.empty();
    return cert;
}

namespace {

using Mask = std::uint32_t;

std::vector<Mask> subsets_masks(unsigned g, unsigned r) {
    // Lexicographic order of the sorted element tuples.
    std::vector<Mask> out;
    std::function<void(unsigned, unsigned, Mask)> rec = [&](unsigned next, unsigned left, Mask cur) {
        if (left == 0) {
            out.push_back(cur);
            return;
        }
        for (unsigned e = next; e + left <= g; ++e) rec(e + 1, left - 1, cur | (Mask{1} << e));
    };
    rec(0, r, 0);
    return out;
}

Set mask_to_set(Mask m) {
    Set s;
    for (int e = 0; e < 32; ++e)
        if (m >> e & 1u) s.push_back(e + 1);
    return s;
}

struct Search {
    unsigned r, m, k, g;
    std::uint64_t budget;
    std::vector<Mask> sets{};
    std::vector<std::vector<std::size_t>> faces{};  // (r-1)-subset ids of each r-set
    std::size_t num_faces = 0;

    std::vector<std::size_t> chosen{};
    std::vector<unsigned> face_count{};
    std::size_t shadow_size = 0;

    unsigned best = ~0u;
    std::vector<std::size_t> best_sets{};
    std::vector<std::size_t> best_faces{};
    std::uint64_t nodes = 0;
    bool aborted = false;

    // Smallest B covering every chosen A up to k missing faces; `limit` prunes.
    unsigned min_cover(const std::vector<std::size_t>& fam, unsigned limit, std::vector<std::size_t>* witness) {
        if (k == 0) {
            std::set<std::size_t> all;
            for (auto a : fam) all.insert(faces[a].begin(), faces[a].end());
            if (witness) witness->assign(all.begin(), all.end());
            return static_cast<unsigned>(all.size());
        }
        std::vector<char> in(num_faces, 0);
        std::vector<std::size_t> cur, best_local;
        unsigned best_val = limit;
        std::function<void()> rec = [&]() {
            if (cur.size() >= best_val) return;
            // First member still short of r-k present faces.
            for (auto a : fam) {
                unsigned have = 0;
                for (auto f : faces[a]) have += in[f];
                if (have + k >= r) continue;
                unsigned need = r - k - have;
                if (cur.size() + need >= best_val) return;
                for (auto f : faces[a]) {
                    if (in[f]) continue;
                    in[f] = 1;
                    cur.push_back(f);
                    rec();
                    cur.pop_back();
                    in[f] = 0;
                }
                return;
            }
            best_val = static_cast<unsigned>(cur.size());
            best_local = cur;
        };
        rec();
        if (witness) *witness = best_local;
        return best_val;
    }

    void run(std::size_t next, unsigned support) {
        if (aborted) return;
        if (++nodes > budget) {
            aborted = true;
            return;
        }
        if (chosen.size() == m) {
            std::vector<std::size_t> wit;
            unsigned v = min_cover(chosen, best, &wit);
            if (v < best) {
                best = v;
                best_sets = chosen;
                best_faces = wit;
            }
            return;
        }
        for (std::size_t c = next; c < sets.size(); ++c) {
            if (sets.size() - c < m - chosen.size()) break;
            Mask a = sets[c];
            // New labels must be the next unused ones, in order.
            Mask fresh = a & ~((Mask{1} << support) - 1);
            unsigned t = static_cast<unsigned>(__builtin_popcount(fresh));
            if (fresh != (((Mask{1} << t) - 1) << support)) continue;

            chosen.push_back(c);
            bool prune;
            if (k == 0) {
                for (auto f : faces[c])
                    if (face_count[f]++ == 0) ++shadow_size;
                prune = shadow_size >= best;
            } else {
                prune = min_cover(chosen, best, nullptr) >= best;
            }
            if (!prune) run(c + 1, support + t);
            if (k == 0)
                for (auto f : faces[c])
                    if (--face_count[f] == 0) --shadow_size;
            chosen.pop_back();
            if (aborted) return;
        }
    }
};

}  // namespace

PartialShadowSearch partial_shadow_exhaustive(unsigned r, unsigned m, unsigned k, unsigned ground_cap,
                                              std::uint64_t node_budget) {
    if (r == 0 || m == 0) fail(ErrorKind::InvalidArgument, "r and m must be positive");
    if (r > 5 || m > 8 || ground_cap > 9)
        fail(ErrorKind::BudgetExceeded, "exhaustive partial shadow is limited to r <= 5, m <= 8, ground <= 9");
    if (ground_cap < r) fail(ErrorKind::InvalidArgument, "ground set smaller than r");

    PartialShadowSearch res;
    res.theorem = partial_shadow_lower_bound(r, m, k);

    Search s{.r = r, .m = m, .k = k, .g = ground_cap, .budget = node_budget};
    s.sets = subsets_masks(ground_cap, r);
    if (s.sets.size() < m) fail(ErrorKind::InvalidArgument, "ground set has fewer than m r-subsets");
    auto lower = subsets_masks(ground_cap, r - 1);
    std::map<Mask, std::size_t> face_id;
    for (std::size_t i = 0; i < lower.size(); ++i) face_id[lower[i]] = i;
    s.num_faces = lower.size();
    for (Mask a : s.sets) {
        std::vector<std::size_t> f;
        for (unsigned e = 0; e < ground_cap; ++e)
            if (a >> e & 1u) f.push_back(face_id.at(a & ~(Mask{1} << e)));
        s.faces.push_back(std::move(f));
    }
    s.face_count.assign(s.num_faces, 0);
    s.run(0, 0);

    res.complete = !s.aborted;
    res.nodes = s.nodes;
    res.value = s.best;
    for (auto i : s.best_sets) res.best_A.push_back(mask_to_set(s.sets[i]));
    for (auto i : s.best_faces) res.best_B.push_back(mask_to_set(lower[i]));
    std::sort(res.best_B.begin(), res.best_B.end());
    return res;
}

}  // namespace jointslab
