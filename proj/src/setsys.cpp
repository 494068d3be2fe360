#include "jointslab/setsys.hpp"

#include <algorithm>
#include <bitset>
#include <functional>
#include <numeric>
#include <set>
#include <thread>

#include <gmpxx.h>

#include "jointslab/bounds.hpp"
#include "jointslab/error.hpp"

namespace jointslab {

using Bits = std::bitset<kMaxGround + 1>;

unsigned JointSetSystem::d() const {
    unsigned t = 0;
    for (std::size_t i = 0; i < k.size() && i < m.size(); ++i) t += k[i] * m[i];
    return t;
}

unsigned JointSetSystem::s() const { return std::accumulate(m.begin(), m.end(), 0u); }

namespace {

Bits to_bits(const Set& s) {
    Bits b;
    for (int e : s) b.set(static_cast<std::size_t>(e));
    return b;
}

void check_set(const JointSetSystem& sys, const Set& s, std::size_t size, const std::string& what) {
    if (s.size() != size)
        fail(ErrorKind::InvalidArgument, what + " has size " + std::to_string(s.size()) + ", expected " + std::to_string(size));
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] < 1 || static_cast<unsigned>(s[i]) > sys.ground)
            fail(ErrorKind::InvalidArgument, what + " has an element outside [1, ground]");
        if (i > 0 && s[i] <= s[i - 1]) fail(ErrorKind::InvalidArgument, what + " is not strictly increasing");
    }
}

// All r-subsets of the sorted list `items`.
std::vector<Set> subsets_of(const Set& items, std::size_t r) {
    std::vector<Set> out;
    if (r > items.size()) return out;
    std::vector<std::size_t> idx(r);
    std::iota(idx.begin(), idx.end(), 0);
    while (true) {
        Set s;
        for (auto i : idx) s.push_back(items[i]);
        out.push_back(std::move(s));
        std::size_t pos = r;
        while (pos > 0 && idx[pos - 1] == items.size() - r + pos - 1) --pos;
        if (pos == 0) break;
        ++idx[pos - 1];
        for (std::size_t i = pos; i < r; ++i) idx[i] = idx[i - 1] + 1;
    }
    return out;
}

Set range_set(int lo, int hi) {
    Set s;
    for (int e = lo; e <= hi; ++e) s.push_back(e);
    return s;
}

Set set_union(const Set& a, const Set& b) {
    Set out;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

}  // namespace

void validate_system(const JointSetSystem& sys) {
    if (sys.k.empty() || sys.k.size() != sys.m.size())
        fail(ErrorKind::InvalidArgument, "k and m must be nonempty and of equal length");
    if (sys.F.size() != sys.k.size())
        fail(ErrorKind::InvalidArgument, "need one F family per class");
    for (std::size_t i = 0; i < sys.k.size(); ++i)
        if (sys.k[i] == 0 || sys.m[i] == 0) fail(ErrorKind::InvalidArgument, "k_i and m_i must be positive");
    if (sys.ground > kMaxGround)
        fail(ErrorKind::InvalidArgument, "ground set larger than " + std::to_string(kMaxGround));
    const std::size_t top = sys.d() + sys.delta;
    std::set<Set> seen;
    for (std::size_t j = 0; j < sys.J.size(); ++j) {
        check_set(sys, sys.J[j], top, "J[" + std::to_string(j) + "]");
        if (!seen.insert(sys.J[j]).second) fail(ErrorKind::InvalidArgument, "duplicate member in J");
    }
    for (std::size_t i = 0; i < sys.F.size(); ++i) {
        seen.clear();
        for (std::size_t j = 0; j < sys.F[i].size(); ++j) {
            check_set(sys, sys.F[i][j], top - sys.k[i],
                      "F[" + std::to_string(i) + "][" + std::to_string(j) + "]");
            if (!seen.insert(sys.F[i][j]).second && !sys.multiset)
                fail(ErrorKind::InvalidArgument, "duplicate member in F[" + std::to_string(i) + "] (enable multiset mode)");
        }
    }
}

bool certifies(const JointSetSystem& sys, const Set& P, const Selection& sel) {
    if (sel.size() != sys.s()) return false;
    std::vector<unsigned> per_class(sys.classes(), 0);
    Bits p = to_bits(P), used;
    std::set<std::pair<std::size_t, std::size_t>> distinct;
    for (const Member& mem : sel) {
        if (mem.cls >= sys.classes() || mem.idx >= sys.F[mem.cls].size()) return false;
        if (!distinct.insert({mem.cls, mem.idx}).second) return false;
        ++per_class[mem.cls];
        Bits residual = p & ~to_bits(sys.F[mem.cls][mem.idx]);
        // The flat must pass through the point: F is inside P, so the residual has exactly k_i elements.
        if (residual.count() != sys.k[mem.cls]) return false;
        if ((residual & used).any()) return false;
        used |= residual;
    }
    for (std::size_t i = 0; i < sys.classes(); ++i)
        if (per_class[i] != sys.m[i]) return false;
    // For delta = 0 the residuals fill P.
    if (sys.delta == 0 && used != p) return false;
    return true;
}

std::vector<Selection> certifying_selections(const JointSetSystem& sys, const Set& P, std::size_t limit) {
    const Bits p = to_bits(P);

    std::vector<std::vector<std::pair<std::size_t, Bits>>> cand(sys.classes());
    for (std::size_t i = 0; i < sys.classes(); ++i)
        for (std::size_t j = 0; j < sys.F[i].size(); ++j) {
            Bits residual = p & ~to_bits(sys.F[i][j]);
            std::size_t sz = residual.count();
            if (sz == sys.k[i]) cand[i].push_back({j, residual});
        }

    std::vector<Selection> out;
    Selection cur;
    std::function<void(std::size_t, std::size_t, unsigned, const Bits&)> rec =
        [&](std::size_t cls, std::size_t start, unsigned taken, const Bits& used) {
            if (out.size() >= limit) return;
            if (cls == sys.classes()) {
                if (sys.delta == 0 && used != p) return;
                out.push_back(cur);
                return;
            }
            if (taken == sys.m[cls]) {
                rec(cls + 1, 0, 0, used);
                return;
            }
            for (std::size_t c = start; c < cand[cls].size(); ++c) {
                const auto& [idx, residual] = cand[cls][c];
                if ((residual & used).any()) continue;
                cur.push_back({cls, idx});
                rec(cls, c + 1, taken + 1, used | residual);
                cur.pop_back();
                if (out.size() >= limit) return;
            }
        };
    rec(0, 0, 0, Bits{});
    return out;
}

SystemVerification verify_system(const JointSetSystem& sys, unsigned threads) {
    validate_system(sys);
    SystemVerification res;
    res.certificates.assign(sys.J.size(), std::nullopt);
    auto work = [&](std::size_t begin, std::size_t step) {
        for (std::size_t j = begin; j < sys.J.size(); j += step) {
            auto sel = certifying_selections(sys, sys.J[j], 1);
            if (!sel.empty()) res.certificates[j] = sel.front();
        }
    };
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(sys.J.size())));
    if (threads <= 1) {
        work(0, 1);
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t, threads);
        for (auto& th : pool) th.join();
    }
    for (std::size_t j = 0; j < sys.J.size(); ++j)
        if (!res.certificates[j]) res.uncertified.push_back(j);
    res.ok = res.uncertified.empty();
    return res;
}

JointSetSystem construction_2_3() {
    JointSetSystem sys;
    sys.k = {2};
    sys.m = {3};
    sys.ground = 8;
    sys.J = subsets_of(range_set(1, 8), 6);
    std::vector<Set> F{{1, 2, 3, 4}, {5, 6, 7, 8}};
    const std::vector<std::pair<std::vector<Set>, std::vector<Set>>> colors = {
        {{{1, 2}, {3, 4}}, {{5, 6}, {7, 8}}},  // red
        {{{1, 3}, {2, 4}}, {{5, 7}, {6, 8}}},  // green
        {{{1, 4}, {2, 3}}, {{5, 8}, {6, 7}}},  // blue
    };
    for (const auto& [first, second] : colors)
        for (const auto& e1 : first)
            for (const auto& e2 : second) F.push_back(set_union(e1, e2));
    sys.F = {F};
    return sys;
}

JointSetSystem construction_kkk(unsigned k) {
    if (k == 0) fail(ErrorKind::InvalidArgument, "k must be at least 1");
    if (4 * k > kMaxGround) fail(ErrorKind::InvalidArgument, "k too large");
    JointSetSystem sys;
    sys.k = {k, k, k};
    sys.m = {1, 1, 1};
    sys.ground = 4 * k;
    // Offsets of the red, green and blue perfect matchings inside a block {1,2,3,4}.
    const std::vector<std::vector<Set>> matchings = {
        {{1, 2}, {3, 4}}, {{1, 3}, {2, 4}}, {{1, 4}, {2, 3}}};
    sys.F.assign(3, {});
    for (std::size_t c = 0; c < 3; ++c) {
        for (unsigned mask = 0; mask < (1u << k); ++mask) {
            Set s;
            for (unsigned b = 0; b < k; ++b) {
                const Set& e = matchings[c][(mask >> b) & 1u];
                for (int x : e) s.push_back(static_cast<int>(4 * b) + x);
            }
            std::sort(s.begin(), s.end());
            sys.F[c].push_back(s);
        }
    }
    // Every block keeps exactly three of its four elements.
    std::size_t total = std::size_t{1} << (2 * k);
    for (std::size_t code = 0; code < total; ++code) {
        Set s;
        for (unsigned b = 0; b < k; ++b) {
            int drop = static_cast<int>((code >> (2 * b)) & 3u) + 1;
            for (int x = 1; x <= 4; ++x)
                if (x != drop) s.push_back(static_cast<int>(4 * b) + x);
        }
        sys.J.push_back(s);
    }
    std::sort(sys.J.begin(), sys.J.end());
    return sys;
}

JointSetSystem construction_be() {
    JointSetSystem sys;
    sys.k = {1};
    sys.m = {4};
    sys.delta = 1;
    sys.ground = 6;
    sys.J = subsets_of(range_set(1, 6), 5);
    const std::set<Set> excluded{{1, 2, 3, 4}, {1, 2, 5, 6}, {3, 4, 5, 6}};
    std::vector<Set> F;
    for (auto& s : subsets_of(range_set(1, 6), 4))
        if (!excluded.count(s)) F.push_back(s);
    sys.F = {F};
    return sys;
}

JointSetSystem tight_system(unsigned M, unsigned d) {
    if (d == 0 || M < d) fail(ErrorKind::InvalidArgument, "need 1 <= d <= M");
    JointSetSystem sys;
    sys.k = {1};
    sys.m = {d};
    sys.ground = M;
    sys.J = subsets_of(range_set(1, static_cast<int>(M)), d);
    sys.F = {subsets_of(range_set(1, static_cast<int>(M)), d - 1)};
    return sys;
}

JointSetSystem pair_partition_system() {
    JointSetSystem sys;
    sys.k = {2};
    sys.m = {3};
    sys.ground = 6;
    sys.J = {range_set(1, 6)};
    sys.F = {subsets_of(range_set(1, 6), 4)};
    return sys;
}

JointSetSystem first_mult_multiset(unsigned M, const std::vector<unsigned>& k, const std::vector<unsigned>& m) {
    JointSetSystem sys;
    sys.k = k;
    sys.m = m;
    sys.ground = M;
    sys.multiset = true;
    const unsigned d = sys.d();
    if (d == 0 || M < d) fail(ErrorKind::InvalidArgument, "need M >= d >= 1");
    sys.J = subsets_of(range_set(1, static_cast<int>(M)), d);
    for (std::size_t i = 0; i < k.size(); ++i) {
        mpz_class copies = mpz_class(m[i]) * factorial(k[i]) * factorial(d - k[i]);
        if (copies > 10000) fail(ErrorKind::InvalidArgument, "too many copies requested");
        std::vector<Set> fam;
        for (const auto& s : subsets_of(range_set(1, static_cast<int>(M)), d - k[i]))
            for (unsigned long c = 0; c < copies.get_ui(); ++c) fam.push_back(s);
        sys.F.push_back(std::move(fam));
    }
    return sys;
}

JointSetSystem star_system(unsigned d, unsigned N) {
    if (d < 2) fail(ErrorKind::InvalidArgument, "star construction needs d >= 2");
    JointSetSystem sys;
    sys.k = {1};
    sys.m = {d};
    sys.ground = d + d * N;
    if (sys.ground > kMaxGround) fail(ErrorKind::InvalidArgument, "star construction too large");
    const Set centre = range_set(1, static_cast<int>(d));
    sys.J.push_back(centre);
    std::set<Set> lines;
    for (const auto& l : subsets_of(centre, d - 1)) lines.insert(l);
    int next = static_cast<int>(d) + 1;
    for (const auto& line : subsets_of(centre, d - 1)) {
        for (unsigned t = 0; t < N; ++t) {
            Set joint = line;
            joint.push_back(next++);
            std::sort(joint.begin(), joint.end());
            sys.J.push_back(joint);
            for (const auto& l : subsets_of(joint, d - 1)) lines.insert(l);
        }
    }
    sys.F = {std::vector<Set>(lines.begin(), lines.end())};
    return sys;
}

JointSetSystem blow_up(const JointSetSystem& sys, unsigned n) {
    if (n == 0) fail(ErrorKind::InvalidArgument, "blow-up factor must be positive");
    validate_system(sys);
    if (static_cast<unsigned long>(sys.ground) * n > kMaxGround)
        fail(ErrorKind::InvalidArgument, "blown-up ground set exceeds " + std::to_string(kMaxGround));
    auto copies = [n](const Set& s) {
        std::vector<Set> out{Set{}};
        for (int e : s) {
            std::vector<Set> next;
            for (const auto& partial : out)
                for (unsigned c = 1; c <= n; ++c) {
                    Set t = partial;
                    t.push_back((e - 1) * static_cast<int>(n) + static_cast<int>(c));
                    next.push_back(std::move(t));
                }
            out = std::move(next);
        }
        return out;
    };
    JointSetSystem out = sys;
    out.ground = sys.ground * n;
    out.J.clear();
    for (const auto& P : sys.J)
        for (auto& c : copies(P)) out.J.push_back(std::move(c));
    for (std::size_t i = 0; i < sys.F.size(); ++i) {
        out.F[i].clear();
        for (const auto& f : sys.F[i])
            for (auto& c : copies(f)) out.F[i].push_back(std::move(c));
    }
    return out;
}

bool same_joint_ratio(const JointSetSystem& a, const JointSetSystem& b) {
    if (a.m != b.m) return false;
    const unsigned s = a.s();
    if (s < 2) fail(ErrorKind::InvalidArgument, "ratio needs s >= 2");
    // |J_a|^{s-1} prod |F_b|^{m_i} == |J_b|^{s-1} prod |F_a|^{m_i}
    mpz_class lhs, rhs, t;
    mpz_ui_pow_ui(lhs.get_mpz_t(), a.J.size(), s - 1);
    mpz_ui_pow_ui(rhs.get_mpz_t(), b.J.size(), s - 1);
    for (std::size_t i = 0; i < a.m.size(); ++i) {
        mpz_ui_pow_ui(t.get_mpz_t(), b.F[i].size(), a.m[i]);
        lhs *= t;
        mpz_ui_pow_ui(t.get_mpz_t(), a.F[i].size(), a.m[i]);
        rhs *= t;
    }
    return lhs == rhs;
}

}  // namespace jointslab
