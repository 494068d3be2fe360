#include "jointslab/hypergraph.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <thread>

#include "jointslab/bounds.hpp"
#include "jointslab/error.hpp"

namespace jointslab {

Hypergraph joint_hypergraph(const JointSetSystem& sys, const Set& P) {
    Hypergraph g;
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> id;
    for (const auto& sel : certifying_selections(sys, P)) {
        std::vector<std::size_t> edge;
        for (const Member& mem : sel) {
            auto [it, inserted] = id.try_emplace({mem.cls, mem.idx}, g.vertices);
            if (inserted) {
                ++g.vertices;
                g.vertex_members.push_back(mem);
            }
            edge.push_back(it->second);
        }
        std::sort(edge.begin(), edge.end());
        g.edges.push_back(std::move(edge));
    }
    return g;
}

namespace {

using Mask = std::vector<std::uint64_t>;

Mask edge_mask(const std::vector<std::size_t>& edge, std::size_t words) {
    Mask m(words, 0);
    for (std::size_t v : edge) m[v / 64] |= std::uint64_t{1} << (v % 64);
    return m;
}

bool disjoint(const Mask& a, const Mask& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] & b[i]) return false;
    return true;
}

struct PackingSearch {
    const Hypergraph& g;
    std::size_t s;
    std::vector<Mask> masks;
    std::uint64_t budget;
    std::uint64_t nodes = 0;
    bool aborted = false;
    std::size_t best = 0;
    std::vector<std::size_t> best_set{};
    std::vector<std::size_t> current{};

    // Fractional cover: weight 1/s on every vertex still reachable by an available edge.
    std::size_t bound(const std::vector<std::size_t>& avail) const {
        std::vector<char> seen(g.vertices, 0);
        std::size_t covered = 0;
        for (std::size_t e : avail)
            for (std::size_t v : g.edges[e])
                if (!seen[v]) {
                    seen[v] = 1;
                    ++covered;
                }
        return std::min(avail.size(), covered / s);
    }

    void run(const std::vector<std::size_t>& avail) {
        if (aborted) return;
        if (++nodes > budget) {
            aborted = true;
            return;
        }
        if (current.size() > best) {
            best = current.size();
            best_set = current;
        }
        if (avail.empty() || current.size() + bound(avail) <= best) return;

        // Branch on the available vertex of smallest degree.
        std::vector<std::size_t> deg(g.vertices, 0);
        for (std::size_t e : avail)
            for (std::size_t v : g.edges[e]) ++deg[v];
        std::size_t pick = g.vertices;
        for (std::size_t v = 0; v < g.vertices; ++v)
            if (deg[v] > 0 && (pick == g.vertices || deg[v] < deg[pick])) pick = v;

        for (std::size_t e : avail) {
            if (!std::binary_search(g.edges[e].begin(), g.edges[e].end(), pick)) continue;
            std::vector<std::size_t> next;
            for (std::size_t f : avail)
                if (f != e && disjoint(masks[e], masks[f])) next.push_back(f);
            current.push_back(e);
            run(next);
            current.pop_back();
            if (aborted) return;
        }
        std::vector<std::size_t> without;
        for (std::size_t f : avail)
            if (!std::binary_search(g.edges[f].begin(), g.edges[f].end(), pick)) without.push_back(f);
        run(without);
    }
};

}  // namespace

PackingResult packing_number(const Hypergraph& g, std::uint64_t node_budget) {
    PackingResult res;
    if (g.edges.empty()) {
        res.exact = true;
        return res;
    }
    std::size_t s = g.edges.front().size();
    for (const auto& e : g.edges)
        if (e.size() != s || s == 0) fail(ErrorKind::InvalidArgument, "hypergraph must be uniform and nonempty-edged");
    const std::size_t words = (g.vertices + 63) / 64;
    PackingSearch search{.g = g, .s = s, .masks = {}, .budget = node_budget};
    for (const auto& e : g.edges) search.masks.push_back(edge_mask(e, words));

    // Greedy lower bound.
    Mask used(words, 0);
    for (std::size_t e = 0; e < g.edges.size(); ++e)
        if (disjoint(used, search.masks[e])) {
            for (std::size_t w = 0; w < words; ++w) used[w] |= search.masks[e][w];
            search.best_set.push_back(e);
        }
    search.best = search.best_set.size();

    std::vector<std::size_t> all(g.edges.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    const std::size_t root_bound = search.bound(all);
    search.run(all);

    res.lower = search.best;
    res.matching = search.best_set;
    res.nodes = search.nodes;
    res.exact = !search.aborted;
    res.upper = res.exact ? res.lower : std::max(res.lower, root_bound);
    return res;
}

namespace {

struct EntropyObjective {
    const Hypergraph& g;
    double s;

    std::vector<double> marginals(const std::vector<double>& mu) const {
        std::vector<double> marg(g.vertices, 0.0);
        for (std::size_t e = 0; e < g.edges.size(); ++e)
            for (std::size_t v : g.edges[e]) marg[v] += mu[e];
        return marg;
    }

    double value(const std::vector<double>& mu) const {
        double h = 0;
        for (double x : marginals(mu))
            if (x > 0) h -= x * std::log(x);
        return h / s;
    }

    std::vector<double> gradient(const std::vector<double>& mu) const {
        auto marg = marginals(mu);
        std::vector<double> grad(g.edges.size(), 0.0);
        for (std::size_t e = 0; e < g.edges.size(); ++e) {
            double t = 0;
            for (std::size_t v : g.edges[e]) t += -std::log(marg[v]) - 1.0;
            grad[e] = t / s;
        }
        return grad;
    }
};

double fw_gap(const std::vector<double>& mu, const std::vector<double>& grad) {
    double best = -INFINITY, avg = 0;
    for (std::size_t e = 0; e < mu.size(); ++e) {
        best = std::max(best, grad[e]);
        avg += mu[e] * grad[e];
    }
    return std::max(0.0, best - avg);
}

}  // namespace

NuStarResult nu_star(const Hypergraph& g, std::size_t uniformity, double tol, unsigned starts, std::uint64_t seed) {
    if (g.edges.empty()) fail(ErrorKind::InvalidArgument, "nu* needs at least one edge");
    if (uniformity == 0) fail(ErrorKind::InvalidArgument, "uniformity must be positive");
    const std::size_t E = g.edges.size();
    EntropyObjective obj{g, static_cast<double>(uniformity)};
    std::mt19937_64 rng(seed);
    constexpr std::size_t kMaxIter = 20000;

    NuStarResult best;
    best.log_value = -INFINITY;
    for (unsigned start = 0; start < std::max(1u, starts); ++start) {
        std::vector<double> logw(E, 0.0);
        if (start > 0)
            for (auto& x : logw) x = 4.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 2.0;
        auto normalise = [&](const std::vector<double>& lw) {
            double mx = *std::max_element(lw.begin(), lw.end());
            std::vector<double> mu(E);
            double z = 0;
            for (std::size_t e = 0; e < E; ++e) z += mu[e] = std::exp(lw[e] - mx);
            for (auto& x : mu) x /= z;
            return mu;
        };
        std::vector<double> mu = normalise(logw);
        double f = obj.value(mu);
        double eta = 1.0;
        double gap = 0;
        std::size_t it = 0;
        bool converged = false;
        for (; it < kMaxIter; ++it) {
            auto grad = obj.gradient(mu);
            gap = fw_gap(mu, grad);
            if (gap < tol) {
                converged = true;
                break;
            }
            bool moved = false;
            for (int tries = 0; tries < 60; ++tries) {
                std::vector<double> lw(E);
                for (std::size_t e = 0; e < E; ++e) lw[e] = std::log(mu[e]) + eta * grad[e];
                auto cand = normalise(lw);
                double fc = obj.value(cand);
                if (fc >= f) {
                    mu = std::move(cand);
                    f = fc;
                    moved = true;
                    eta *= 1.5;
                    break;
                }
                eta *= 0.5;
            }
            if (!moved) break;  // no ascent left at double precision
        }
        if (f > best.log_value) {
            best.log_value = f;
            best.gap = gap;
            best.mu = mu;
            best.iterations = it;
            best.converged = converged;
        }
    }
    best.value = std::exp(best.log_value);
    best.upper = std::exp(best.log_value + best.gap);
    return best;
}

MultiplicityReport multiplicity_report(const JointSetSystem& sys, double tol, unsigned threads) {
    validate_system(sys);
    MultiplicityReport rep;
    rep.tol = tol;
    const unsigned s = sys.s();
    double log_coef = 0;  // log prod m_i!/m_i^{m_i}
    for (unsigned mi : sys.m) log_coef += std::lgamma(mi + 1.0) - mi * std::log(static_cast<double>(mi));

    rep.joints.resize(sys.J.size());
    auto work = [&](std::size_t begin, std::size_t step) {
        for (std::size_t j = begin; j < sys.J.size(); j += step) {
            JointMultiplicity jm;
            jm.set_index = j;
            Hypergraph g = joint_hypergraph(sys, sys.J[j]);
            jm.M = g.edges.size();
            if (jm.M == 0) {
                rep.joints[j] = jm;
                continue;
            }
            jm.nu = packing_number(g);
            jm.nu_star = nu_star(g, s, tol, 8, j);
            jm.entropy_bound = std::exp((log_coef + std::log(static_cast<double>(jm.M))) / s);
            jm.nu_ok = jm.nu_star.value + tol >= static_cast<double>(jm.nu.lower);
            jm.entropy_ok = jm.nu_star.value + tol >= jm.entropy_bound;
            rep.joints[j] = std::move(jm);
        }
    };
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(1, sys.J.size()))));
    if (threads == 1) {
        work(0, 1);
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t, threads);
        for (auto& th : pool) th.join();
    }

    bool all_ok = true;
    for (const auto& jm : rep.joints) {
        if (jm.M == 0) {
            all_ok = false;
            continue;
        }
        all_ok = all_ok && jm.nu_ok && jm.entropy_ok;
    }
    if (s >= 2) {
        const double e = static_cast<double>(s) / (s - 1);
        for (const auto& jm : rep.joints)
            if (jm.M > 0) rep.lhs += std::pow(jm.nu_star.value, e);
        double log_deg = 0;
        for (std::size_t i = 0; i < sys.classes(); ++i)
            log_deg += sys.m[i] * std::log(static_cast<double>(sys.F[i].size()));
        double c = static_cast<double>(constant_C(sys.k, sys.m, ConstantVariant::NuStar));
        rep.rhs = c * std::exp(log_deg / (s - 1));
        rep.sum_ok = rep.lhs <= rep.rhs * (1 + 1e-12) + tol;
    } else {
        rep.sum_ok = true;
    }
    rep.pass = all_ok && rep.sum_ok;
    return rep;
}

WeightedReport weighted_corollary_check(const JointSetSystem& sys, const std::vector<std::vector<double>>& weights) {
    validate_system(sys);
    const unsigned s = sys.s();
    if (s < 2) fail(ErrorKind::InvalidArgument, "weighted corollary needs s >= 2");
    if (weights.size() != sys.classes()) fail(ErrorKind::InvalidArgument, "one weight list per class");
    for (std::size_t i = 0; i < sys.classes(); ++i) {
        if (weights[i].size() != sys.F[i].size()) fail(ErrorKind::InvalidArgument, "one weight per member");
        for (double w : weights[i])
            if (!(w >= 0)) fail(ErrorKind::InvalidArgument, "weights must be nonnegative");
    }
    SystemVerification ver = verify_system(sys);
    if (!ver.ok) fail(ErrorKind::Verification, "weighted corollary needs a verified joint set system");

    WeightedReport rep;
    rep.weights = weights;
    const double q = 1.0 / (s - 1);
    for (const auto& cert : ver.certificates) {
        double prod = 1;
        for (const Member& mem : *cert) prod *= std::pow(weights[mem.cls][mem.idx], q);
        rep.lhs += prod;
    }
    double inner = 1;
    for (std::size_t i = 0; i < sys.classes(); ++i) {
        double total = 0;
        for (double w : weights[i]) total += w;
        inner *= std::pow(total, static_cast<double>(sys.m[i]));
    }
    rep.rhs = static_cast<double>(constant_C(sys.k, sys.m, ConstantVariant::NuStar)) * std::pow(inner, q);
    rep.slack = rep.rhs - rep.lhs;
    rep.pass = rep.lhs <= rep.rhs * (1 + 1e-12);
    return rep;
}

PointCountReport point_count_check(const JointSetSystem& sys) {
    validate_system(sys);
    const unsigned s = sys.s();
    if (s < 2) fail(ErrorKind::InvalidArgument, "point-count corollary needs s >= 2");
    SystemVerification ver = verify_system(sys);
    if (!ver.ok) fail(ErrorKind::Verification, "point-count corollary needs a verified joint set system");

    PointCountReport rep;
    std::vector<std::vector<std::uint64_t>> count(sys.classes());
    for (std::size_t i = 0; i < sys.classes(); ++i) count[i].assign(sys.F[i].size(), 0);
    for (const auto& cert : ver.certificates)
        for (const Member& mem : *cert) ++count[mem.cls][mem.idx];

    rep.class_weight_ok = true;
    for (std::size_t i = 0; i < sys.classes(); ++i) {
        std::uint64_t total = 0;
        for (auto c : count[i]) total += c;
        rep.class_weight.push_back(total);
        if (total != static_cast<std::uint64_t>(sys.m[i]) * sys.J.size()) rep.class_weight_ok = false;
    }
    const double q = 1.0 / (s - 1);
    for (const auto& cert : ver.certificates) {
        std::uint64_t omega = 1;
        for (const Member& mem : *cert) omega *= count[mem.cls][mem.idx];
        rep.omega.push_back(omega);
        rep.lhs += std::pow(static_cast<double>(omega), q);
    }
    const double J = static_cast<double>(sys.J.size());
    rep.lhs /= J;
    double log_kfact = 0;
    for (std::size_t i = 0; i < sys.classes(); ++i) log_kfact += sys.m[i] * std::lgamma(sys.k[i] + 1.0);
    rep.rhs = std::exp(q * (std::lgamma(sys.d() + 1.0) + std::log(J) - log_kfact));

    std::vector<std::vector<double>> w(sys.classes());
    for (std::size_t i = 0; i < sys.classes(); ++i)
        for (auto c : count[i]) w[i].push_back(static_cast<double>(c));
    rep.weighted = weighted_corollary_check(sys, w);
    rep.pass = rep.class_weight_ok && rep.lhs <= rep.rhs * (1 + 1e-12) && rep.weighted.pass;
    return rep;
}

double power_mean(const std::vector<double>& values, double q) {
    if (values.empty()) fail(ErrorKind::InvalidArgument, "power mean of an empty list");
    if (q == 0) fail(ErrorKind::InvalidArgument, "power mean exponent must be nonzero");
    double t = 0;
    for (double v : values) t += std::pow(v, q);
    return std::pow(t / static_cast<double>(values.size()), 1.0 / q);
}

}  // namespace jointslab
