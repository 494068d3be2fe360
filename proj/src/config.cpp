#include "jointslab/config.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "jointslab/linalg.hpp"

namespace jointslab {

namespace {

std::vector<std::size_t> union_find_components(std::size_t n,
                                               const std::vector<std::vector<std::size_t>>& groups) {
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const auto& g : groups)
        for (std::size_t i = 1; i < g.size(); ++i) parent[find(g[i])] = find(g[0]);
    std::vector<std::size_t> root(n);
    for (std::size_t i = 0; i < n; ++i) root[i] = find(i);
    return root;
}

bool vec_is_zero(const Vec& v) {
    return std::all_of(v.begin(), v.end(), [](const Scalar& s) { return s.is_zero(); });
}

Vec sub(const Vec& a, const Vec& b) {
    Vec out = a;
    for (std::size_t i = 0; i < a.size(); ++i) out[i] -= b[i];
    return out;
}

}  // namespace

bool point_on_line(const Vec& x, const Vec& base, const Vec& dir) {
    if (x.size() != base.size() || x.size() != dir.size())
        fail(ErrorKind::DimensionMismatch, "point/line dimension mismatch");
    Vec diff = sub(x, base);
    if (vec_is_zero(diff)) return true;
    return rank(x[0].field(), {dir, diff}, x.size()) == 1;
}

IncidenceStats incidence_stats(const JointsConfiguration& cfg) {
    IncidenceStats st;
    st.J = cfg.J();
    st.L = cfg.L();
    st.joints_on_line.assign(cfg.L(), {});
    for (std::size_t p = 0; p < cfg.J(); ++p)
        for (std::size_t l : cfg.joints[p].lines)
            if (l < cfg.L()) st.joints_on_line[l].push_back(p);
    for (const auto& on : st.joints_on_line) {
        st.joints_per_line.push_back(on.size());
        st.incidence_sum += on.size();
    }
    auto root = union_find_components(cfg.J(), st.joints_on_line);
    std::vector<std::size_t> slot(cfg.J(), static_cast<std::size_t>(-1));
    for (std::size_t p = 0; p < cfg.J(); ++p) {
        if (slot[root[p]] == static_cast<std::size_t>(-1)) {
            slot[root[p]] = st.components.size();
            st.components.emplace_back();
        }
        st.components[slot[root[p]]].push_back(p);
    }
    return st;
}

VerificationResult verify_configuration(const JointsConfiguration& cfg) {
    VerificationResult res;
    auto bad = [&](const std::string& where, const std::string& what) {
        res.violations.push_back({where, what});
    };
    const std::size_t d = cfg.dim;
    if (d == 0) bad("configuration", "dimension must be positive");

    auto vec_ok = [&](const Vec& v) {
        if (v.size() != d) return false;
        return std::all_of(v.begin(), v.end(), [&](const Scalar& s) { return s.field() == cfg.field; });
    };

    for (std::size_t i = 0; i < cfg.points.size(); ++i)
        if (!vec_ok(cfg.points[i])) bad("point " + std::to_string(i), "coordinates must be " + std::to_string(d) + " scalars over " + cfg.field.describe());

    std::vector<bool> line_ok(cfg.L(), false);
    for (std::size_t l = 0; l < cfg.L(); ++l) {
        const Line& line = cfg.lines[l];
        std::string where = "line " + std::to_string(l);
        if (line.base >= cfg.points.size() || !vec_ok(cfg.points[line.base])) {
            bad(where, "base point index out of range");
            continue;
        }
        if (!vec_ok(line.dir)) {
            bad(where, "direction must have " + std::to_string(d) + " coordinates");
            continue;
        }
        if (vec_is_zero(line.dir)) {
            bad(where, "direction vector is zero");
            continue;
        }
        if (line.deg == 0) {
            bad(where, "degree must be at least 1");
            continue;
        }
        if (line.deg != 1 && !cfg.curve_mode) {
            bad(where, "degree != 1 requires curve mode");
            continue;
        }
        line_ok[l] = true;
    }

    for (std::size_t a = 0; a < cfg.L(); ++a) {
        if (!line_ok[a]) continue;
        for (std::size_t b = a + 1; b < cfg.L(); ++b) {
            if (!line_ok[b]) continue;
            const Line& la = cfg.lines[a];
            const Line& lb = cfg.lines[b];
            if (rank(cfg.field, {la.dir, lb.dir}, d) == 1 &&
                point_on_line(cfg.points[lb.base], cfg.points[la.base], la.dir))
                bad("line " + std::to_string(b), "duplicates line " + std::to_string(a));
        }
    }

    std::set<std::vector<std::string>> seen_points;
    for (std::size_t p = 0; p < cfg.J(); ++p) {
        const Joint& j = cfg.joints[p];
        std::string where = "joint " + std::to_string(p);
        if (j.point >= cfg.points.size() || !vec_ok(cfg.points[j.point])) {
            bad(where, "point index out of range");
            continue;
        }
        std::vector<std::string> key;
        for (const auto& s : cfg.points[j.point]) key.push_back(s.str());
        if (!seen_points.insert(key).second) bad(where, "another joint sits at the same point");
        if (j.lines.size() != d) {
            bad(where, "needs exactly " + std::to_string(d) + " line labels");
            continue;
        }
        std::set<std::size_t> distinct(j.lines.begin(), j.lines.end());
        if (distinct.size() != d) bad(where, "line labels are not distinct");
        bool labels_ok = true;
        for (std::size_t l : j.lines) {
            if (l >= cfg.L() || !line_ok[l]) {
                bad(where, "label " + std::to_string(l) + " is not a valid line");
                labels_ok = false;
                continue;
            }
            const Line& line = cfg.lines[l];
            if (!point_on_line(cfg.points[j.point], cfg.points[line.base], line.dir))
                bad(where, "point does not lie on line " + std::to_string(l));
        }
        if (!labels_ok) continue;
        std::vector<Vec> dirs;
        for (std::size_t l : j.lines) dirs.push_back(cfg.lines[l].dir);
        if (rank(cfg.field, dirs, d) != d) bad(where, "line directions are linearly dependent");
    }

    res.stats = incidence_stats(cfg);
    if (res.violations.empty() && res.stats.incidence_sum != d * cfg.J())
        bad("configuration", "incidence double count differs from d*J");
    res.ok = res.violations.empty();
    return res;
}

IncidenceStats require_valid(const JointsConfiguration& cfg) {
    VerificationResult r = verify_configuration(cfg);
    if (!r.ok) {
        std::string msg = "invalid joints configuration:";
        for (const auto& v : r.violations) msg += " [" + v.where + ": " + v.predicate + "]";
        fail(ErrorKind::Verification, msg);
    }
    return r.stats;
}

JointsConfiguration map_to_field(const JointsConfiguration& cfg, Field f) {
    if (cfg.field == f) return cfg;
    if (cfg.field.is_prime())
        fail(ErrorKind::FieldMismatch, "cannot move a configuration out of " + cfg.field.describe());
    JointsConfiguration out = cfg;
    out.field = f;
    auto conv = [&](const Vec& v) {
        Vec w;
        for (const auto& s : v) w.emplace_back(f, s.rational());
        return w;
    };
    for (auto& p : out.points) p = conv(p);
    for (auto& l : out.lines) l.dir = conv(l.dir);
    return out;
}

std::size_t shared_hyperplanes(const JointsConfiguration& cfg, std::size_t p, std::size_t q) {
    if (p >= cfg.J() || q >= cfg.J()) fail(ErrorKind::InvalidArgument, "joint index out of range");
    if (p == q) fail(ErrorKind::InvalidArgument, "shared_hyperplanes needs two distinct joints");
    const std::size_t d = cfg.dim;
    if (d < 2) fail(ErrorKind::InvalidArgument, "hyperplanes through a line need d >= 2");
    const auto& lp = cfg.joints[p].lines;
    const auto& lq = cfg.joints[q].lines;
    std::vector<std::size_t> common;
    for (std::size_t l : lp)
        if (std::find(lq.begin(), lq.end(), l) != lq.end()) common.push_back(l);
    if (common.empty())
        fail(ErrorKind::InvalidArgument,
             "joints " + std::to_string(p) + " and " + std::to_string(q) + " share no labeled line");
    const std::size_t ell = common.front();

    // Hyperplanes through ell spanned with d-2 of the remaining d-1 lines; drop one at a time.
    auto candidates = [&](const std::vector<std::size_t>& labels) {
        std::vector<std::size_t> others;
        for (std::size_t l : labels)
            if (l != ell) others.push_back(l);
        std::vector<std::vector<Vec>> spans;
        for (std::size_t drop = 0; drop < others.size(); ++drop) {
            std::vector<Vec> span{cfg.lines[ell].dir};
            for (std::size_t i = 0; i < others.size(); ++i)
                if (i != drop) span.push_back(cfg.lines[others[i]].dir);
            spans.push_back(std::move(span));
        }
        return spans;
    };
    auto hp = candidates(lp);
    auto hq = candidates(lq);
    // Both hyperplanes contain ell, so equal direction spans mean equal hyperplanes.
    std::size_t count = 0;
    for (const auto& a : hp) {
        for (const auto& b : hq) {
            std::vector<Vec> both = a;
            both.insert(both.end(), b.begin(), b.end());
            if (rank(cfg.field, both, d) == d - 1) {
                ++count;
                break;
            }
        }
    }
    return count;
}

SubsetScanReport subset_ratio_scan(const JointsConfiguration& cfg, std::size_t size_cap) {
    constexpr std::size_t kMaxSubsets = 2'000'000;
    SubsetScanReport rep;
    rep.size_cap = size_cap;
    const std::size_t J = cfg.J();
    const std::size_t L = cfg.L();
    if (J <= 1) return rep;
    IncidenceStats st = incidence_stats(cfg);
    const std::size_t top = std::min(size_cap, J - 1);
    rep.truncated = top < J - 1;

    std::vector<char> in(J, 0);
    for (std::size_t k = 1; k <= top; ++k) {
        std::vector<std::size_t> idx(k);
        std::iota(idx.begin(), idx.end(), 0);
        while (true) {
            if (rep.subsets_checked >= kMaxSubsets) {
                rep.truncated = true;
                return rep;
            }
            ++rep.subsets_checked;
            for (std::size_t i : idx) in[i] = 1;
            std::size_t inner = 0, incid = 0, inner_incid = 0;
            for (std::size_t l = 0; l < L; ++l) {
                const auto& on = st.joints_on_line[l];
                if (on.empty()) continue;
                std::size_t hits = 0;
                for (std::size_t p : on) hits += in[p];
                incid += hits;
                if (hits == on.size()) {
                    ++inner;
                    inner_incid += hits;
                }
            }
            std::size_t dummy = incid - inner_incid;
            // J'/(L'+L~) >= J/L
            if (k * L >= J * (inner + dummy)) rep.violations.push_back({idx, inner, dummy});
            for (std::size_t i : idx) in[i] = 0;

            std::size_t pos = k;
            while (pos > 0 && idx[pos - 1] == J - k + pos - 1) --pos;
            if (pos == 0) break;
            ++idx[pos - 1];
            for (std::size_t i = pos; i < k; ++i) idx[i] = idx[i - 1] + 1;
        }
    }
    return rep;
}

}  // namespace jointslab
