#include "jointslab/json_io.hpp"

#include <string>

namespace jointslab {

namespace {

[[noreturn]] void parse_fail(const std::string& msg) { fail(ErrorKind::Parse, msg); }

std::string scalar_text(const json& j) {
    if (j.is_string()) return j.get<std::string>();
    if (j.is_number_integer()) return std::to_string(j.get<long long>());
    parse_fail("scalars must be strings or integers");
}

const json& member(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) parse_fail(std::string("missing field '") + key + "'");
    return j.at(key);
}

}  // namespace

std::string rational_string(const mpq_class& q) { return q.get_str(); }

mpq_class parse_rational(const std::string& text) {
    mpq_class q;
    if (q.set_str(text, 10) != 0 || q.get_den() == 0) parse_fail("not a rational number: '" + text + "'");
    q.canonicalize();
    return q;
}

json rationals_to_json(const std::vector<mpq_class>& v) {
    json out = json::array();
    for (const auto& q : v) out.push_back(rational_string(q));
    return out;
}

json real_to_json(const Real& x) { return std::stod(format_real(x, 12)); }

json field_to_json(const Field& f) {
    if (f.is_prime()) return {{"type", "prime"}, {"p", f.modulus()}};
    return {{"type", "rational"}};
}

Field field_from_json(const json& j) {
    if (j.is_string()) return Field::parse(j.get<std::string>());
    const std::string type = member(j, "type").get<std::string>();
    if (type == "rational") return Field::rational();
    if (type == "prime") return Field::prime(member(j, "p").get<std::uint64_t>());
    parse_fail("unknown field type '" + type + "'");
}

json config_to_json(const JointsConfiguration& cfg) {
    json j;
    j["field"] = field_to_json(cfg.field);
    j["dim"] = cfg.dim;
    json pts = json::array();
    for (const auto& p : cfg.points) {
        json row = json::array();
        for (const auto& s : p) row.push_back(s.str());
        pts.push_back(row);
    }
    j["points"] = pts;
    json lines = json::array();
    for (const auto& l : cfg.lines) {
        json dir = json::array();
        for (const auto& s : l.dir) dir.push_back(s.str());
        lines.push_back({{"base", l.base}, {"dir", dir}, {"deg", l.deg}});
    }
    j["lines"] = lines;
    json joints = json::array();
    for (const auto& jt : cfg.joints) joints.push_back({{"point", jt.point}, {"lines", jt.lines}});
    j["joints"] = joints;
    if (cfg.curve_mode) j["curve_mode"] = true;
    if (!cfg.meta.empty()) j["meta"] = cfg.meta;
    return j;
}

JointsConfiguration config_from_json(const json& j) {
    try {
        JointsConfiguration cfg;
        cfg.field = field_from_json(member(j, "field"));
        cfg.dim = member(j, "dim").get<std::size_t>();
        for (const auto& p : member(j, "points")) {
            Vec v;
            for (const auto& s : p) v.push_back(Scalar::parse(cfg.field, scalar_text(s)));
            cfg.points.push_back(std::move(v));
        }
        for (const auto& l : member(j, "lines")) {
            Line line;
            line.base = member(l, "base").get<std::size_t>();
            for (const auto& s : member(l, "dir")) line.dir.push_back(Scalar::parse(cfg.field, scalar_text(s)));
            line.deg = l.value("deg", 1u);
            cfg.lines.push_back(std::move(line));
        }
        for (const auto& jt : member(j, "joints"))
            cfg.joints.push_back({member(jt, "point").get<std::size_t>(),
                                  member(jt, "lines").get<std::vector<std::size_t>>()});
        cfg.curve_mode = j.value("curve_mode", false);
        if (j.contains("meta")) cfg.meta = j.at("meta");
        return cfg;
    } catch (const json::exception& e) {
        parse_fail(std::string("configuration JSON: ") + e.what());
    }
}

json system_to_json(const JointSetSystem& sys) {
    json j;
    j["k"] = sys.k;
    j["m"] = sys.m;
    j["delta"] = sys.delta;
    j["ground"] = sys.ground;
    j["J"] = sys.J;
    j["F"] = sys.F;
    if (sys.multiset) j["multiset"] = true;
    return j;
}

JointSetSystem system_from_json(const json& j) {
    try {
        JointSetSystem sys;
        sys.k = member(j, "k").get<std::vector<unsigned>>();
        sys.m = member(j, "m").get<std::vector<unsigned>>();
        sys.delta = j.value("delta", 0u);
        sys.ground = member(j, "ground").get<unsigned>();
        sys.J = member(j, "J").get<std::vector<Set>>();
        sys.F = member(j, "F").get<std::vector<std::vector<Set>>>();
        sys.multiset = j.value("multiset", false);
        for (auto& s : sys.J) std::sort(s.begin(), s.end());
        for (auto& fam : sys.F)
            for (auto& s : fam) std::sort(s.begin(), s.end());
        validate_system(sys);
        return sys;
    } catch (const json::exception& e) {
        parse_fail(std::string("set-system JSON: ") + e.what());
    }
}

json poly_to_json(const MultiPoly& f) {
    json out = json::array();
    for (const auto& [e, c] : f.terms()) out.push_back({{"exp", e}, {"coef", c.str()}});
    return out;
}

MultiPoly poly_from_json(const json& j, Field f, std::size_t dim) {
    MultiPoly out(f, dim);
    try {
        for (const auto& t : j) {
            auto e = member(t, "exp").get<Exponent>();
            if (e.size() != dim) fail(ErrorKind::DimensionMismatch, "exponent length differs from the dimension");
            out.add_term(e, Scalar::parse(f, scalar_text(member(t, "coef"))));
        }
    } catch (const json::exception& e) {
        parse_fail(std::string("polynomial JSON: ") + e.what());
    }
    return out;
}

}  // namespace jointslab
