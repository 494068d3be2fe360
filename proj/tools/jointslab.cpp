#include <chrono>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <sstream>

#include <CLI11.hpp>

#include "jointslab/bounds.hpp"
#include "jointslab/config.hpp"
#include "jointslab/generators.hpp"
#include "jointslab/hypergraph.hpp"
#include "jointslab/json_io.hpp"
#include "jointslab/optimize.hpp"
#include "jointslab/parallel.hpp"
#include "jointslab/setsys.hpp"
#include "jointslab/shadow.hpp"
#include "jointslab/vanishing.hpp"

using namespace jointslab;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitUsage = 1;
constexpr int kExitFail = 2;

struct Context {
    std::string command_line;
    std::uint64_t seed = 0;
    unsigned threads = default_threads();
    std::string output = "-";
    std::string field_desc;
    json inputs = json::object();
    bool csv = false;
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
};

std::string read_text(const std::string& path, Context& ctx) {
    std::string text;
    if (path == "-") {
        text.assign(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
    } else {
        std::ifstream in(path, std::ios::binary);
        if (!in) fail(ErrorKind::InvalidArgument, "cannot open '" + path + "'");
        text.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    }
    // FNV-1a, 64 bit
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    std::ostringstream hex;
    hex << std::hex << std::setw(16) << std::setfill('0') << h;
    ctx.inputs[path] = "fnv1a64:" + hex.str();
    return text;
}

json read_json(const std::string& path, Context& ctx) {
    std::string text = read_text(path, ctx);
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        fail(ErrorKind::Parse, "'" + path + "' is not valid JSON: " + e.what());
    }
}

std::vector<mpq_class> parse_rational_list(const std::string& text) {
    std::vector<mpq_class> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(parse_rational(item));
    return out;
}

// "uniform", or a file holding a JSON array of rationals or a solvez output.
std::vector<mpq_class> load_weights(const std::string& spec, const JointsConfiguration& cfg, Context& ctx) {
    if (spec == "uniform") return uniform_weights(cfg);
    json j = read_json(spec, ctx);
    if (j.is_object() && j.contains("result")) j = j["result"];
    if (j.is_object() && j.contains("z")) j = j["z"];
    if (!j.is_array()) fail(ErrorKind::Parse, "weights must be a JSON array");
    std::vector<mpq_class> z;
    for (const auto& v : j) z.push_back(v.is_string() ? parse_rational(v.get<std::string>()) : mpq_class(v.get<long>()));
    return z;
}

json multiplicity_json(const Multiplicity& m) {
    if (m.infinite) return "inf";
    return m.value;
}

json shared_hyperplane_summary(const JointsConfiguration& cfg) {
    IncidenceStats st = incidence_stats(cfg);
    std::map<std::size_t, std::size_t> hist;
    json pairs = json::array();
    for (std::size_t l = 0; l < cfg.L(); ++l) {
        const auto& on = st.joints_on_line[l];
        for (std::size_t a = 0; a < on.size(); ++a)
            for (std::size_t b = a + 1; b < on.size(); ++b) {
                std::size_t c = shared_hyperplanes(cfg, on[a], on[b]);
                ++hist[c];
                pairs.push_back({{"line", l}, {"joints", {on[a], on[b]}}, {"shared", c}});
            }
    }
    json h = json::object();
    for (auto [k, v] : hist) h[std::to_string(k)] = v;
    return {{"histogram", h}, {"pairs", pairs}};
}

json verification_json(const JointsConfiguration& cfg, bool with_shared) {
    VerificationResult vr = verify_configuration(cfg);
    json out;
    out["ok"] = vr.ok;
    out["J"] = vr.stats.J;
    out["L"] = vr.stats.L;
    out["joints_per_line"] = vr.stats.joints_per_line;
    out["components"] = vr.stats.components.size();
    out["incidence_sum"] = vr.stats.incidence_sum;
    json viol = json::array();
    for (const auto& v : vr.violations) viol.push_back({{"where", v.where}, {"predicate", v.predicate}});
    out["violations"] = viol;
    if (vr.ok && cfg.J() > 0) {
        SharpBound sb = sharp_bound(mpz_class(static_cast<unsigned long>(cfg.J())), static_cast<unsigned>(cfg.dim));
        out["sharp_bound"] = {{"x", real_to_json(sb.x.x)},
                              {"L_min", real_to_json(sb.l_min)},
                              {"exact", sb.exact},
                              {"L_min_exact", sb.exact ? json(sb.exact_l_min.get_str()) : json(nullptr)},
                              {"L_exceeds", to_real(mpz_class(static_cast<unsigned long>(cfg.L()))) > sb.l_min},
                              {"L_attains", sb.exact && mpz_class(static_cast<unsigned long>(cfg.L())) == sb.exact_l_min}};
        if (with_shared && cfg.J() <= 400) out["shared_hyperplanes"] = shared_hyperplane_summary(cfg);
    }
    return out;
}

json system_verification_json(const JointSetSystem& sys, const SystemVerification& v) {
    json certs = json::array();
    for (std::size_t j = 0; j < sys.J.size(); ++j) {
        if (!v.certificates[j]) {
            certs.push_back(nullptr);
            continue;
        }
        json sel = json::array();
        for (const Member& m : *v.certificates[j]) sel.push_back({{"class", m.cls}, {"set", sys.F[m.cls][m.idx]}});
        certs.push_back(sel);
    }
    std::size_t F_total = 0;
    json sizes = json::array();
    for (const auto& fam : sys.F) {
        F_total += fam.size();
        sizes.push_back(fam.size());
    }
    return {{"ok", v.ok},
            {"J", sys.J.size()},
            {"F_sizes", sizes},
            {"F_total", F_total},
            {"d", sys.d()},
            {"s", sys.s()},
            {"uncertified", v.uncertified},
            {"certificates", certs}};
}

// Scalar fields of the result as key,value rows; the manifest rides along as a comment line.
std::string to_csv(const json& out, bool embed) {
    std::string text = "# manifest " + out["manifest"].dump() + "\n";
    const json& body = embed ? out["report"] : out["result"];
    text += "key,value\n";
    for (const auto& [k, v] : body.items()) {
        if (v.is_object() || v.is_array()) continue;
        text += k + "," + (v.is_string() ? v.get<std::string>() : v.dump()) + "\n";
    }
    return text;
}

class Runner {
public:
    explicit Runner(Context& ctx) : ctx_(ctx) {}

    // Writes {"manifest", "result"} or a document with an embedded manifest.
    int emit(json doc, bool pass, bool embed = false) {
        double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - ctx_.start).count();
        json manifest = {{"command", ctx_.command_line},
                         {"seed", ctx_.seed},
                         {"field", ctx_.field_desc},
                         {"version", JOINTSLAB_VERSION},
                         {"inputs", ctx_.inputs},
                         {"wall_time", wall}};
        json out;
        if (embed) {
            out = std::move(doc);
            out["manifest"] = manifest;
        } else {
            out = {{"manifest", manifest}, {"result", std::move(doc)}};
        }
        std::string text = ctx_.csv ? to_csv(out, embed) : out.dump(2) + "\n";
        if (ctx_.output == "-") {
            std::cout << text;
        } else {
            std::ofstream f(ctx_.output, std::ios::binary);
            if (!f) fail(ErrorKind::InvalidArgument, "cannot write '" + ctx_.output + "'");
            f << text;
        }
        return pass ? kExitPass : kExitFail;
    }

private:
    Context& ctx_;
};

}  // namespace

int main(int argc, char** argv) {
    Context ctx;
    for (int i = 0; i < argc; ++i) ctx.command_line += (i ? " " : "") + std::string(argv[i]);

    CLI::App app{"Exact joints toolkit: configurations, vanishing certificates, z-solver, volumes, set systems"};
    app.set_version_flag("--version", std::string(JOINTSLAB_VERSION));
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--seed", ctx.seed, "RNG seed (JOINTSLAB_SEED overrides)");
    app.add_option("--threads", ctx.threads, "worker threads")->check(CLI::PositiveNumber);
    app.add_option("-o,--output", ctx.output, "output file, - for stdout");
    app.add_flag("--csv", ctx.csv, "scalar result fields as CSV");

    std::function<int()> action;

    // gen
    auto* gen = app.add_subcommand("gen", "generate a configuration");
    gen->require_subcommand(1);
    std::size_t g_d = 3, g_M = 5, g_n = 3;
    std::string g_field = "p:1009", g_in, g_policy = "primes";
    std::size_t g_target = 0;
    auto* gen_tight = gen->add_subcommand("tight", "hyperplanes in general position");
    gen_tight->add_option("--d", g_d)->required();
    gen_tight->add_option("--M", g_M)->required();
    gen_tight->add_option("--field", g_field);
    gen_tight->callback([&] {
        action = [&] {
            Field f = Field::parse(g_field);
            ctx.field_desc = f.describe();
            auto cfg = tight_configuration(g_M, g_d, f, ctx.seed);
            json doc = config_to_json(cfg);
            doc["report"] = verification_json(cfg, true);
            return Runner(ctx).emit(doc, doc["report"]["ok"].get<bool>(), true);
        };
    });
    auto* gen_be = gen->add_subcommand("be", "six joints and twelve lines in four dimensions");
    gen_be->add_option("--field", g_field);
    gen_be->callback([&] {
        action = [&] {
            Field f = Field::parse(g_field);
            ctx.field_desc = f.describe();
            auto cfg = project_generic(construction_be(), f, ctx.seed);
            cfg.meta["construction"] = "be";
            json doc = config_to_json(cfg);
            doc["report"] = verification_json(cfg, true);
            return Runner(ctx).emit(doc, doc["report"]["ok"].get<bool>(), true);
        };
    });
    auto* gen_reg = gen->add_subcommand("reguli", "lines on reguli over Q");
    gen_reg->add_option("--n", g_n)->required();
    gen_reg->add_option("--policy", g_policy)->check(CLI::IsMember({"primes", "random"}));
    gen_reg->callback([&] {
        action = [&] {
            ctx.field_desc = "Q";
            auto cfg = reguli_configuration(g_n, g_policy == "primes" ? ReguliPolicy::Primes : ReguliPolicy::Random,
                                            ctx.seed);
            json doc = config_to_json(cfg);
            doc["report"] = verification_json(cfg, true);
            return Runner(ctx).emit(doc, doc["report"]["ok"].get<bool>(), true);
        };
    });
    auto* gen_proj = gen->add_subcommand("project", "realize a line set system and project it");
    gen_proj->add_option("--in", g_in)->required();
    gen_proj->add_option("--target-dim", g_target)->required();
    gen_proj->add_option("--field", g_field);
    gen_proj->callback([&] {
        action = [&] {
            Field f = Field::parse(g_field);
            ctx.field_desc = f.describe();
            JointSetSystem sys = system_from_json(read_json(g_in, ctx));
            if (g_target != sys.d())
                fail(ErrorKind::InvalidArgument, "target dimension must equal d = " + std::to_string(sys.d()));
            auto cfg = project_generic(sys, f, ctx.seed);
            json doc = config_to_json(cfg);
            doc["report"] = verification_json(cfg, true);
            return Runner(ctx).emit(doc, doc["report"]["ok"].get<bool>(), true);
        };
    });

    // verify
    std::string v_in;
    std::size_t v_cap = 0;
    auto* ver = app.add_subcommand("verify", "verify a configuration");
    ver->add_option("in", v_in)->required();
    ver->add_option("--subset-cap", v_cap, "also scan joint subsets up to this size");
    ver->callback([&] {
        action = [&] {
            auto cfg = config_from_json(read_json(v_in, ctx));
            ctx.field_desc = cfg.field.describe();
            json res = verification_json(cfg, true);
            if (v_cap > 0 && res["ok"].get<bool>()) {
                SubsetScanReport sr = subset_ratio_scan(cfg, v_cap);
                json viol = json::array();
                for (const auto& v : sr.violations)
                    viol.push_back({{"joints", v.joints}, {"inner_lines", v.inner_lines}, {"dummy_lines", v.dummy_lines}});
                res["subset_scan"] = {{"size_cap", sr.size_cap},
                                      {"checked", sr.subsets_checked},
                                      {"truncated", sr.truncated},
                                      {"violations", viol}};
            }
            return Runner(ctx).emit(res, res["ok"].get<bool>());
        };
    });

    // certify
    std::string c_in, c_z = "uniform", c_field = "p:1009", c_eps = "1/4";
    unsigned c_n = 6;
    long c_relax = -1;
    auto* cert = app.add_subcommand("certify", "certify the vanishing lemma by exact rank");
    cert->add_option("--in", c_in)->required();
    cert->add_option("--n", c_n)->required();
    cert->add_option("--z", c_z, "uniform or a weights file");
    cert->add_option("--field", c_field);
    cert->add_option("--relax-joint", c_relax, "build the relaxed nonzero polynomial at this joint instead");
    cert->add_option("--eps", c_eps);
    cert->callback([&] {
        action = [&] {
            auto cfg = config_from_json(read_json(c_in, ctx));
            Field f = Field::parse(c_field);
            ctx.field_desc = f.describe();
            if (c_relax >= 0) {
                RelaxedReport r = relaxed_nonzero_polynomial(cfg, static_cast<std::size_t>(c_relax),
                                                             parse_rational(c_eps), c_n, f);
                json pm = json::array(), lm = json::array(), lb = json::array();
                for (const auto& m : r.point_mult) pm.push_back(multiplicity_json(m));
                for (const auto& m : r.line_mult) lm.push_back(multiplicity_json(m));
                for (const auto& b : r.line_bound) lb.push_back(b.str());
                json res = {{"joint", r.joint},
                            {"n", r.n},
                            {"epsilon", rational_string(r.epsilon)},
                            {"target_order", r.target_order},
                            {"t_f", r.t_f},
                            {"conditions", r.conditions},
                            {"ambient", r.ambient},
                            {"nullity", r.nullity},
                            {"point_multiplicity", pm},
                            {"point_multiplicity_ok", r.point_mult_ok},
                            {"line_multiplicity", lm},
                            {"line_bound", lb},
                            {"line_multiplicity_ok", r.line_mult_ok},
                            {"witness_alpha", r.witness_alpha ? json(*r.witness_alpha) : json(nullptr)},
                            {"polynomial", poly_to_json(r.f)},
                            {"pass", r.pass}};
                return Runner(ctx).emit(res, r.pass);
            }
            auto z = load_weights(c_z, cfg, ctx);
            VanishingCertificate c = certify_vanishing(cfg, z, c_n, f, ctx.threads);
            json res = {{"field", f.describe()},
                        {"n", c.n},
                        {"rank", c.rank},
                        {"ambient", c.ambient},
                        {"nullity", c.nullity},
                        {"sum_Sp", c.sum_Sp},
                        {"per_joint_Sp", c.per_joint_Sp},
                        {"tie_break", c.tie_break},
                        {"pass", c.pass}};
            if (c.witness) res["witness"] = poly_to_json(*c.witness);
            return Runner(ctx).emit(res, c.pass);
        };
    });

    // shave
    std::size_t s_d = 2, s_M = 3;
    unsigned s_n = 6;
    std::string s_field = "Q";
    auto* shave = app.add_subcommand("shave", "check (s_1...s_M)^{n/M} against the shaved box");
    shave->add_option("--d", s_d)->required();
    shave->add_option("--M", s_M)->required();
    shave->add_option("--n", s_n)->required();
    shave->add_option("--field", s_field);
    shave->callback([&] {
        action = [&] {
            Field f = Field::parse(s_field);
            ctx.field_desc = f.describe();
            auto arr = general_position_hyperplanes(s_M, s_d, f, ctx.seed);
            ShavedBoxReport r = shaved_box_check(arr, s_n);
            json nv = json::array();
            for (const auto& [p, a] : r.nonvanishing) nv.push_back({{"joint", p}, {"alpha", a}});
            json res = {{"d", r.d},
                        {"M", r.M},
                        {"n", r.n},
                        {"box_size", r.box_size},
                        {"f_nonzero", r.f_nonzero},
                        {"all_vanish", r.all_vanish},
                        {"nonvanishing", nv},
                        {"apex", r.apex},
                        {"apex_nonzero", r.apex_nonzero},
                        {"apex_ok", r.apex_ok},
                        {"pass", r.pass}};
            return Runner(ctx).emit(res, r.pass);
        };
    });

    // solvez
    std::string z_in;
    double z_tol = 1e-9;
    std::size_t z_iter = 100000;
    auto* solvez = app.add_subcommand("solvez", "equalize sigma by gap splitting and bisection");
    solvez->add_option("--in", z_in)->required();
    solvez->add_option("--tol", z_tol);
    solvez->add_option("--max-iter", z_iter);
    solvez->callback([&] {
        action = [&] {
            auto cfg = config_from_json(read_json(z_in, ctx));
            ctx.field_desc = cfg.field.describe();
            require_valid(cfg);
            SolveResult r = solve_z(cfg, z_tol, z_iter);
            json energy = json::array(), spread = json::array();
            for (const auto& e : r.trace.energy) energy.push_back(real_to_json(e));
            for (const auto& s : r.trace.spread) spread.push_back(real_to_json(s));
            json res = {{"z", rationals_to_json(r.z)},
                        {"sigma", rationals_to_json(r.sigma)},
                        {"target", rationals_to_json(r.target)},
                        {"residual", real_to_json(r.residual)},
                        {"iterations", r.iterations},
                        {"converged", r.converged},
                        {"components", r.components},
                        {"decay_ok", r.trace.decay_ok},
                        {"spread_monotone", r.trace.spread_monotone},
                        {"energy", energy},
                        {"spread", spread}};
            return Runner(ctx).emit(res, r.converged && r.trace.decay_ok && r.trace.spread_monotone);
        };
    });

    // vol
    std::string vol_beta, vol_r = "1", vol_mode = "exact", vol_gamma;
    unsigned vol_n = 300;
    auto* vol = app.add_subcommand("vol", "shaved polytope volume");
    vol->add_option("--beta", vol_beta)->required();
    vol->add_option("--r", vol_r);
    vol->add_option("--mode", vol_mode)->check(CLI::IsMember({"exact", "lattice", "slice"}));
    vol->add_option("--n", vol_n);
    vol->add_option("--gamma", vol_gamma, "slice offsets gamma_3..gamma_d");
    vol->callback([&] {
        action = [&] {
            auto beta = parse_rational_list(vol_beta);
            mpq_class r = parse_rational(vol_r);
            if (beta.empty()) fail(ErrorKind::InvalidArgument, "empty beta list");
            const unsigned d = static_cast<unsigned>(beta.size());
            mpq_class mean(0);
            for (const auto& b : beta) mean += b;
            mean /= d;
            json res = {{"d", d}, {"beta", rationals_to_json(beta)}, {"r", rational_string(r)}, {"mode", vol_mode}};
            if (vol_mode == "lattice") {
                LatticeVolume lv = polytope_volume_lattice({beta, r}, vol_n, ctx.threads);
                res["n"] = vol_n;
                res["count"] = lv.count.get_str();
                res["volume"] = rational_string(lv.volume);
                res["volume_real"] = real_to_json(to_real(lv.volume));
                res["complete"] = lv.complete;
                if (r == 1) {
                    mpq_class eq = polytope_volume_equal(mean, d);
                    res["equal_beta_bound"] = rational_string(eq);
                    if (eq > 0)
                        res["relative_to_bound"] = real_to_json(to_real(mpq_class(lv.volume / eq)));
                }
                return Runner(ctx).emit(res, lv.complete);
            }
            if (vol_mode == "slice") {
                if (d < 2) fail(ErrorKind::InvalidArgument, "slice mode needs at least two betas");
                auto gamma = parse_rational_list(vol_gamma);
                std::vector<mpq_class> rest(beta.begin() + 2, beta.end());
                if (gamma.size() != rest.size())
                    fail(ErrorKind::InvalidArgument, "need one gamma per beta beyond the first two");
                res["gamma"] = rationals_to_json(gamma);
                res["area"] = rational_string(slice_area(beta[0], beta[1], gamma, rest));
                return Runner(ctx).emit(res, true);
            }
            if (r != 1) fail(ErrorKind::InvalidArgument, "exact mode covers r = 1 only; use --mode lattice");
            bool equal = std::all_of(beta.begin(), beta.end(), [&](const mpq_class& b) { return b == beta[0]; });
            mpq_class bound = polytope_volume_equal(mean, d);
            res["equal_beta_bound"] = rational_string(bound);
            if (equal) {
                res["volume"] = rational_string(bound);
            } else if (d == 2) {
                res["volume"] = rational_string(slice_area(beta[0], beta[1], {}, {}));
            } else {
                res["volume"] = nullptr;
                res["note"] = "no closed form for unequal betas in d >= 3; use --mode lattice";
            }
            return Runner(ctx).emit(res, true);
        };
    });

    // report
    std::string r_in, r_z = "solve";
    unsigned r_n = 100;
    auto* report = app.add_subcommand("report", "parameter-counting chain with shaved volumes");
    report->add_option("--in", r_in)->required();
    report->add_option("--n", r_n)->required();
    report->add_option("--z", r_z, "solve, uniform, or a weights file");
    report->callback([&] {
        action = [&] {
            auto cfg = config_from_json(read_json(r_in, ctx));
            ctx.field_desc = cfg.field.describe();
            require_valid(cfg);
            std::vector<mpq_class> z;
            json res;
            if (r_z == "solve") {
                // Uniform weights are kept when they already balance sigma, so the report stays exact.
                auto u = uniform_weights(cfg);
                WeightState ws = weight_state(cfg, u);
                bool balanced = true;
                IncidenceStats st = incidence_stats(cfg);
                for (const auto& comp : st.components)
                    for (auto p : comp) balanced = balanced && ws.sigma[p] == ws.sigma[comp.front()];
                if (balanced) {
                    z = u;
                    res["weights"] = "uniform";
                } else {
                SolveResult s = solve_z(cfg);
                z = s.z;
                res["weights"] = "solved";
                res["solve_converged"] = s.converged;
                res["solve_residual"] = real_to_json(s.residual);
                }
            } else {
                z = load_weights(r_z, cfg, ctx);
            }
            CountingReport c = counting_report(cfg, z, r_n, ctx.threads);
            json lat = json::array(), eq = json::array();
            for (const auto& v : c.lattice_volume) lat.push_back(rational_string(v));
            for (const auto& v : c.equal_volume) eq.push_back(rational_string(v));
            res["n"] = c.n;
            res["z"] = rationals_to_json(z);
            res["per_joint_lattice"] = lat;
            res["beta_rounded"] = c.beta_rounded;
            res["per_joint_equal_beta"] = eq;
            res["sum_vol"] = real_to_json(to_real(c.sum_lattice));
            res["sum_vol_exact"] = rational_string(c.sum_lattice);
            res["sum_equal_beta"] = rational_string(c.sum_equal);
            res["inverse_factorial"] = rational_string(c.inverse_factorial);
            res["lattice_tolerance"] = c.lattice_tolerance;
            res["lattice_ok"] = c.lattice_ok;
            res["equal_ok"] = c.equal_ok;
            res["bound_x"] = real_to_json(c.x);
            res["bound_L"] = real_to_json(c.bound_L);
            res["param_bound"] = real_to_json(c.param_bound);
            res["chain_ok"] = c.chain_ok;
            res["pass"] = c.pass;
            return Runner(ctx).emit(res, c.pass);
        };
    });

    // bound
    std::string b_J = "1";
    unsigned b_d = 3;
    bool b_curve = false;
    auto* bound = app.add_subcommand("bound", "minimum lines (or curve degree) for J joints");
    bound->add_option("--J", b_J)->required();
    bound->add_option("--d", b_d)->required();
    bound->add_flag("--curve", b_curve, "report the bound as a total curve degree");
    bound->callback([&] {
        action = [&] {
            mpz_class J;
            if (J.set_str(b_J, 10) != 0 || J < 1) fail(ErrorKind::InvalidArgument, "J must be a positive integer");
            SharpBound sb = sharp_bound(J, b_d);
            json res = {{"J", J.get_str()},
                        {"d", b_d},
                        {"x", real_to_json(sb.x.x)},
                        {"L_min", real_to_json(sb.l_min)},
                        {"L_min_alt", real_to_json(sb.l_min_alt)},
                        {"exact", sb.exact},
                        {"quantity", b_curve ? "total curve degree" : "lines"}};
            if (sb.exact) {
                res["x_exact"] = sb.x.exact_x;
                res["L_min_exact"] = sb.exact_l_min.get_str();
            }
            return Runner(ctx).emit(res, true);
        };
    });

    // const
    std::vector<unsigned> k_vec, m_vec;
    std::string variant = "nu-star";
    auto* cst = app.add_subcommand("const", "multiplicity constants");
    cst->add_option("--k", k_vec)->required()->delimiter(',');
    cst->add_option("--m", m_vec)->required()->delimiter(',');
    cst->add_option("--variant", variant)->check(CLI::IsMember({"nu-star", "nu", "upper-kM", "lower-1m"}));
    cst->callback([&] {
        action = [&] {
            Real v = constant_C(k_vec, m_vec, parse_constant_variant(variant));
            json res = {{"k", k_vec}, {"m", m_vec}, {"variant", variant}, {"value", real_to_json(v)},
                        {"value_digits", format_real(v, 30)}};
            if (k_vec.size() == 1 && m_vec.size() == 1 && m_vec[0] >= 2)
                res["generic_construction_ratio"] = real_to_json(generic_construction_ratio(k_vec[0], m_vec[0]));
            return Runner(ctx).emit(res, true);
        };
    });

    // setsys
    auto* setsys = app.add_subcommand("setsys", "joint set systems");
    setsys->require_subcommand(1);
    std::string ss_in = "-", ss_name;
    unsigned ss_k = 1, ss_n = 2, ss_M = 4, ss_d = 3, ss_N = 5;
    auto* ss_verify = setsys->add_subcommand("verify", "certify every joint set");
    ss_verify->add_option("in", ss_in);
    ss_verify->callback([&] {
        action = [&] {
            JointSetSystem sys = system_from_json(read_json(ss_in, ctx));
            SystemVerification v = verify_system(sys, ctx.threads);
            return Runner(ctx).emit(system_verification_json(sys, v), v.ok);
        };
    });
    auto* ss_mult = setsys->add_subcommand("mult", "M, nu and nu* per joint set");
    ss_mult->add_option("in", ss_in);
    ss_mult->callback([&] {
        action = [&] {
            JointSetSystem sys = system_from_json(read_json(ss_in, ctx));
            MultiplicityReport r = multiplicity_report(sys, 1e-6, ctx.threads);
            json joints = json::array();
            for (const auto& jm : r.joints)
                joints.push_back({{"set", sys.J[jm.set_index]},
                                  {"M", jm.M},
                                  {"nu", jm.nu.lower},
                                  {"nu_upper", jm.nu.upper},
                                  {"nu_exact", jm.nu.exact},
                                  {"nu_star", jm.nu_star.value},
                                  {"nu_star_upper", jm.nu_star.upper},
                                  {"entropy_bound", jm.entropy_bound},
                                  {"nu_ok", jm.nu_ok},
                                  {"entropy_ok", jm.entropy_ok}});
            json res = {{"joints", joints}, {"lhs", r.lhs}, {"rhs", r.rhs}, {"sum_ok", r.sum_ok}, {"tol", r.tol},
                        {"pass", r.pass}};
            return Runner(ctx).emit(res, r.pass);
        };
    });
    auto* ss_pc = setsys->add_subcommand("pointcount", "power-mean corollary with point-count weights");
    ss_pc->add_option("in", ss_in);
    ss_pc->callback([&] {
        action = [&] {
            JointSetSystem sys = system_from_json(read_json(ss_in, ctx));
            PointCountReport r = point_count_check(sys);
            json res = {{"class_weight", r.class_weight},
                        {"class_weight_ok", r.class_weight_ok},
                        {"omega", r.omega},
                        {"lhs", r.lhs},
                        {"rhs", r.rhs},
                        {"weighted", {{"lhs", r.weighted.lhs}, {"rhs", r.weighted.rhs}, {"pass", r.weighted.pass}}},
                        {"pass", r.pass}};
            return Runner(ctx).emit(res, r.pass);
        };
    });
    auto* ss_blow = setsys->add_subcommand("blowup", "replace each ground element by n copies");
    ss_blow->add_option("in", ss_in);
    ss_blow->add_option("--n", ss_n)->required();
    ss_blow->callback([&] {
        action = [&] {
            JointSetSystem sys = system_from_json(read_json(ss_in, ctx));
            JointSetSystem big = blow_up(sys, ss_n);
            json doc = system_to_json(big);
            std::size_t F_total = 0;
            for (const auto& fam : big.F) F_total += fam.size();
            bool same = same_joint_ratio(sys, big);
            doc["report"] = {{"J", big.J.size()}, {"F_total", F_total}, {"ratio_preserved", same}};
            return Runner(ctx).emit(doc, same, true);
        };
    });
    auto* ss_gen = setsys->add_subcommand("gen", "named constructions");
    ss_gen->add_option("name", ss_name)
        ->required()
        ->check(CLI::IsMember({"2-3", "kkk", "be", "tight", "pair-partition", "star", "first-mult"}));
    ss_gen->add_option("--k", ss_k);
    ss_gen->add_option("--M", ss_M);
    ss_gen->add_option("--d", ss_d);
    ss_gen->add_option("--N", ss_N);
    ss_gen->callback([&] {
        action = [&] {
            JointSetSystem sys;
            if (ss_name == "2-3") sys = construction_2_3();
            else if (ss_name == "kkk") sys = construction_kkk(ss_k);
            else if (ss_name == "be") sys = construction_be();
            else if (ss_name == "tight") sys = tight_system(ss_M, ss_d);
            else if (ss_name == "pair-partition") sys = pair_partition_system();
            else if (ss_name == "star") sys = star_system(ss_d, ss_N);
            else sys = first_mult_multiset(ss_M, {ss_k}, {ss_d});
            json doc = system_to_json(sys);
            std::size_t F_total = 0;
            for (const auto& fam : sys.F) F_total += fam.size();
            doc["report"] = {{"name", ss_name}, {"J", sys.J.size()}, {"F_total", F_total}};
            return Runner(ctx).emit(doc, true, true);
        };
    });

    // shadow
    unsigned sh_r = 4, sh_m = 6, sh_k = 0, sh_ground = 8, sh_d = 4;
    std::string sh_mode = "exhaustive", sh_in;
    std::uint64_t sh_budget = 2'000'000'000ULL;
    auto* sh = app.add_subcommand("shadow", "shadows, the real binomial bound and partial shadows");
    sh->add_option("--r", sh_r);
    sh->add_option("--m", sh_m);
    sh->add_option("--k", sh_k);
    sh->add_option("--mode", sh_mode)->check(CLI::IsMember({"exhaustive", "certificate", "lovasz"}));
    sh->add_option("--ground", sh_ground);
    sh->add_option("--in", sh_in, "certificate {A, B} or a family for lovasz mode");
    sh->add_option("--d", sh_d);
    sh->add_option("--budget", sh_budget);
    sh->callback([&] {
        action = [&] {
            if (sh_mode == "lovasz") {
                std::vector<Set> fam;
                if (sh_in.empty()) {
                    fam = construction_be().J;
                    sh_d = 5;
                } else {
                    json j = read_json(sh_in, ctx);
                    if (j.is_object() && j.contains("J")) j = j["J"];
                    fam = j.get<std::vector<Set>>();
                }
                LovaszReport r = shadow_and_lovasz(fam, sh_d);
                json res = {{"family_size", fam.size()},
                            {"shadow_size", r.shadow.size()},
                            {"x", real_to_json(r.x)},
                            {"bound", real_to_json(r.bound)},
                            {"integral", r.integral},
                            {"pass", to_real(mpz_class(static_cast<unsigned long>(r.shadow.size()))) >= r.bound}};
                return Runner(ctx).emit(res, res["pass"].get<bool>());
            }
            PartialShadowBound lb = partial_shadow_lower_bound(sh_r, sh_m, sh_k);
            json res = {{"r", sh_r}, {"m", sh_m}, {"k", sh_k}, {"mode", sh_mode},
                        {"theorem_x", real_to_json(lb.x)}, {"theorem_lower", real_to_json(lb.lower)}};
            if (sh_mode == "certificate") {
                std::vector<Set> A, B;
                if (sh_in.empty()) {
                    JointSetSystem be = construction_be();
                    A = be.J;
                    B = be.F[0];
                } else {
                    json j = read_json(sh_in, ctx);
                    A = j.at("A").get<std::vector<Set>>();
                    B = j.at("B").get<std::vector<Set>>();
                }
                for (auto& s : A) std::sort(s.begin(), s.end());
                for (auto& s : B) std::sort(s.begin(), s.end());
                PartialShadowCertificate c = check_partial_shadow(A, B, sh_k);
                bool shape_ok = A.size() == sh_m && std::all_of(A.begin(), A.end(), [&](const Set& s) {
                    return s.size() == sh_r;
                });
                res["A_size"] = A.size();
                res["B_size"] = c.b_size;
                res["max_missing"] = c.max_missing;
                res["offending"] = c.offending;
                res["upper_bound"] = c.b_size;
                res["pass"] = c.ok && shape_ok;
                return Runner(ctx).emit(res, c.ok && shape_ok);
            }
            PartialShadowSearch s = partial_shadow_exhaustive(sh_r, sh_m, sh_k, sh_ground, sh_budget);
            res["ground"] = sh_ground;
            res["complete"] = s.complete;
            res["value"] = s.value;
            res["best_A"] = s.best_A;
            res["best_B"] = s.best_B;
            res["nodes"] = s.nodes;
            res["pass"] = s.complete;
            return Runner(ctx).emit(res, s.complete);
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitPass : kExitUsage;
    }
    if (const char* env = std::getenv("JOINTSLAB_SEED")) {
        try {
            ctx.seed = std::stoull(env);
        } catch (...) {
            std::cerr << "JOINTSLAB_SEED is not an unsigned integer\n";
            return kExitUsage;
        }
    }
    try {
        return action();
    } catch (const Error& e) {
        std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
        return e.kind() == ErrorKind::Verification ? kExitFail : kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}
