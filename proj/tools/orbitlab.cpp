// orbitlab command-line front end.
//
// Exit codes: 0 success, 2 invalid arguments or input, 1 computation error.

#include "orbitlab/characters.hpp"
#include "orbitlab/errors.hpp"
#include "orbitlab/metaplectic.hpp"
#include "orbitlab/orbits.hpp"
#include "orbitlab/params.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace orbitlab;
using json = nlohmann::ordered_json;

namespace {

// invalid user input, reported with exit code 2
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

template <class F>
auto checked(F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const Error& e) {
        throw InputError(e.what());
    }
}

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return buf;
}

std::string fmt_complex(cplx z) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%.15g %+.15gi", z.real(), z.imag());
    return buf;
}

const GroupEntry& group_arg(const std::string& name) {
    if (!builtin_catalog().has(name)) throw InputError("unknown group '" + name + "'");
    return builtin_catalog().group(name);
}

const CartanFrame& frame_arg(const GroupEntry& g, const std::string& name) {
    if (name.empty()) return g.frames[g.fundamental_index()];
    if (g.frame_index(name) < 0) throw InputError("group " + g.name + " has no frame '" + name + "'");
    return g.frame(name);
}

Vec vector_arg(const std::string& text, int dim, const std::string& what) {
    Vec v = checked([&] { return parse_vector(text); });
    if (static_cast<int>(v.size()) != dim)
        throw InputError(what + " needs " + std::to_string(dim) + " coordinates, got " + std::to_string(v.size()));
    return v;
}

Signs chamber_arg(const std::string& text) {
    for (char c : text)
        if (c != '+' && c != '-') throw InputError("chamber must be a string of + and -");
    return parse_signs(text);
}

std::shared_ptr<const RootSystemView> view_ptr(const CartanFrame& f) { return std::make_shared<RootSystemView>(view_of(f)); }

// "1", "-1", "i", "-i", "e(p/q)" = exp(i pi p/q)
Cyc cyc_arg(const std::string& text) {
    if (text == "1") return Cyc(1);
    if (text == "-1") return Cyc(-1);
    if (text == "i") return Cyc::i();
    if (text == "-i") return -Cyc::i();
    if (text.size() > 3 && text.rfind("e(", 0) == 0 && text.back() == ')')
        return Cyc::exp_i_pi(checked([&] { return parse_rational(text.substr(2, text.size() - 3)); }));
    throw InputError("bad tau value '" + text + "'");
}

json vec_json(const Vec& v) { return to_string(v); }

// ---- catalog ---------------------------------------------------------------------------

json frame_json(const CartanFrame& f) {
    json labels = json::array();
    for (auto l : f.labels) labels.push_back(label_token(l));
    json kernel = json::array();
    for (const auto& k : f.kernel_lattice) kernel.push_back(to_string(k));
    json sigma = json::array();
    for (int i = 0; i < f.sigma.rows; ++i) sigma.push_back(to_string(f.sigma.row(i)));
    return json{{"name", f.name},       {"fundamental", f.fundamental}, {"split", f.split},
                {"dim_t", f.dim_t},     {"dim_a", f.dim_a},             {"labels", labels},
                {"sigma", sigma},       {"kernel_lattice", kernel},     {"realized_weyl", f.realized_weyl.size()}};
}

int cmd_catalog_list(bool as_json) {
    json out = json::array();
    for (const auto& g : builtin_catalog().groups)
        out.push_back(json{{"name", g.name},
                           {"factors", factors_string(g.factors)},
                           {"center_rank", g.center_rank},
                           {"connected", g.connected},
                           {"frames", g.frames.size()}});
    if (as_json) {
        std::cout << out.dump(2) << "\n";
        return 0;
    }
    std::printf("%-14s %-8s %-6s %-10s %s\n", "group", "factors", "center", "connected", "frames");
    for (const auto& r : out)
        std::printf("%-14s %-8s %-6d %-10s %d\n", r["name"].get<std::string>().c_str(),
                    r["factors"].get<std::string>().c_str(), r["center_rank"].get<int>(),
                    r["connected"].get<bool>() ? "yes" : "no", r["frames"].get<int>());
    return 0;
}

int cmd_catalog_show(const std::string& name, bool as_json) {
    const auto& g = group_arg(name);
    json frames = json::array();
    for (const auto& f : g.frames) frames.push_back(frame_json(f));
    json autos = json::array();
    for (const auto& a : g.automorphisms) autos.push_back(a.name);
    json out{{"name", g.name},         {"factors", factors_string(g.factors)}, {"center_rank", g.center_rank},
             {"connected", g.connected}, {"automorphisms", autos},               {"frames", frames}};
    if (as_json) {
        std::cout << out.dump(2) << "\n";
        return 0;
    }
    std::printf("group %s  factors %s  center rank %d  %s\n", g.name.c_str(), factors_string(g.factors).c_str(),
                g.center_rank, g.connected ? "connected" : "not connected");
    for (const auto& f : frames) {
        std::printf("frame %s%s%s  dim t %d  dim a %d  |W(G,h)| %d\n", f["name"].get<std::string>().c_str(),
                    f["fundamental"].get<bool>() ? " (fundamental)" : "", f["split"].get<bool>() ? " (split)" : "",
                    f["dim_t"].get<int>(), f["dim_a"].get<int>(), f["realized_weyl"].get<int>());
        std::string labels;
        for (const auto& l : f["labels"]) labels += l.get<std::string>() + " ";
        std::printf("  labels  %s\n", labels.c_str());
        for (const auto& r : f["sigma"]) std::printf("  sigma   %s\n", r.get<std::string>().c_str());
        for (const auto& k : f["kernel_lattice"]) std::printf("  kernel  %s\n", k.get<std::string>().c_str());
    }
    for (const auto& a : g.automorphisms) std::printf("automorphism %s\n", a.name.c_str());
    return 0;
}

// ---- params ----------------------------------------------------------------------------

int cmd_params_enumerate(const std::string& gname, const std::string& fname, const std::string& lam, bool as_json) {
    const auto& g = group_arg(gname);
    const auto& f = frame_arg(g, fname);
    auto s = view_ptr(f);
    Vec lambda = vector_arg(lam, s->dim, "--lambda");
    json rows = json::array();
    for (const auto& ch : enumerate_chambers(*s, lambda)) {
        auto pt = make_param(s, lambda, ch.fplus);
        auto fl = classify_param(pt);
        rows.push_back(json{{"chamber", signs_string(ch.fplus)},
                            {"regular", ch.regular},
                            {"rho_F", to_string(ch.rho)},
                            {"in_reg", fl.in_reg},
                            {"in_fond", fl.in_fond},
                            {"in_I", fl.in_I},
                            {"in_Inc", fl.in_Inc},
                            {"integral", fl.integral},
                            {"in_regG", fl.in_regG}});
    }
    json out{{"group", g.name}, {"frame", f.name}, {"lambda", to_string(lambda)}, {"params", rows}};
    if (as_json) {
        std::cout << out.dump(2) << "\n";
        return 0;
    }
    std::printf("group %s  frame %s  lambda %s\n", g.name.c_str(), f.name.c_str(), to_string(lambda).c_str());
    std::printf("%-8s %-8s %-7s %-8s %-6s %-7s %-9s %s\n", "chamber", "regular", "in_reg", "in_fond", "in_I", "in_Inc",
                "integral", "in_regG");
    auto yn = [](const json& b) { return b.get<bool>() ? "true" : "false"; };
    for (const auto& r : rows) {
        std::string c = r["chamber"].get<std::string>();
        std::printf("%-8s %-8s %-7s %-8s %-6s %-7s %-9s %s\n", c.empty() ? "{}" : c.c_str(), yn(r["regular"]),
                    yn(r["in_reg"]), yn(r["in_fond"]), yn(r["in_I"]), yn(r["in_Inc"]), yn(r["integral"]),
                    yn(r["in_regG"]));
    }
    return 0;
}

int cmd_params_descend(const std::string& gname, const std::string& fname, const std::string& lam,
                       const std::string& chamber, const std::string& espec, bool as_json) {
    const auto& g = group_arg(gname);
    const auto& f = frame_arg(g, fname);
    auto s = view_ptr(f);
    Vec lambda = vector_arg(lam, s->dim, "--lambda");
    Signs signs = chamber_arg(chamber);
    auto pt = checked([&] { return make_param(s, lambda, signs); });
    auto e = checked([&] { return parse_elliptic(g, f, espec); });
    auto d = descend_at_e(pt, e);
    json out{{"group", g.name},
             {"lambda", to_string(lambda)},
             {"chamber", signs_string(signs)},
             {"elliptic", e.label},
             {"descended_lambda", to_string(d.lambda)},
             {"descended_chamber", signs_string(d.fplus)},
             {"centralizer_roots", d.sys->npos}};
    if (as_json) {
        std::cout << out.dump(2) << "\n";
        return 0;
    }
    std::printf("lambda~[e] = (%s, {%s}) on g(e) with %d positive roots\n", to_string(d.lambda).c_str(),
                signs_string(d.fplus).c_str(), d.sys->npos);
    return 0;
}

// ---- orbit transforms ------------------------------------------------------------------

int cmd_orbit_eval(const std::string& gname, const std::string& lf_name, const std::string& xf_name,
                   const std::string& lam, const std::string& xs, double scale, bool quadrature, bool as_json) {
    const auto& g = group_arg(gname);
    const auto& lf = frame_arg(g, lf_name);
    const auto& xf = frame_arg(g, xf_name);
    Vec lambda = vector_arg(lam, lf.rd().dim(), "--lambda");
    TangentPoint X{vector_arg(xs, xf.rd().dim(), "--X"), scale};
    cplx v = orbit_fourier_transform(g, lf, lambda, xf, X);
    json out{{"group", g.name},           {"lambda_frame", lf.name}, {"x_frame", xf.name},
             {"lambda", to_string(lambda)}, {"X", to_string(X.x)},     {"scale", scale},
             {"value_re", v.real()},        {"value_im", v.imag()}};
    cplx q;
    if (quadrature) {
        q = orbit_quadrature(g, lf, lambda, xf, X);
        out["quadrature_re"] = q.real();
        out["quadrature_im"] = q.imag();
    }
    if (as_json) {
        std::cout << out.dump(2) << "\n";
        return 0;
    }
    std::printf("beta_hat = %s\n", fmt_complex(v).c_str());
    if (quadrature) std::printf("quadrature = %s\n", fmt_complex(q).c_str());
    return 0;
}

int cmd_orbit_calibrate(const std::vector<std::string>& groups, int samples, std::uint64_t seed,
                        const std::string& out_path) {
    std::vector<const GroupEntry*> todo;
    for (const auto& n : groups) {
        if (n == "all") {
            for (const auto& g : builtin_catalog().groups)
                if (calibratable(g)) todo.push_back(&g);
        } else {
            const auto& g = group_arg(n);
            if (!calibratable(g)) throw InputError("group " + n + " is outside the calibration model");
            todo.push_back(&g);
        }
    }
    if (samples < 4) throw InputError("--samples must be at least 4");
    CalibrationOptions opt;
    opt.samples = samples;
    opt.seed = seed;
    CalibrationStore store;
    int tables = 0;
    double worst = 0;
    for (const auto* g : todo)
        for (const auto& t : calibrate_group(*g, opt)) {
            store.add(t);
            ++tables;
            worst = std::max(worst, t.residual);
        }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw InputError("cannot write " + out_path);
    out << store.serialize();
    std::printf("%d tables written to %s, max held-out residual %.3e\n", tables, out_path.c_str(), worst);
    return 0;
}

// ---- metaplectic ----------------------------------------------------------------------

int cmd_metaplectic_check(std::uint64_t seed, int cases, bool as_json) {
    if (cases <= 0) throw InputError("--cases must be positive");
    auto r = run_corpus(seed, cases);
    json out{{"seed", seed},
             {"cases", r.cases},
             {"prop_b", r.prop_b_pass},
             {"prop_c", r.prop_c_pass},
             {"sheet", r.sheet_pass},
             {"failures", r.failures},
             {"ok", r.ok()}};
    if (as_json) {
        std::cout << out.dump(2) << "\n";
    } else {
        std::printf("cases %d  prop (b) %d/%d  prop (c) %d/%d  sheet %d/%d  %s\n", r.cases, r.prop_b_pass, r.cases,
                    r.prop_c_pass, r.cases, r.sheet_pass, r.cases, r.ok() ? "PASS" : "FAIL");
        for (const auto& f : r.failures) std::printf("  %s\n", f.c_str());
    }
    return r.ok() ? 0 : 1;
}

// ---- characters -------------------------------------------------------------------------

struct CharacterInput {
    const GroupEntry* g = nullptr;
    ParamTilde pt;
    TauChar tau;
    EllipticPoint e;
    TangentPoint X;
};

CharacterInput character_input(const std::string& gname, const std::string& lam, const std::string& chamber,
                               const std::string& tau_name, const std::vector<std::string>& tau_values,
                               const std::string& espec, const std::string& xs, double scale) {
    CharacterInput in;
    in.g = &group_arg(gname);
    const auto& f = in.g->frames[in.g->fundamental_index()];
    auto s = view_ptr(f);
    Vec lambda = vector_arg(lam, s->dim, "--lambda");
    Signs signs = chamber_arg(chamber);
    in.pt = checked([&] { return make_param(s, lambda, signs); });
    if (tau_name != "canonical") throw InputError("unknown tau '" + tau_name + "' (only 'canonical' is built in)");
    in.tau = checked([&] { return chi_canonical(in.pt, build_positive_system(in.pt)); });
    for (const auto& tv : tau_values) {
        auto eq = tv.rfind('=');
        if (eq == std::string::npos) throw InputError("--tau-value needs <elliptic spec>=<value>");
        auto p = checked([&] { return parse_elliptic(*in.g, f, tv.substr(0, eq)); });
        in.tau.set(p, cyc_arg(tv.substr(eq + 1)));
    }
    in.e = checked([&] { return parse_elliptic(*in.g, f, espec); });
    in.X = TangentPoint{vector_arg(xs, s->dim, "--X"), scale};
    return in;
}

json eval_json(const CharacterInput& in, const CharacterEval& r, const std::string& espec, const std::string& xs) {
    json rows = json::array();
    for (const auto& c : r.contributions)
        rows.push_back(json{{"lambda", to_string(c.item.lambda_prime.lambda)},
                            {"chamber", signs_string(c.item.lambda_prime.fplus)},
                            {"descended_lambda", to_string(c.item.descended.lambda)},
                            {"descended_chamber", signs_string(c.item.descended.fplus)},
                            {"class", c.item.outer},
                            {"e_prime_h", to_string(c.item.e_prime.h)},
                            {"sign", c.sign},
                            {"i_power", -c.d},
                            {"trace", c.trace.str()},
                            {"summand", c.summand.str()},
                            {"transform_re", c.transform.real()},
                            {"transform_im", c.transform.imag()},
                            {"a_chambers", c.a_chambers}});
    return json{{"group", in.g->name},
                {"lambda", to_string(in.pt.lambda)},
                {"chamber", signs_string(in.pt.fplus)},
                {"elliptic", espec},
                {"X", xs},
                {"scale", in.X.scale},
                {"value_re", r.value.real()},
                {"value_im", r.value.imag()},
                {"k_e", r.factors.k.real()},
                {"D_e", r.factors.D_exact.str()},
                {"d_e", r.factors.d},
                {"epsilon_over_pi", to_string(r.factors.epsilon)},
                {"contributions", rows}};
}

int cmd_character_eval(const CharacterInput& in, const std::string& espec, const std::string& xs,
                       const std::string& form, int sheet, bool as_json) {
    CharacterForm cf = form == "plus" ? CharacterForm::Plus : CharacterForm::Full;
    auto r = eval_character(in.pt, in.tau, in.e, in.X, cf, sheet);
    json out = eval_json(in, r, espec, xs);
    if (as_json) {
        std::cout << out.dump(2) << "\n";
        return 0;
    }
    std::printf("group %s  lambda %s  chamber {%s}  e %s  X %s (scale %s)\n", in.g->name.c_str(),
                to_string(in.pt.lambda).c_str(), signs_string(in.pt.fplus).c_str(), espec.c_str(), xs.c_str(),
                fmt_double(in.X.scale).c_str());
    std::printf("value = %s\n", fmt_complex(r.value).c_str());
    std::printf("k_e = %s  D_e = %s  d_e = %d  epsilon_e = %s pi\n", fmt_double(r.factors.k.real()).c_str(),
                r.factors.D_exact.str().c_str(), r.factors.d, to_string(r.factors.epsilon).c_str());
    std::printf("%-10s %-8s %-6s %-5s %-4s %-14s %-14s %s\n", "lambda'", "chamber", "class", "sign", "d", "trace",
                "summand", "transform");
    for (const auto& c : r.contributions)
        std::printf("%-10s %-8s %-6d %-5d %-4d %-14s %-14s %s\n", to_string(c.item.lambda_prime.lambda).c_str(),
                    ("{" + signs_string(c.item.lambda_prime.fplus) + "}").c_str(), c.item.outer, c.sign, c.d,
                    c.trace.str().c_str(), c.summand.str().c_str(), fmt_complex(c.transform).c_str());
    return 0;
}

int cmd_character_identify(const std::string& gname, const std::string& path, double tol, bool as_json) {
    const auto& g = group_arg(gname);
    const auto& f = g.frames[g.fundamental_index()];
    std::ifstream in(path);
    if (!in) throw InputError("cannot read " + path);
    json data;
    try {
        data = json::parse(in);
    } catch (const json::exception& e) {
        throw InputError(std::string("samples file: ") + e.what());
    }
    if (!data.is_array() || data.empty()) throw InputError("samples file must hold a non-empty JSON array");
    std::vector<CharacterSample> samples;
    try {
        for (const auto& s : data) {
            CharacterSample cs;
            cs.e = checked([&] { return parse_elliptic(g, f, s.at("elliptic").get<std::string>()); });
            cs.X = TangentPoint{vector_arg(s.at("X").get<std::string>(), f.rd().dim(), "X"), s.value("scale", 1.0)};
            cs.value = cplx(s.at("value_re").get<double>(), s.at("value_im").get<double>());
            samples.push_back(cs);
        }
    } catch (const json::exception& e) {
        throw InputError(std::string("samples file: ") + e.what());
    }
    auto id = identify_orbit(g, samples, tol);
    json traces = json::array();
    for (const auto& t : id.traces) traces.push_back(t.str());
    json out{{"group", g.name},
             {"lambda", to_string(id.param.lambda)},
             {"chamber", signs_string(id.param.fplus)},
             {"samples", samples.size()},
             {"traces", traces}};
    if (as_json) {
        std::cout << out.dump(2) << "\n";
        return 0;
    }
    std::printf("orbit of lambda %s, chamber {%s}, from %zu samples\n", to_string(id.param.lambda).c_str(),
                signs_string(id.param.fplus).c_str(), samples.size());
    for (size_t i = 0; i < id.traces.size(); ++i)
        std::printf("  tr tau at sample %zu: %s\n", i, id.traces[i].str().c_str());
    return 0;
}

// ---- self tests --------------------------------------------------------------------------

struct SuiteResult {
    int passed = 0;
    int total = 0;
    void check(bool ok) {
        ++total;
        passed += ok;
    }
};

SuiteResult suite_metaplectic(std::uint64_t seed) {
    SuiteResult r;
    auto rep = run_corpus(seed, 200);
    r.total = rep.cases;
    r.passed = std::min({rep.prop_b_pass, rep.prop_c_pass, rep.sheet_pass});
    return r;
}

SuiteResult suite_calibration(std::uint64_t seed) {
    SuiteResult r;
    const auto& store = default_calibration();
    for (const auto& t : store.tables()) {
        const auto& g = builtin_catalog().group(t.key.group);
        r.check(held_out_residual(g, t, 20, seed) < 1e-7);
    }
    for (const auto& g : builtin_catalog().groups)
        if (calibratable(g)) r.check(weyl_constraint_violations(g, store).empty());
    return r;
}

SuiteResult suite_characters() {
    SuiteResult r;
    const auto& g = builtin_catalog().group("su2");
    auto s = view_ptr(g.frames[g.fundamental_index()]);
    for (int n = 1; n <= 8; ++n) {
        auto pt = make_param(s, Vec{Q(n)}, {});
        auto psd = build_positive_system(pt);
        auto tau = chi_canonical(pt, psd);
        for (const char* es : {"id", "h=1/3", "h=1/2"}) {
            auto e = parse_elliptic(g, g.frames[g.fundamental_index()], es);
            TangentPoint X{Vec{Q(1)}, 0.2};
            auto full = eval_character(pt, tau, e, X);
            auto plus = eval_character(pt, tau, e, X, CharacterForm::Plus);
            auto other = eval_character(pt, tau, e, X, CharacterForm::Full, -1);
            // Weyl character formula at the rotation by phi
            double phi = 2 * (M_PI * to_double(e.h.empty() ? Q(0) : e.h[0]) + 0.2);
            double weyl = std::sin(n * phi / 2) / std::sin(phi / 2);
            r.check(std::abs(full.value - weyl) < 1e-9);
            r.check(std::abs(full.value - plus.value) < 1e-12);
            r.check(full.value == other.value);
        }
    }
    return r;
}

int cmd_selftest(const std::string& suite, std::uint64_t seed) {
    std::vector<std::pair<std::string, SuiteResult>> results;
    bool all = suite == "all";
    if (!all && suite != "metaplectic" && suite != "calibration" && suite != "characters")
        throw InputError("unknown suite '" + suite + "'");
    if (all || suite == "metaplectic") results.push_back({"metaplectic", suite_metaplectic(seed)});
    if (all || suite == "calibration") results.push_back({"calibration", suite_calibration(seed)});
    if (all || suite == "characters") results.push_back({"characters", suite_characters()});
    bool ok = true;
    for (const auto& [name, r] : results) {
        std::printf("%-12s %d/%d passed\n", name.c_str(), r.passed, r.total);
        ok = ok && r.passed == r.total;
    }
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"orbitlab: orbit parameters, metaplectic covers, orbit transforms and characters"};
    app.require_subcommand(1);

    bool as_json = false;
    std::string group, frame, lambda, chamber, elliptic, xs, x_frame, out_path, tau = "canonical", form = "full";
    std::string samples_path, suite = "all";
    std::vector<std::string> tau_values, groups;
    double scale = 1.0, tol = 1e-6;
    int samples = 40, cases = 200, sheet = 1;
    std::uint64_t seed = 1;
    bool quadrature = false;

    auto* catalog = app.add_subcommand("catalog", "inspect the group catalog");
    catalog->require_subcommand(1);
    auto* cat_list = catalog->add_subcommand("list", "list the groups");
    cat_list->add_flag("--json", as_json);
    auto* cat_show = catalog->add_subcommand("show", "frames and labels of a group");
    cat_show->add_option("name", group)->required();
    cat_show->add_flag("--json", as_json);

    auto* params = app.add_subcommand("params", "orbit parameters");
    params->require_subcommand(1);
    auto* p_enum = params->add_subcommand("enumerate", "all parameters over lambda with their flags");
    p_enum->add_option("--group", group)->required();
    p_enum->add_option("--frame", frame, "default: the fundamental frame");
    p_enum->add_option("--lambda", lambda)->required();
    p_enum->add_flag("--json", as_json);
    auto* p_desc = params->add_subcommand("descend", "descent of a parameter to g(e)");
    p_desc->add_option("--group", group)->required();
    p_desc->add_option("--frame", frame);
    p_desc->add_option("--lambda", lambda)->required();
    p_desc->add_option("--chamber", chamber);
    p_desc->add_option("--elliptic", elliptic)->required();
    p_desc->add_flag("--json", as_json);

    auto* oft = app.add_subcommand("orbit-ft", "Fourier transforms of orbits");
    oft->require_subcommand(1);
    auto* o_eval = oft->add_subcommand("eval", "evaluate beta_hat(X) from the calibration store");
    o_eval->add_option("--group", group)->required();
    o_eval->add_option("--lambda-frame", frame);
    o_eval->add_option("--x-frame", x_frame);
    o_eval->add_option("--lambda", lambda)->required();
    o_eval->add_option("--X", xs)->required();
    o_eval->add_option("--scale", scale);
    o_eval->add_flag("--quadrature", quadrature, "also print the quadrature value");
    o_eval->add_flag("--json", as_json);
    auto* o_cal = oft->add_subcommand("calibrate", "fit coefficient tables against quadrature");
    o_cal->add_option("--group", groups, "group name or 'all'")->required();
    o_cal->add_option("--samples", samples);
    o_cal->add_option("--seed", seed)->default_val(CalibrationOptions{}.seed);
    o_cal->add_option("--out", out_path)->required();

    auto* meta = app.add_subcommand("metaplectic", "metaplectic identities");
    meta->require_subcommand(1);
    auto* m_check = meta->add_subcommand("check", "run the identity corpus");
    m_check->add_option("--seed", seed);
    m_check->add_option("--cases", cases);
    m_check->add_flag("--json", as_json);

    auto* chr = app.add_subcommand("character", "character values");
    chr->require_subcommand(1);
    auto* c_eval = chr->add_subcommand("eval", "evaluate the character at e exp X");
    c_eval->add_option("--group", group)->required();
    c_eval->add_option("--lambda", lambda)->required();
    c_eval->add_option("--chamber", chamber);
    c_eval->add_option("--tau", tau);
    c_eval->add_option("--tau-value", tau_values, "<elliptic spec>=<1|-1|i|-i|e(p/q)>, value at the canonical lift");
    c_eval->add_option("--elliptic", elliptic)->required();
    c_eval->add_option("--X", xs)->required();
    c_eval->add_option("--scale", scale);
    c_eval->add_option("--form", form)->check(CLI::IsMember({"full", "plus"}));
    c_eval->add_option("--sheet", sheet)->check(CLI::IsMember({1, -1}));
    c_eval->add_flag("--json", as_json);
    auto* c_id = chr->add_subcommand("identify", "recover the orbit from character samples");
    c_id->add_option("--group", group)->required();
    c_id->add_option("--samples", samples_path)->required();
    c_id->add_option("--tol", tol);
    c_id->add_flag("--json", as_json);

    auto* self = app.add_subcommand("selftest", "built-in identity suites");
    self->add_option("--suite", suite, "metaplectic, calibration, characters or all");
    self->add_option("--seed", seed);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*cat_list) return cmd_catalog_list(as_json);
        if (*cat_show) return cmd_catalog_show(group, as_json);
        if (*p_enum) return cmd_params_enumerate(group, frame, lambda, as_json);
        if (*p_desc) return cmd_params_descend(group, frame, lambda, chamber, elliptic, as_json);
        if (*o_eval) return cmd_orbit_eval(group, frame, x_frame, lambda, xs, scale, quadrature, as_json);
        if (*o_cal) return cmd_orbit_calibrate(groups, samples, seed, out_path);
        if (*m_check) return cmd_metaplectic_check(seed, cases, as_json);
        if (*c_eval) {
            auto in = character_input(group, lambda, chamber, tau, tau_values, elliptic, xs, scale);
            return cmd_character_eval(in, elliptic, xs, form, sheet, as_json);
        }
        if (*c_id) return cmd_character_identify(group, samples_path, tol, as_json);
        if (*self) return cmd_selftest(suite, seed);
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
