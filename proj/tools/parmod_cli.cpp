// Command-line front end: batch drivers over the library pipelines with
// machine-readable JSON/CSV reports. Exit codes: 0 pass, 2 checked failure
// (a verdict the tool is designed to detect), 1 error.

#include <cstdlib>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "parmod/errors.hpp"
#include "parmod/fatou.hpp"
#include "parmod/glutsyuk.hpp"
#include "parmod/io.hpp"
#include "parmod/model_chart.hpp"
#include "parmod/prepare.hpp"
#include "parmod/riccati.hpp"

namespace {

using nlohmann::json;
using namespace parmod;

cplx parse_complex(const std::string& s) {
    std::istringstream is(s);
    double re = 0.0, im = 0.0;
    char sep = 0;
    if (!(is >> re)) throw InconsistentInput("cannot parse complex value '" + s + "'");
    if (is >> sep) {
        if (sep != ',' || !(is >> im))
            throw InconsistentInput("cannot parse complex value '" + s + "'");
    }
    return cplx(re, im);
}

std::vector<cplx> parse_complex_list(const std::vector<std::string>& items) {
    std::vector<cplx> out;
    for (const auto& s : items) out.push_back(parse_complex(s));
    return out;
}

PowerSeries parse_series(const std::string& s) {
    std::vector<cplx> c;
    std::istringstream is(s);
    std::string tok;
    while (std::getline(is, tok, ';'))
        if (!tok.empty()) c.push_back(parse_complex(tok));
    if (c.empty()) c.push_back(0.0);
    return PowerSeries(std::move(c));
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InconsistentInput("cannot open '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

GermFamily load_family(const std::string& spec, cplx a) {
    if (spec == "model") return model_family(a);
    if (spec == "quadratic") return quadratic_family();
    return family_from_json(slurp(spec));
}

json cx(cplx v) { return json::array({v.real(), v.imag()}); }

json log_cx(const LogComplex& v) { return json::array({v.lg.real(), v.lg.imag()}); }

void emit(const std::string& out_path, const std::string& text) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw InconsistentInput("cannot write '" + out_path + "'");
    out << text;
}

std::size_t thread_count() {
    if (const char* e = std::getenv("PARMOD_THREADS")) {
        const long v = std::atol(e);
        if (v >= 1) return std::size_t(v);
    }
    return 1;
}

// Fan out `work(i)` over i < n, at most `thread_count()` in flight; results
// are merged in index order so reports stay deterministic.
template <typename Work>
std::vector<json> fan_out(std::size_t n, Work&& work) {
    const std::size_t par = std::min(thread_count(), std::max<std::size_t>(n, 1));
    std::vector<json> results(n);
    if (par <= 1) {
        for (std::size_t i = 0; i < n; ++i) results[i] = work(i);
        return results;
    }
    for (std::size_t base = 0; base < n; base += par) {
        const std::size_t hi = std::min(n, base + par);
        std::vector<std::future<json>> batch;
        for (std::size_t i = base; i < hi; ++i)
            batch.push_back(std::async(std::launch::async, [&work, i] { return work(i); }));
        for (std::size_t i = base; i < hi; ++i) results[i] = batch[i - base].get();
    }
    return results;
}

json prepared_summary(const PreparedFamily& p) {
    json j;
    j["A_bar"] = cx(p.A_bar);
    j["a"] = cx(p.a);
    j["b"] = cx(p.b_param);
    j["beta_bar"] = cx(p.beta_bar);
    j["eps"] = cx(p.eps.value());
    j["eps_arg"] = p.eps.theta;
    j["mu0"] = cx(p.mult.mu0);
    j["mu_inf"] = cx(p.mult.mu_inf);
    j["name"] = p.name;
    j["scale"] = cx(p.scale);
    j["shift"] = cx(p.shift);
    return j;
}

json sheet_summary(const SheetMaps& sm, const HornMapPair& h) {
    json j;
    j["C_contracting_log"] = log_cx(sm.periods().C_bar);
    j["C_expanding_log"] = log_cx(sm.periods().C_tilde);
    j["alpha0"] = cx(sm.alpha0());
    j["alpha_inf"] = cx(sm.alpha_inf());
    j["horn"] = json::parse(horn_map_to_json(h));
    j["sheet"] = (sm.sheet() == Sheet::Tilde) ? "tilde" : "bar";
    return j;
}

struct FamilyArgs {
    std::string family = "model";
    std::string a = "0";
    std::vector<std::string> eps;
    int turns = 0;
};

void add_family_flags(CLI::App* cmd, FamilyArgs& fa, bool need_eps = true) {
    cmd->add_option("--family", fa.family,
                    "builtin name (model, quadratic) or family JSON path");
    cmd->add_option("--a", fa.a, "formal invariant for the builtin model family");
    auto* o = cmd->add_option("--eps", fa.eps, "parameter values, re[,im]");
    if (need_eps) o->required();
    cmd->add_option("--turns", fa.turns, "extra covering turns for the sqrt branch");
}

struct FatouArgs {
    double tol = 1e-11;
    double y_floor = 1.0;
    double y_cap = 3.0;
    double margin = 0.25;
    int modes = 16;
    double noise_floor = 1e-11;
};

void add_fatou_flags(CLI::App* cmd, FatouArgs& ff) {
    cmd->add_option("--tol", ff.tol, "orbit-limit tolerance");
    cmd->add_option("--y-floor", ff.y_floor, "minimum sampling line height");
    cmd->add_option("--y-cap", ff.y_cap, "maximum sampling line height");
    cmd->add_option("--margin", ff.margin, "strip margin");
    cmd->add_option("--modes", ff.modes, "Fourier modes kept per end");
    cmd->add_option("--noise-floor", ff.noise_floor, "mode truncation floor");
}

FatouOptions fatou_options(const FatouArgs& ff) {
    FatouOptions fo;
    fo.tol = ff.tol;
    fo.y_floor = ff.y_floor;
    fo.y_cap = ff.y_cap;
    fo.margin = ff.margin;
    fo.n_modes = std::size_t(ff.modes);
    fo.noise_floor = ff.noise_floor;
    return fo;
}

std::map<std::string, double> fatou_tolerances(const FatouOptions& fo) {
    return {{"tol", fo.tol},
            {"hard_fail", fo.hard_fail},
            {"noise_floor", fo.noise_floor},
            {"margin", fo.margin}};
}

int cmd_prepare(const FamilyArgs& fa, const std::string& out_path) {
    const GermFamily g = load_family(fa.family, parse_complex(fa.a));
    const auto eps = parse_complex_list(fa.eps);
    PrepareOptions popt;
    popt.turns = fa.turns;
    const auto rows = fan_out(eps.size(), [&](std::size_t i) {
        return prepared_summary(prepare_family(g, eps[i], popt));
    });
    emit(out_path, report_envelope("prepare", {{"parabolic_tol", popt.parabolic_tol}},
                                   json(rows).dump(2)));
    return 0;
}

int cmd_horn_map(const FamilyArgs& fa, const FatouArgs& ff, const std::string& out_path) {
    const GermFamily g = load_family(fa.family, parse_complex(fa.a));
    const auto eps = parse_complex_list(fa.eps);
    const FatouOptions fo = fatou_options(ff);
    PrepareOptions popt;
    popt.turns = fa.turns;
    const auto rows = fan_out(eps.size(), [&](std::size_t i) {
        const PreparedFamily p = prepare_family(g, eps[i], popt);
        json j;
        j["eps"] = cx(p.eps.value());
        j["horn"] = json::parse(horn_map_to_json(horn_maps(p, fo)));
        return j;
    });
    emit(out_path,
         report_envelope("horn-map", fatou_tolerances(fo), json(rows).dump(2)));
    return 0;
}

int cmd_glutsyuk(const FamilyArgs& fa, const FatouArgs& ff, const std::string& out_path) {
    const GermFamily g = load_family(fa.family, parse_complex(fa.a));
    const auto eps = parse_complex_list(fa.eps);
    const FatouOptions fo = fatou_options(ff);
    const auto rows = fan_out(eps.size(), [&](std::size_t i) {
        json j;
        j["eps"] = cx(eps[i]);
        const char* keys[2] = {"bar", "tilde"};
        for (int turn = 0; turn < 2; ++turn) {
            PrepareOptions popt;
            popt.turns = fa.turns + turn;
            const PreparedFamily p = prepare_family(g, eps[i], popt);
            const HornMapPair h = horn_maps(p, fo);
            const SheetMaps sm(h, p.eps);
            json sj = sheet_summary(sm, h);
            const ReturnMaps rm = return_maps(h, p.eps, p.mult.mu0, p.mult.mu_inf);
            sj["log_mult0"] = cx(rm.log_mult0);
            sj["log_mult_inf"] = cx(rm.log_mult_inf);
            j[keys[turn]] = sj;
        }
        return j;
    });
    emit(out_path,
         report_envelope("glutsyuk", fatou_tolerances(fo), json(rows).dump(2)));
    return 0;
}

int cmd_compat_check(const FamilyArgs& fa, const FatouArgs& ff,
                     const std::string& modulus_bar, const std::string& modulus_tilde,
                     double eps_hat, const CompatOptions& copt,
                     const std::string& out_path) {
    bool all_ok = true;
    json rows = json::array();

    if (!modulus_bar.empty() || !modulus_tilde.empty()) {
        if (modulus_bar.empty() || modulus_tilde.empty())
            throw InconsistentInput("compat-check: need both --modulus-bar and "
                                    "--modulus-tilde");
        const MoebiusModulus mb = moebius_from_json(slurp(modulus_bar));
        const MoebiusModulus mt = moebius_from_json(slurp(modulus_tilde));
        const SectorPoint bar_pt = sector_point(eps_hat, 0.12);
        const SectorPoint tilde_pt = sector_point(eps_hat, TWO_PI - 0.12);
        const SheetMaps bar(moebius_horn_pair(mb), bar_pt);
        const SheetMaps tilde(moebius_horn_pair(mt), tilde_pt);

        json j;
        j["eps_hat"] = eps_hat;
        bool degrees_ok = true;
        try {
            const CompatConstants cc = compat_constants(mb, mt, bar.periods());
            j["constants"] = {{"Fn_log", log_cx(cc.Fn)},
                              {"Gn_log", log_cx(cc.Gn)},
                              {"AB", cx(cc.AB)},
                              {"ab_mismatch", cc.ab_mismatch},
                              {"asym_ratio", cc.asym_ratio}};
        } catch (const IncompatibleDegrees& e) {
            degrees_ok = false;
            j["degrees_error"] = e.what();
        } catch (const InvariantViolated& e) {
            degrees_ok = false;
            j["invariant_error"] = e.what();
        }
        const CompatReport rep = compatibility_check(bar, tilde, copt);
        j["report"] = json::parse(compat_report_to_json(rep));
        j["compatible"] = rep.compatible && degrees_ok;
        all_ok = all_ok && rep.compatible && degrees_ok;
        rows.push_back(j);
    } else {
        const GermFamily g = load_family(fa.family, parse_complex(fa.a));
        const auto eps = parse_complex_list(fa.eps);
        const FatouOptions fo = fatou_options(ff);
        const auto results = fan_out(eps.size(), [&](std::size_t i) {
            PrepareOptions pb, pt;
            pb.turns = fa.turns;
            pt.turns = fa.turns + 1;
            const PreparedFamily fam_bar = prepare_family(g, eps[i], pb);
            const PreparedFamily fam_tilde = prepare_family(g, eps[i], pt);
            const SheetMaps bar(horn_maps(fam_bar, fo), fam_bar.eps);
            const SheetMaps tilde(horn_maps(fam_tilde, fo), fam_tilde.eps);
            const CompatReport rep = compatibility_check(bar, tilde, copt);
            json j;
            j["eps"] = cx(eps[i]);
            j["report"] = json::parse(compat_report_to_json(rep));
            j["compatible"] = rep.compatible;
            return j;
        });
        for (const auto& j : results) {
            all_ok = all_ok && j["compatible"].get<bool>();
            rows.push_back(j);
        }
    }

    emit(out_path,
         report_envelope("compat-check", {{"tol", copt.tol}, {"span", copt.span}},
                         rows.dump(2)));
    return all_ok ? 0 : 2;
}

std::vector<double> geometric_grid(double hi, double lo, int count) {
    if (!(hi > lo) || lo <= 0.0 || count < 2)
        throw InconsistentInput("flatness: need eps-hi > eps-lo > 0 and count >= 2");
    std::vector<double> out;
    const double q = std::pow(lo / hi, 1.0 / double(count - 1));
    double v = hi;
    for (int i = 0; i < count; ++i, v *= q) out.push_back(v);
    return out;
}

json fit_summary(const FlatnessFit& f) {
    return {{"A_fit", f.A_fit},   {"A_hi", f.A_hi},           {"A_lo", f.A_lo},
            {"in_window", f.in_window}, {"logB_fit", f.logB_fit}, {"r2", f.r2},
            {"vacuous", f.vacuous}};
}

int cmd_flatness(const std::string& alpha, const std::string& beta,
                 const std::string& modulus_path, double hi, double lo, int count,
                 double arg_eps, double r2_min, const std::string& csv_path,
                 const std::string& out_path) {
    MoebiusModulus m;
    if (!modulus_path.empty())
        m = moebius_from_json(slurp(modulus_path));
    else
        m = gamma_modulus(parse_complex(alpha), parse_complex(beta));

    const auto grid = geometric_grid(hi, lo, count);
    const auto s0 = riccati_flatness_samples(m, grid, arg_eps, false);
    const auto si = riccati_flatness_samples(m, grid, arg_eps, true);
    // The samples are exact in log space, so the measurement noise floor does
    // not apply; disable it.
    const FlatnessFit f0 = flatness_fit(s0, -1e12);
    const FlatnessFit fi = flatness_fit(si, -1e12);

    json j;
    j["fit0"] = fit_summary(f0);
    j["fit_inf"] = fit_summary(fi);
    j["modulus"] = json::parse(moebius_to_json(m));
    j["samples"] = json::array();
    for (std::size_t k = 0; k < s0.size(); ++k)
        j["samples"].push_back({{"sqrt_eps_abs", s0[k].sqrt_eps_abs},
                                {"log_dev0", s0[k].log_dev},
                                {"log_dev_inf", si[k].log_dev},
                                {"log_C_abs", s0[k].log_C_abs}});
    if (!csv_path.empty()) {
        std::vector<std::vector<double>> rows;
        for (std::size_t k = 0; k < s0.size(); ++k)
            rows.push_back(
                {s0[k].sqrt_eps_abs, s0[k].log_dev, si[k].log_dev, s0[k].log_C_abs});
        emit(csv_path,
             csv_table({"sqrt_eps_abs", "log_dev0", "log_dev_inf", "log_C_abs"}, rows));
    }
    const bool pass = f0.r2 > r2_min && fi.r2 > r2_min && f0.in_window &&
                      fi.in_window && !f0.vacuous && !fi.vacuous;
    j["pass"] = pass;
    emit(out_path, report_envelope("flatness", {{"r2_min", r2_min}}, j.dump(2)));
    return pass ? 0 : 2;
}

int cmd_riccati(const std::string& alpha, const std::string& beta, bool degenerate,
                const std::string& inv_a, const std::string& beta_bar,
                const std::string& dpar, double eps_hat, const std::string& canon_a,
                const std::string& canon_b, const std::string& out_path) {
    const MoebiusModulus m =
        degenerate ? gamma_modulus_degenerate(parse_complex(inv_a),
                                              parse_complex(beta_bar),
                                              parse_complex(dpar))
                   : gamma_modulus(parse_complex(alpha), parse_complex(beta));
    json j;
    j["AB"] = cx(m.A * m.B);
    j["modulus"] = json::parse(moebius_to_json(m));

    if (eps_hat > 0.0) {
        const SectorPoint bar_pt = sector_point(eps_hat, 0.12);
        const Periods per = periods_of(bar_pt, m.a);
        const HClosedForms cf = closed_form_h(m, per, Sheet::Bar);
        j["closed_forms"] = {{"d_tilde_log", log_cx(cf.d_tilde)},
                             {"e_tilde_log", log_cx(cf.e_tilde)},
                             {"d_bar_log", log_cx(cf.d_bar)},
                             {"e_bar_log", log_cx(cf.e_bar)},
                             {"Fn_log", log_cx(cf.Fn)},
                             {"Gn_log", log_cx(cf.Gn)}};
        const CompatConstants cc = compat_constants(m, m, per);
        j["compat"] = {{"Fn_log", log_cx(cc.Fn)},
                       {"Gn_log", log_cx(cc.Gn)},
                       {"AB", cx(cc.AB)},
                       {"ab_mismatch", cc.ab_mismatch},
                       {"asym_ratio", cc.asym_ratio}};
    }
    if (!canon_a.empty() || !canon_b.empty()) {
        const CanonicalRep rep =
            canonical_representative(parse_series(canon_a), parse_series(canon_b));
        json cj;
        cj["tag"] = rep.tag;
        cj["NA"] = rep.NA;
        cj["NB"] = rep.NB;
        cj["A_norm"] = json::array();
        for (cplx c : rep.A_norm.coeffs()) cj["A_norm"].push_back(cx(c));
        cj["B_norm"] = json::array();
        for (cplx c : rep.B_norm.coeffs()) cj["B_norm"].push_back(cx(c));
        cj["scale"] = json::array();
        for (cplx c : rep.scale.coeffs()) cj["scale"].push_back(cx(c));
        j["canonical"] = cj;
    }
    emit(out_path, report_envelope("riccati", {}, j.dump(2)));
    return 0;
}

int cmd_holonomy(const std::string& alpha, const std::string& beta, bool raw,
                 const std::string& c_str, const std::string& a_str,
                 const std::string& d_str, double y0, const std::string& eps_str,
                 double radius, int count, double tol, const std::string& out_path) {
    RiccatiSystem sys;
    if (raw) {
        sys.c = parse_complex(c_str);
        sys.a = parse_complex(a_str);
        sys.d = parse_complex(d_str);
    } else {
        sys = riccati3_system(parse_complex(alpha), parse_complex(beta));
    }
    sys.y0 = y0;
    const cplx eps = parse_complex(eps_str);

    std::vector<std::vector<double>> rows;
    for (int k = 0; k < count; ++k) {
        const cplx x = radius * std::exp(I * (TWO_PI * double(k) / double(count)));
        const cplx h = holonomy_once(sys, eps, x, tol);
        rows.push_back({x.real(), x.imag(), h.real(), h.imag()});
    }
    emit(out_path, csv_table({"x_re", "x_im", "h_re", "h_im"}, rows));
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"unfolded parabolic-modulus toolbox"};
    app.require_subcommand(1);

    std::string out_path;
    app.add_option("--out", out_path, "output path (default: stdout)");

    FamilyArgs fa_prep, fa_horn, fa_glut, fa_comp;
    FatouArgs ff_horn, ff_glut, ff_comp;

    auto* prep = app.add_subcommand("prepare", "normalize a family at parameters");
    add_family_flags(prep, fa_prep);

    auto* horn = app.add_subcommand("horn-map", "compute unfolded horn maps");
    add_family_flags(horn, fa_horn);
    add_fatou_flags(horn, ff_horn);

    auto* glut = app.add_subcommand("glutsyuk", "per-sheet conjugators and moduli");
    add_family_flags(glut, fa_glut);
    add_fatou_flags(glut, ff_glut);

    auto* comp = app.add_subcommand("compat-check",
                                    "two-sheet compatibility of the Glutsyuk moduli");
    add_family_flags(comp, fa_comp, false);
    add_fatou_flags(comp, ff_comp);
    std::string modulus_bar, modulus_tilde;
    double comp_eps_hat = 9.0;
    CompatOptions copt;
    comp->add_option("--modulus-bar", modulus_bar, "Moebius modulus JSON (bar sheet)");
    comp->add_option("--modulus-tilde", modulus_tilde,
                     "Moebius modulus JSON (tilde sheet)");
    comp->add_option("--eps-hat", comp_eps_hat, "synthetic |eps| for modulus route");
    comp->add_option("--ctol", copt.tol, "compatibility residual tolerance");
    comp->add_option("--span", copt.span, "real span of fit samples");
    comp->add_option("--samples", copt.n_samples, "number of fit samples");
    comp->add_flag_callback("--no-gamma-fit", [&copt] { copt.gamma_fit = false; },
                            "skip the 4-parameter refit");

    auto* flat = app.add_subcommand("flatness", "exponential closeness of the sheets");
    std::string flat_alpha = "0.5", flat_beta = "0.5", flat_modulus, flat_csv;
    double flat_hi = 0.02, flat_lo = 0.00125, flat_arg = 0.0, r2_min = 0.99;
    int flat_count = 5;
    flat->add_option("--alpha", flat_alpha, "hypergeometric alpha");
    flat->add_option("--beta", flat_beta, "hypergeometric beta");
    flat->add_option("--modulus", flat_modulus, "Moebius modulus JSON path");
    flat->add_option("--eps-hi", flat_hi, "largest |eps|");
    flat->add_option("--eps-lo", flat_lo, "smallest |eps|");
    flat->add_option("--count", flat_count, "geometric grid size");
    flat->add_option("--arg", flat_arg, "ray argument of eps");
    flat->add_option("--r2-min", r2_min, "regression quality gate");
    flat->add_option("--csv", flat_csv, "also write the sample table as CSV");

    auto* ric = app.add_subcommand("riccati", "closed forms and hypergeometric moduli");
    std::string ric_alpha = "0.5", ric_beta = "0.5", ric_a = "0", ric_bbar = "1",
                ric_d = "0", ric_canon_a, ric_canon_b;
    bool ric_degenerate = false;
    double ric_eps_hat = 0.0;
    ric->add_option("--alpha", ric_alpha, "hypergeometric alpha");
    ric->add_option("--beta", ric_beta, "hypergeometric beta");
    ric->add_flag("--degenerate", ric_degenerate, "use the degenerate-parameter route");
    ric->add_option("--invariant-a", ric_a, "formal invariant for the degenerate route");
    ric->add_option("--beta-bar", ric_bbar, "beta-bar for the degenerate route");
    ric->add_option("--dparam", ric_d, "d for the degenerate route");
    ric->add_option("--eps-hat", ric_eps_hat,
                    "emit closed forms and compatibility constants at this |eps|");
    ric->add_option("--canonical-a", ric_canon_a,
                    "A(eps) series 're,im;re,im;...' for canonical representative");
    ric->add_option("--canonical-b", ric_canon_b, "B(eps) series for the same");

    auto* hol = app.add_subcommand("holonomy", "Riccati holonomy germ samples (CSV)");
    std::string hol_alpha = "0.5", hol_beta = "0.5", hol_c = "0", hol_a = "0",
                hol_d = "0", hol_eps = "0";
    bool hol_raw = false;
    double hol_y0 = 0.3, hol_radius = 0.1, hol_tol = 1e-12;
    int hol_count = 16;
    hol->add_option("--alpha", hol_alpha, "hypergeometric alpha");
    hol->add_option("--beta", hol_beta, "hypergeometric beta");
    hol->add_flag("--raw", hol_raw, "use raw coefficients c, a, d instead");
    hol->add_option("--c", hol_c, "coefficient c");
    hol->add_option("--a-coef", hol_a, "coefficient a");
    hol->add_option("--d", hol_d, "coefficient d");
    hol->add_option("--y0", hol_y0, "transversal loop radius");
    hol->add_option("--eps", hol_eps, "parameter value re[,im]");
    hol->add_option("--radius", hol_radius, "x sample circle radius");
    hol->add_option("--count", hol_count, "number of x samples");
    hol->add_option("--tol", hol_tol, "path integration tolerance");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (prep->parsed()) return cmd_prepare(fa_prep, out_path);
        if (horn->parsed()) return cmd_horn_map(fa_horn, ff_horn, out_path);
        if (glut->parsed()) return cmd_glutsyuk(fa_glut, ff_glut, out_path);
        if (comp->parsed())
            return cmd_compat_check(fa_comp, ff_comp, modulus_bar, modulus_tilde,
                                    comp_eps_hat, copt, out_path);
        if (flat->parsed())
            return cmd_flatness(flat_alpha, flat_beta, flat_modulus, flat_hi, flat_lo,
                                flat_count, flat_arg, r2_min, flat_csv, out_path);
        if (ric->parsed())
            return cmd_riccati(ric_alpha, ric_beta, ric_degenerate, ric_a, ric_bbar,
                               ric_d, ric_eps_hat, ric_canon_a, ric_canon_b, out_path);
        if (hol->parsed())
            return cmd_holonomy(hol_alpha, hol_beta, hol_raw, hol_c, hol_a, hol_d,
                                hol_y0, hol_eps, hol_radius, hol_count, hol_tol,
                                out_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
