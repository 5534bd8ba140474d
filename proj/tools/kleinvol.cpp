// kleinvol command line: kernels, volumes, WP polynomials, RTR checks, identities.
#include "kvol/acceptance.hpp"
#include "kvol/chi1.hpp"
#include "kvol/identities.hpp"
#include "kvol/rtr.hpp"
#include "kvol/volume_engine.hpp"
#include "kvol/wp_symbolic.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>

using json = nlohmann::ordered_json;
using namespace kvol;

namespace {

constexpr const char* kVersion = "kleinvol 1.0.0";

enum Exit { kOk = 0, kInput = 2, kConvergence = 3, kVerification = 4 };

struct VerificationFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string format = "text";
    double tol = 1e-8;
    int K = 200;
    int precision_bits = 53;
    std::string cache_dir;
    bool use_cache = true;

    void load(const std::string& path)
    {
        std::ifstream in(path);
        if (!in) throw DomainError("cannot read config file " + path);
        json j;
        try {
            j = json::parse(in);
        } catch (const json::exception& e) {
            throw DomainError(std::string("config is not valid JSON: ") + e.what());
        }
        for (auto& [k, v] : j.items()) {
            if (k == "format") format = v.get<std::string>();
            else if (k == "tol") tol = v.get<double>();
            else if (k == "K") K = v.get<int>();
            else if (k == "precision_bits") precision_bits = v.get<int>();
            else if (k == "cache_dir") cache_dir = v.get<std::string>();
            else if (k == "use_cache") use_cache = v.get<bool>();
            else throw DomainError("unknown config key '" + k + "'");
        }
    }
    void validate() const
    {
        if (format != "text" && format != "json") throw DomainError("format must be text or json");
        if (!(tol > 0) || tol > 0.1) throw DomainError("tol must lie in (0, 0.1]");
        if (K < 1) throw DomainError("K must be >= 1");
        Precision p(precision_bits);
        (void)p;
    }
};

// unit roundoff estimate for direct evaluations
double ulp_err(double v) { return 8 * std::numeric_limits<double>::epsilon() * std::abs(v); }

Topology parse_top(const std::string& s)
{
    auto comma = s.find(',');
    if (comma == std::string::npos) throw DomainError("topology must be g,n (g may be 1/2 or 0.5)");
    std::string g = s.substr(0, comma), n = s.substr(comma + 1);
    int tg;
    try {
        if (auto sl = g.find('/'); sl != std::string::npos) {
            if (std::stoi(g.substr(sl + 1)) != 2) throw DomainError("genus denominator must be 2");
            tg = std::stoi(g.substr(0, sl));
        } else {
            double gd = std::stod(g);
            if (std::abs(2 * gd - std::round(2 * gd)) > 1e-12) throw DomainError("genus must be a multiple of 1/2");
            tg = static_cast<int>(std::lround(2 * gd));
        }
        return Topology(tg, std::stoi(n));
    } catch (const std::logic_error&) {
        throw DomainError("cannot parse topology '" + s + "'");
    }
}

json cplx_json(cplx z) { return json::array({z.real(), z.imag()}); }

void emit(const json& rec, const RunConfig& rc)
{
    if (rc.format == "json") {
        std::cout << rec.dump(2) << "\n";
        return;
    }
    for (auto& [k, v] : rec.items()) {
        if (k == "engine" || k == "wall_time") continue;
        if (v.is_string()) std::cout << k << ": " << v.get<std::string>() << "\n";
        else std::cout << k << ": " << v.dump() << "\n";
    }
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Klein-bottle and non-orientable volume toolkit"};
    app.require_subcommand(1);
    RunConfig rc;
    std::string config_path, format_flag;
    bool no_cache = false;
    app.add_option("--config", config_path, "JSON config file (format, tol, K, precision_bits, cache_dir, use_cache)");
    app.add_option("--format", format_flag, "text or json")->check(CLI::IsMember({"text", "json"}));
    app.add_flag("--no-cache", no_cache, "disable the surrogate cache");
    app.set_version_flag("--version", kVersion);

    // kernel
    auto* kernel = app.add_subcommand("kernel", "evaluate R, D, E, F (x y z) or Ecal, Lambda (x y eps)");
    std::string kname;
    std::vector<double> kargs;
    kernel->add_option("name", kname)->required()->check(CLI::IsMember({"R", "D", "E", "F", "Ecal", "Lambda"}));
    kernel->add_option("args", kargs)->required()->expected(3);

    // volume
    auto* volume = app.add_subcommand("volume", "total, plus or minus volume");
    int vtg = -1, vn = -1;
    std::vector<double> vlen;
    double veps = 0.5, vb = 1.0, vtol = -1;
    std::string sector = "total";
    volume->add_option("--twice-g", vtg, "twice the genus")->required();
    volume->add_option("--n", vn, "number of boundaries")->required();
    volume->add_option("--lengths", vlen, "boundary lengths, first one distinguished")->required();
    volume->add_option("--eps", veps, "regularisation eps");
    volume->add_option("--b", vb, "refinement parameter b >= 0");
    volume->add_option("--tol", vtol, "target tolerance");
    volume->add_option("--sector", sector)->check(CLI::IsMember({"total", "plus", "minus"}));

    // wp
    auto* wp = app.add_subcommand("wp", "orientable WP volume polynomial");
    int wg = -1, wn = -1;
    std::vector<double> wat;
    wp->add_option("g", wg)->required();
    wp->add_option("n", wn)->required();
    wp->add_option("--at", wat, "also evaluate at these lengths");

    // rtr
    auto* rtr = app.add_subcommand("rtr", "refined topological recursion checks");
    rtr->require_subcommand(1);
    std::string rtop = "1,1";
    std::vector<double> rL, rz;
    double reps = 0.5, rb = 1.0;
    int rK = -1;
    bool recompute = false;
    auto* dict = rtr->add_subcommand("dictionary", "volume vs inverse Laplace transform of the correlator");
    dict->add_option("--top", rtop, "g,n with chi=-1: 1/2,2 or 1,1")->required();
    dict->add_option("--L", rL, "lengths")->required()->delimiter(',');
    auto* resid = rtr->add_subcommand("residues", "residue spectrum of omega_{1/2,1}");
    auto* omega = rtr->add_subcommand("omega", "closed-form correlator at sample points");
    omega->add_option("--top", rtop, "1/2,2 or 1,1")->required();
    omega->add_option("--z", rz, "z (one value for (1,1), two for (1/2,2))")->required()->delimiter(',');
    omega->add_flag("--recompute", recompute, "also recompute from the recursion by residues");
    for (auto* s : {dict, resid, omega}) {
        s->add_option("--eps", reps, "regularisation eps");
        s->add_option("--b", rb, "refinement parameter b");
        s->add_option("--K", rK, "pole lattice truncation");
    }

    // identities
    auto* ident = app.add_subcommand("identities", "appendix identities");
    bool a1 = false, a2 = false, a3 = false, cc = false;
    int kmax = 20, iK = 400;
    double iX = std::exp(0.25), ieps = 0.5;
    ident->add_flag("--a1", a1, "truncated alternating-sum identity");
    ident->add_flag("--a2", a2, "exact Laurent identity");
    ident->add_flag("--a3", a3, "exact Laurent identity");
    ident->add_flag("--c", cc, "C-tilde_k = C_k and 2C_k = (-1)^k U_k");
    ident->add_option("--k-max", kmax);
    ident->add_option("--X", iX);
    ident->add_option("--K", iK);
    ident->add_option("--eps", ieps);

    // verify
    auto* verify = app.add_subcommand("verify", "run acceptance criteria");
    std::string suite = "all";
    verify->add_option("--suite", suite, "kernels, chi1, engine, rtr, identities, limits, all");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kOk : kInput;
    }

    auto t0 = std::chrono::steady_clock::now();
    json rec;
    try {
        if (!config_path.empty()) rc.load(config_path);
        if (std::string env = default_cache_dir(); !env.empty()) rc.cache_dir = env;
        if (!format_flag.empty()) rc.format = format_flag;
        if (no_cache) rc.use_cache = false;
        rc.validate();

        EngineConfig ecfg;
        ecfg.cache_dir = rc.cache_dir;
        ecfg.use_cache = rc.use_cache;
        ecfg.precision_bits = rc.precision_bits;

        if (kernel->parsed()) {
            rec["command"] = "kernel";
            rec["inputs"] = {{"name", kname}, {"args", kargs}};
            double x = kargs[0], y = kargs[1], z = kargs[2], v;
            if (kname == "R") v = kernel_R(x, y, z);
            else if (kname == "D") v = kernel_D(x, y, z);
            else if (kname == "E") v = kernel_E(x, y, z);
            else if (kname == "F") v = kernel_F(x, y, z);
            else if (kname == "Ecal") v = kernel_Ecal(x, y, RegEps(z));
            else v = lambda_upper(x, y, RegEps(z));
            rec["value"] = v;
            rec["error"] = ulp_err(v);
        } else if (volume->parsed()) {
            VolumeQuery q;
            q.top = Topology(vtg, vn);
            q.lengths = vlen;
            q.eps = RegEps(veps);
            q.b = vb;
            q.tol = vtol > 0 ? vtol : rc.tol;
            VolumeEngine eng(ecfg);
            VolumeResult r = sector == "total" ? eng.total_volume(q)
                             : sector == "plus" ? eng.v_plus(q)
                                                : eng.v_minus(q);
            rec["command"] = "volume";
            rec["inputs"] = {{"topology", q.top.str()}, {"lengths", vlen}, {"eps", veps},
                             {"b", vb}, {"tol", q.tol}, {"sector", sector}};
            rec["value"] = r.value;
            rec["error"] = r.error;
            rec["tail"] = r.tail;
            rec["path"] = r.path;
            if (r.error > q.tol * std::max(1.0, std::abs(r.value)))
                throw ConvergenceError("error estimate above requested tolerance");
        } else if (wp->parsed()) {
            if (wg < 0 || wn < 1) throw DomainError("wp needs g >= 0 and n >= 1");
            Topology t(2 * wg, wn);
            if (!t.stable()) throw DomainError("unstable topology " + t.str());
            ReconstructionReport rep;
            const PiPoly& p = wp_volume(t, &rep);
            rec["command"] = "wp";
            rec["inputs"] = {{"g", wg}, {"n", wn}};
            rec["polynomial"] = p.render();
            rec["verify_residual"] = rep.verify_residual;
            if (!wat.empty()) {
                if (static_cast<int>(wat.size()) != wn) throw DomainError("--at needs n lengths");
                double v = wp_eval(p, wat);
                rec["at"] = wat;
                rec["value"] = v;
                rec["error"] = ulp_err(v);
            }
            if (rc.format == "text" && wat.empty()) {
                std::cout << p.render() << "\n";
                return kOk;
            }
        } else if (rtr->parsed()) {
            RegEps e(reps);
            int K = rK > 0 ? rK : rc.K;
            if (dict->parsed()) {
                Topology t = parse_top(rtop);
                auto d = check_dictionary_chi1(t, rL, e, rb, rK);
                rec["command"] = "rtr dictionary";
                rec["inputs"] = {{"topology", t.str()}, {"L", rL}, {"eps", reps}, {"b", rb}};
                rec["lhs"] = d.lhs;
                rec["rhs"] = d.rhs;
                rec["residual"] = d.residual;
                rec["tail"] = d.tail;
                rec["pass"] = d.residual <= 1e-8;
                if (d.residual > 1e-8) throw VerificationFailure("dictionary residual above 1e-8");
            } else if (resid->parsed()) {
                RefinedParams p(rb, e, std::min(K, 40));
                json rows = json::array();
                double worst = 0;
                for (auto& r : omega_half_1_residues(p)) {
                    double want = r.twice_center == 0 ? -p.bb / 2 : (r.twice_center < 0 ? -p.bb : 0.0);
                    worst = std::max(worst, std::abs(r.residue - want));
                    rows.push_back({{"center", r.twice_center / 2.0}, {"residue", cplx_json(r.residue)}, {"expected", want}});
                }
                rec["command"] = "rtr residues";
                rec["inputs"] = {{"eps", reps}, {"b", rb}, {"K", p.K}};
                rec["residues"] = rows;
                rec["worst"] = worst;
                if (worst > 1e-10) throw VerificationFailure("residue spectrum off by more than 1e-10");
            } else {
                Topology t = parse_top(rtop);
                RefinedParams p(rb, e, K);
                rec["command"] = "rtr omega";
                rec["inputs"] = {{"topology", t.str()}, {"z", rz}, {"eps", reps}, {"b", rb}, {"K", K}};
                cplx closed, rec_v;
                if (t == Topology(1, 2)) {
                    if (rz.size() != 2) throw DomainError("(1/2,2) needs --z z1,z2");
                    closed = omega_half_2_closed(rz[0], rz[1], p);
                    if (recompute) rec_v = recompute_half_2(rz[0], rz[1], p).total;
                } else if (t == Topology(2, 1)) {
                    if (rz.size() != 1) throw DomainError("(1,1) needs one --z");
                    closed = omega_1_1_closed(p).value(rz[0]);
                    if (recompute) rec_v = recompute_1_1(rz[0], p).total;
                } else {
                    throw DomainError("omega is available for (1/2,2) and (1,1)");
                }
                rec["closed"] = cplx_json(closed);
                if (recompute) {
                    rec["recomputed"] = cplx_json(rec_v);
                    rec["relative_gap"] = std::abs(rec_v - closed) / std::abs(closed);
                }
            }
        } else if (ident->parsed()) {
            if (!(a1 || a2 || a3 || cc)) a1 = a2 = a3 = cc = true;
            if (kmax < 1) throw DomainError("--k-max must be >= 1");
            rec["command"] = "identities";
            rec["inputs"] = {{"k_max", kmax}};
            bool ok = true;
            if (a2 || a3) {
                bool x2 = true, x3 = true;
                for (int k = 1; k <= kmax; ++k) {
                    if (a2) x2 = x2 && lemma_a2_check(k);
                    if (a3) x3 = x3 && lemma_a3_check(k);
                }
                if (a2) rec["a2_exact"] = x2;
                if (a3) rec["a3_exact"] = x3;
                ok = ok && x2 && x3;
            }
            if (a1) {
                double w = 0, tb = 0;
                for (int k = 1; k <= kmax && k < iK; ++k) {
                    auto r = lemma_a1_check(k, iX, iK);
                    w = std::max(w, r.residual);
                    tb = std::max(tb, r.tail_bound);
                }
                rec["a1"] = {{"X", iX}, {"K", iK}, {"residual", w}, {"tail_bound", tb}};
                ok = ok && w <= 1e-8;
            }
            if (cc) {
                RegEps e(ieps);
                double wc = 0, wu = 0;
                for (int k = 1; k <= kmax && k < iK; ++k) {
                    double c = c_coeff(k, e);
                    wc = std::max(wc, std::abs(ctilde_coeff(k, e, iK).value - c) / std::max(1.0, std::abs(c)));
                    double u = (k % 2 ? -1.0 : 1.0) * u_coeff(k, e);
                    wu = std::max(wu, std::abs(2 * c - u) / std::max(1.0, std::abs(u)));
                }
                rec["c"] = {{"eps", ieps}, {"ctilde_vs_c", wc}, {"two_c_vs_u", wu}};
                ok = ok && wc <= 1e-10 && wu <= 1e-10;
            }
            rec["pass"] = ok;
            if (!ok) {
                emit(rec, rc);
                return kVerification;
            }
        } else if (verify->parsed()) {
            VolumeEngine eng(ecfg);
            json rows = json::array();
            bool ok = true;
            for (int id : suite_criteria(suite)) {
                auto r = run_criterion(id, eng);
                ok = ok && r.pass();
                json checks = json::array();
                for (auto& c : r.checks)
                    checks.push_back({{"what", c.what}, {"measured", c.measured}, {"bound", c.bound}, {"pass", c.pass}});
                rows.push_back({{"criterion", id}, {"title", r.title}, {"pass", r.pass()}, {"checks", checks}});
                if (rc.format == "text")
                    std::printf("criterion %2d %-32s %s  %s\n", id, r.title.c_str(), r.pass() ? "PASS" : "FAIL",
                                r.summary().c_str());
            }
            rec["command"] = "verify";
            rec["inputs"] = {{"suite", suite}};
            rec["criteria"] = rows;
            rec["pass"] = ok;
            if (rc.format == "json") {
                rec["engine"] = kVersion;
                emit(rec, rc);
            }
            return ok ? kOk : kVerification;
        }
    } catch (const DomainError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kInput;
    } catch (const json::exception& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kInput;
    } catch (const ConvergenceError& e) {
        std::cerr << "convergence failure: " << e.what() << "\n";
        return kConvergence;
    } catch (const VerificationFailure& e) {
        emit(rec, rc);
        std::cerr << "verification failure: " << e.what() << "\n";
        return kVerification;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kConvergence;
    }
    rec["engine"] = kVersion;
    rec["wall_time"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    emit(rec, rc);
    return kOk;
}
