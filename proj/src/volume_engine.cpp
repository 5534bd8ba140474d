#include "kvol/volume_engine.hpp"
#include "kvol/wp_symbolic.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

namespace kvol {

namespace {

const char* kEngineVersion = "kleinvol-engine-1";

std::string fmt(double x, int prec = 17)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", prec, x);
    return buf;
}

uint64_t fnv1a(const std::string& s)
{
    uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

double clenshaw(const std::vector<double>& c, double t)
{
    double b1 = 0, b2 = 0;
    for (size_t j = c.size(); j-- > 1;) {
        double b0 = 2 * t * b1 - b2 + c[j];
        b2 = b1;
        b1 = b0;
    }
    return t * b1 - b2 + c[0];
}

// polynomial growth degree used for truncation radii
int growth_of(const Topology& t) { return 3 * t.twice_g + 2 * t.n; }

// integrate over [0,pmax] with interior breakpoints
double integrate_split(const std::function<double(double)>& f, std::vector<double> brk, double pmax, double tol,
                       double* err)
{
    brk.push_back(0);
    brk.push_back(pmax);
    std::sort(brk.begin(), brk.end());
    double v = 0, e = 0;
    for (size_t i = 0; i + 1 < brk.size(); ++i) {
        double a = std::clamp(brk[i], 0.0, pmax), b = std::clamp(brk[i + 1], 0.0, pmax);
        if (b - a <= 0) continue;
        double ei = 0;
        v += integrate(f, a, b, tol, &ei);
        e += ei;
    }
    if (err) *err = e;
    return v;
}

} // namespace

std::string default_cache_dir()
{
    if (const char* d = std::getenv("KLEINVOL_CACHE_DIR")) return d;
    return "";
}

void EngineConfig::validate() const
{
    if (panel_order <= 0 || max_subdivisions <= 0 || surrogate_degree_cap < 8 || !(surrogate_panel > 0) ||
        precision_bits < 53)
        throw DomainError("engine caps must be positive (degree cap >= 8)");
}

void VolumeQuery::validate() const
{
    if (!top.stable()) throw DomainError("unstable topology " + top.str());
    if (static_cast<int>(lengths.size()) != top.n) throw DomainError("length count does not match n");
    for (double x : lengths)
        if (!(x >= 0) || !std::isfinite(x)) throw DomainError("lengths must be finite and non-negative");
    if (!(b >= 0) || !std::isfinite(b)) throw DomainError("b must be non-negative");
    if (!(tol > 0) || tol > 0.1) throw DomainError("tolerance must lie in (0, 0.1]");
}

double Surrogate::eval(double p) const
{
    if (p < 0 || p > pmax * (1 + 1e-12)) throw DomainError("surrogate evaluated outside [0, P_max]");
    auto it = std::upper_bound(panels.begin(), panels.end(), p,
                               [](double x, const ChebPanel& q) { return x < q.b; });
    const ChebPanel& q = it == panels.end() ? panels.back() : *it;
    double t = (2 * p - q.a - q.b) / (q.b - q.a);
    return clenshaw(q.c, std::clamp(t, -1.0, 1.0));
}

double truncation_radius(double x, double y, int growth, double tol)
{
    double lt = std::log(1 / tol);
    return x + y + 2 * (lt + (growth + 2) * std::log(2 + x + y + 2 * lt + 4 * growth)) + 8;
}

double integrate_R(double x, double y, const std::function<double(double)>& V, double pmax, double tol, double* err)
{
    auto f = [&](double p) { return p * kernel_R(x, y, p) * V(p); };
    return integrate_split(f, {std::abs(x - y), x + y}, pmax, tol, err);
}

double integrate_D(double x, const std::function<double(double, double)>& F, double pmax, double tol, double* err)
{
    double inner_err = 0;
    auto G = [&](double s) {
        if (s == 0) return 0.0;
        double e = 0;
        double g = integrate([&](double t) { return t * (1 - t) * F(t * s, (1 - t) * s); }, 0.0, 1.0, tol, &e);
        inner_err = std::max(inner_err, e);
        return g;
    };
    double e = 0;
    double v = integrate_split([&](double s) { return s * s * s * kernel_D(x, s, 0.0) * G(s); }, {x}, pmax, tol, &e);
    if (err) *err = e + inner_err * std::abs(v);
    return v;
}

double integrate_D_constant(double x, double c, double pmax, double tol, double* err)
{
    double e = 0;
    double v = integrate_split([&](double s) { return s * s * s * kernel_D(x, s, 0.0); }, {x}, pmax, tol, &e);
    if (err) *err = std::abs(c) * e / 6;
    return c * v / 6;
}

double integrate_Ecal(double x, const std::function<double(double)>& V, const RegEps& e, double pmax, double tol,
                      double* err)
{
    if (x == 0) {
        if (err) *err = 0;
        return 0;
    }
    auto f = [&](double p) { return p * kernel_Ecal(x, p, e) * V(p); };
    return integrate_split(f, {x}, pmax, tol, err);
}

Surrogate fit_surrogate(const std::function<double(double)>& f, double pmax, double tol, const EngineConfig& cfg,
                        const std::string& key)
{
    Surrogate s;
    s.key = key;
    s.pmax = pmax;
    int np = std::max(1, int(std::ceil(pmax / cfg.surrogate_panel)));
    const double probes[] = {-0.77, 0.13, 0.61};
    const double pi = pi_v<double>();
    for (int k = 0; k < np; ++k) {
        double a = pmax * k / np, b = pmax * (k + 1) / np;
        auto map = [&](double t) { return 0.5 * (a + b) + 0.5 * (b - a) * t; };
        bool ok = false;
        for (int N = 8; N <= cfg.surrogate_degree_cap; N *= 2) {
            std::vector<double> vals(static_cast<size_t>(N)), c(static_cast<size_t>(N), 0.0);
            double scale = 0;
            for (int i = 0; i < N; ++i) {
                vals[size_t(i)] = f(map(std::cos(pi * (i + 0.5) / N)));
                scale = std::max(scale, std::abs(vals[size_t(i)]));
            }
            for (int j = 0; j < N; ++j) {
                double acc = 0;
                for (int i = 0; i < N; ++i) acc += vals[size_t(i)] * std::cos(pi * j * (i + 0.5) / N);
                c[size_t(j)] = 2 * acc / N;
            }
            c[0] /= 2;
            double worst = 0;
            for (double t : probes) worst = std::max(worst, std::abs(f(map(t)) - clenshaw(c, t)));
            double rel = worst / std::max(scale, 1e-300);
            if (worst <= tol * std::max(scale, 1e-12)) {
                s.panels.push_back({a, b, c});
                s.residual = std::max(s.residual, rel);
                ok = true;
                break;
            }
        }
        if (!ok) throw ConvergenceError("surrogate degree cap exceeded for " + key);
    }
    return s;
}

VolumeEngine::VolumeEngine(EngineConfig cfg) : cfg_(std::move(cfg)) { cfg_.validate(); }

std::string VolumeEngine::key_of(Sector s, const Topology& t, const std::vector<double>& frozen,
                                 const VolumeQuery& ctx, double pmax) const
{
    std::ostringstream os;
    os << (s == Sector::Total ? "T" : s == Sector::Plus ? "P" : "M") << "|" << t.twice_g << "," << t.n << "|";
    for (double x : frozen) os << fmt(x, 12) << ",";
    os << "|" << fmt(ctx.eps.value()) << "|" << fmt(ctx.b) << "|" << fmt(ctx.tol, 3) << "|" << fmt(pmax, 12);
    return os.str();
}

std::shared_ptr<const Surrogate> VolumeEngine::load(const std::string& key)
{
    {
        std::lock_guard<std::mutex> lk(mu_);
        auto it = cache_.find(key);
        if (it != cache_.end()) {
            ++hits_;
            return it->second;
        }
    }
    if (!cfg_.use_cache || cfg_.cache_dir.empty()) return nullptr;
    char name[32];
    std::snprintf(name, sizeof name, "%016llx.json", static_cast<unsigned long long>(fnv1a(key)));
    std::ifstream in(std::filesystem::path(cfg_.cache_dir) / name);
    if (!in) return nullptr;
    try {
        nlohmann::json j;
        in >> j;
        if (j.at("version") != kEngineVersion || j.at("key") != key) return nullptr;
        auto s = std::make_shared<Surrogate>();
        s->key = key;
        s->pmax = j.at("pmax");
        s->residual = j.at("residual");
        for (auto& p : j.at("panels")) s->panels.push_back({p.at("a"), p.at("b"), p.at("c")});
        std::lock_guard<std::mutex> lk(mu_);
        ++hits_;
        return cache_.emplace(key, s).first->second;
    } catch (const std::exception&) {
        return nullptr; // unreadable record: rebuild
    }
}

void VolumeEngine::store(const Surrogate& s)
{
    if (!cfg_.use_cache || cfg_.cache_dir.empty()) return;
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(cfg_.cache_dir, ec);
    nlohmann::json j;
    j["version"] = kEngineVersion;
    j["key"] = s.key;
    j["pmax"] = s.pmax;
    j["residual"] = s.residual;
    j["panels"] = nlohmann::json::array();
    for (auto& p : s.panels) j["panels"].push_back({{"a", p.a}, {"b", p.b}, {"c", p.c}});
    char name[32];
    std::snprintf(name, sizeof name, "%016llx.json", static_cast<unsigned long long>(fnv1a(s.key)));
    fs::path final_path = fs::path(cfg_.cache_dir) / name;
    fs::path tmp = final_path;
    tmp += ".tmp" + std::to_string(::getpid());
    {
        std::ofstream out(tmp);
        if (!out) return;
        out << j.dump();
    }
    fs::rename(tmp, final_path, ec); // atomic replace; losing a race is harmless
    if (ec) fs::remove(tmp, ec);
}

VolumeEngine::Val VolumeEngine::eval(Sector s, const Topology& t, const std::vector<double>& L, const VolumeQuery& ctx)
{
    if (s == Sector::Plus) {
        if (t.twice_g % 2 != 0) return {};
        return {wp_eval(wp_volume(t), L), 0, 0};
    }
    if (s == Sector::Minus && t.twice_g == 0) return {};
    if (t.euler() == -1) {
        if (s == Sector::Total) return {total_chi1(t, L, ctx.eps, ctx.b), 0, 0};
        if (t.twice_g == 1) return {v_minus_half_2(L[0], L[1], ctx.eps), 0, 0};
        return {v_minus_1_1(L[0], ctx.eps), 0, 0};
    }
    return recurse(s, t, L, ctx);
}

VolumeEngine::Val VolumeEngine::recurse(Sector s, const Topology& t, const std::vector<double>& L,
                                        const VolumeQuery& ctx)
{
    const double h = 1e-2;
    if (L[0] >= 1e-3) {
        Val r = rhs(s, t, L, ctx);
        return {r.v / L[0], r.err / L[0], r.tail / L[0]};
    }
    // L0 -> 0: the right side is odd in L0, so Richardson on V(h), V(2h)
    std::vector<double> L1 = L, L2 = L;
    L1[0] = h;
    L2[0] = 2 * h;
    Val a = rhs(s, t, L1, ctx), b = rhs(s, t, L2, ctx);
    double va = a.v / h, vb = b.v / (2 * h);
    double v = (4 * va - vb) / 3;
    return {v, a.err / h + b.err / h + std::abs(va - vb) * 1e-3, a.tail / h + b.tail / h};
}

std::function<double(double)> VolumeEngine::inner1(Sector s, const Topology& t, const std::vector<double>& frozen,
                                                   const VolumeQuery& ctx, double pmax, double* rel_err)
{
    *rel_err = 0;
    if (s == Sector::Plus || t.euler() == -1 || (s == Sector::Minus && t.twice_g == 0)) {
        return [this, s, t, frozen, ctx](double p) {
            std::vector<double> L{p};
            L.insert(L.end(), frozen.begin(), frozen.end());
            return eval(s, t, L, ctx).v;
        };
    }
    std::string key = key_of(s, t, frozen, ctx, pmax);
    auto sur = load(key);
    if (!sur) {
        auto f = [&](double p) {
            std::vector<double> L{p};
            L.insert(L.end(), frozen.begin(), frozen.end());
            return eval(s, t, L, ctx).v;
        };
        auto fresh = std::make_shared<Surrogate>(fit_surrogate(f, pmax, 0.1 * ctx.tol, cfg_, key));
        store(*fresh);
        std::lock_guard<std::mutex> lk(mu_);
        ++built_;
        sur = cache_.emplace(key, fresh).first->second;
    }
    *rel_err = sur->residual;
    return [sur](double p) { return sur->eval(p); };
}

VolumeEngine::Val VolumeEngine::rhs(Sector s, const Topology& t, const std::vector<double>& L, const VolumeQuery& ctx)
{
    const int tg = t.twice_g, n = t.n;
    const double L0 = L[0];
    const double qtol = 0.1 * ctx.tol;
    std::vector<double> rest(L.begin() + 1, L.end());
    double ymax = 0;
    for (double y : rest) ymax = std::max(ymax, y);
    Val out;
    auto add = [&](double v, double e, double rel, double tail) {
        out.v += v;
        out.err += e + rel * std::abs(v) + tail;
        out.tail += tail;
    };
    // tail estimate from the integrand at P_max (kernels decay like exp(-p/2))
    auto tail_of = [](double fP) { return 4 * std::abs(fP); };

    // R-terms
    if (n >= 2 && Topology(tg, n - 1).stable()) {
        Topology ti(tg, n - 1);
        for (int i = 0; i < n - 1; ++i) {
            std::vector<double> frozen;
            for (int k = 0; k < n - 1; ++k)
                if (k != i) frozen.push_back(rest[size_t(k)]);
            double P = truncation_radius(L0, rest[size_t(i)], growth_of(ti), qtol);
            double rel = 0, e = 0;
            auto V = inner1(s, ti, frozen, ctx, P, &rel);
            double v = integrate_R(L0, rest[size_t(i)], V, P, qtol, &e);
            add(v, e, rel, tail_of(P * kernel_R(L0, rest[size_t(i)], P) * V(P)));
        }
    }

    // D-terms: connected part and ordered splits, with the overall 1/2
    {
        double P = truncation_radius(L0, 0, growth_of(t), qtol);
        bool any = false, constant = true;
        double cval = 0;
        std::function<double(double, double)> conn;
        if (tg >= 2 && Topology(tg - 2, n + 1).stable()) {
            Topology tc(tg - 2, n + 1);
            any = true;
            double w = s == Sector::Total ? 1 + ctx.b : 1;
            if (tc == Topology(0, 3)) {
                // V+ = 1, V- = 0
                cval = (s == Sector::Total ? w : s == Sector::Plus ? 1.0 : 1.0);
            } else {
                constant = false;
                conn = [this, s, tc, rest, ctx, w](double p, double q) {
                    std::vector<double> LL{p, q};
                    LL.insert(LL.end(), rest.begin(), rest.end());
                    if (s == Sector::Minus)
                        return eval(Sector::Plus, tc, LL, ctx).v + 2 * eval(Sector::Minus, tc, LL, ctx).v;
                    return w * eval(s, tc, LL, ctx).v;
                };
            }
        }
        struct Split {
            std::function<double(double)> f1, f2, p1, p2;
        };
        std::vector<Split> splits;
        double split_rel = 0;
        for (int g1 = 0; g1 <= tg; ++g1) {
            for (unsigned mask = 0; mask < (1u << (n - 1)); ++mask) {
                std::vector<double> J1, J2;
                for (int k = 0; k < n - 1; ++k) (mask >> k & 1u ? J1 : J2).push_back(rest[size_t(k)]);
                Topology t1(g1, int(J1.size()) + 1), t2(tg - g1, int(J2.size()) + 1);
                if (!t1.stable() || !t2.stable()) continue;
                any = true;
                constant = false;
                double r1 = 0, r2 = 0;
                Split sp;
                if (s == Sector::Minus) {
                    VolumeQuery c1 = ctx;
                    c1.b = 1; // V+ + V- is the b = 1 total
                    sp.f1 = inner1(Sector::Total, t1, J1, c1, P, &r1);
                    sp.f2 = inner1(Sector::Total, t2, J2, c1, P, &r2);
                    double r3 = 0, r4 = 0;
                    sp.p1 = inner1(Sector::Plus, t1, J1, ctx, P, &r3);
                    sp.p2 = inner1(Sector::Plus, t2, J2, ctx, P, &r4);
                } else {
                    sp.f1 = inner1(s, t1, J1, ctx, P, &r1);
                    sp.f2 = inner1(s, t2, J2, ctx, P, &r2);
                }
                split_rel = std::max(split_rel, r1 + r2);
                splits.push_back(sp);
            }
        }
        if (any) {
            double e = 0, v;
            if (constant) {
                v = integrate_D_constant(L0, cval, P, qtol, &e);
            } else {
                auto F = [&](double p, double q) {
                    double acc = conn ? conn(p, q) : cval;
                    for (auto& sp : splits) {
                        acc += sp.f1(p) * sp.f2(q);
                        if (sp.p1) acc -= sp.p1(p) * sp.p2(q);
                    }
                    return acc;
                };
                v = integrate_D(L0, F, P, qtol, &e);
            }
            add(v / 2, e / 2, split_rel, tail_of(P * P * P * kernel_D(L0, P, 0.0)) * (1 + std::abs(cval)));
        }
    }

    // E-term
    if (tg >= 1 && Topology(tg - 1, n).stable() && (s != Sector::Total || ctx.b != 0) && s != Sector::Plus) {
        Topology te(tg - 1, n);
        double P = truncation_radius(L0, 0, growth_of(te), qtol);
        double r1 = 0, r2 = 0, e = 0;
        std::function<double(double)> W;
        if (s == Sector::Minus) {
            auto vp = inner1(Sector::Plus, te, rest, ctx, P, &r1);
            auto vm = inner1(Sector::Minus, te, rest, ctx, P, &r2);
            W = [vp, vm](double p) { return vp(p) + vm(p); };
        } else {
            auto v = inner1(s, te, rest, ctx, P, &r1);
            double b = ctx.b;
            W = [v, b](double p) { return b * v(p); };
        }
        double v = integrate_Ecal(L0, W, ctx.eps, P, qtol, &e);
        add(v, e, r1 + r2, tail_of(P * kernel_Ecal(L0, P, ctx.eps) * W(P)));
    }
    return out;
}

VolumeResult VolumeEngine::total_volume(const VolumeQuery& q)
{
    q.validate();
    if (q.top.euler() == -1) {
        double v = total_chi1(q.top, q.lengths, q.eps, q.b);
        return {v, 16 * std::numeric_limits<double>::epsilon() * std::abs(v), 0, "closed-form"};
    }
    Val v = eval(Sector::Total, q.top, q.lengths, q);
    return {v.v, v.err, v.tail, "recursion"};
}

VolumeResult VolumeEngine::v_minus(const VolumeQuery& q)
{
    q.validate();
    Val v = eval(Sector::Minus, q.top, q.lengths, q);
    return {v.v, v.err, v.tail, q.top.euler() == -1 || q.top.twice_g == 0 ? "closed-form" : "recursion"};
}

VolumeResult VolumeEngine::v_plus(const VolumeQuery& q)
{
    q.validate();
    Val v = eval(Sector::Plus, q.top, q.lengths, q);
    return {v.v, 0, 0, "polynomial"};
}

std::shared_ptr<const Surrogate> VolumeEngine::build_surrogate(const VolumeQuery& q, int slot, Sector s)
{
    q.validate();
    if (slot < 0 || slot >= q.top.n) throw DomainError("surrogate slot out of range");
    std::vector<double> frozen;
    for (int k = 0; k < q.top.n; ++k)
        if (k != slot) frozen.push_back(q.lengths[size_t(k)]);
    double ymax = 0;
    for (double y : frozen) ymax = std::max(ymax, y);
    double P = truncation_radius(ymax, 0, growth_of(q.top), 0.1 * q.tol);
    std::string key = key_of(s, q.top, frozen, q, P) + "|slot" + std::to_string(slot);
    if (auto hit = load(key)) return hit;
    auto f = [&](double p) {
        std::vector<double> L = q.lengths;
        L[size_t(slot)] = p;
        return eval(s, q.top, L, q).v;
    };
    auto fresh = std::make_shared<Surrogate>(fit_surrogate(f, P, 0.1 * q.tol, cfg_, key));
    store(*fresh);
    std::lock_guard<std::mutex> lk(mu_);
    ++built_;
    return cache_.emplace(key, fresh).first->second;
}

} // namespace kvol
