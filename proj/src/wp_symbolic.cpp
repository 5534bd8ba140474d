#include "kvol/wp_symbolic.hpp"

#include <algorithm>
#include <mutex>
#include <random>
#include <sstream>

namespace kvol {

namespace {

const double kMomentTol = 1e-50;
// kernels are below e^-4000 there; exp-sinh probes far larger abscissae
const HP kFar(8000);

HP hp_pi() { return pi_v<HP>(); }

HP pow_int(const HP& x, int k)
{
    HP r = 1;
    for (int i = 0; i < k; ++i) r *= x;
    return r;
}

HP factorial_hp(int n)
{
    HP r = 1;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

// int_0^inf p^(2a+1) R(x,y,p) dp
HP moment_R(int a, const HP& x, const HP& y)
{
    auto f = [&](const HP& p) {
        if (p > kFar) return HP(0);
        return pow_int(p, 2 * a + 1) * kernel_R(x, y, p);
    };
    HP split = x + y + 1;
    return integrate_hp(f, HP(0), split, kMomentTol) + integrate_to_inf_hp(f, split, kMomentTol);
}

// int_0^inf s^k D(x,s) ds
HP moment_D(int k, const HP& x)
{
    auto f = [&](const HP& s) {
        if (s > kFar) return HP(0);
        return pow_int(s, k) * kernel_D(x, s, HP(0));
    };
    HP split = x + 1;
    return integrate_hp(f, HP(0), split, kMomentTol) + integrate_to_inf_hp(f, split, kMomentTol);
}

// int int p^(2a+1) q^(2c+1) f(p+q) = (2a+1)!(2c+1)!/(2a+2c+3)! int s^(2a+2c+3) f(s)
HP beta_factor(int a, int c)
{
    return factorial_hp(2 * a + 1) * factorial_hp(2 * c + 1) / factorial_hp(2 * a + 2 * c + 3);
}

std::vector<std::vector<int>> partitions(int n_parts, int max_total)
{
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    std::function<void(int, int)> rec = [&](int left, int max_part) {
        out.push_back(cur);
        if (static_cast<int>(cur.size()) == n_parts) return;
        for (int p = std::min(left, max_part); p >= 1; --p) {
            cur.push_back(p);
            rec(left - p, p);
            cur.pop_back();
        }
    };
    rec(max_total, max_total);
    return out;
}

// distinct exponent vectors in the orbit of a partition padded to n entries
std::vector<std::vector<int>> orbit(const std::vector<int>& lambda, int n)
{
    std::vector<int> v(lambda);
    v.resize(size_t(n), 0);
    std::sort(v.begin(), v.end());
    std::vector<std::vector<int>> out;
    do {
        out.push_back(v);
    } while (std::next_permutation(v.begin(), v.end()));
    return out;
}

HP monomial_hp(const std::vector<int>& alpha, const std::vector<HP>& L)
{
    HP r = 1;
    for (size_t i = 0; i < alpha.size(); ++i) r *= pow_int(L[i] * L[i], alpha[i]);
    return r;
}

HP coeff_hp(const PiCoeff& c)
{
    HP num(c.q.get_num().get_str()), den(c.q.get_den().get_str());
    return num / den * pow_int(hp_pi() * hp_pi(), c.j);
}

std::vector<HP> random_node(std::mt19937_64& rng, int n)
{
    std::uniform_real_distribution<double> U(0.3, 2.5);
    std::vector<HP> L;
    for (int i = 0; i < n; ++i) L.emplace_back(U(rng));
    return L;
}

std::mutex g_mutex;
std::map<Topology, PiPoly> g_cache;
std::map<Topology, ReconstructionReport> g_reports;

PiPoly reconstruct(const Topology& t, ReconstructionReport& rep)
{
    const int n = t.n, d = t.dim_half();
    auto basis = partitions(n, d);
    const int m = static_cast<int>(basis.size());
    rep.unknowns = m;
    std::mt19937_64 rng(0x5eed1234ULL + 97 * uint64_t(t.twice_g) + uint64_t(n));

    std::vector<std::vector<HP>> A(size_t(m), std::vector<HP>(size_t(m) + 1));
    for (int r = 0; r < m; ++r) {
        auto L = random_node(rng, n);
        for (int c = 0; c < m; ++c) {
            HP s = 0;
            for (auto& a : orbit(basis[size_t(c)], n)) s += monomial_hp(a, L);
            A[size_t(r)][size_t(c)] = s;
        }
        A[size_t(r)][size_t(m)] = wp_recursion_hp(t, L);
    }
    // Gaussian elimination with partial pivoting
    for (int c = 0; c < m; ++c) {
        int piv = c;
        for (int r = c + 1; r < m; ++r)
            if (abs(A[size_t(r)][size_t(c)]) > abs(A[size_t(piv)][size_t(c)])) piv = r;
        std::swap(A[size_t(c)], A[size_t(piv)]);
        if (A[size_t(c)][size_t(c)] == 0) throw ConvergenceError("singular reconstruction system");
        for (int r = 0; r < m; ++r) {
            if (r == c) continue;
            HP f = A[size_t(r)][size_t(c)] / A[size_t(c)][size_t(c)];
            for (int k = c; k <= m; ++k) A[size_t(r)][size_t(k)] -= f * A[size_t(c)][size_t(k)];
        }
    }
    rep.nodes = m;

    PiPoly poly;
    poly.top = t;
    double worst = 0;
    for (int c = 0; c < m; ++c) {
        HP x = A[size_t(c)][size_t(m)] / A[size_t(c)][size_t(c)];
        int deg = 0;
        for (int p : basis[size_t(c)]) deg += p;
        int j = d - deg;
        HP qx = x / pow_int(hp_pi() * hp_pi(), j);
        mpq_class q;
        if (!rationalize(qx, q, 1e12, HP("1e-32")))
            throw ConvergenceError("rational reconstruction failed for " + t.str());
        if (q == 0) continue;
        PiCoeff pc{q, j};
        double res = static_cast<double>(abs(coeff_hp(pc) - x) / (1 + abs(x)));
        worst = std::max(worst, res);
        for (auto& a : orbit(basis[size_t(c)], n)) poly.terms[a] = pc;
    }
    rep.solve_residual = worst;

    double vworst = 0;
    for (int r = 0; r < 3; ++r) {
        auto L = random_node(rng, n);
        HP direct = wp_recursion_hp(t, L);
        HP fit = wp_eval_hp(poly, L);
        vworst = std::max(vworst, static_cast<double>(abs(direct - fit) / (1 + abs(direct))));
    }
    rep.verify_residual = vworst;
    if (vworst > 1e-30)
        throw ConvergenceError("reconstruction of " + t.str() + " fails verification: " +
                               std::to_string(vworst));
    poly.check_invariants();
    return poly;
}

std::string pi_power(int j)
{
    if (j == 0) return "";
    return "pi^" + std::to_string(2 * j);
}

std::string monomial_str(const std::vector<int>& a)
{
    std::string s;
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        if (!s.empty()) s += "·";
        s += "L" + std::to_string(i + 1) + "^" + std::to_string(2 * a[i]);
    }
    return s;
}

} // namespace

bool rationalize(const HP& x, mpq_class& out, double den_max, const HP& rel_tol)
{
    HP scale = std::max(HP(1), HP(abs(x)));
    if (abs(x) <= rel_tol) {
        out = 0;
        return true;
    }
    mpz_class h0 = 0, h1 = 1, k0 = 1, k1 = 0;
    HP r = x;
    for (int it = 0; it < 80; ++it) {
        HP a = floor(r);
        if (abs(a) > HP(9e18)) return false;
        mpz_class ai(std::to_string(a.convert_to<long long>()));
        mpz_class h = ai * h1 + h0, k = ai * k1 + k0;
        if (k > mpz_class(static_cast<unsigned long>(den_max))) return false;
        h0 = h1; h1 = h; k0 = k1; k1 = k;
        HP approx = HP(h.get_str()) / HP(k.get_str());
        if (abs(approx - x) <= rel_tol * scale) {
            out = mpq_class(h, k);
            out.canonicalize();
            return true;
        }
        HP frac = r - a;
        if (frac == 0) return false;
        r = 1 / frac;
    }
    return false;
}

void PiPoly::check_invariants() const
{
    int d = weight();
    for (auto& [a, c] : terms) {
        if (static_cast<int>(a.size()) != top.n) throw DomainError("PiPoly term arity mismatch");
        int deg = 0;
        for (int e : a) deg += e;
        if (deg + c.j != d) throw DomainError("PiPoly term breaks homogeneity");
        std::vector<int> s(a);
        std::sort(s.begin(), s.end());
        do {
            auto it = terms.find(s);
            if (it == terms.end() || it->second.q != c.q || it->second.j != c.j)
                throw DomainError("PiPoly is not symmetric");
        } while (std::next_permutation(s.begin(), s.end()));
    }
}

mpq_class PiPoly::leading() const
{
    std::vector<int> a(size_t(top.n), 0);
    a[0] = weight();
    auto it = terms.find(a);
    return it == terms.end() ? mpq_class(0) : it->second.q;
}

std::string PiPoly::render() const
{
    if (terms.empty()) return "0";
    // group by orbit
    std::map<std::vector<int>, std::vector<std::vector<int>>> orbits;
    for (auto& [a, c] : terms) {
        std::vector<int> key(a);
        std::sort(key.rbegin(), key.rend());
        orbits[key].push_back(a);
    }
    std::vector<std::vector<int>> keys;
    for (auto& kv : orbits) keys.push_back(kv.first);
    std::sort(keys.begin(), keys.end(), [](const std::vector<int>& x, const std::vector<int>& y) {
        int dx = 0, dy = 0;
        for (int e : x) dx += e;
        for (int e : y) dy += e;
        if (dx != dy) return dx > dy;
        return x > y;
    });
    std::string out;
    for (auto& key : keys) {
        auto mons = orbits[key];
        std::sort(mons.rbegin(), mons.rend());
        const PiCoeff& c = terms.at(mons.front());
        mpq_class q = abs(c.q);
        bool neg = c.q < 0;
        std::string body;
        if (mons.size() == 1) {
            body = monomial_str(mons.front());
        } else {
            body = "(";
            for (size_t i = 0; i < mons.size(); ++i) body += (i ? "+" : "") + monomial_str(mons[i]);
            body += ")";
        }
        std::string pip = pi_power(c.j);
        std::string term;
        if (mons.size() == 1) {
            std::string x = body;
            if (!pip.empty()) x = x.empty() ? pip : x + "·" + pip;
            if (x.empty())
                term = q.get_str();
            else if (q == 1)
                term = x;
            else if (q.get_num() == 1)
                term = x + "/" + q.get_den().get_str();
            else
                term = q.get_str() + "·" + x;
        } else {
            term = q == 1 ? "" : q.get_str() + "·";
            if (!pip.empty()) term += pip + "·";
            term += body;
        }
        if (out.empty())
            out = neg ? "-" + term : term;
        else
            out += neg ? " - " + term : " + " + term;
    }
    return out;
}

HP wp_eval_hp(const PiPoly& p, const std::vector<HP>& L)
{
    if (static_cast<int>(L.size()) != p.top.n) throw DomainError("wp_eval arity mismatch");
    HP s = 0;
    for (auto& [a, c] : p.terms) s += coeff_hp(c) * monomial_hp(a, L);
    return s;
}

double wp_eval(const PiPoly& p, const std::vector<double>& L)
{
    if (static_cast<int>(L.size()) != p.top.n) throw DomainError("wp_eval arity mismatch");
    const double pi2 = pi_v<double>() * pi_v<double>();
    double s = 0;
    for (auto& [a, c] : p.terms) {
        double v = c.q.get_d() * std::pow(pi2, c.j);
        for (size_t i = 0; i < a.size(); ++i) v *= std::pow(L[i] * L[i], a[i]);
        s += v;
    }
    return s;
}

HP wp_recursion_hp(const Topology& t, const std::vector<HP>& L)
{
    if (t.twice_g % 2 != 0) throw DomainError("orientable volumes need integer genus");
    if (!t.stable()) throw DomainError("unstable topology " + t.str());
    if (static_cast<int>(L.size()) != t.n) throw DomainError("length count does not match n");
    for (auto& x : L)
        if (!(x >= 0)) throw DomainError("lengths must be non-negative");
    const int g = t.twice_g / 2, n = t.n;
    if (g == 0 && n == 3) return HP(1);
    const HP L0 = L[0];
    if (!(L0 > 0)) throw DomainError("the recursion divides by L0; use L0 > 0");
    if (g == 1 && n == 1) {
        // torus seed: (1/2) int p D(L,p,p) dp / L
        return moment_D(1, L0) / (8 * L0);
    }
    std::vector<HP> rest(L.begin() + 1, L.end());
    HP rhs = 0;

    // R-terms
    if (n >= 2 && Topology(2 * g, n - 1).stable()) {
        const PiPoly& inner = wp_volume(Topology(2 * g, n - 1));
        for (int i = 0; i < n - 1; ++i) {
            std::map<int, HP> mom;
            for (auto& [a, c] : inner.terms) {
                if (!mom.count(a[0])) mom[a[0]] = moment_R(a[0], L0, rest[size_t(i)]);
                HP v = coeff_hp(c) * mom[a[0]];
                int slot = 1;
                for (int k = 0; k < n - 1; ++k) {
                    if (k == i) continue;
                    v *= pow_int(rest[size_t(k)] * rest[size_t(k)], a[size_t(slot++)]);
                }
                rhs += v;
            }
        }
    }

    std::map<int, HP> dmom;
    auto D = [&](int a, int c) {
        int k = 2 * a + 2 * c + 3;
        if (!dmom.count(k)) dmom[k] = moment_D(k, L0);
        return beta_factor(a, c) * dmom[k];
    };
    HP dterm = 0;
    // connected
    if (g >= 1 && Topology(2 * (g - 1), n + 1).stable()) {
        const PiPoly& inner = wp_volume(Topology(2 * (g - 1), n + 1));
        for (auto& [a, c] : inner.terms) {
            HP v = coeff_hp(c) * D(a[0], a[1]);
            for (int k = 0; k < n - 1; ++k) v *= pow_int(rest[size_t(k)] * rest[size_t(k)], a[size_t(k + 2)]);
            dterm += v;
        }
    }
    // ordered splits
    for (int g1 = 0; g1 <= g; ++g1) {
        for (unsigned mask = 0; mask < (1u << (n - 1)); ++mask) {
            std::vector<int> J1, J2;
            for (int k = 0; k < n - 1; ++k) (mask >> k & 1u ? J1 : J2).push_back(k);
            Topology t1(2 * g1, int(J1.size()) + 1), t2(2 * (g - g1), int(J2.size()) + 1);
            if (!t1.stable() || !t2.stable()) continue;
            const PiPoly& V1 = wp_volume(t1);
            const PiPoly& V2 = wp_volume(t2);
            for (auto& [a, c1] : V1.terms) {
                HP v1 = coeff_hp(c1);
                for (size_t k = 0; k < J1.size(); ++k)
                    v1 *= pow_int(rest[size_t(J1[k])] * rest[size_t(J1[k])], a[k + 1]);
                for (auto& [b, c2] : V2.terms) {
                    HP v = v1 * coeff_hp(c2) * D(a[0], b[0]);
                    for (size_t k = 0; k < J2.size(); ++k)
                        v *= pow_int(rest[size_t(J2[k])] * rest[size_t(J2[k])], b[k + 1]);
                    dterm += v;
                }
            }
        }
    }
    rhs += dterm / 2;
    return rhs / L0;
}

const PiPoly& wp_volume(const Topology& t, ReconstructionReport* rep)
{
    if (t.twice_g % 2 != 0) throw DomainError("orientable volumes need integer genus");
    if (!t.stable()) throw DomainError("unstable topology " + t.str());
    if (t.dim_half() > 6) throw DomainError("wp_volume is limited to 3g-3+n <= 6");
    {
        std::lock_guard<std::mutex> lk(g_mutex);
        auto it = g_cache.find(t);
        if (it != g_cache.end()) {
            if (rep) *rep = g_reports[t];
            return it->second;
        }
    }
    PiPoly p;
    ReconstructionReport r;
    if (t == Topology(0, 3)) {
        p.top = t;
        p.terms[{0, 0, 0}] = PiCoeff{1, 0};
        r.unknowns = r.nodes = 0;
    } else {
        // inner polynomials are built (and locked) inside the recursion, so do not hold the lock
        p = reconstruct(t, r);
    }
    std::lock_guard<std::mutex> lk(g_mutex);
    auto [it, inserted] = g_cache.emplace(t, std::move(p));
    if (inserted) g_reports[t] = r;
    if (rep) *rep = g_reports[t];
    return it->second;
}

} // namespace kvol
