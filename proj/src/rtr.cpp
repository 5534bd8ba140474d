#include "kvol/rtr.hpp"
#include "kvol/identities.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace kvol {

namespace {

const double kPi = pi_v<double>();
const cplx I(0.0, 1.0);

double factorial(int n)
{
    double r = 1;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

double sign_k(int k) { return k % 2 == 0 ? 1.0 : -1.0; }

cplx cot2pi(cplx z) { return std::cos(2.0 * kPi * z) / std::sin(2.0 * kPi * z); }

cplx omega01_deriv(cplx z)
{
    return -std::sin(2.0 * kPi * z) / (2.0 * kPi) - z * std::cos(2.0 * kPi * z);
}

// (z+u)^-2 + (z-u)^-2 and its z-derivative
cplx dd(cplx z, cplx u) { return 1.0 / ((z + u) * (z + u)) + 1.0 / ((z - u) * (z - u)); }
cplx dd_deriv(cplx z, cplx u)
{
    return -2.0 / ((z + u) * (z + u) * (z + u)) - 2.0 / ((z - u) * (z - u) * (z - u));
}

// d/dz [dd(z,u) / (4 w(z))]
cplx d_dd_over_w(cplx z, cplx u)
{
    cplx w = omega01_coeff(z), wp = omega01_deriv(z);
    return dd_deriv(z, u) / (4.0 * w) - dd(z, u) * wp / (4.0 * w * w);
}

cplx residue(const std::function<cplx(cplx)>& f, cplx a, double r, int N = 64)
{
    return LocalJet::from_function(f, a, r, 1, 0, N).residue();
}

double lattice_radius(cplx a, std::initializer_list<cplx> avoid, double cap)
{
    double r = cap;
    for (cplx z : avoid) r = std::min(r, std::abs(a - z) / 3);
    return r;
}

} // namespace

RefinedParams::RefinedParams(double b_, const RegEps& e, int K_, int KQ_)
    : b(b_), bb(-b_ / std::sqrt(1 + b_)), eps(e), K(K_), KQ(KQ_ < 0 ? K_ + 100 : KQ_)
{
    if (!(b_ >= 0) || !std::isfinite(b_)) throw DomainError("b must be non-negative");
    if (K_ < 1) throw DomainError("lattice truncation K must be >= 1");
    if (KQ < K) throw DomainError("series truncation must be at least K");
}

LocalJet LocalJet::from_function(const std::function<cplx(cplx)>& f, cplx center, double radius,
                                 int neg, int pos, int N)
{
    if (!(radius > 0) || neg < 0 || pos < 0 || N < 8) throw DomainError("bad jet window");
    LocalJet j;
    j.center_ = center;
    j.neg_ = neg;
    j.pos_ = pos;
    j.c_.assign(static_cast<size_t>(neg + pos + 1), cplx(0));
    std::vector<cplx> vals(static_cast<size_t>(N)), us(static_cast<size_t>(N));
    for (int n = 0; n < N; ++n) {
        cplx u = radius * std::exp(I * (2.0 * kPi * n / N));
        us[size_t(n)] = u;
        vals[size_t(n)] = f(center + u);
    }
    for (int m = -neg; m <= pos; ++m) {
        cplx acc = 0;
        for (int n = 0; n < N; ++n) acc += vals[size_t(n)] * std::pow(us[size_t(n)], -m);
        j.c_[size_t(m + neg)] = acc / double(N);
    }
    return j;
}

cplx LocalJet::coeff(int power) const
{
    if (power < -neg_ || power > pos_) throw DomainError("jet window too small");
    return c_[size_t(power + neg_)];
}

LocalJet LocalJet::derivative() const
{
    LocalJet d;
    d.center_ = center_;
    d.neg_ = neg_ + 1;
    d.pos_ = std::max(pos_ - 1, 0);
    d.c_.assign(size_t(d.neg_ + d.pos_ + 1), cplx(0));
    for (int m = -d.neg_; m <= d.pos_; ++m) {
        int src = m + 1;
        if (src < -neg_ || src > pos_) continue;
        d.c_[size_t(m + d.neg_)] = double(src) * coeff(src);
    }
    return d;
}

cplx DifferentialSum::value(cplx z) const
{
    cplx v = 0;
    for (auto& t : poles) v += t.coeff / std::pow(z - 0.5 * t.twice_center, t.order);
    for (auto& p : pieces) v += p.f(z);
    return v;
}

std::vector<cplx> DifferentialSum::principal_part(int twice_center, int max_order) const
{
    std::vector<cplx> a(size_t(max_order + 1), cplx(0));
    for (auto& t : poles) {
        if (t.twice_center != twice_center) continue;
        if (t.order > max_order) throw DomainError("pole order exceeds jet window");
        a[size_t(t.order)] += t.coeff;
    }
    for (auto& p : pieces) {
        LocalJet j = LocalJet::from_function(p.f, 0.5 * twice_center, 0.2, max_order, 0, 96);
        for (int m = 1; m <= max_order; ++m) a[size_t(m)] += j.coeff(-m);
    }
    return a;
}

std::string DifferentialSum::render() const
{
    std::vector<PoleTerm> sorted = poles;
    std::sort(sorted.begin(), sorted.end(), [](const PoleTerm& x, const PoleTerm& y) {
        return x.twice_center != y.twice_center ? x.twice_center < y.twice_center : x.order > y.order;
    });
    std::ostringstream os;
    os.precision(12);
    for (auto& t : sorted) {
        os << t.coeff << " dz/(z";
        if (t.twice_center > 0) os << "-" << t.twice_center << "/2";
        if (t.twice_center < 0) os << "+" << -t.twice_center << "/2";
        os << ")^" << t.order << "\n";
    }
    for (auto& p : pieces) os << "+ [" << p.name << "]\n";
    os << "(K = " << K << ")\n";
    return os.str();
}

double LaplaceSum::eval(const std::vector<double>& L) const
{
    if (static_cast<int>(L.size()) != nvars) throw DomainError("LaplaceSum arity mismatch");
    double s = 0;
    for (auto& t : terms) {
        double v = t.coef, ex = 0;
        for (int i = 0; i < nvars; ++i) {
            v *= std::pow(L[size_t(i)], t.pow[size_t(i)]);
            ex -= 0.5 * t.half_decay[size_t(i)] * L[size_t(i)];
        }
        s += v * std::exp(ex);
    }
    return s;
}

double LaplaceSum::tail_estimate(const std::vector<double>& L) const
{
    if (K < 2) return std::numeric_limits<double>::infinity();
    double shell[2] = {0, 0};
    for (auto& t : terms) {
        int s = 0;
        for (int k : t.half_decay) s = std::max(s, std::abs(k));
        if (s != K && s != K - 1) continue;
        double v = t.coef, ex = 0;
        for (int i = 0; i < nvars; ++i) {
            v *= std::pow(L[size_t(i)], t.pow[size_t(i)]);
            ex -= 0.5 * t.half_decay[size_t(i)] * L[size_t(i)];
        }
        shell[s == K ? 1 : 0] += v * std::exp(ex);
    }
    double a = std::abs(shell[0]), c = std::abs(shell[1]);
    if (c == 0) return 0;
    if (a == 0) return c;
    double rho = c / a;
    if (rho >= 1) return std::numeric_limits<double>::infinity();
    return c * rho / (1 - rho);
}

std::string LaplaceSum::render() const
{
    std::ostringstream os;
    os.precision(15);
    for (auto& t : terms) {
        os << t.coef;
        for (int i = 0; i < nvars; ++i) {
            if (t.pow[size_t(i)] > 0) os << "*L" << i + 1 << "^" << t.pow[size_t(i)];
            if (t.half_decay[size_t(i)] != 0) os << "*exp(-" << t.half_decay[size_t(i)] << "*L" << i + 1 << "/2)";
        }
        os << "   [" << t.source << "]\n";
    }
    return os.str();
}

cplx omega01_coeff(cplx z) { return -z * std::sin(2.0 * kPi * z) / (2.0 * kPi); }

cplx exp_pole_series(cplx z, double eps, int KQ)
{
    cplx v;
    if (std::abs(z) < 1e-6) {
        cplx t = 2.0 * eps * z;
        v = 2.0 * eps * (1.0 + t * t / 6.0);
    } else {
        v = std::sinh(2.0 * eps * z) / z;
    }
    for (int j = 1; j <= KQ; ++j) {
        double c = 0.5 * j;
        v += std::exp(2.0 * (z - c) * eps) / (z - c) - std::exp(-2.0 * (z + c) * eps) / (z + c);
    }
    return v;
}

cplx exp_pole_series_deriv(cplx z, double eps, int KQ)
{
    cplx v;
    if (std::abs(z) < 1e-4) {
        // d/dz sinh(2 eps z)/z = (2eps)^3 z/3 + O(z^3)
        v = std::pow(2.0 * eps, 3) * z / 3.0;
    } else {
        v = (2.0 * eps * std::cosh(2.0 * eps * z) * z - std::sinh(2.0 * eps * z)) / (z * z);
    }
    for (int j = 1; j <= KQ; ++j) {
        double c = 0.5 * j;
        cplx a = z - c, b = z + c;
        v += std::exp(2.0 * a * eps) * (2.0 * eps / a - 1.0 / (a * a));
        v -= std::exp(-2.0 * b * eps) * (-2.0 * eps / b - 1.0 / (b * b));
    }
    return v;
}

cplx omega_half_1_value(cplx z, const RefinedParams& p)
{
    return -p.bb * kPi * cot2pi(z) + 0.5 * p.bb * exp_pole_series(z, p.eps.value(), p.K);
}

DifferentialSum omega_half_1(const RefinedParams& p)
{
    DifferentialSum d;
    d.K = p.K;
    double bb = p.bb, eps = p.eps.value();
    int K = p.K;
    d.pieces.push_back({"-(b/2) dy/y", [bb](cplx z) { return -bb * kPi * cot2pi(z); }, 1});
    d.pieces.push_back({"(b/2) exponential poles",
                        [bb, eps, K](cplx z) { return 0.5 * bb * exp_pole_series(z, eps, K); }, 1});
    return d;
}

cplx omega_half_1_via_varpi(cplx z, const RefinedParams& p)
{
    double eps = p.eps.value();
    auto varpi = [&](cplx x) {
        cplx v = std::exp(-2.0 * eps * x) / (2.0 * x);
        for (int k = 1; k <= p.K; ++k) v += std::exp(-2.0 * (x + 0.5 * k) * eps) / (x + 0.5 * k);
        return v;
    };
    // pullback of varpi(x) dx under x -> -x carries a sign
    cplx delta = varpi(z) + varpi(-z);
    return 0.5 * p.bb * (-2.0 * kPi * cot2pi(z) - delta);
}

std::vector<ResidueEntry> omega_half_1_residues(const RefinedParams& p)
{
    std::vector<ResidueEntry> out;
    auto f = [&](cplx z) { return omega_half_1_value(z, p); };
    for (int tc = -p.K; tc <= p.K; ++tc) {
        LocalJet j = LocalJet::from_function(f, 0.5 * tc, 0.2, 2, 0, 64);
        out.push_back({tc, j.residue()});
    }
    return out;
}

cplx omega_half_2_closed(cplx z1, cplx z2, const RefinedParams& p)
{
    double l2s = p.eps.log_two_sinh_half();
    cplx v = 2.0 * p.bb * l2s / (z1 * z1 * z2 * z2);
    v -= p.bb * d_dd_over_w(z1, z2);
    v -= p.bb * d_dd_over_w(z2, z1);
    for (int k = 1; k <= p.K; ++k) {
        double a = 0.5 * k;
        cplx P1 = 1.0 / ((z1 - a) * (z1 - a)) + 1.0 / ((z1 + a) * (z1 + a));
        cplx P2 = 1.0 / ((z2 - a) * (z2 - a)) + 1.0 / ((z2 + a) * (z2 + a));
        v += 0.5 * p.bb * sign_k(k) / k * P1 * P2;
    }
    return v;
}

double c_coeff(int k, const RegEps& e)
{
    if (k < 1) throw DomainError("C_k needs k >= 1");
    double eps = e.value(), s = sign_k(k), l2s = e.log_two_sinh_half();
    double h = 0;
    for (int m = 1; m < k; ++m) h += 2.0 * std::cosh(m * eps) / m;
    return 2.0 * s / k * l2s - s / (double(k) * k) + s / (2.0 * k * k) * 2.0 * std::cosh(k * eps) + s / k * h;
}

CTilde ctilde_coeff(int k, const RegEps& e, int K)
{
    if (k < 1 || K <= k) throw DomainError("C-tilde needs 1 <= k < K");
    double eps = e.value(), s = sign_k(k), kk = double(k) * k;
    double v = s / k * eps - s / (2.0 * kk) - s / (2.0 * kk) * std::exp(-2.0 * eps * k) + 1 / kk +
               s / 2.0 * 2.0 * std::sinh(eps * k) / kk;
    double err = 0;
    v -= 2.0 * alternating_sum(K, k, [k](int i) { return 1.0 / ((double(i) - k) * (double(i) + k)); }, &err);
    double sj = 0;
    for (int j = 1; j <= K; ++j) {
        if (j == k) continue;
        sj += std::exp(-(j + k) * eps) / (k * double(j + k)) + std::exp(-(j - k) * eps) / (k * double(j - k));
    }
    v -= s * sj;
    double geo = 2.0 * std::exp(-(K + 1 - k) * eps) / (k * (K + 1.0 - k) * (1 - std::exp(-eps)));
    return {v, 2.0 * err + geo};
}

cplx omega_1_1_derivative_piece(cplx z, const RefinedParams& p)
{
    double eps = p.eps.value();
    cplx E = exp_pole_series(z, eps, p.KQ), Ep = exp_pole_series_deriv(z, eps, p.KQ);
    cplx w = omega01_coeff(z), wp = omega01_deriv(z);
    // -b d[ b E / (4 w) ]
    return -p.bb * p.bb * (Ep / (4.0 * w) - E * wp / (4.0 * w * w));
}

DifferentialSum omega_1_1_closed(const RefinedParams& p)
{
    DifferentialSum d;
    d.K = p.K;
    double b2 = p.bb * p.bb, l2s = p.eps.log_two_sinh_half();
    double pi2 = kPi * kPi;
    d.poles.push_back({0, 4, (1 + 5 * b2) / 8, "origin"});
    d.poles.push_back({0, 2, (1 + 5 * b2) / 8 * 2.0 * pi2 / 3 - b2 * (pi2 / 3 - 2.0 * l2s * l2s), "origin"});
    for (int k = 1; k <= p.K; ++k) {
        double s = sign_k(k), c = c_coeff(k, p.eps);
        d.poles.push_back({k, 3, b2 * s / k, "lattice"});
        d.poles.push_back({-k, 3, -b2 * s / k, "lattice"});
        d.poles.push_back({k, 2, b2 * c, "lattice C_k"});
        d.poles.push_back({-k, 2, b2 * c, "lattice C_k"});
    }
    RefinedParams pc = p;
    d.pieces.push_back({"-b d[Delta omega_{1/2,1} / (4 omega_{0,1})]",
                        [pc](cplx z) { return omega_1_1_derivative_piece(z, pc); }, 3});
    return d;
}

RecomputeResult recompute_half_2(cplx z0, cplx z1, const RefinedParams& p)
{
    double eps = p.eps.value();
    double bb = p.bb;
    auto h = [z0](cplx z) { return 1.0 / (z0 - z) - 1.0 / (z0 + z); };
    auto pfun = [bb](cplx z) { return -bb * kPi * cot2pi(z); };
    auto qfun = [&](cplx z) { return 0.5 * bb * exp_pole_series(z, eps, p.KQ); };
    auto r_anti = [&](cplx z) {
        cplx d = dd(z, z1), dp = dd_deriv(z, z1);
        return pfun(z) * d + bb * (0.5 * dp - 0.5 * d / z);
    };
    auto r_full = [&](cplx z) {
        cplx d = dd(z, z1);
        cplx a = 1.0 / ((z + z1) * (z + z1));
        cplx ap = -2.0 / ((z + z1) * (z + z1) * (z + z1));
        return (pfun(z) + qfun(z)) * d + bb * (ap - a / z);
    };
    auto anti = [&](cplx z) { return h(z) / (4.0 * omega01_coeff(z)) * 2.0 * r_anti(z); };
    auto full = [&](cplx z) { return h(z) / (4.0 * omega01_coeff(z)) * r_full(z); };

    RecomputeResult out{};
    out.lattice.resize(size_t(p.K));
    cplx total = 0;
    for (int k = 1; k <= p.K; ++k) {
        cplx a = 0.5 * k;
        double r = lattice_radius(a, {z0, z1}, 0.1);
        out.lattice[size_t(k - 1)] = residue(anti, a, r);
        total += out.lattice[size_t(k - 1)];
    }
    auto near_lattice = [](cplx z) {
        double x = std::round(2.0 * z.real()) / 2;
        return std::abs(z - x);
    };
    double r0 = std::min({0.05, near_lattice(z0) / 3, std::abs(z0 - z1) / 3});
    double r1 = std::min({0.05, near_lattice(z1) / 3, std::abs(z0 - z1) / 3});
    out.at_points = residue(anti, z0, r0) + residue(anti, z1, r1);
    double ro = std::min({0.1, std::abs(z0) / 3, std::abs(z1) / 3});
    out.at_origin = -residue(full, 0.0, ro);
    out.total = total + out.at_points + out.at_origin;
    return out;
}

RecomputeResult recompute_1_1(cplx z0, const RefinedParams& p)
{
    double eps = p.eps.value();
    double bb = p.bb;
    auto h = [z0](cplx z) { return 1.0 / (z0 - z) - 1.0 / (z0 + z); };
    auto pfun = [bb](cplx z) { return -bb * kPi * cot2pi(z); };
    auto pder = [bb](cplx z) {
        cplx s = std::sin(2.0 * kPi * z);
        return 2.0 * bb * kPi * kPi / (s * s);
    };
    auto r_anti = [&](cplx z) {
        cplx q = 0.5 * bb * exp_pole_series(z, eps, p.KQ);
        cplx qp = 0.5 * bb * exp_pole_series_deriv(z, eps, p.KQ);
        return 2.0 * pfun(z) * q + bb * (qp - q / z);
    };
    auto r_full = [&](cplx z) {
        cplx q = 0.5 * bb * exp_pole_series(z, eps, p.KQ);
        cplx qp = 0.5 * bb * exp_pole_series_deriv(z, eps, p.KQ);
        cplx y = pfun(z) + q;
        return y * y + 1.0 / (4.0 * z * z) + bb * (pder(z) + qp - y / z);
    };
    auto anti = [&](cplx z) { return h(z) / (4.0 * omega01_coeff(z)) * 2.0 * r_anti(z); };
    auto full = [&](cplx z) { return h(z) / (4.0 * omega01_coeff(z)) * r_full(z); };

    RecomputeResult out{};
    out.lattice.resize(size_t(p.K));
    cplx total = 0;
    for (int k = 1; k <= p.K; ++k) {
        cplx a = 0.5 * k;
        double r = lattice_radius(a, {z0}, 0.1);
        out.lattice[size_t(k - 1)] = residue(anti, a, r);
        total += out.lattice[size_t(k - 1)];
    }
    double x = std::round(2.0 * z0.real()) / 2;
    double r0 = std::min(0.05, std::abs(z0 - x) / 3);
    out.at_points = residue(anti, z0, r0);
    double ro = std::min(0.1, std::abs(z0) / 3);
    out.at_origin = -residue(full, 0.0, ro);
    out.total = total + out.at_points + out.at_origin;
    return out;
}

std::vector<cplx> rtr_recursion_recompute(const Topology& t, const RefinedParams& p,
                                          const std::vector<std::vector<double>>& samples)
{
    std::vector<cplx> out;
    if (t == Topology(1, 2)) {
        for (auto& s : samples) {
            if (s.size() != 2) throw DomainError("(1/2,2) samples need two points");
            out.push_back(recompute_half_2(s[0], s[1], p).total);
        }
    } else if (t == Topology(2, 1)) {
        for (auto& s : samples) {
            if (s.size() != 1) throw DomainError("(1,1) samples need one point");
            out.push_back(recompute_1_1(s[0], p).total);
        }
    } else {
        throw DomainError("recursion recompute supports (1/2,2) and (1,1) only");
    }
    return out;
}

cplx eta_projection_numeric(double a, int k, cplx z1)
{
    auto f = [=](cplx z) { return (1.0 / (z1 - z) - 1.0 / (z1 + z)) / std::pow(z - a, k + 1); };
    double r = std::min({0.1, std::abs(z1 - a) / 3, std::abs(z1 + a) / 3});
    return residue(f, a, r);
}

cplx eta_projection_closed(double a, int k, cplx z1)
{
    return 1.0 / std::pow(z1 - a, k + 1) - sign_k(k) / std::pow(z1 + a, k + 1);
}

LaplaceSum termwise_inverse_laplace(const DifferentialSum& d)
{
    const int M = 6;
    LaplaceSum out;
    out.nvars = 1;
    out.K = d.K;
    for (int tc = 1; tc <= d.K; ++tc) {
        std::vector<cplx> a = d.principal_part(tc, M);
        double scale = 1;
        for (auto& t : d.poles)
            if (t.twice_center == tc) scale = std::max(scale, std::abs(t.coeff));
        for (int m = 1; m <= M; ++m)
            if (std::abs(a[size_t(m)]) > 1e-8 * scale)
                throw DomainError("pole at positive center " + std::to_string(tc) + "/2 does not cancel");
    }
    for (int k = 0; k <= d.K; ++k) {
        std::vector<cplx> a = d.principal_part(-k, M);
        for (int m = 1; m <= M; ++m) {
            double c = a[size_t(m)].real();
            if (c == 0) continue;
            out.terms.push_back({c / factorial(m - 1), {m - 1}, {k}, k == 0 ? "z=0" : "z=-k/2"});
        }
    }
    return out;
}

LaplaceSum double_inverse_laplace(const std::function<cplx(cplx, cplx)>& f, int K, int M)
{
    const int N = 64;
    const double r1 = 0.2, r2 = 0.05;
    LaplaceSum out;
    out.nvars = 2;
    out.K = K;
    std::vector<cplx> u1(N);
    for (int n = 0; n < N; ++n) u1[size_t(n)] = r1 * std::exp(I * (2.0 * kPi * n / N));

    // outer principal part of z1 -> P_m(z1), returns Q[m][j]
    auto outer = [&](cplx c, const std::function<std::vector<cplx>(cplx)>& inner) {
        std::vector<std::vector<cplx>> Q(size_t(M), std::vector<cplx>(size_t(M), 0));
        for (int n = 0; n < N; ++n) {
            std::vector<cplx> P = inner(c + u1[size_t(n)]);
            cplx up = u1[size_t(n)];
            for (int j = 0; j < M; ++j) {
                for (int m = 0; m < M; ++m) Q[size_t(m)][size_t(j)] += P[size_t(m)] * up;
                up *= u1[size_t(n)];
            }
        }
        for (auto& row : Q)
            for (auto& x : row) x /= double(N);
        return Q;
    };

    for (int k2 = 0; k2 <= K; ++k2) {
        double u = -0.5 * k2;
        auto inner = [&](cplx z1) {
            LocalJet j = LocalJet::from_function([&](cplx z2) { return f(z1, z2); }, u, r2, M, 0, N);
            std::vector<cplx> P(static_cast<size_t>(M));
            for (int m = 0; m < M; ++m) P[size_t(m)] = j.coeff(-m - 1);
            return P;
        };
        std::vector<int> outs = {0};
        if (k2 != 0) outs.push_back(k2);
        for (int k1 : outs) {
            auto Q = outer(-0.5 * k1, inner);
            for (int m = 0; m < M; ++m)
                for (int j = 0; j < M; ++j) {
                    double c = Q[size_t(m)][size_t(j)].real() / (factorial(m) * factorial(j));
                    if (c == 0) continue;
                    out.terms.push_back({c, {j, m}, {k1, k2}, "z2 fixed pole"});
                }
        }
    }
    for (int k1 = 0; k1 <= K; ++k1) {
        auto inner = [&](cplx z1) {
            LocalJet j = LocalJet::from_function([&](cplx t) { return f(z1, -z1 + t); }, 0.0, r2, M, 0, N);
            std::vector<cplx> P(static_cast<size_t>(M));
            for (int m = 0; m < M; ++m) P[size_t(m)] = j.coeff(-m - 1);
            return P;
        };
        auto Q = outer(-0.5 * k1, inner);
        for (int m = 0; m < M; ++m)
            for (int j = 0; j < M; ++j) {
                double c = Q[size_t(m)][size_t(j)].real() / (factorial(m) * factorial(j));
                if (c == 0) continue;
                // (L1-L2)^j L2^m exp(-k1 (L1-L2)/2)
                for (int a = 0; a <= j; ++a) {
                    double bin = factorial(j) / (factorial(a) * factorial(j - a));
                    double sg = (j - a) % 2 == 0 ? 1.0 : -1.0;
                    out.terms.push_back({c * bin * sg, {a, m + j - a}, {k1, -k1}, "anti-diagonal"});
                }
            }
    }
    return out;
}

cplx toy_antidiagonal(cplx z1, cplx z2)
{
    cplx num = std::pow(z1, 4) + 3.0 * std::pow(z1, 3) * z2 + 3.0 * z1 * z1 * z2 * z2 +
               3.0 * z1 * std::pow(z2, 3) + std::pow(z2, 4);
    return num / (2.0 * std::pow(z1, 3) * std::pow(z2, 3) * std::pow(z1 + z2, 3));
}

DictionaryCheck check_dictionary_chi1(const Topology& t, const std::vector<double>& lengths,
                                      const RegEps& e, double b, int K)
{
    if (static_cast<int>(lengths.size()) != t.n) throw DomainError("length count does not match n");
    if (t == Topology(1, 2)) {
        double L1 = std::max(lengths[0], lengths[1]), L2 = std::min(lengths[0], lengths[1]);
        if (K < 0) {
            double gap = std::max(L1 - L2, 0.25);
            K = std::min(200, int(std::ceil(2.0 * 34 / gap)));
        }
        RefinedParams p(b, e, K);
        LaplaceSum ls = double_inverse_laplace(
            [&](cplx z1, cplx z2) { return omega_half_2_closed(z1, z2, p); }, K, 6);
        double fac = std::sqrt(1 + b);
        double rhs = fac * ls.eval({L1, L2});
        double lhs = L1 * L2 * total_chi1(t, {L1, L2}, e, b);
        return {lhs, rhs, std::abs(lhs - rhs), fac * ls.tail_estimate({L1, L2})};
    }
    if (t == Topology(2, 1)) {
        double L = lengths[0], eps = e.value();
        if (!(L > 2.0 * eps)) throw DomainError("the termwise expansion needs L > 2 eps");
        if (K < 0) K = std::min(400, int(std::ceil(34 / (L / 2 - eps))));
        RefinedParams p(b, e, K);
        LaplaceSum ls = termwise_inverse_laplace(omega_1_1_closed(p));
        double rhs = (1 + b) * ls.eval({L});
        double lhs = L * total_chi1(t, {L}, e, b);
        return {lhs, rhs, std::abs(lhs - rhs), (1 + b) * ls.tail_estimate({L})};
    }
    throw DomainError("dictionary check covers (1/2,2) and (1,1)");
}

} // namespace kvol
