#include "kvol/chi1.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace kvol {

namespace {
const double kPi = pi_v<double>();
}

int Topology::dim_half() const
{
    if (twice_g % 2 != 0) throw DomainError("dimension count requires integer genus");
    return 3 * (twice_g / 2) - 3 + n;
}

std::string Topology::str() const
{
    std::ostringstream os;
    if (twice_g % 2 == 0)
        os << "(" << twice_g / 2 << "," << n << ")";
    else
        os << "(" << twice_g << "/2," << n << ")";
    return os.str();
}

KBState::KBState(double s0_, double s1_, double L_, const RegEps& e)
    : s0(s0_), s1(s1_), L(L_), eps(e.value())
{
    double sh = e.sinh_half();
    if (s0 < sh * (1 - 1e-15) || s1 < sh * (1 - 1e-15))
        throw DomainError("Klein bottle state requires s0, s1 >= sinh(eps/2)");
    if (!(L >= 0)) throw DomainError("boundary length must be non-negative");
}

double v_plus_chi1(const Topology& t, const std::vector<double>& lengths)
{
    if (static_cast<int>(lengths.size()) != t.n) throw DomainError("length count does not match n");
    if (t.twice_g == 0 && t.n == 3) return 1.0;
    if (t.twice_g == 2 && t.n == 1) return lengths[0] * lengths[0] / 48 + kPi * kPi / 12;
    throw DomainError("v_plus_chi1 supports (0,3) and (1,1) only");
}

double v_minus_half_2(double L1, double L2, const RegEps& e)
{
    if (!(L1 >= 0) || !(L2 >= 0)) throw DomainError("lengths must be non-negative");
    return log_cosh((L1 + L2) / 4) + log_cosh((L1 - L2) / 4) - 2 * e.log_sinh_half();
}

HalfTwoOracle v_minus_half_2_oracle(double L1, double L2, const RegEps& e)
{
    double eps = e.value();
    double rhs = std::cosh(L1 / 2) + std::cosh(L2 / 2);
    double ell_star = 2 * std::asinh(std::sqrt(rhs / 2));
    if (ell_star <= eps) throw DomainError("fundamental domain is empty for these lengths");
    auto meas = [](double l) { return 1.0 / std::tanh(l / 2); };
    double e1 = 0, e2 = 0;
    double a = integrate(meas, eps, ell_star, 1e-13, &e1);
    double lam = lambda_upper(L1, L2, e);
    double b = 0.5 * integrate(meas, eps, lam, 1e-13, &e2);
    return {a, b, ell_star, e1 + e2};
}

double v_minus_1_1(double L, const RegEps& e)
{
    if (!(L >= 0)) throw DomainError("length must be non-negative");
    double r = std::exp(2 * (log_cosh(L / 4) - e.log_sinh_half()));
    return -dilog(-r);
}

double v_minus_1_1_reflected(double L, const RegEps& e)
{
    if (!(L >= 0)) throw DomainError("length must be non-negative");
    double l = e.log_sinh_half() - log_cosh(L / 4);
    return 2 * l * l + kPi * kPi / 6 + dilog(-std::exp(2 * l));
}

double v_minus_1_1_oracle_integrand(double s0, double L)
{
    double c = std::cosh(L / 4);
    return std::log1p(c * c / (s0 * s0)) / s0;
}

// 2 int_s^inf (ds0/s0) log((s0^2+c^2)/s0^2), mapped by t = 1/s0 onto (0, 1/s].
QuadResult v_minus_1_1_oracle(double L, const RegEps& e)
{
    if (!(L >= 0)) throw DomainError("length must be non-negative");
    double c = std::cosh(L / 4);
    double s = e.sinh_half();
    auto f = [c](double t) {
        if (t == 0) return 0.0;
        return std::log1p(c * c * t * t) / t;
    };
    double err = 0;
    // split at t = 1/c where the integrand changes regime
    double tb = std::min(1.0 / c, 1.0 / s);
    double v = integrate(f, 0.0, tb, 1e-14, &err);
    double err2 = 0;
    if (tb < 1.0 / s) v += integrate(f, tb, 1.0 / s, 1e-14, &err2);
    return {2 * v, 2 * (err + err2)};
}

double kb_two_sided_length(const KBState& st)
{
    double c = std::cosh(st.L / 4);
    double arg = (st.s0 * st.s0 + st.s1 * st.s1 + c * c) / (2 * st.s0 * st.s1);
    return 2 * std::acosh(arg);
}

KBSequence kb_sequence(const KBState& st, int lo, int hi)
{
    if (lo > 0 || hi < 1) throw DomainError("window must contain indices 0 and 1");
    if (hi - lo > 200) throw DomainError("window too wide for the doubly exponential sequence");
    double c2 = std::cosh(st.L / 4) * std::cosh(st.L / 4);
    KBSequence seq{lo, hi, std::vector<double>(static_cast<size_t>(hi - lo + 1))};
    auto idx = [&](int i) { return static_cast<size_t>(i - lo); };
    seq.s[idx(0)] = st.s0;
    seq.s[idx(1)] = st.s1;
    for (int i = 1; i < hi; ++i) {
        double v = (seq.s[idx(i)] * seq.s[idx(i)] + c2) / seq.s[idx(i - 1)];
        if (!std::isfinite(v) || v > 1e150) throw DomainError("sequence overflow; shrink the window");
        seq.s[idx(i + 1)] = v;
    }
    for (int i = 0; i > lo; --i) {
        double v = (seq.s[idx(i)] * seq.s[idx(i)] + c2) / seq.s[idx(i + 1)];
        if (!std::isfinite(v) || v > 1e150) throw DomainError("sequence overflow; shrink the window");
        seq.s[idx(i - 1)] = v;
    }
    return seq;
}

KBResidual kb_mcshane_norbury_residual(const KBState& st, int K)
{
    if (K < 1) throw DomainError("truncation must be positive");
    double ell = kb_two_sided_length(st);
    KBSequence seq = kb_sequence(st, -K, K + 1);
    KBResidual out{0, std::numeric_limits<double>::infinity(), {}};
    double sum = kernel_D(st.L, ell, ell);
    for (int i = -K; i <= K; ++i) {
        double li = 2 * std::asinh(seq.at(i));
        double lj = 2 * std::asinh(seq.at(i + 1));
        double f = kernel_F(st.L, li, lj);
        out.F_terms.push_back(f);
        out.min_F = std::min(out.min_F, f);
        sum += f;
    }
    out.residual = std::abs(st.L - sum);
    return out;
}

namespace {
double log_binom(int n, int k)
{
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}
} // namespace

double u_coeff(int k, const RegEps& e)
{
    if (k < 1) throw DomainError("u_coeff requires k >= 1");
    double l2s = e.log_two_sinh_half();
    double h = 0;
    for (int j = 1; j < k; ++j) h += 1.0 / j;
    double sum = 0;
    for (int j = 1; j <= k; ++j)
        sum += std::exp(log_binom(k + j - 1, 2 * j - 1) + 2 * j * l2s - 2 * std::log(double(j)));
    return 4.0 / k * l2s + 4.0 / k * h + sum;
}

Expansion v_minus_1_1_expansion(double L, const RegEps& e, int K)
{
    double eps = e.value();
    if (!(L > 2 * eps)) throw DomainError("expansion requires L > 2 eps");
    if (K < 1) throw DomainError("truncation must be positive");
    double l2s = e.log_two_sinh_half();
    auto term = [&](int k) {
        double sgn = (k % 2 == 0) ? 1.0 : -1.0;
        return sgn * (u_coeff(k, e) - L / k) * std::exp(-0.5 * k * L);
    };
    double v = L * L / 8 - L * l2s + kPi * kPi / 6 + 2 * l2s * l2s;
    double mag = L * L / 8 + std::abs(L * l2s) + kPi * kPi / 6 + 2 * l2s * l2s;
    for (int k = 1; k <= K; ++k) {
        double t = term(k);
        v += t;
        mag += std::abs(t);
    }
    double r = std::exp(-(L / 2 - eps));
    // absolute tail: explicit block, then geometric remainder
    double tail = 0, last = 0;
    const int M = 200;
    for (int j = 1; j <= M; ++j) {
        last = std::abs(term(K + j));
        tail += last;
    }
    tail += last * r / (1 - r);
    // plus rounding of the partial sum
    tail += 8 * std::numeric_limits<double>::epsilon() * mag;
    return {v, tail, r};
}

double total_chi1(const Topology& t, const std::vector<double>& L, const RegEps& e, double b)
{
    if (t.euler() != -1) throw DomainError("total_chi1 requires Euler characteristic -1");
    if (static_cast<int>(L.size()) != t.n) throw DomainError("length count does not match n");
    if (t.twice_g == 0) return 1.0;
    if (t.twice_g == 1) {
        double l = log_add_exp(log_cosh(L[0] / 2), log_cosh(L[1] / 2)) + std::log(2.0);
        return b * (l - 2 * e.log_two_sinh_half());
    }
    double vp = L[0] * L[0] / 48 + kPi * kPi / 12;
    if (b == 0) return vp;
    return (1 + b) * vp - b * b * (vp - v_minus_1_1(L[0], e));
}

double v_half_1_aux(double L)
{
    if (!(L > 0)) throw DomainError("v_half_1_aux has a pole at L = 0");
    return 1.0 / (2 * L * std::tanh(L / 4));
}

} // namespace kvol
