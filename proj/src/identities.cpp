#include "kvol/identities.hpp"
#include "kvol/specfun.hpp"

#include <cmath>
#include <sstream>
#include <vector>

namespace kvol {

LaurentPoly LaurentPoly::monomial(int e, const mpq_class& c)
{
    LaurentPoly p;
    if (c != 0) p.c_[e] = c;
    return p;
}

void LaurentPoly::prune()
{
    for (auto it = c_.begin(); it != c_.end();) {
        if (it->second == 0)
            it = c_.erase(it);
        else
            ++it;
    }
}

LaurentPoly& LaurentPoly::operator+=(const LaurentPoly& o)
{
    for (auto& [e, v] : o.c_) c_[e] += v;
    prune();
    return *this;
}

LaurentPoly& LaurentPoly::operator-=(const LaurentPoly& o)
{
    for (auto& [e, v] : o.c_) c_[e] -= v;
    prune();
    return *this;
}

LaurentPoly& LaurentPoly::operator*=(const mpq_class& s)
{
    for (auto& kv : c_) kv.second *= s;
    prune();
    return *this;
}

LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b)
{
    LaurentPoly r;
    for (auto& [ea, va] : a.c_)
        for (auto& [eb, vb] : b.c_) r.c_[ea + eb] += va * vb;
    r.prune();
    return r;
}

LaurentPoly LaurentPoly::pow(unsigned e) const
{
    LaurentPoly r = constant(1), base = *this;
    while (e) {
        if (e & 1) r = r * base;
        e >>= 1;
        if (e) base = base * base;
    }
    return r;
}

mpq_class LaurentPoly::coeff(int e) const
{
    auto it = c_.find(e);
    return it == c_.end() ? mpq_class(0) : it->second;
}

std::string LaurentPoly::str() const
{
    if (c_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
        if (!first) os << " + ";
        first = false;
        os << it->second.get_str();
        if (it->first != 0) os << "*X^" << it->first;
    }
    return os.str();
}

mpz_class binom(unsigned n, unsigned k)
{
    mpz_class r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

LaurentPoly x_minus_inv()
{
    return LaurentPoly::monomial(1) - LaurentPoly::monomial(-1);
}

namespace {

// X^{2m} + X^{-2m}
LaurentPoly sym_pair(int m)
{
    return LaurentPoly::monomial(2 * m) + LaurentPoly::monomial(-2 * m);
}

// sum_j w(j) binom(k+j-1, 2j-1) (X-1/X)^{2j}
template <class W>
LaurentPoly binom_series(int k, W w)
{
    LaurentPoly y2 = x_minus_inv().pow(2), acc, ypow = LaurentPoly::constant(1);
    for (int j = 1; j <= k; ++j) {
        ypow = ypow * y2;
        acc += ypow * (w(j) * mpq_class(binom(k + j - 1, 2 * j - 1)));
    }
    return acc;
}

mpq_class harmonic_tail(int k, int scale)
{
    mpq_class h = 0;
    for (int j = 1; j < k; ++j) h += mpq_class(scale, j);
    return h;
}

} // namespace

bool lemma_a2_check(int k)
{
    if (k < 1) throw DomainError("identity a2 needs k >= 1");
    LaurentPoly lhs = sym_pair(k) * mpq_class(1, k) - LaurentPoly::constant(mpq_class(2, k));
    LaurentPoly rhs = binom_series(k, [](int j) { return mpq_class(1, j); });
    return (lhs - rhs).is_zero();
}

bool lemma_a3_check(int k)
{
    if (k < 1) throw DomainError("identity a3 needs k >= 1");
    LaurentPoly lhs = LaurentPoly::constant(harmonic_tail(k, 4)) +
                      binom_series(k, [](int j) { return mpq_class(1, j * j); }) * mpq_class(k);
    LaurentPoly rhs = LaurentPoly::constant(mpq_class(-2, k)) + sym_pair(k) * mpq_class(1, k);
    for (int j = 1; j < k; ++j) rhs += sym_pair(j) * mpq_class(2, j);
    return (lhs - rhs).is_zero();
}

bool lemma_a3_via_a2(int k)
{
    if (k < 1) throw DomainError("identity a3 needs k >= 1");
    // phi_m = X^{2m}+X^{-2m} = 2 + m * sum_j (1/j) binom(m+j-1,2j-1) Y^{2j}
    auto phi = [](int m) {
        return LaurentPoly::constant(2) +
               binom_series(m, [](int j) { return mpq_class(1, j); }) * mpq_class(m);
    };
    LaurentPoly lhs = LaurentPoly::constant(harmonic_tail(k, 4)) +
                      binom_series(k, [](int j) { return mpq_class(1, j * j); }) * mpq_class(k);
    LaurentPoly rhs = LaurentPoly::constant(mpq_class(-2, k)) + phi(k) * mpq_class(1, k);
    for (int j = 1; j < k; ++j) rhs += phi(j) * mpq_class(2, j);
    LaurentPoly rem = lhs - rhs;
    // constant term: 4 H_{k-1} - 4 H_{k-1}
    return rem.is_zero() && rem.coeff(0) == 0;
}

double alternating_sum(int K, int skip, const std::function<double(int)>& f, double* err)
{
    const int m = 10;
    if (K < 2 * m + 2) throw DomainError("alternating_sum needs a longer window");
    std::vector<double> partial;
    double s = 0;
    for (int i = 1; i <= K; ++i) {
        if (i != skip) s += (i % 2 == 0 ? 1.0 : -1.0) * f(i);
        if (i > K - m - 1) partial.push_back(s);
    }
    // repeated averaging of consecutive partial sums
    double prev = partial.back();
    while (partial.size() > 1) {
        prev = partial.back();
        for (size_t j = 0; j + 1 < partial.size(); ++j) partial[j] = 0.5 * (partial[j] + partial[j + 1]);
        partial.pop_back();
    }
    if (err) *err = std::abs(partial[0] - prev);
    return partial[0];
}

A1Result lemma_a1_check(int k, double X, int K)
{
    if (k < 1 || !(X > 1) || K <= k) throw DomainError("identity a1 needs k >= 1, X > 1, K > k");
    double sgn = k % 2 == 0 ? 1.0 : -1.0;
    double err = 0;
    double s1 = 2 * alternating_sum(K, k, [k](int i) { return 1.0 / ((double(i) - k) * (double(i) + k)); },
                                    &err);
    double lx = std::log(X), s2 = 0;
    for (int j = 1; j <= K; ++j) {
        if (j == k) continue;
        s2 += std::exp(-2 * (j + k) * lx) / (double(k) * (j + k)) +
              std::exp(-2 * (j - k) * lx) / (double(k) * (j - k));
    }
    s2 *= sgn;
    double lhs = s1 + s2;
    double inner = (std::exp(-4 * k * lx) - 1) / (2.0 * k) + 2 * std::log1p(-std::exp(-2 * lx)) +
                   std::exp(-2 * k * lx) / k;
    for (int j = 1; j < k; ++j) inner += 2 * std::cosh(2 * j * lx) / j;
    double rhs = 1.0 / (double(k) * k) - sgn / k * inner;
    // geometric tail of the X-sums plus the averaging correction
    double r = std::exp(-2 * lx);
    double geo = 2 * std::exp(-2 * (K + 1 - k) * lx) / (k * (K + 1.0 - k) * (1 - r));
    return {lhs, rhs, std::abs(lhs - rhs), 2 * err + geo + 1e-15 * (std::abs(lhs) + 1)};
}

} // namespace kvol
