#pragma once

#include <gmpxx.h>

#include <functional>
#include <map>
#include <string>

namespace kvol {

// Finitely supported Laurent polynomial in X with exact rational coefficients.
class LaurentPoly {
public:
    LaurentPoly() = default;
    static LaurentPoly monomial(int e, const mpq_class& c = 1);
    static LaurentPoly constant(const mpq_class& c) { return monomial(0, c); }

    LaurentPoly& operator+=(const LaurentPoly& o);
    LaurentPoly& operator-=(const LaurentPoly& o);
    LaurentPoly& operator*=(const mpq_class& s);
    friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
    friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }
    friend LaurentPoly operator*(LaurentPoly a, const mpq_class& s) { return a *= s; }
    friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b);
    LaurentPoly pow(unsigned e) const;

    bool is_zero() const { return c_.empty(); }
    bool operator==(const LaurentPoly& o) const { return c_ == o.c_; }
    mpq_class coeff(int e) const;
    const std::map<int, mpq_class>& terms() const { return c_; }
    std::string str() const;

private:
    void prune();
    std::map<int, mpq_class> c_;
};

mpz_class binom(unsigned n, unsigned k);

// (X - 1/X)
LaurentPoly x_minus_inv();

bool lemma_a2_check(int k);
bool lemma_a3_check(int k);
// The a3 identity with every X^{2m}+X^{-2m} rewritten through a2; the
// remainder must vanish, its constant term being a harmonic-number identity.
bool lemma_a3_via_a2(int k);

struct A1Result {
    double lhs, rhs, residual, tail_bound;
};
// Both infinite sums truncated at K. The alternating i-sum is summed with
// repeated averaging of its last partial sums (only terms i <= K are used).
A1Result lemma_a1_check(int k, double X, int K);

// sum_{i=1, i!=skip}^{K} (-1)^i f(i)  with Euler averaging of
// the last partial sums. err receives the size of the last correction.
double alternating_sum(int K, int skip, const std::function<double(int)>& f, double* err);

} // namespace kvol
