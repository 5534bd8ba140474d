#pragma once

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>

namespace kvol {

// 64 decimal digits, about 213 mantissa bits.
using HP = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<64>,
                                        boost::multiprecision::et_off>;

struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

struct ConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Precision {
    int bits = 53;
    explicit Precision(int b = 53) : bits(b)
    {
        if (b < 53) throw DomainError("precision below 53 bits");
    }
    bool extended() const { return bits >= 200; }
};

template <class T>
inline T pi_v() { return boost::math::constants::pi<T>(); }

template <class T>
inline T require_finite(const T& x, const char* what)
{
    using std::isfinite;
    using boost::multiprecision::isfinite;
    if (!isfinite(x)) throw DomainError(std::string("non-finite value: ") + what);
    return x;
}

// log(e^a + e^b)
template <class T>
T log_add_exp(const T& a, const T& b)
{
    using std::log1p; using std::exp; using std::abs;
    if (a == -std::numeric_limits<double>::infinity()) return b;
    if (b == -std::numeric_limits<double>::infinity()) return a;
    T m = a > b ? a : b;
    return m + log1p(exp(-abs(a - b)));
}

// log cosh(t), no overflow
template <class T>
T log_cosh(const T& t)
{
    using std::abs; using std::exp; using std::log1p; using std::log;
    T a = abs(t);
    return a + log1p(exp(-2 * a)) - log(T(2));
}

// log sinh(t) for t >= 0; -inf at 0
template <class T>
T log_sinh(const T& t)
{
    using std::exp; using std::log; using std::expm1; using std::sinh;
    if (t < 0) throw DomainError("log_sinh of negative argument");
    if (t == 0) return T(-std::numeric_limits<double>::infinity());
    if (t < 1) return log(sinh(t));
    return t + log(-expm1(-2 * t)) - log(T(2));
}

template <class T>
T log_two_sinh_half(const T& eps)
{
    using std::log; using std::sinh; using std::exp; using std::log1p;
    if (!(eps > 0)) throw DomainError("log_two_sinh_half requires eps > 0");
    T u = eps / 2;
    if (eps > 40) return eps / 2 + log1p(-exp(-eps));
    if (u < T(1e-4)) {
        T u2 = u * u;
        return log(eps) + log1p(u2 / 6 + u2 * u2 / 120);
    }
    return log(eps) + log(sinh(u) / u);
}

template <class T>
T dilog_series(const T& x)
{
    using std::abs;
    T term = x, sum = 0, xk = x;
    T tol = std::numeric_limits<T>::epsilon() / 4;
    for (int k = 1; k < 100000; ++k) {
        term = xk / (T(k) * T(k));
        sum += term;
        if (abs(term) <= tol * abs(sum)) break;
        xk *= x;
    }
    return sum;
}

// Real dilogarithm for x < 1.
template <class T>
T dilog(const T& x)
{
    using std::log; using std::log1p; using std::abs;
    T pi2_6 = pi_v<T>() * pi_v<T>() / 6;
    if (!(x < 1)) throw DomainError("dilog requires x < 1");
    if (x == 0) return T(0);
    if (abs(x) <= T(0.5)) return dilog_series(x);
    if (x <= -2) {
        T l = log(-x);
        return -pi2_6 - l * l / 2 - dilog_series(T(1) / x);
    }
    if (x > T(0.5)) {
        // Euler reflection, 1-x < 1/2
        return pi2_6 - log(x) * log1p(-x) - dilog_series(T(1) - x);
    }
    // -2 < x < -1/2: Landen, y = x/(x-1) in (1/3, 2/3)
    T y = x / (x - 1);
    T l = log1p(-x);
    T li_y = y <= T(0.5) ? dilog_series(y) : pi2_6 - log(y) * log1p(-y) - dilog_series(T(1) - y);
    return -li_y - l * l / 2;
}

// Adaptive Gauss-Kronrod on [a,b]; err receives the estimate.
double integrate(const std::function<double(double)>& f, double a, double b, double tol,
                 double* err = nullptr, unsigned max_depth = 18);

// Integral on [a, inf) by exp-sinh.
double integrate_to_inf(const std::function<double(double)>& f, double a, double tol,
                        double* err = nullptr);

HP integrate_hp(const std::function<HP(HP)>& f, const HP& a, const HP& b, double tol,
                HP* err = nullptr);

HP integrate_to_inf_hp(const std::function<HP(HP)>& f, const HP& a, double tol, HP* err = nullptr);

} // namespace kvol
