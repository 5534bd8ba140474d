#pragma once

#include "kvol/specfun.hpp"

namespace kvol {

struct KernelPoint {
    double x, y, z;
};

// Regularisation parameter; 0 < eps and sinh(eps/2) <= 1.
class RegEps {
public:
    explicit RegEps(double eps) : eps_(eps)
    {
        if (!(eps > 0) || !std::isfinite(eps)) throw DomainError("eps must be positive and finite");
        if (std::sinh(eps / 2) > 1.0 + 1e-15) throw DomainError("sinh(eps/2) must not exceed 1");
    }
    double value() const { return eps_; }
    double sinh_half() const { return std::sinh(eps_ / 2); }
    double log_sinh_half() const { return std::log(std::sinh(eps_ / 2)); }
    double log_two_sinh_half() const { return kvol::log_two_sinh_half(eps_); }

private:
    double eps_;
};

namespace detail {

template <class T>
void check_point(const T& x, const T& y, const T& z)
{
    if (!(x >= 0) || !(y >= 0) || !(z >= 0)) throw DomainError("kernel lengths must be non-negative");
}

} // namespace detail

// R(x,y,z) = x - log[(cosh(y/2)+cosh((x+z)/2)) / (cosh(y/2)+cosh((x-z)/2))]
template <class T>
T kernel_R(const T& x, const T& y, const T& z)
{
    using std::exp; using std::log1p; using std::log;
    detail::check_point(x, y, z);
    T lc = log_cosh(y / 2);
    // ratio e^{-x}(c+cosh((x+z)/2))/(c+cosh((x-z)/2)) = 1 + u, u in (-1,0]
    T logA = log_add_exp(T(log(T(2))) + lc + log_sinh(x / 2), T(-z / 2) + log_sinh(x));
    T logB = log_add_exp(lc, log_cosh((x - z) / 2));
    T u = -exp(logA - logB - x / 2);
    if (u > T(-0.5)) return -log1p(u);
    T num = log_add_exp(lc, log_cosh((x + z) / 2));
    return x - (num - logB);
}

// D(x,y,z) = R(x,y,z)+R(x,z,y)-x, which depends on y+z only.
template <class T>
T kernel_D(const T& x, const T& y, const T& z)
{
    using std::exp; using std::log1p;
    detail::check_point(x, y, z);
    T s = y + z;
    T tail = log1p(exp(-(x + s) / 2));
    if (s >= x) return 2 * (log1p(exp((x - s) / 2)) - tail);
    return x - s + 2 * (log1p(exp((s - x) / 2)) - tail);
}

// Literal composition, used to cross-check kernel_D.
template <class T>
T kernel_D_literal(const T& x, const T& y, const T& z)
{
    return kernel_R(x, y, z) + kernel_R(x, z, y) - x;
}

template <class T>
T kernel_E(const T& x, const T& y, const T& z)
{
    return kernel_R(x, T(2 * z), y) - x / 2;
}

template <class T>
T kernel_F_a(const T& x, const T& y, const T& z)
{
    using std::exp; using std::atanh; using std::log; using std::tanh;
    if (x == 0 || z == 0) return T(0);
    T lnum = log_sinh(x / 2) + log_sinh(z) + log(tanh(z / 2));
    T lden = log_add_exp(log_cosh(y), T(log_cosh(x / 2) + log_cosh(z)));
    T arg = exp(lnum - lden);
    if (!(arg < 1) || !(arg > -1)) throw DomainError("atanh argument outside (-1,1) in kernel F");
    return atanh(arg);
}

template <class T>
T kernel_F(const T& x, const T& y, const T& z)
{
    detail::check_point(x, y, z);
    return x - 2 * (kernel_F_a(x, y, z) + kernel_F_a(x, z, y));
}

// Solution of cosh(x/2)+cosh(y/2) = 2 sinh(eps/2) sinh(Lambda/2).
template <class T>
T lambda_upper(const T& x, const T& y, const T& eps)
{
    using std::asinh; using std::sinh; using std::cosh; using std::exp; using std::log;
    if (!(x >= 0) || !(y >= 0)) throw DomainError("lambda_upper lengths must be non-negative");
    T lnum = log_add_exp(log_cosh(x / 2), log_cosh(y / 2));
    T arg_log = lnum - log(2 * sinh(eps / 2));
    if (arg_log < 300) return 2 * asinh(exp(arg_log));
    return 2 * (arg_log + log(T(2)));
}

inline double lambda_upper(double x, double y, const RegEps& e)
{
    return lambda_upper<double>(x, y, e.value());
}

// Closed form of int_eps^Lambda E(x,y,z) dz / tanh(z/2).
template <class T>
T kernel_Ecal(const T& x, const T& y, const T& eps)
{
    using std::exp; using std::log1p; using std::log; using std::sinh;
    if (!(x >= 0) || !(y >= 0)) throw DomainError("Ecal lengths must be non-negative");
    T ls = log(sinh(eps / 2));
    T apb = log_cosh((x + y) / 4) + log_cosh((x - y) / 4) - 2 * ls;
    T tail = log1p(exp(-(x + y) / 2));
    T g = y >= x ? 2 * (log1p(exp(-(y - x) / 2)) - tail)
                 : (x - y) + 2 * (log1p(exp(-(x - y) / 2)) - tail);
    return apb * g;
}

inline double kernel_Ecal(double x, double y, const RegEps& e)
{
    return kernel_Ecal<double>(x, y, e.value());
}

// The printed three-term form, kept for cross-checks.
template <class T>
T kernel_Ecal_literal(const T& x, const T& y, const T& eps)
{
    using std::log; using std::cosh; using std::sinh;
    T s = sinh(eps / 2);
    T a = log(cosh((x - y) / 4) / s), b = log(cosh((x + y) / 4) / s);
    return 2 * a * a - 2 * b * b + x * log(cosh((x + y) / 4) * cosh((x - y) / 4) / (s * s));
}

// Antiderivative in z of E(x,y,z)/tanh(z/2).
template <class T>
T ecal_antiderivative(const T& x, const T& y, const T& z)
{
    using std::log; using std::cosh; using std::sinh;
    T cp = cosh((x + y) / 4), cm = cosh((x - y) / 4), sz = sinh(z / 2);
    return (x - 4 * log(cp) + 4 * log(cm)) * log(sz) + dilog(T(-sz * sz / (cp * cp))) -
           dilog(T(-sz * sz / (cm * cm)));
}

} // namespace kvol
