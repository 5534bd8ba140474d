#include "kvol/specfun.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

namespace kvol {

double integrate(const std::function<double(double)>& f, double a, double b, double tol,
                 double* err, unsigned max_depth)
{
    double e = 0, l1 = 0;
    double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, max_depth, tol,
                                                                             &e, &l1);
    if (err) *err = e;
    if (!std::isfinite(v)) throw ConvergenceError("quadrature produced a non-finite value");
    if (e > 10 * tol * std::max(1.0, l1)) throw ConvergenceError("quadrature tolerance not reached");
    return v;
}

double integrate_to_inf(const std::function<double(double)>& f, double a, double tol, double* err)
{
    boost::math::quadrature::exp_sinh<double> es;
    double e = 0, l1 = 0;
    double v = es.integrate([&](double t) { return f(a + t); }, tol, &e, &l1);
    if (err) *err = e;
    if (!std::isfinite(v)) throw ConvergenceError("quadrature produced a non-finite value");
    return v;
}

HP integrate_hp(const std::function<HP(HP)>& f, const HP& a, const HP& b, double tol, HP* err)
{
    // mpfr's minimum exponent overflows the default endpoint cutoff
    static thread_local boost::math::quadrature::tanh_sinh<HP> ts(12, HP("1e-150"));
    HP e = 0, l1 = 0;
    HP v = ts.integrate(f, a, b, HP(tol), &e, &l1);
    if (err) *err = e;
    return v;
}

HP integrate_to_inf_hp(const std::function<HP(HP)>& f, const HP& a, double tol, HP* err)
{
    static thread_local boost::math::quadrature::exp_sinh<HP> es(12);
    HP e = 0, l1 = 0;
    HP v = es.integrate([&](HP t) { return f(a + t); }, HP(tol), &e, &l1);
    if (err) *err = e;
    return v;
}

} // namespace kvol
