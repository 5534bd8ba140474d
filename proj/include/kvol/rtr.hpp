#pragma once

#include "kvol/chi1.hpp"

#include <complex>
#include <functional>
#include <string>
#include <vector>

namespace kvol {

using cplx = std::complex<double>;

struct RefinedParams {
    double b;
    double bb; // -b/sqrt(1+b)
    RegEps eps;
    int K;  // lattice poles +-k/2, k <= K
    int KQ; // terms kept in the exponential-pole series
    RefinedParams(double b_, const RegEps& e, int K_, int KQ_ = -1);
};

// Laurent coefficients c_{-neg}..c_{pos} of f at center.
class LocalJet {
public:
    static LocalJet from_function(const std::function<cplx(cplx)>& f, cplx center, double radius,
                                  int neg, int pos, int N = 64);
    cplx center() const { return center_; }
    int neg() const { return neg_; }
    int pos() const { return pos_; }
    cplx coeff(int power) const;
    cplx residue() const { return coeff(-1); }
    LocalJet derivative() const;

private:
    cplx center_{};
    int neg_ = 0, pos_ = 0;
    std::vector<cplx> c_;
};

struct PoleTerm {
    int twice_center; // center = twice_center / 2
    int order;
    double coeff;
    std::string source;
};

struct AnalyticPiece {
    std::string name;
    std::function<cplx(cplx)> f; // meromorphic, poles only on the half-integer lattice
    int max_order;
};

// Correlator kept as explicit pole terms plus named meromorphic pieces (per unit dz).
struct DifferentialSum {
    std::vector<PoleTerm> poles;
    std::vector<AnalyticPiece> pieces;
    int K = 0;
    cplx value(cplx z) const;
    // principal-part coefficients a_1..a_m of (z-c)^{-j} at lattice point c
    std::vector<cplx> principal_part(int twice_center, int max_order) const;
    std::string render() const;
};

struct LaplaceTerm {
    double coef;
    std::vector<int> pow;        // powers of L_i
    std::vector<int> half_decay; // factor exp(-sum_i k_i L_i / 2)
    std::string source;
};

struct LaplaceSum {
    int nvars = 1;
    int K = 0;
    std::vector<LaplaceTerm> terms;
    double eval(const std::vector<double>& L) const;
    // estimate of the omitted k > K part from the last two lattice shells
    double tail_estimate(const std::vector<double>& L) const;
    std::string render() const;
};

// spectral curve pieces
cplx omega01_coeff(cplx z); // y dx / dz = -z sin(2 pi z)/(2 pi)
cplx exp_pole_series(cplx z, double eps, int KQ);
cplx exp_pole_series_deriv(cplx z, double eps, int KQ);

cplx omega_half_1_value(cplx z, const RefinedParams& p);
DifferentialSum omega_half_1(const RefinedParams& p);
// (b/2)(-dy/y - Delta varpi) with varpi the Laplace image of the cut-off volume
cplx omega_half_1_via_varpi(cplx z, const RefinedParams& p);

struct ResidueEntry {
    int twice_center;
    cplx residue;
};
std::vector<ResidueEntry> omega_half_1_residues(const RefinedParams& p);

cplx omega_half_2_closed(cplx z1, cplx z2, const RefinedParams& p);

double c_coeff(int k, const RegEps& e);
struct CTilde {
    double value;
    double tail;
};
CTilde ctilde_coeff(int k, const RegEps& e, int K);

DifferentialSum omega_1_1_closed(const RefinedParams& p);
cplx omega_1_1_derivative_piece(cplx z, const RefinedParams& p);

// Residue recomputation of the recursion formula
struct RecomputeResult {
    cplx total;
    std::vector<cplx> lattice; // contribution of the poles at +-k/2, index k-1
    cplx at_points;            // residues at the z_i
    cplx at_origin;            // minus the residue at 0
};
RecomputeResult recompute_half_2(cplx z0, cplx z1, const RefinedParams& p);
RecomputeResult recompute_1_1(cplx z0, const RefinedParams& p);
std::vector<cplx> rtr_recursion_recompute(const Topology& t, const RefinedParams& p,
                                          const std::vector<std::vector<double>>& samples);

// Res_{z=a} eta^z(z1) (z-a)^{-k-1}, via jets
cplx eta_projection_numeric(double a, int k, cplx z1);
cplx eta_projection_closed(double a, int k, cplx z1);

LaplaceSum termwise_inverse_laplace(const DifferentialSum& d);

// Double transform of a bidifferential with poles at z2 in {0, -k/2, -z1} and
// z1 in {0, -k/2}; assumes L1 >= L2 (contours enclose 0 and the negative axis).
LaplaceSum double_inverse_laplace(const std::function<cplx(cplx, cplx)>& f, int K, int max_order);

struct DictionaryCheck {
    double lhs;       // prod L_i * V
    double rhs;       // (1+b)^g * inverse Laplace
    double residual;
    double tail;
};
DictionaryCheck check_dictionary_chi1(const Topology& t, const std::vector<double>& lengths,
                                      const RegEps& e, double b, int K = -1);

// Toy bidifferential with an anti-diagonal pole
cplx toy_antidiagonal(cplx z1, cplx z2);

} // namespace kvol
