#pragma once

#include "kvol/kernels.hpp"

#include <string>
#include <vector>

namespace kvol {

// Genus stored doubled so half-integer genus is exact.
struct Topology {
    int twice_g = 0;
    int n = 1;

    Topology() = default;
    Topology(int tg, int nn) : twice_g(tg), n(nn)
    {
        if (tg < 0 || nn < 1) throw DomainError("topology needs 2g >= 0 and n >= 1");
    }
    // 2 - 2g - n, doubled arithmetic kept integral
    int euler() const { return 2 - twice_g - n; }
    bool stable() const { return euler() < 0; }
    bool orientable_genus() const { return twice_g % 2 == 0; }
    int dim_half() const; // 3g-3+n for integer genus
    std::string str() const;
    bool operator==(const Topology& o) const { return twice_g == o.twice_g && n == o.n; }
    bool operator<(const Topology& o) const
    {
        return twice_g != o.twice_g ? twice_g < o.twice_g : n < o.n;
    }
};

struct KBState {
    double s0, s1, L;
    double eps;
    KBState(double s0_, double s1_, double L_, const RegEps& e);
};

double v_plus_chi1(const Topology& t, const std::vector<double>& lengths);

double v_minus_half_2(double L1, double L2, const RegEps& e);

struct HalfTwoOracle {
    double fundamental_domain; // int_eps^{l*} dl / tanh(l/2)
    double teichmuller_half;   // (1/2) int_eps^Lambda dl / tanh(l/2)
    double ell_star;
    double err;
};
HalfTwoOracle v_minus_half_2_oracle(double L1, double L2, const RegEps& e);

double v_minus_1_1(double L, const RegEps& e);
double v_minus_1_1_reflected(double L, const RegEps& e);

struct QuadResult {
    double value;
    double err;
};
QuadResult v_minus_1_1_oracle(double L, const RegEps& e);

// Integrand of the unfolded oracle in the variable s0, for sampling.
double v_minus_1_1_oracle_integrand(double s0, double L);

double kb_two_sided_length(const KBState& st);

// s_i for i in [lo, hi]; index 0 and 1 are the given s0, s1.
struct KBSequence {
    int lo, hi;
    std::vector<double> s;
    double at(int i) const { return s.at(static_cast<size_t>(i - lo)); }
};
KBSequence kb_sequence(const KBState& st, int lo, int hi);

struct KBResidual {
    double residual;
    double min_F;
    std::vector<double> F_terms;
};
KBResidual kb_mcshane_norbury_residual(const KBState& st, int K);

double u_coeff(int k, const RegEps& e);

struct Expansion {
    double value;
    double tail_bound;
    double ratio;
};
Expansion v_minus_1_1_expansion(double L, const RegEps& e, int K);

double total_chi1(const Topology& t, const std::vector<double>& lengths, const RegEps& e, double b);

double v_half_1_aux(double L);

} // namespace kvol
