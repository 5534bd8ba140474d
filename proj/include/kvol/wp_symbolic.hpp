#pragma once

#include "kvol/chi1.hpp"

#include <gmpxx.h>

#include <map>
#include <string>
#include <vector>

namespace kvol {

// q * pi^(2 j)
struct PiCoeff {
    mpq_class q;
    int j = 0;
};

// Symmetric polynomial in L_i^2 with coefficients rational multiples of even pi powers.
struct PiPoly {
    Topology top{0, 3};
    std::map<std::vector<int>, PiCoeff> terms; // exponent of L_i^2 per boundary

    int weight() const { return top.dim_half(); }
    // throws if a term is not of total weight 3g-3+n or symmetry fails
    void check_invariants() const;
    std::string render() const;
    // leading coefficient of L1^(2 d)
    mpq_class leading() const;
};

struct ReconstructionReport {
    int unknowns = 0;
    int nodes = 0;
    double solve_residual = 0;  // worst |q pi^2j - x| / max(1,|x|) at the fit nodes
    double verify_residual = 0; // worst relative mismatch at fresh nodes
};

// Orientable WP volume, exact-fit reconstruction from the b=0 recursion at 213 bits.
const PiPoly& wp_volume(const Topology& t, ReconstructionReport* rep = nullptr);

double wp_eval(const PiPoly& p, const std::vector<double>& lengths);
HP wp_eval_hp(const PiPoly& p, const std::vector<HP>& lengths);

// One step of the b=0 recursion at lengths L (L[0] distinguished), inner volumes from wp_volume.
HP wp_recursion_hp(const Topology& t, const std::vector<HP>& L);

// Continued-fraction reconstruction; false if no p/q with q <= den_max matches to rel_tol.
bool rationalize(const HP& x, mpq_class& out, double den_max, const HP& rel_tol);

} // namespace kvol
