#pragma once

#include "kvol/chi1.hpp"

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

namespace kvol {

struct EngineConfig {
    int panel_order = 31;        // Gauss-Kronrod rule (fixed)
    int max_subdivisions = 18;   // bisection depth per panel
    int surrogate_degree_cap = 64;
    double surrogate_panel = 4.0; // width of one Chebyshev panel
    bool use_cache = true;
    std::string cache_dir;       // empty: in-memory only
    int precision_bits = 53;
    void validate() const;
};

struct VolumeQuery {
    Topology top;
    std::vector<double> lengths; // lengths[0] is the distinguished boundary
    RegEps eps{0.5};
    double b = 1.0;
    double tol = 1e-8;
    void validate() const;
};

struct VolumeResult {
    double value = 0;
    double error = 0;
    double tail = 0;  // truncation part of the error
    std::string path; // "closed-form", "recursion", "polynomial"
};

enum class Sector { Total, Plus, Minus };

struct ChebPanel {
    double a, b;
    std::vector<double> c;
};

struct Surrogate {
    std::string key;
    double pmax = 0;
    std::vector<ChebPanel> panels;
    double residual = 0; // worst relative probe error
    double eval(double p) const;
};

// Truncation radius for int_0^P p^k * kernel with kernel ~ exp(-p/2) beyond x+y.
double truncation_radius(double x, double y, int growth, double tol);

double integrate_R(double x, double y, const std::function<double(double)>& V, double pmax, double tol,
                   double* err = nullptr);
// 1/2 is not included; F(p,q) over the quarter plane via s = p+q, t = p/s
double integrate_D(double x, const std::function<double(double, double)>& F, double pmax, double tol,
                   double* err = nullptr);
double integrate_D_constant(double x, double c, double pmax, double tol, double* err = nullptr);
double integrate_Ecal(double x, const std::function<double(double)>& V, const RegEps& e, double pmax,
                      double tol, double* err = nullptr);

Surrogate fit_surrogate(const std::function<double(double)>& f, double pmax, double tol, const EngineConfig& cfg,
                        const std::string& key);

class VolumeEngine {
public:
    explicit VolumeEngine(EngineConfig cfg = {});

    VolumeResult total_volume(const VolumeQuery& q);
    VolumeResult v_minus(const VolumeQuery& q);
    VolumeResult v_plus(const VolumeQuery& q);
    // family q with lengths[slot] free
    std::shared_ptr<const Surrogate> build_surrogate(const VolumeQuery& q, int slot,
                                                     Sector s = Sector::Total);

    int surrogates_built() const { return built_; }
    int cache_hits() const { return hits_; }

private:
    struct Val {
        double v = 0, err = 0, tail = 0;
    };
    Val eval(Sector s, const Topology& t, const std::vector<double>& L, const VolumeQuery& ctx);
    Val recurse(Sector s, const Topology& t, const std::vector<double>& L, const VolumeQuery& ctx);
    Val rhs(Sector s, const Topology& t, const std::vector<double>& L, const VolumeQuery& ctx);
    // inner volume with slot 0 free, through a surrogate when it is not a closed form
    std::function<double(double)> inner1(Sector s, const Topology& t, const std::vector<double>& frozen,
                                         const VolumeQuery& ctx, double pmax, double* rel_err);
    std::string key_of(Sector s, const Topology& t, const std::vector<double>& frozen, const VolumeQuery& ctx,
                       double pmax) const;
    std::shared_ptr<const Surrogate> load(const std::string& key);
    void store(const Surrogate& s);

    EngineConfig cfg_;
    std::mutex mu_;
    std::map<std::string, std::shared_ptr<const Surrogate>> cache_;
    int built_ = 0, hits_ = 0;
};

// Environment override for the cache directory.
std::string default_cache_dir();

} // namespace kvol
