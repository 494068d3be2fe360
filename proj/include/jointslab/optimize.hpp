#ifndef JOINTSLAB_OPTIMIZE_HPP
#define JOINTSLAB_OPTIMIZE_HPP

#include <vector>

#include <gmpxx.h>

#include "jointslab/config.hpp"
#include "jointslab/real.hpp"

namespace jointslab {

struct WeightState {
    std::vector<mpq_class> z;
    std::vector<std::vector<mpq_class>> b;     // b[p][i] = z_p / sum of z on l_{p,i}
    std::vector<std::vector<mpq_class>> beta;  // 1 - (#{p' in l} - deg l) b[p][i]
    std::vector<mpq_class> sigma;              // sum_i (#{p' in l} - deg l) b[p][i]
    mpq_class beta_total;                      // equals the total line degree
};

WeightState weight_state(const JointsConfiguration& cfg, const std::vector<mpq_class>& z);

struct SolveTrace {
    std::vector<Real> energy;  // sum_p (sigma_p - mean)^2 before each step and at the end
    std::vector<Real> spread;  // max sigma - min sigma
    bool decay_ok = true;      // E(n+1) <= (1 - 1/(4 J^3)) E(n) on every accepted step
    bool spread_monotone = true;
};

struct SolveResult {
    std::vector<mpq_class> z;  // max z = 1 on every component
    std::vector<mpq_class> sigma;
    std::vector<mpq_class> target;  // (dJ - L)/J of the joint's component
    Real residual;                  // largest per-component max - min of the exact sigma
    std::size_t iterations = 0;
    bool converged = false;
    std::size_t components = 0;
    SolveTrace trace;
};

// Biggest-gap splitting with bisection on the scale of the upper group.
SolveResult solve_z(const JointsConfiguration& cfg, double tol = 1e-9, std::size_t max_iter = 100000);

// 1/(d! C(1/beta + d - 1, d)), or 0 when beta <= 0.
mpq_class polytope_volume_equal(const mpq_class& beta, unsigned d);
Real polytope_volume_equal(const Real& beta, unsigned d);

// Area of the two-dimensional section a_3 = gamma_3, ..., a_d = gamma_d of S(beta_1, ..., beta_d).
mpq_class slice_area(const mpq_class& beta1, const mpq_class& beta2, const std::vector<mpq_class>& gamma,
                     const std::vector<mpq_class>& beta_rest);

struct ShavedPolytope {
    std::vector<mpq_class> beta;
    mpq_class r = 1;
};

bool in_shaved_polytope(const ShavedPolytope& poly, const std::vector<mpq_class>& a);

struct LatticeVolume {
    unsigned n = 0;
    mpz_class count;
    mpq_class volume;  // count / n^d
    bool complete = true;
};

// |n S cap Z^d_{>=0}| / n^d; prefixes beyond the budget are skipped and the result is flagged.
LatticeVolume polytope_volume_lattice(const ShavedPolytope& poly, unsigned n, unsigned threads = 1,
                                      std::uint64_t budget = 4000000000ULL);

struct CountingReport {
    unsigned n = 0;
    std::vector<mpq_class> lattice_volume;  // per joint, r = 1
    bool beta_rounded = false;              // some beta was rounded down to a multiple of 2^-24
    mpq_class sum_lattice;
    std::vector<mpq_class> equal_volume;  // per joint, at the mean beta
    mpq_class sum_equal;
    mpq_class inverse_factorial;  // 1/d!
    double lattice_tolerance = 0;
    bool lattice_ok = false;
    bool equal_ok = false;
    Real x;        // C(x, d) = J
    Real bound_L;  // C(x, d-1)
    Real param_bound;  // C(dJ/L + d - 1, d)
    bool chain_ok = false;
    bool pass = false;
};

CountingReport counting_report(const JointsConfiguration& cfg, const std::vector<mpq_class>& z, unsigned n,
                               unsigned threads = 1);

}  // namespace jointslab

#endif
