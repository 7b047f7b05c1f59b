#ifndef PWDENS_MAP_MODEL_HPP
#define PWDENS_MAP_MODEL_HPP

#include <functional>
#include <string>
#include <vector>

namespace pwdens {

// A two-branch interval map with a neutral fixed point at 0.
//
// The left branch T1 : [0,x0) -> [0,1) fixes 0 with T1'(0) = 1 and has the
// normal form T1(x) = x + x^{1+alpha} + x^{1+alpha} delta0(x); the right
// branch T2 : [x0,1] -> [0,1] is uniformly expanding, |T2'| >= beta > 1,
// onto in either orientation.  Immutable after construction; all operations
// on it are pure.
struct MapSpec {
    std::string family; // "lsv" for the canonical instance, else "custom"
    double alpha = 0.5; // neutral exponent, in (0,1)
    double x0 = 0.5;    // branch cut
    double beta = 2.0;  // expansion lower bound for T2
    double D = 0.0;     // distortion bound sup |Th''|/(Th')^2 for the induced branches

    std::function<double(double)> T1, dT1, ddT1;
    std::function<double(double)> T2, dT2, ddT2;
    std::function<double(double)> delta0, delta1;

    // Optional closed-form inverse of T2; when absent a root solve is used.
    std::function<double(double)> T2_inverse;

    bool is_canonical() const { return family == "lsv"; }
    bool t2_increasing() const { return dT2(0.5 * (x0 + 1.0)) > 0.0; }

    double T(double x) const { return x < x0 ? T1(x) : T2(x); }
    double dT(double x) const { return x < x0 ? dT1(x) : dT2(x); }
};

// The LSV-style instance T1(x) = x + 2^alpha x^{1+alpha}, T2(x) = 2x - 1
// (x0 = 1/2, beta = 2, delta0 = 2^alpha - 1, delta1 = (1+alpha)(2^alpha - 1)).
// The stored distortion bound D is a sampled estimate (see
// estimate_induced_distortion); override it for certified work.
MapSpec canonical_lsv(double alpha);

// x in [0, x0) with |T1(x) - y| <= tol, for y in [0, 1].
double inverse_T1(const MapSpec& spec, double y, double tol = 1e-14);
// seeded variant for orbit sweeps (seed = previous, larger, preimage)
double inverse_T1(const MapSpec& spec, double y, double tol, double seed);

// z in [x0, 1] with |T2(z) - y| <= tol * beta, for y in [0, 1].
double inverse_T2(const MapSpec& spec, double y, double tol = 1e-14);

// prod_{i=0}^{n-1} |T'(T^i z)| by forward iteration.  Throws if the orbit
// escapes [0,1] beyond floating tolerance.
double orbit_derivative(const MapSpec& spec, double z, int n);

// Samples sup |Th''| / (Th')^2 over the first max_branch induced branches
// (Th = T^n on Z_n).  An estimate, not a certified bound.
double estimate_induced_distortion(const MapSpec& spec, int max_branch = 128,
                                   int samples_per_branch = 8);

// Sampled checks of the family assumptions (monotone branches, T1' > 1 on
// (0,x0), |T2'| >= beta, endpoint matching).  Returns the violations found.
std::vector<std::string> validate(const MapSpec& spec, int grid = 512);

} // namespace pwdens

#endif
