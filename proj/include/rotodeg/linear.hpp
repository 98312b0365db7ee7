#pragma once

#include <string>
#include <vector>

#include "rotodeg/degree.hpp"
#include "rotodeg/vectorfield.hpp"

namespace rotodeg {

/// ż = L(t) z with T-periodic L. For a Hamiltonian system L = J S with S
/// symmetric, J = [[0, −1], [1, 0]].
struct LinearSystem {
    MatrixFunction L;
    double T = 1.0;
    bool hamiltonian_flag = false;
    std::vector<double> jump_times;  // discontinuities of L in (0, T)
};

/// Constant-coefficient system; the Hamiltonian flag is set when J·A is symmetric.
LinearSystem constant_system(const Mat2 &A, double T);

/// Linearization of a field at the origin or at infinity. Throws InvalidParams
/// when the field does not carry it.
enum class Asymptote { zero, infinity };
LinearSystem linearization(const TimeVaryingField &field, Asymptote which);

/// J·L(t) symmetric (1e-10) at 32 sample times and on both sides of every jump.
bool is_hamiltonian(const LinearSystem &sys);

TimeVaryingField to_field(const LinearSystem &sys);

struct LinearConfig {
    IntegratorConfig integrator;
    int samples = 256;           // boundary samples for rotation intervals
    double margin = 1e-4;        // open-interval membership, in rotations
    double scale_tol = 1e-6;     // rotation agreement across radii
    double hull_tol = 5e-3;      // asymptotic_radius: rotation hull agreement
    int max_doublings = 40;
    DegreeConfig degree;
};

/// Fundamental matrix at T; the columns are the evolved basis vectors.
Mat2 monodromy(const LinearSystem &sys, const LinearConfig &cfg = {});

/// det(M − I) ≠ 0. Throws Marginal when |det(M − I)| lies in [1e-12, 1e-8].
bool nonresonant(const Mat2 &M);

/// sign det(M − I), cross-checked against the winding of (M − I)z on the unit
/// circle. Throws Resonant, Marginal or Inconsistent.
int linear_degree(const Mat2 &M);

struct RotationInterval {
    double min = 0.0;
    double max = 0.0;
};

/// Range of rot(F_T^L, ·) on the unit circle. Extremes are refined by
/// golden-section search and must agree with the values at r = 0.1 and r = 10.
RotationInterval rotation_interval(const LinearSystem &sys, const LinearConfig &cfg = {});
RotationInterval rotation_interval_at(const LinearSystem &sys, double radius, const LinearConfig &cfg = {});

/// The index from the pair (degree, rotation interval): degree −1 with the
/// interval in (−k − ½, −k + ½) gives 2k, degree +1 with the interval in
/// (−k − 1, −k) gives 2k + 1. Throws Inconsistent when the interval straddles
/// one of the endpoints (within margin).
int maslov_from(int degree, const RotationInterval &rot, double margin);

/// Throws NotHamiltonian unless the flag is set and the check passes.
int maslov_index(const LinearSystem &sys, const LinearConfig &cfg = {});

struct RadiusProbe {
    double radius = 0.0;
    RotationSummary sigma;
    int degree = 0;
    bool certified = false;
    bool matches = false;
};

struct AsymptoticRadiusReport {
    Asymptote which = Asymptote::zero;
    double radius = 0.0;
    std::vector<int> linear_sigma;
    RotationInterval linear_rot;
    int linear_degree = 0;
    std::vector<RadiusProbe> trace;
};

/// Geometric search from r = 1 (halving towards zero or doubling towards
/// infinity) for the first radius whose Σ and degree agree with the
/// linearization and whose rotation hull lies within hull_tol of it.
/// Throws NotFound after max_doublings steps; the message lists the trace.
AsymptoticRadiusReport asymptotic_radius(const TimeVaryingField &field, Asymptote which,
                                         const LinearConfig &cfg = {});

std::string to_string(Asymptote which);

}  // namespace rotodeg
