#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qng/quasiprob.hpp"

namespace qng {

struct PureBound {
    Real bound;      // B_s^P(n)
    Real m_opt;      // squeezing fraction of the minimizer
    Real log_bound;  // log B_s^P(n); finite even where bound underflows
};

/// Relative argmin tolerance achievable by the bracketed minimizer.
Real pure_bound_tolerance();

/// Minimum of Q_s(0) over pure Gaussian states with exactly n mean photons,
/// with the phases fixed at 2 theta - phi = pi.
PureBound pure_bound(Real n, SParam s);

/// Phase-minimized Q_s(0) of a pure Gaussian state with squeezing fraction m.
Real bound_objective(Real n, Real m, SParam s);
Real bound_objective_log(Real n, Real m, SParam s);

/// B_s(0) = 2 / (pi sqrt(1 + s (s - 2))).
Real vacuum_bound(SParam s);

/// Closed-form Wigner bound (2/pi) exp(-2 n (1 + n)).
Real wigner_bound_closed(Real n);

/// Closed-form minimizing squeezing fraction for the Husimi function.
Real m_minus1_closed(Real n);

struct BoundSample {
    Real n;
    Real bound;
    Real m_opt;
    Real log_bound;
};

struct BoundCurve {
    SParam s;
    std::vector<BoundSample> samples;
    Real tolerance;

    /// CSV with header `n,bound,m_opt`, 17 significant digits.
    void write_csv(std::ostream& os) const;
};

/// Uniform grid 0, step, 2 step, ... <= n_max.
std::vector<Real> uniform_grid(Real n_max, Real step);

BoundCurve make_bound_curve(SParam s, const std::vector<Real>& grid, Exec exec = Exec::parallel);

struct Rank2Candidate {
    Real n1;
    Real n2;
    Real p;  // weight of the n1 component
    Real value;
};

struct Rank2GridSpec {
    int n1_points = 48;
    int n2_points = 48;
    int refine_rounds = 4;
};

/// Best two-component mixture p B(n1) + (1-p) B(n2) with
/// p n1 + (1-p) n2 = n, n1 <= n <= n2 <= 50 n + 10.
Rank2Candidate rank2_search(Real n, SParam s, const Rank2GridSpec& grid = {});

struct ConvexityViolation {
    enum class Kind { convexity, monotonicity } kind;
    std::size_t index;  // middle point of the offending triple, or the later point of a pair
    Real n;
    Real value;  // second difference, or log-bound increase
};

struct ConvexityReport {
    bool passed = true;
    std::size_t points = 0;
    Real min_second_difference = 0;
    bool decays = true;  // last bound below the first
    std::optional<ConvexityViolation> first_violation;

    std::string describe() const;
};

/// Checks second divided differences >= -1e-10 and strict decrease (in log
/// space, so underflowed tails still compare) over [0, n_max].
ConvexityReport convexity_check(SParam s, Real n_max, Real step, Exec exec = Exec::parallel);
ConvexityReport convexity_check(const BoundCurve& curve, Real step);

}  // namespace qng
