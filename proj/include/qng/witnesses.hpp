#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "qng/hull_bounds.hpp"

namespace qng {

struct WitnessReport {
    Real s;
    Real q_value;  // Q_s(0) of the (mapped) state
    Real n_bar;    // mean photon number fed to the bound, slack included
    Real bound;
    Real delta;    // q_value - bound
    bool conclusive;
    std::optional<GaussianMapSpec> map;
};

/// Criterion (a): Q_s(0) against the hull bound at the state's own photon
/// number. `nbar_slack` is added to the measured n-bar to model an upper
/// estimate instead of the exact value.
WitnessReport delta_a(const TruncatedState& state, SParam s, Real nbar_slack = 0);

/// Criterion (b): the same test after a Gaussian map.
WitnessReport delta_b(const TruncatedState& state, SParam s, const GaussianMapSpec& map, Real nbar_slack = 0);

/// Re-centring displacement for lossy photon-added coherent states,
/// -alpha sqrt(1 - eps). Approximate; accurate for large eps and alpha >~ 1.5.
Complex beta_opt(Real alpha, Real epsilon);

/// Squeeze minimizing the mean photon number of a lossy photon-subtracted
/// squeezed state, -arccosh(mu_opt).
Real q_opt(Real r, Real epsilon);
Real mu_opt(Real r, Real epsilon);

enum class MapFamily { displacement, squeeze };

/// Local derivative-free minimization of delta_b over real displacement or
/// real squeeze, starting at `seed`. Never returns a map worse than the seed.
GaussianMapSpec refine_map(const TruncatedState& state, SParam s, const GaussianMapSpec& seed, MapFamily which,
                           Real nbar_slack = 0);

struct FockFamily {
    int m;
};
struct PacFamily {
    Real alpha;
};
struct PssFamily {
    Real r;
};
struct VacuumFamily {};

using StateFamily = std::variant<FockFamily, PacFamily, PssFamily, VacuumFamily>;

std::string family_name(const StateFamily& family);
Real family_param(const StateFamily& family);
TruncatedState family_state(const StateFamily& family, int cutoff);

enum class Criterion { a, b };

std::string criterion_name(Criterion c);

struct WitnessOptions {
    int cutoff = 80;
    Real nbar_slack = 0;
    bool refine = true;  // criterion b: refine the analytic seed map
};

/// Witness of the family member after loss eps. For criterion b the map is
/// seeded with beta_opt (PAC), q_opt (PSS) or the identity (otherwise).
WitnessReport family_witness(const StateFamily& family, const TruncatedState& base, Real epsilon, SParam s,
                             Criterion criterion, const WitnessOptions& options);

struct ThresholdOptions {
    Real tol = 1e-5L;
    int scan_points = 50;
    WitnessOptions witness;
};

struct ThresholdResult {
    enum class Kind { value, none, one };

    Real s;
    StateFamily family;
    Criterion criterion;
    Kind kind;
    Real epsilon_star;  // largest conclusive loss found; 1 for `one`, 0 for `none`
    Real bisection_tol;
    bool bracket_verified;

    std::string label() const;  // number, "one" or "none"
};

/// Largest loss at which the witness stays conclusive.
///
/// Returns `one` when conclusive at 1 - tol. Otherwise scans a uniform grid
/// for the last conclusive point and bisects towards the next one, so
/// families with several conclusive windows report the outermost edge.
/// `none` if no scanned loss, including tol, is conclusive.
ThresholdResult epsilon_threshold(const StateFamily& family, SParam s, Criterion criterion,
                                  const ThresholdOptions& options = {});

/// One result per (family, s), family-major.
std::vector<ThresholdResult> threshold_scan(const std::vector<StateFamily>& families, const std::vector<Real>& s_list,
                                            Criterion criterion, const ThresholdOptions& options = {},
                                            Exec exec = Exec::parallel);

/// CSV header `family_param,s,criterion,epsilon_star`.
void write_threshold_csv(std::ostream& os, const std::vector<ThresholdResult>& rows);

struct WitnessCurvePoint {
    Real epsilon;
    Real s;
    Real delta;
};

/// Rows ordered s-major, then by epsilon.
std::vector<WitnessCurvePoint> witness_curve(const StateFamily& family, const std::vector<Real>& s_list,
                                             const std::vector<Real>& eps_grid, Criterion criterion,
                                             const WitnessOptions& options = {}, Exec exec = Exec::parallel);

/// CSV header `epsilon,s,delta`.
void write_witness_csv(std::ostream& os, const std::vector<WitnessCurvePoint>& rows);

}  // namespace qng
