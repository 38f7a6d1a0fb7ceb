#include "qng/witnesses.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include <boost/math/tools/minima.hpp>

#include "qng/csv.hpp"
#include "qng/parallel.hpp"

namespace qng {

namespace {

constexpr Real kRefineHalfWidth = 0.5L;
constexpr int kRefineBits = std::numeric_limits<Real>::digits / 2;
// Gains below this are rounding noise (a displaced vacuum ties the bound).
constexpr Real kRefineMinGain = 1e-15L;

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_epsilon(Real eps)
{
    if (!(eps >= 0 && eps <= 1)) throw DomainError("loss epsilon must lie in [0, 1]");
}

}  // namespace

WitnessReport delta_a(const TruncatedState& state, SParam s, Real nbar_slack)
{
    if (!(nbar_slack >= 0)) throw DomainError("n-bar slack must be >= 0");
    const Real q = qs_origin(state, s);
    const Real nbar = std::max(Real(0), moments(state).nbar) + nbar_slack;
    const Real bound = pure_bound(nbar, s).bound;
    const Real delta = q - bound;
    return {s, q, nbar, bound, delta, delta < 0, std::nullopt};
}

WitnessReport delta_b(const TruncatedState& state, SParam s, const GaussianMapSpec& map, Real nbar_slack)
{
    auto report = delta_a(apply_map(state, map), s, nbar_slack);
    report.map = map;
    return report;
}

Complex beta_opt(Real alpha, Real epsilon)
{
    if (!(alpha >= 0)) throw DomainError("beta_opt: alpha must be >= 0");
    require_epsilon(epsilon);
    return {-alpha * std::sqrt(1 - epsilon), 0};
}

Real mu_opt(Real r, Real epsilon)
{
    if (!(r >= 0)) throw DomainError("q_opt: r must be >= 0");
    require_epsilon(epsilon);
    const Real mr2 = std::cosh(r) * std::cosh(r);
    const Real lead = 4 * epsilon - 3;
    const Real num = 6 * (1 - epsilon) * mr2 + lead;
    const Real den = std::sqrt(lead * lead + 12 * (1 - epsilon) * epsilon * mr2);
    const Real mu2 = (1 + num / den) / 2;
    return std::max(Real(1), std::sqrt(std::max(Real(0), mu2)));
}

Real q_opt(Real r, Real epsilon) { return -std::acosh(mu_opt(r, epsilon)); }

GaussianMapSpec refine_map(const TruncatedState& state, SParam s, const GaussianMapSpec& seed, MapFamily which,
                           Real nbar_slack)
{
    auto with = [&](Real x) {
        GaussianMapSpec map = seed;
        if (which == MapFamily::displacement) {
            map.displacement = {x, 0};
        } else {
            map.squeeze = x;
        }
        return map;
    };
    auto objective = [&](Real x) -> Real {
        try {
            return delta_b(state, s, with(x), nbar_slack).delta;
        } catch (const TruncationError&) {
            return std::numeric_limits<Real>::max();
        }
    };

    const Real start = which == MapFamily::displacement ? seed.displacement.real() : seed.squeeze;
    Real best_delta;
    try {
        best_delta = delta_b(state, s, seed, nbar_slack).delta;
    } catch (const TruncationError&) {
        best_delta = std::numeric_limits<Real>::max();
    }

    std::uintmax_t iters = 200;
    const auto [x, fx] = boost::math::tools::brent_find_minima(objective, start - kRefineHalfWidth,
                                                               start + kRefineHalfWidth, kRefineBits, iters);
    GaussianMapSpec best = seed;
    if (fx < best_delta - kRefineMinGain) {
        best = with(x);
        best_delta = fx;
    }
    // Brent is local; the identity gets an explicit look when it lies in the window.
    if (std::abs(start) <= kRefineHalfWidth && objective(0) < best_delta - kRefineMinGain) best = with(0);
    return best;
}

std::string family_name(const StateFamily& family)
{
    return std::visit(overloaded{[](const FockFamily&) { return std::string("fock"); },
                                 [](const PacFamily&) { return std::string("pac"); },
                                 [](const PssFamily&) { return std::string("pss"); },
                                 [](const VacuumFamily&) { return std::string("vacuum"); }},
                      family);
}

Real family_param(const StateFamily& family)
{
    return std::visit(overloaded{[](const FockFamily& f) { return static_cast<Real>(f.m); },
                                 [](const PacFamily& f) { return f.alpha; }, [](const PssFamily& f) { return f.r; },
                                 [](const VacuumFamily&) { return Real(0); }},
                      family);
}

TruncatedState family_state(const StateFamily& family, int cutoff)
{
    return std::visit(overloaded{[&](const FockFamily& f) { return make_fock(f.m, cutoff); },
                                 [&](const PacFamily& f) { return make_pac(f.alpha, cutoff); },
                                 [&](const PssFamily& f) { return make_pss(f.r, cutoff); },
                                 [&](const VacuumFamily&) { return make_fock(0, cutoff); }},
                      family);
}

std::string criterion_name(Criterion c) { return c == Criterion::a ? "a" : "b"; }

WitnessReport family_witness(const StateFamily& family, const TruncatedState& base, Real epsilon, SParam s,
                             Criterion criterion, const WitnessOptions& options)
{
    const auto lossy = apply_loss(base, ChannelSpec{epsilon});
    if (criterion == Criterion::a) return delta_a(lossy, s, options.nbar_slack);

    GaussianMapSpec seed;
    MapFamily which = MapFamily::displacement;
    if (const auto* pac = std::get_if<PacFamily>(&family)) {
        seed.displacement = beta_opt(std::abs(pac->alpha), epsilon);
        if (pac->alpha < 0) seed.displacement = -seed.displacement;
    } else if (const auto* pss = std::get_if<PssFamily>(&family)) {
        seed.squeeze = q_opt(std::abs(pss->r), epsilon);
        if (pss->r < 0) seed.squeeze = -seed.squeeze;
        which = MapFamily::squeeze;
    }
    const auto map = options.refine ? refine_map(lossy, s, seed, which, options.nbar_slack) : seed;
    return delta_b(lossy, s, map, options.nbar_slack);
}

std::string ThresholdResult::label() const
{
    switch (kind) {
    case Kind::one:
        return "one";
    case Kind::none:
        return "none";
    case Kind::value:
        break;
    }
    return format_real(epsilon_star);
}

ThresholdResult epsilon_threshold(const StateFamily& family, SParam s, Criterion criterion,
                                  const ThresholdOptions& options)
{
    const Real tol = options.tol;
    if (!(tol >= 1e-6L && tol < 0.5L)) throw DomainError("threshold tolerance must lie in [1e-6, 0.5)");
    if (options.scan_points < 1) throw DomainError("threshold scan needs >= 1 point");

    const auto base = family_state(family, options.witness.cutoff);
    auto conclusive = [&](Real eps) {
        return family_witness(family, base, eps, s, criterion, options.witness).conclusive;
    };

    ThresholdResult result{s, family, criterion, ThresholdResult::Kind::value, 0, tol, false};

    const Real top = 1 - tol;
    if (conclusive(top)) {
        result.kind = ThresholdResult::Kind::one;
        result.epsilon_star = 1;
        result.bracket_verified = conclusive(1 - 2 * tol);
        return result;
    }

    // Last conclusive point of the scan; the scan's final point is `top`.
    const int k = options.scan_points;
    auto grid_point = [&](int i) { return top * static_cast<Real>(i) / k; };
    int last = -1;
    for (int i = k - 1; i >= 0; --i) {
        if (conclusive(grid_point(i))) {
            last = i;
            break;
        }
    }
    Real lo, hi;
    if (last >= 0) {
        lo = grid_point(last);
        hi = grid_point(last + 1);
    } else if (conclusive(tol)) {
        lo = tol;
        hi = grid_point(1);
    } else {
        result.kind = ThresholdResult::Kind::none;
        result.bracket_verified = true;
        return result;
    }

    while (hi - lo > tol) {
        const Real mid = (lo + hi) / 2;
        (conclusive(mid) ? lo : hi) = mid;
    }
    result.epsilon_star = lo;
    const bool below = conclusive(std::max(Real(0), lo - 2 * tol));
    const bool above = !conclusive(std::min(Real(1), lo + 2 * tol));
    result.bracket_verified = below && above;
    return result;
}

std::vector<ThresholdResult> threshold_scan(const std::vector<StateFamily>& families, const std::vector<Real>& s_list,
                                            Criterion criterion, const ThresholdOptions& options, Exec exec)
{
    const std::size_t ns = s_list.size();
    std::vector<std::optional<ThresholdResult>> slots(families.size() * ns);
    for_each_index(slots.size(), exec, [&](std::size_t idx) {
        slots[idx] = epsilon_threshold(families[idx / ns], SParam(s_list[idx % ns]), criterion, options);
    });
    std::vector<ThresholdResult> out;
    out.reserve(slots.size());
    for (auto& r : slots) out.push_back(*r);
    return out;
}

void write_threshold_csv(std::ostream& os, const std::vector<ThresholdResult>& rows)
{
    os << "family_param,s,criterion,epsilon_star\n";
    for (const auto& r : rows) {
        os << format_real(family_param(r.family)) << ',' << format_real(r.s) << ',' << criterion_name(r.criterion)
           << ',' << r.label() << '\n';
    }
}

std::vector<WitnessCurvePoint> witness_curve(const StateFamily& family, const std::vector<Real>& s_list,
                                             const std::vector<Real>& eps_grid, Criterion criterion,
                                             const WitnessOptions& options, Exec exec)
{
    for (Real e : eps_grid) require_epsilon(e);
    const auto base = family_state(family, options.cutoff);
    const std::size_t ne = eps_grid.size();
    std::vector<WitnessCurvePoint> rows(s_list.size() * ne);
    for_each_index(rows.size(), exec, [&](std::size_t idx) {
        const Real s = s_list[idx / ne];
        const Real eps = eps_grid[idx % ne];
        rows[idx] = {eps, s, family_witness(family, base, eps, SParam(s), criterion, options).delta};
    });
    return rows;
}

void write_witness_csv(std::ostream& os, const std::vector<WitnessCurvePoint>& rows)
{
    os << "epsilon,s,delta\n";
    for (const auto& r : rows) {
        os << format_real(r.epsilon) << ',' << format_real(r.s) << ',' << format_real(r.delta) << '\n';
    }
}

}  // namespace qng
