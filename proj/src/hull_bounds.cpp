#include "qng/hull_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include <boost/math/tools/minima.hpp>

#include "qng/csv.hpp"
#include "qng/parallel.hpp"

namespace qng {

namespace {

constexpr int kBrentBits = std::numeric_limits<Real>::digits / 2;
constexpr std::uintmax_t kBrentMaxIter = 500;
constexpr Real kConvexityTol = 1e-10L;

void require_n(Real n)
{
    if (!(n >= 0) || !std::isfinite(n)) throw DomainError("mean photon number must be finite and >= 0");
}

/// Brent minimization of f on [lo, hi]; endpoints are compared explicitly
/// since the minimizer never evaluates them.
template <class F>
std::pair<Real, Real> minimize_on(F&& f, Real lo, Real hi)
{
    std::uintmax_t iters = kBrentMaxIter;
    auto [x, fx] = boost::math::tools::brent_find_minima(f, lo, hi, kBrentBits, iters);
    for (Real edge : {lo, hi}) {
        const Real fe = f(edge);
        if (fe < fx) {
            x = edge;
            fx = fe;
        }
    }
    return {x, fx};
}

}  // namespace

Real pure_bound_tolerance() { return std::ldexp(Real(1), 1 - kBrentBits); }

Real bound_objective_log(Real n, Real m, SParam s)
{
    const Real denom = 1 + s * (s - 2 - 4 * m);
    const Real stretch = 1 + 2 * m + 2 * std::sqrt(m * (1 + m)) - s;
    return std::log(2 / kPi) - 2 * (n - m) * stretch / denom - std::log(denom) / 2;
}

Real bound_objective(Real n, Real m, SParam s) { return std::exp(bound_objective_log(n, m, s)); }

PureBound pure_bound(Real n, SParam s)
{
    require_n(n);
    if (n == 0) {
        const Real b0 = vacuum_bound(s);
        return {b0, 0, std::log(b0)};
    }
    // Search over sqrt(m): the objective has a sqrt(m) cusp at m = 0 and, for
    // small n, the optimum sits near n^2, below Brent's absolute tolerance in m.
    auto f = [&](Real u) { return bound_objective_log(n, std::min(n, u * u), s); };
    const auto [u, lb] = minimize_on(f, Real(0), std::sqrt(n));
    return {std::exp(lb), std::min(n, u * u), lb};
}

Real vacuum_bound(SParam s) { return 2 / (kPi * std::sqrt(1 + s * (s - 2))); }

Real wigner_bound_closed(Real n)
{
    require_n(n);
    return 2 / kPi * std::exp(-2 * n * (1 + n));
}

Real m_minus1_closed(Real n)
{
    require_n(n);
    const Complex root_arg{-17 - 21 * n + 3 * n * n + 8 * n * n * n,
                           3 * (1 + n) * std::sqrt(6 + 3 * n * (24 + n * (37 + 16 * n)))};
    // Principal branch of the cube root.
    const Complex g = std::pow(root_arg, Real(1) / 3);
    const Real m = (2 * (n - 1) + std::sqrt(Real(3)) * g.imag() - g.real()) / 6;
    return std::clamp(m, Real(0), n);
}

void BoundCurve::write_csv(std::ostream& os) const
{
    os << "n,bound,m_opt\n";
    for (const auto& smp : samples) {
        os << format_real(smp.n) << ',' << format_real(smp.bound) << ',' << format_real(smp.m_opt) << '\n';
    }
}

std::vector<Real> uniform_grid(Real n_max, Real step)
{
    if (!(step > 0)) throw DomainError("grid step must be > 0");
    if (!(n_max >= 0)) throw DomainError("grid upper end must be >= 0");
    const auto count = static_cast<std::size_t>(std::floor(n_max / step + 1e-9L)) + 1;
    std::vector<Real> grid(count);
    for (std::size_t i = 0; i < count; ++i) grid[i] = static_cast<Real>(i) * step;
    return grid;
}

BoundCurve make_bound_curve(SParam s, const std::vector<Real>& grid, Exec exec)
{
    BoundCurve curve{s, std::vector<BoundSample>(grid.size()), pure_bound_tolerance()};
    for_each_index(grid.size(), exec, [&](std::size_t i) {
        const auto pb = pure_bound(grid[i], s);
        curve.samples[i] = {grid[i], pb.bound, pb.m_opt, pb.log_bound};
    });
    return curve;
}

Rank2Candidate rank2_search(Real n, SParam s, const Rank2GridSpec& spec)
{
    require_n(n);
    if (spec.n1_points < 2 || spec.n2_points < 2) throw DomainError("rank-2 grid needs >= 2 points per axis");
    if (n == 0) return {0, 0, 1, pure_bound(0, s).bound};

    const Real n_hi = 50 * n + 10;
    auto bound_at = [&](Real x) { return pure_bound(x, s).bound; };

    std::vector<Real> g1(spec.n1_points), g2(spec.n2_points);
    for (int i = 0; i < spec.n1_points; ++i) g1[i] = n * i / (spec.n1_points - 1);
    for (int j = 0; j < spec.n2_points; ++j) {
        g2[j] = n * std::pow(n_hi / n, static_cast<Real>(j) / (spec.n2_points - 1));
    }
    g1.back() = n;
    g2.front() = n;
    std::vector<Real> b1(g1.size()), b2(g2.size());
    for (std::size_t i = 0; i < g1.size(); ++i) b1[i] = bound_at(g1[i]);
    for (std::size_t j = 0; j < g2.size(); ++j) b2[j] = bound_at(g2[j]);

    // Saturated constraint: p = (n2 - n) / (n2 - n1).
    auto mixture = [&](Real n1, Real bn1, Real n2, Real bn2) -> Rank2Candidate {
        if (n2 - n1 <= 0) return {n, n, 1, bn1};
        const Real p = (n2 - n) / (n2 - n1);
        return {n1, n2, p, p * bn1 + (1 - p) * bn2};
    };

    Rank2Candidate best = mixture(n, b1.back(), n, b2.front());
    std::size_t bi = g1.size() - 1, bj = 0;
    for (std::size_t i = 0; i < g1.size(); ++i) {
        for (std::size_t j = 0; j < g2.size(); ++j) {
            const auto c = mixture(g1[i], b1[i], g2[j], b2[j]);
            if (c.value < best.value) {
                best = c;
                bi = i;
                bj = j;
            }
        }
    }

    // Coordinate refinement inside the neighbouring grid cells.
    Real lo1 = g1[bi == 0 ? 0 : bi - 1], hi1 = g1[std::min(bi + 1, g1.size() - 1)];
    Real lo2 = g2[bj == 0 ? 0 : bj - 1], hi2 = g2[std::min(bj + 1, g2.size() - 1)];
    Real n1 = best.n1, n2 = best.n2;
    for (int round = 0; round < spec.refine_rounds; ++round) {
        const Real bn2 = bound_at(n2);
        auto f1 = [&](Real x) { return mixture(x, bound_at(x), n2, bn2).value; };
        n1 = minimize_on(f1, lo1, hi1).first;
        const Real bn1 = bound_at(n1);
        auto f2 = [&](Real x) { return mixture(n1, bn1, x, bound_at(x)).value; };
        n2 = minimize_on(f2, lo2, hi2).first;
        const auto c = mixture(n1, bn1, n2, bound_at(n2));
        if (c.value < best.value) best = c;
    }
    return best;
}

std::string ConvexityReport::describe() const
{
    std::ostringstream os;
    if (passed) {
        os << "pass (" << points << " points, min second difference " << static_cast<double>(min_second_difference)
           << ")";
        return os.str();
    }
    os << "fail";
    if (first_violation) {
        const auto& v = *first_violation;
        os << ": " << (v.kind == ConvexityViolation::Kind::convexity ? "convexity" : "monotonicity")
           << " violated at n=" << static_cast<double>(v.n) << " (value " << static_cast<double>(v.value) << ")";
    }
    if (!decays) os << "; bound does not decay";
    return os.str();
}

ConvexityReport convexity_check(const BoundCurve& curve, Real step)
{
    ConvexityReport report;
    const auto& smp = curve.samples;
    report.points = smp.size();
    report.min_second_difference = std::numeric_limits<Real>::infinity();

    auto flag = [&](ConvexityViolation v) {
        report.passed = false;
        if (!report.first_violation || v.index < report.first_violation->index) report.first_violation = v;
    };

    for (std::size_t i = 1; i < smp.size(); ++i) {
        if (!(smp[i].log_bound < smp[i - 1].log_bound)) {
            flag({ConvexityViolation::Kind::monotonicity, i, smp[i].n, smp[i].log_bound - smp[i - 1].log_bound});
            break;
        }
    }
    for (std::size_t i = 1; i + 1 < smp.size(); ++i) {
        const Real d2 = (smp[i + 1].bound - 2 * smp[i].bound + smp[i - 1].bound) / (step * step);
        report.min_second_difference = std::min(report.min_second_difference, d2);
        if (d2 < -kConvexityTol) {
            flag({ConvexityViolation::Kind::convexity, i, smp[i].n, d2});
            break;
        }
    }
    if (smp.size() >= 2) report.decays = smp.back().bound < smp.front().bound;
    if (!report.decays) report.passed = false;
    return report;
}

ConvexityReport convexity_check(SParam s, Real n_max, Real step, Exec exec)
{
    return convexity_check(make_bound_curve(s, uniform_grid(n_max, step), exec), step);
}

}  // namespace qng
