#include "qng/error_model.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "qng/csv.hpp"
#include "qng/parallel.hpp"

namespace qng {

namespace {

constexpr Real kMassTarget = 1 - 1e-12L;

}  // namespace

void ErrorSpec::validate() const
{
    if (k < 1) throw DomainError("number of trials k must be >= 1");
    for (std::size_t i = 0; i < n_avg_grid.size(); ++i) {
        if (!(n_avg_grid[i] >= 0)) throw DomainError("n_avg values must be >= 0");
        if (i > 0 && n_avg_grid[i] < n_avg_grid[i - 1]) throw DomainError("n_avg grid must be sorted ascending");
    }
    for (Real s : s_list) SParam{s};
}

PoissonMoments bound_poisson_moments(Real n_avg, int k, SParam s)
{
    if (k < 1) throw DomainError("number of trials k must be >= 1");
    if (!(n_avg >= 0)) throw DomainError("n_avg must be >= 0");
    const Real lambda = k * n_avg;
    if (lambda == 0) return {pure_bound(0, s).bound, 0};

    auto pmf = [&](long n) {
        return std::exp(n * std::log(lambda) - lambda - std::lgamma(static_cast<Real>(n) + 1));
    };

    // Grow [lo, hi] around the mode, always taking the heavier neighbour.
    const long mode = static_cast<long>(std::floor(lambda));
    std::vector<std::pair<long, Real>> terms{{mode, pmf(mode)}};
    Real mass = terms.front().second;
    long lo = mode, hi = mode;
    Real p_lo = lo > 0 ? pmf(lo - 1) : 0;
    Real p_hi = pmf(hi + 1);
    while (mass < kMassTarget && (p_lo > 0 || p_hi > 0)) {
        if (p_hi >= p_lo) {
            ++hi;
            terms.emplace_back(hi, p_hi);
            mass += p_hi;
            p_hi = pmf(hi + 1);
        } else {
            --lo;
            terms.emplace_back(lo, p_lo);
            mass += p_lo;
            p_lo = lo > 0 ? pmf(lo - 1) : 0;
        }
    }

    std::vector<Real> values(terms.size());
    Real mean = 0;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        values[i] = pure_bound(static_cast<Real>(terms[i].first) / k, s).bound;
        mean += terms[i].second * values[i];
    }
    mean /= mass;
    Real var = 0;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        const Real d = values[i] - mean;
        var += terms[i].second * d * d;
    }
    return {mean, var / mass};
}

std::vector<ErrorRow> bound_error_curve(const ErrorSpec& spec, Exec exec)
{
    spec.validate();
    const std::size_t nn = spec.n_avg_grid.size();
    std::vector<ErrorRow> rows(spec.s_list.size() * nn);
    for_each_index(rows.size(), exec, [&](std::size_t idx) {
        const SParam s(spec.s_list[idx / nn]);
        const Real n_avg = spec.n_avg_grid[idx % nn];
        const Real norm = vacuum_bound(s);
        const auto mom = bound_poisson_moments(n_avg, spec.k, s);
        rows[idx] = {s, n_avg, mom.mean / norm, std::sqrt(mom.variance) / norm};
    });
    return rows;
}

void write_error_csv(std::ostream& os, const ErrorSpec& spec, const std::vector<ErrorRow>& rows)
{
    os << "# k=" << spec.k << '\n';
    os << "s,n_avg,mean,std\n";
    for (const auto& r : rows) {
        os << format_real(r.s) << ',' << format_real(r.n_avg) << ',' << format_real(r.mean) << ','
           << format_real(r.std) << '\n';
    }
}

}  // namespace qng
