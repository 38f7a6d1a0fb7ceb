#pragma once

#include <iosfwd>
#include <vector>

#include "qng/hull_bounds.hpp"

namespace qng {

/// Photon counting over `k` trials; the total count is Poisson with mean
/// k * n_avg and the bound is evaluated at total / k.
struct ErrorSpec {
    int k = 100;
    std::vector<Real> n_avg_grid;
    std::vector<Real> s_list;

    void validate() const;
};

struct ErrorRow {
    Real s;
    Real n_avg;
    Real mean;  // E[B_s(N/k)] / B_s(0)
    Real std;   // standard deviation of B_s(N/k) / B_s(0)
};

struct PoissonMoments {
    Real mean;
    Real variance;
};

/// Exact mean and variance of B_s(N/k), N ~ Poisson(k n_avg), unnormalized.
/// The support is summed outward from the mode until the remaining mass is
/// below 1e-12.
PoissonMoments bound_poisson_moments(Real n_avg, int k, SParam s);

/// Rows s-major, then by n_avg.
std::vector<ErrorRow> bound_error_curve(const ErrorSpec& spec, Exec exec = Exec::parallel);

/// `# k=<k>` metadata line, then header `s,n_avg,mean,std`.
void write_error_csv(std::ostream& os, const ErrorSpec& spec, const std::vector<ErrorRow>& rows);

}  // namespace qng
