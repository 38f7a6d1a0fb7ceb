#pragma once

#include <span>
#include <vector>

#include "qng/types.hpp"

namespace qng {

/// Density operator of one bosonic mode in the Fock basis |0>,...,|cutoff>.
///
/// `tail_bound` is an upper estimate of the probability mass that lives
/// above the cutoff and was dropped; the retained trace is 1 - tail_bound
/// up to rounding.
class TruncatedState {
public:
    TruncatedState(Matrix rho, Real tail_bound);

    int cutoff() const { return static_cast<int>(rho_.rows()) - 1; }
    int dim() const { return static_cast<int>(rho_.rows()); }
    const Matrix& matrix() const { return rho_; }
    Real tail_bound() const { return tail_bound_; }

    Complex operator()(int m, int n) const { return rho_(m, n); }
    Real trace() const;

    /// Checks Hermiticity, trace window and positivity; throws DomainError.
    void validate() const;

    /// Index of the highest Fock level with population above `threshold`.
    int support(Real threshold = 1e-24L) const;

private:
    Matrix rho_;
    Real tail_bound_;
};

struct ChannelSpec {
    Real epsilon = 0;  // loss; transmissivity is 1 - epsilon
};

/// Squeeze by real `squeeze` first, then displace by `displacement`.
struct GaussianMapSpec {
    Complex displacement{0, 0};
    Real squeeze = 0;

    bool is_identity() const { return displacement == Complex{0, 0} && squeeze == 0; }
};

struct Moments {
    Real nbar;
    Complex a1;  // <a>
    Complex a2;  // <a^2>
};

// Constructors. Truncation tails are computed from the analytic norm and
// must stay below kMaxTail.
inline constexpr Real kMaxTail = 1e-6L;

TruncatedState make_fock(int m, int cutoff);
TruncatedState make_coherent(Complex alpha, int cutoff);
/// Normalized a^dagger |alpha>, alpha real.
TruncatedState make_pac(Real alpha, int cutoff);
/// Normalized a S(r)|0>, r real. r = 0 is taken as its limit |1>.
TruncatedState make_pss(Real r, int cutoff);
/// D(alpha) S(xi)|0> with S(xi) = exp((xi a^dag^2 - xi^* a^2)/2), built
/// from the annihilator recurrence rather than operator exponentials.
TruncatedState make_gaussian_pure(Complex alpha, Complex xi, int cutoff);
TruncatedState make_squeezed_vacuum(Complex xi, int cutoff);

/// Pure state from (possibly unnormalized) amplitudes with a known norm.
TruncatedState pure_state(const Vector& amplitudes, Real tail_bound);

/// Convex combination; all states must share a cutoff.
TruncatedState mix(std::span<const TruncatedState> states, std::span<const Real> weights);

/// Pure-loss channel via the amplitude-damping operator sum.
TruncatedState apply_loss(const TruncatedState& state, ChannelSpec channel);

/// D(beta) S(q) rho S(q)^dag D(beta)^dag. The result keeps the input cutoff;
/// mass pushed above it is added to tail_bound and must stay below 1e-8.
TruncatedState apply_map(const TruncatedState& state, const GaussianMapSpec& map);

Moments moments(const TruncatedState& state);
std::vector<Real> photon_probs(const TruncatedState& state);

// Truncated operators. `dim` is the number of retained Fock levels.
Matrix annihilation(int dim);
/// exp(beta a^dag - beta^* a) on the truncated space.
Matrix displacement_operator(Complex beta, int dim);
/// exp(q (a^dag^2 - a^2) / 2) on the truncated space.
Matrix squeeze_operator(Real q, int dim);

/// Rows of headroom used above a state's support when applying `map`.
int map_headroom(const GaussianMapSpec& map);

}  // namespace qng
