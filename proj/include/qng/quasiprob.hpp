#pragma once

#include "qng/fock_core.hpp"

namespace qng {

/// Ordering parameter of the quasiprobability family: s = 0 is the Wigner
/// function, s = -1 the Husimi Q-function. Only s <= 0 is supported.
///
/// For s < -1 the distribution corresponds to vacuum detection with
/// efficiency 2/(1 - s); the associated heterodyne rescaling is not modelled.
class SParam {
public:
    explicit SParam(Real s);
    Real value() const { return s_; }
    operator Real() const { return s_; }

private:
    Real s_;
};

/// Pure Gaussian state D(alpha) S(xi)|0> parametrized by its mean photon
/// number n, squeezing fraction m = sinh^2 r, and the phases of alpha and xi.
struct PureGaussianParam {
    Real n = 0;
    Real m = 0;
    Real theta = 0;
    Real phi = 0;

    void validate() const;
    Complex alpha() const;
    Complex xi() const;
};

struct QsValue {
    Real value;
    Real truncation_error;  // tail_bound * 2 / (pi (1 - s))
};

/// Q_s at the phase-space origin from the photon-number series.
Real qs_origin(const TruncatedState& state, SParam s);
QsValue qs_origin_with_error(const TruncatedState& state, SParam s);
/// Same series evaluated on a bare photon-number distribution.
Real qs_origin_probs(std::span<const Real> probs, SParam s);

/// Closed form for |m><m|.
Real qs_fock(int m, SParam s);

/// Closed form for a pure Gaussian state.
Real qs_pure_gaussian(const PureGaussianParam& p, SParam s);

/// Q_s[rho](alpha) = Q_s[D(-alpha) rho D(alpha)](0).
Real qs_at(const TruncatedState& state, SParam s, Complex alpha);

}  // namespace qng
