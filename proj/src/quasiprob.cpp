#include "qng/quasiprob.hpp"

#include <cmath>

namespace qng {

SParam::SParam(Real s) : s_(s)
{
    if (!(s <= 0)) throw DomainError("ordering parameter s must be <= 0");
}

void PureGaussianParam::validate() const
{
    if (!(n >= 0)) throw DomainError("pure Gaussian: n must be >= 0");
    if (!(m >= 0 && m <= n)) throw DomainError("pure Gaussian: squeezing fraction must lie in [0, n]");
}

Complex PureGaussianParam::alpha() const { return std::polar(std::sqrt(n - m), theta); }

Complex PureGaussianParam::xi() const { return std::polar(std::asinh(std::sqrt(m)), phi); }

Real qs_origin_probs(std::span<const Real> probs, SParam s)
{
    const Real ratio = -(1 + s) / (1 - s);
    Real acc = 0;
    Real w = 1;
    for (Real p : probs) {
        acc += w * p;
        w *= ratio;
    }
    return 2 / (kPi * (1 - s)) * acc;
}

Real qs_origin(const TruncatedState& state, SParam s)
{
    const auto p = photon_probs(state);
    return qs_origin_probs(p, s);
}

QsValue qs_origin_with_error(const TruncatedState& state, SParam s)
{
    return {qs_origin(state, s), state.tail_bound() * 2 / (kPi * (1 - s))};
}

Real qs_fock(int m, SParam s)
{
    if (m < 0) throw DomainError("Fock index must be >= 0");
    const Real ratio = -(1 + s) / (1 - s);
    return 2 / (kPi * (1 - s)) * std::pow(ratio, m);
}

Real qs_pure_gaussian(const PureGaussianParam& p, SParam s)
{
    p.validate();
    const Real denom = 1 + s * (s - 2 - 4 * p.m);
    if (!(denom > 0)) throw DomainError("quasiprobability exponent denominator must be positive");
    const Real cross = 2 * std::sqrt(p.m * (1 + p.m)) * std::cos(2 * p.theta - p.phi);
    const Real exponent = -2 * (p.n - p.m) * (1 + 2 * p.m - cross - s) / denom;
    return 2 * std::exp(exponent) / (kPi * std::sqrt(denom));
}

Real qs_at(const TruncatedState& state, SParam s, Complex alpha)
{
    if (alpha == Complex{0, 0}) return qs_origin(state, s);
    return qs_origin(apply_map(state, GaussianMapSpec{-alpha, 0}), s);
}

}  // namespace qng
