#include "qng/fock_core.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace qng {

namespace {

constexpr Real kHermTol = 1e-10L;
constexpr Real kTraceTol = 1e-10L;
constexpr Real kPsdTol = 1e-8L;
constexpr Real kMapLeakMax = 1e-8L;

std::string fmt_real(Real x)
{
    std::ostringstream os;
    os.precision(6);
    os << static_cast<double>(x);
    return os.str();
}

void require_cutoff(int cutoff)
{
    if (cutoff < 1) throw DomainError("cutoff must be >= 1, got " + std::to_string(cutoff));
}

Real log_factorial(int n) { return std::lgamma(static_cast<Real>(n) + 1); }

/// First `count` Fock amplitudes of D(alpha)S(xi)|0>.
///
/// The state is annihilated by mu (a - alpha) - e^{i phi} nu (a^dag - alpha^*),
/// which gives a three-term recurrence in the Fock index.
Vector gaussian_amplitudes(Complex alpha, Complex xi, int count)
{
    const Real r = std::abs(xi);
    const Complex phase = r > 0 ? xi / r : Complex{1, 0};
    const Real mu = std::cosh(r);
    const Real nu = std::sinh(r);
    const Complex t = phase * std::tanh(r);
    const Complex gamma = mu * alpha - phase * nu * std::conj(alpha);

    Vector c = Vector::Zero(count);
    c(0) = std::exp(-std::norm(alpha) / 2 + t / Real(2) * std::conj(alpha) * std::conj(alpha)) /
           std::sqrt(mu);
    for (int n = 0; n + 1 < count; ++n) {
        Complex next = gamma * c(n);
        if (n > 0) next += phase * nu * std::sqrt(static_cast<Real>(n)) * c(n - 1);
        c(n + 1) = next / (mu * std::sqrt(static_cast<Real>(n + 1)));
    }
    return c;
}

Real mass(const Vector& v) { return v.squaredNorm(); }

void check_tail(Real tail, const char* what)
{
    if (tail >= kMaxTail) {
        throw TruncationError(std::string(what) + ": truncated mass " + fmt_real(tail) +
                              " exceeds budget; increase cutoff");
    }
}

struct Spectral {
    Matrix vectors;
    RealVector values;
};

enum class Generator { displacement, squeeze };

/// Eigen-decomposition of i*G for the unit displacement (a^dag - a) or
/// squeeze ((a^dag^2 - a^2)/2) generator, cached per dimension.
std::shared_ptr<const Spectral> generator_spectrum(Generator kind, int dim)
{
    static std::mutex mutex;
    static std::map<std::pair<int, int>, std::shared_ptr<const Spectral>> cache;

    const auto key = std::make_pair(static_cast<int>(kind), dim);
    {
        std::lock_guard lock(mutex);
        if (auto it = cache.find(key); it != cache.end()) return it->second;
    }

    const Matrix a = annihilation(dim);
    const Matrix ad = a.adjoint();
    Matrix gen = kind == Generator::displacement ? Matrix(ad - a) : Matrix((ad * ad - a * a) / Real(2));
    const Matrix herm = Complex{0, 1} * gen;
    Eigen::SelfAdjointEigenSolver<Matrix> solver(herm);
    if (solver.info() != Eigen::Success) throw Error("generator eigendecomposition failed");
    auto spec = std::make_shared<const Spectral>(Spectral{solver.eigenvectors(), solver.eigenvalues()});

    std::lock_guard lock(mutex);
    cache.emplace(key, spec);
    return spec;
}

/// exp(x G) = exp(-i x H) with H = iG.
Matrix exp_generator(Generator kind, Real x, int dim)
{
    const auto spec = generator_spectrum(kind, dim);
    Vector phases(dim);
    for (int k = 0; k < dim; ++k) phases(k) = std::polar(Real(1), -x * spec->values(k));
    return spec->vectors * phases.asDiagonal() * spec->vectors.adjoint();
}

}  // namespace

TruncatedState::TruncatedState(Matrix rho, Real tail_bound) : rho_(std::move(rho)), tail_bound_(tail_bound)
{
    if (rho_.rows() != rho_.cols() || rho_.rows() < 2) {
        throw DomainError("density matrix must be square with cutoff >= 1");
    }
    if (!(tail_bound_ >= 0)) throw DomainError("tail_bound must be >= 0");
    const Real herm = (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff();
    if (herm > kHermTol) throw DomainError("density matrix not Hermitian (deviation " + fmt_real(herm) + ")");
    const Real tr = trace();
    if (tr > 1 + kTraceTol || tr < 1 - tail_bound_ - kTraceTol) {
        throw DomainError("trace " + fmt_real(tr) + " outside [1 - tail_bound, 1]");
    }
}

Real TruncatedState::trace() const { return rho_.trace().real(); }

void TruncatedState::validate() const
{
    Eigen::SelfAdjointEigenSolver<Matrix> solver(rho_, Eigen::EigenvaluesOnly);
    const Real lowest = solver.eigenvalues().minCoeff();
    if (lowest < -kPsdTol) throw DomainError("density matrix has eigenvalue " + fmt_real(lowest));
}

int TruncatedState::support(Real threshold) const
{
    for (int n = cutoff(); n > 0; --n) {
        if (std::abs(rho_(n, n)) > threshold) return n;
    }
    return 0;
}

TruncatedState pure_state(const Vector& amplitudes, Real tail_bound)
{
    Matrix rho = amplitudes * amplitudes.adjoint();
    // Symmetrize away rounding so the Hermiticity check is exact.
    rho = (rho + rho.adjoint()).eval() / Real(2);
    return TruncatedState(std::move(rho), tail_bound);
}

TruncatedState make_fock(int m, int cutoff)
{
    require_cutoff(cutoff);
    if (m < 0) throw DomainError("Fock index must be >= 0");
    if (m > cutoff) {
        throw DomainError("cutoff " + std::to_string(cutoff) + " too small for Fock state |" +
                          std::to_string(m) + ">");
    }
    Vector c = Vector::Zero(cutoff + 1);
    c(m) = 1;
    return pure_state(c, 0);
}

TruncatedState make_coherent(Complex alpha, int cutoff)
{
    return make_gaussian_pure(alpha, Complex{0, 0}, cutoff);
}

TruncatedState make_gaussian_pure(Complex alpha, Complex xi, int cutoff)
{
    require_cutoff(cutoff);
    Vector c = gaussian_amplitudes(alpha, xi, cutoff + 1);
    const Real tail = std::max(Real(0), 1 - mass(c));
    check_tail(tail, "gaussian state");
    return pure_state(c, tail);
}

TruncatedState make_squeezed_vacuum(Complex xi, int cutoff)
{
    return make_gaussian_pure(Complex{0, 0}, xi, cutoff);
}

TruncatedState make_pac(Real alpha, int cutoff)
{
    require_cutoff(cutoff);
    const Vector coh = gaussian_amplitudes(Complex{alpha, 0}, Complex{0, 0}, cutoff);
    Vector c = Vector::Zero(cutoff + 1);
    for (int n = 0; n < cutoff; ++n) c(n + 1) = std::sqrt(static_cast<Real>(n + 1)) * coh(n);
    c /= std::sqrt(1 + alpha * alpha);
    const Real tail = std::max(Real(0), 1 - mass(c));
    check_tail(tail, "photon-added coherent state");
    return pure_state(c, tail);
}

TruncatedState make_pss(Real r, int cutoff)
{
    require_cutoff(cutoff);
    if (r == 0) return make_fock(1, cutoff);
    const Vector sq = gaussian_amplitudes(Complex{0, 0}, Complex{r, 0}, cutoff + 2);
    Vector c = Vector::Zero(cutoff + 1);
    for (int n = 0; n <= cutoff; ++n) c(n) = std::sqrt(static_cast<Real>(n + 1)) * sq(n + 1);
    c /= std::abs(std::sinh(r));
    const Real tail = std::max(Real(0), 1 - mass(c));
    check_tail(tail, "photon-subtracted squeezed state");
    return pure_state(c, tail);
}

TruncatedState mix(std::span<const TruncatedState> states, std::span<const Real> weights)
{
    if (states.empty() || states.size() != weights.size()) {
        throw DomainError("mix: need one weight per state");
    }
    Real total = 0;
    for (Real w : weights) {
        if (w < 0) throw DomainError("mix: negative weight");
        total += w;
    }
    if (std::abs(total - 1) > 1e-12L) throw DomainError("mix: weights must sum to 1");

    const int dim = states.front().dim();
    Matrix rho = Matrix::Zero(dim, dim);
    Real tail = 0;
    for (std::size_t i = 0; i < states.size(); ++i) {
        if (states[i].dim() != dim) throw DomainError("mix: cutoff mismatch");
        rho += weights[i] * states[i].matrix();
        tail += weights[i] * states[i].tail_bound();
    }
    return TruncatedState(std::move(rho), tail);
}

TruncatedState apply_loss(const TruncatedState& state, ChannelSpec channel)
{
    const Real eps = channel.epsilon;
    if (!(eps >= 0 && eps <= 1)) throw DomainError("loss epsilon must lie in [0, 1]");
    if (eps == 0) return state;

    const int dim = state.dim();
    const Matrix& rho = state.matrix();
    Matrix out = Matrix::Zero(dim, dim);

    if (eps == 1) {
        out(0, 0) = state.trace();
        return TruncatedState(std::move(out), state.tail_bound());
    }

    // Kraus weights w(m, k) = sqrt(C(m+k, k) t^m eps^k): K_k |m+k> = w(m,k) |m>.
    const Real log_t = std::log1p(-eps);
    const Real log_eps = std::log(eps);
    std::vector<Real> lf(2 * dim + 1);
    for (int i = 0; i <= 2 * dim; ++i) lf[i] = log_factorial(i);
    Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic> w(dim, dim);
    for (int m = 0; m < dim; ++m) {
        for (int k = 0; m + k < dim; ++k) {
            const Real log_binom = lf[m + k] - lf[k] - lf[m];
            w(m, k) = std::exp((log_binom + m * log_t + k * log_eps) / 2);
        }
    }

    for (int m = 0; m < dim; ++m) {
        for (int n = 0; n < dim; ++n) {
            Complex acc{0, 0};
            for (int k = 0; m + k < dim && n + k < dim; ++k) acc += w(m, k) * w(n, k) * rho(m + k, n + k);
            out(m, n) = acc;
        }
    }
    return TruncatedState(std::move(out), state.tail_bound());
}

int map_headroom(const GaussianMapSpec& map)
{
    const Real sh = std::sinh(map.squeeze);
    const Real rows = std::max({Real(20), 4 * std::norm(map.displacement), 4 * sh * sh});
    return static_cast<int>(std::ceil(rows));
}

TruncatedState apply_map(const TruncatedState& state, const GaussianMapSpec& map)
{
    if (!std::isfinite(map.squeeze) || !std::isfinite(map.displacement.real()) ||
        !std::isfinite(map.displacement.imag())) {
        throw DomainError("Gaussian map parameters must be finite");
    }
    if (map.is_identity()) return state;

    const int dim = state.dim();
    const int work = dim + map_headroom(map);

    Matrix rho = Matrix::Zero(work, work);
    rho.topLeftCorner(dim, dim) = state.matrix();

    Matrix u = Matrix::Identity(work, work);
    if (map.squeeze != 0) u = squeeze_operator(map.squeeze, work);
    if (map.displacement != Complex{0, 0}) u = displacement_operator(map.displacement, work) * u;

    Matrix mapped = u * rho * u.adjoint();
    const Real before = state.trace();
    const Real after = mapped.trace().real();
    if (std::abs(after - before) > kMapLeakMax) {
        throw TruncationError("Gaussian map did not preserve trace (" + fmt_real(after - before) + ")");
    }

    Matrix kept = mapped.topLeftCorner(dim, dim);
    kept = (kept + kept.adjoint()).eval() / Real(2);
    const Real leak = std::max(Real(0), after - kept.trace().real());
    if (leak > kMapLeakMax) {
        throw TruncationError("Gaussian map pushed " + fmt_real(leak) +
                              " probability above cutoff " + std::to_string(state.cutoff()));
    }
    return TruncatedState(std::move(kept), state.tail_bound() + leak);
}

Moments moments(const TruncatedState& state)
{
    const Matrix& rho = state.matrix();
    Moments out{0, {0, 0}, {0, 0}};
    for (int m = 1; m < state.dim(); ++m) {
        out.nbar += m * rho(m, m).real();
        out.a1 += std::sqrt(static_cast<Real>(m)) * rho(m, m - 1);
        if (m >= 2) out.a2 += std::sqrt(static_cast<Real>(m) * (m - 1)) * rho(m, m - 2);
    }
    return out;
}

std::vector<Real> photon_probs(const TruncatedState& state)
{
    std::vector<Real> p(state.dim());
    for (int m = 0; m < state.dim(); ++m) p[m] = state(m, m).real();
    return p;
}

Matrix annihilation(int dim)
{
    Matrix a = Matrix::Zero(dim, dim);
    for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<Real>(n));
    return a;
}

Matrix displacement_operator(Complex beta, int dim)
{
    const Real amp = std::abs(beta);
    if (amp == 0) return Matrix::Identity(dim, dim);
    const Real theta = std::arg(beta);
    // beta a^dag - beta^* a = R (|beta| (a^dag - a)) R^dag with R = exp(i theta n).
    Vector rot(dim);
    for (int n = 0; n < dim; ++n) rot(n) = std::polar(Real(1), theta * n);
    return rot.asDiagonal() * exp_generator(Generator::displacement, amp, dim) * rot.conjugate().asDiagonal();
}

Matrix squeeze_operator(Real q, int dim)
{
    if (q == 0) return Matrix::Identity(dim, dim);
    return exp_generator(Generator::squeeze, q, dim);
}

}  // namespace qng
