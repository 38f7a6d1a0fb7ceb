#include <cmath>
#include <random>

#include "doctest.h"
#include "qng/fock_core.hpp"
#include "test_support.hpp"

using namespace qng;
using qng::testing::expm;
using qng::testing::max_abs_diff;
using qng::testing::random_state;

namespace {

Real binomial(int n, int k) { return std::tgamma(Real(n + 1)) / (std::tgamma(Real(k + 1)) * std::tgamma(Real(n - k + 1))); }

/// RK4 integration of d rho/dt = gamma/2 (2 a rho a^dag - a^dag a rho - rho a^dag a)
/// up to gamma t = -log(1 - eps).
Matrix integrate_master_equation(const Matrix& rho0, Real eps, int steps)
{
    const int dim = static_cast<int>(rho0.rows());
    const Matrix a = annihilation(dim);
    const Matrix ad = a.adjoint();
    const Matrix num = ad * a;
    auto rhs = [&](const Matrix& r) -> Matrix { return a * r * ad - (num * r + r * num) / Real(2); };
    const Real total = -std::log1p(-eps);
    const Real h = total / steps;
    Matrix r = rho0;
    for (int i = 0; i < steps; ++i) {
        const Matrix k1 = rhs(r);
        const Matrix k2 = rhs(r + h / 2 * k1);
        const Matrix k3 = rhs(r + h / 2 * k2);
        const Matrix k4 = rhs(r + h * k3);
        r += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
    }
    return r;
}

}  // namespace

TEST_CASE("make_fock")
{
    const auto vac = make_fock(0, 10);
    CHECK(vac(0, 0).real() == doctest::Approx(1.0));
    CHECK(vac.tail_bound() == 0);

    const auto f3 = make_fock(3, 10);
    CHECK(f3(3, 3).real() == 1);
    CHECK(static_cast<double>(moments(f3).nbar) == doctest::Approx(3.0));

    CHECK_THROWS_AS(make_fock(11, 10), DomainError);
    CHECK_THROWS_AS(make_fock(0, 0), DomainError);
}

TEST_CASE("make_coherent")
{
    const auto vac = make_coherent({0, 0}, 10);
    CHECK(std::abs(vac(0, 0) - Complex(1, 0)) < 1e-15L);

    const auto c1 = make_coherent({1, 0}, 40);
    CHECK(std::abs(moments(c1).nbar - 1) < 1e-10L);

    const auto c2 = make_coherent({2, 0}, 40);
    const auto p = photon_probs(c2);
    CHECK(std::abs(p[0] - std::exp(Real(-4))) < 1e-15L);
    // Poisson(4) weights from the closed form.
    for (int n = 0; n <= 40; ++n) {
        const Real poisson = std::exp(-4 + n * std::log(Real(4)) - std::lgamma(Real(n + 1)));
        CHECK(std::abs(p[n] - poisson) < 1e-15L);
    }

    const auto ci = make_coherent({0.3, -1.1}, 40);
    const auto mom = moments(ci);
    CHECK(std::abs(mom.a1 - Complex(0.3, -1.1)) < 1e-12L);
    CHECK(std::abs(mom.a2 - Complex(0.3, -1.1) * Complex(0.3, -1.1)) < 1e-12L);

    CHECK_THROWS_AS(make_coherent({5, 0}, 20), TruncationError);
}

TEST_CASE("make_pac")
{
    const auto one = make_pac(0, 10);
    CHECK(std::abs(one(1, 1).real() - 1) < 1e-15L);

    const auto pac1 = make_pac(1, 40);
    const auto m1 = moments(pac1);
    CHECK(std::abs(m1.nbar - Real(2.5)) < 1e-12L);
    CHECK(std::abs(m1.a1 - Complex(1.5, 0)) < 1e-12L);

    for (Real alpha : {Real(0.5), Real(2), Real(3)}) {
        const auto st = make_pac(alpha, 80);
        const Real a2 = alpha * alpha;
        CHECK(std::abs(moments(st).nbar - (a2 * a2 + 3 * a2 + 1) / (1 + a2)) < 1e-9L);
        CHECK(std::abs(moments(st).a1.real() - alpha * (2 + a2) / (1 + a2)) < 1e-9L);
    }
}

TEST_CASE("make_pss")
{
    const Real r = 0.5;
    const auto st = make_pss(r, 60);
    const auto mom = moments(st);
    CHECK(std::abs(mom.nbar - (3 * std::sinh(r) * std::sinh(r) + 1)) < 1e-9L);
    CHECK(std::abs(mom.a1) < 1e-15L);
    CHECK(std::abs(mom.a2 - Complex(3 * std::cosh(r) * std::sinh(r), 0)) < 1e-9L);

    CHECK(make_pss(1e-4L, 20)(1, 1).real() > 1 - 1e-7L);
    CHECK(make_pss(0, 20)(1, 1).real() == 1);
}

TEST_CASE("squeezed vacuum photon statistics")
{
    const Real r = 0.7;
    const auto sq = make_squeezed_vacuum({r, 0}, 80);
    const auto p = photon_probs(sq);
    // p_{2k} = (2k)! tanh^{2k} r / (4^k (k!)^2 cosh r), odd levels empty.
    for (int k = 0; 2 * k <= 80; ++k) {
        const Real lp = std::lgamma(Real(2 * k + 1)) + 2 * k * std::log(std::tanh(r)) - k * std::log(Real(4)) -
                        2 * std::lgamma(Real(k + 1)) - std::log(std::cosh(r));
        CHECK(std::abs(p[2 * k] - std::exp(lp)) < 1e-15L);
        if (2 * k + 1 <= 80) CHECK(std::abs(p[2 * k + 1]) < 1e-30L);
    }
    CHECK(std::abs(moments(sq).nbar - std::sinh(r) * std::sinh(r)) < 1e-12L);
}

TEST_CASE("apply_loss: Fock examples")
{
    const auto lossy1 = apply_loss(make_fock(1, 10), {0.3});
    CHECK(std::abs(lossy1(0, 0).real() - Real(0.3)) < 1e-15L);
    CHECK(std::abs(lossy1(1, 1).real() - Real(0.7)) < 1e-15L);

    const auto lossy3 = apply_loss(make_fock(3, 10), {0.5});
    for (int l = 0; l <= 3; ++l) CHECK(std::abs(lossy3(l, l).real() - binomial(3, l) / 8) < 1e-15L);

    std::mt19937_64 rng(7);
    const auto rho = random_state(rng, 20, 8, 3);
    CHECK(max_abs_diff(apply_loss(rho, {0}).matrix(), rho.matrix()) == 0);

    const auto gone = apply_loss(rho, {1});
    CHECK(std::abs(gone(0, 0).real() - 1) < 1e-15L);

    CHECK_THROWS_AS(apply_loss(rho, {1.5}), DomainError);
}

TEST_CASE("apply_loss agrees with master-equation integration")
{
    std::mt19937_64 rng(11);
    const auto rho = random_state(rng, 24, 10, 2);
    for (Real eps : {Real(0.2), Real(0.65)}) {
        const Matrix ode = integrate_master_equation(rho.matrix(), eps, 4000);
        CHECK(max_abs_diff(apply_loss(rho, {eps}).matrix(), ode) < 1e-10L);
    }
}

TEST_CASE("apply_loss properties")
{
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        const auto rho = random_state(rng, 30, 12, 1 + trial % 3);
        const Real e1 = unif(rng), e2 = unif(rng);

        const auto twice = apply_loss(apply_loss(rho, {e1}), {e2});
        const auto once = apply_loss(rho, {1 - (1 - e1) * (1 - e2)});
        CHECK(max_abs_diff(twice.matrix(), once.matrix()) < 1e-12L);

        CHECK(std::abs(once.trace() - rho.trace()) < 1e-12L);

        const auto m0 = moments(rho);
        const auto m1 = moments(apply_loss(rho, {e1}));
        CHECK(std::abs(m1.nbar - (1 - e1) * m0.nbar) < 1e-10L);
        CHECK(std::abs(m1.a1 - std::sqrt(1 - e1) * m0.a1) < 1e-10L);
        CHECK(std::abs(m1.a2 - (1 - e1) * m0.a2) < 1e-10L);
    }
    // Lossy coherent state stays coherent with amplitude sqrt(1 - eps) alpha.
    const auto coh = apply_loss(make_coherent({1.2, 0.4}, 60), {0.36});
    CHECK(max_abs_diff(coh.matrix(), make_coherent(Complex(1.2, 0.4) * Real(0.8), 60).matrix()) < 1e-14L);
}

TEST_CASE("generator exponentials match Pade exponential")
{
    const int dim = 60;
    const Matrix a = annihilation(dim);
    const Matrix ad = a.adjoint();
    for (Complex beta : {Complex(1, 0), Complex(-0.7, 1.3), Complex(0, -2)}) {
        const Matrix ref = expm(beta * ad - std::conj(beta) * a);
        CHECK(max_abs_diff(displacement_operator(beta, dim), ref) < 1e-12L);
    }
    for (Real q : {Real(0.3), Real(-0.8), Real(1.1)}) {
        const Matrix ref = expm(q * (ad * ad - a * a) / Real(2));
        CHECK(max_abs_diff(squeeze_operator(q, dim), ref) < 1e-12L);
    }
}

TEST_CASE("apply_map examples")
{
    std::mt19937_64 rng(5);
    const auto rho = random_state(rng, 30, 6, 2);
    CHECK(max_abs_diff(apply_map(rho, {}).matrix(), rho.matrix()) == 0);

    const auto disp = apply_map(make_fock(0, 40), {{1, 0}, 0});
    CHECK(max_abs_diff(disp.matrix(), make_coherent({1, 0}, 40).matrix()) < 1e-8L);

    const auto sq = apply_map(make_fock(0, 60), {{0, 0}, 0.3L});
    CHECK(std::abs(moments(sq).nbar - std::sinh(Real(0.3)) * std::sinh(Real(0.3))) < 1e-12L);
    CHECK(max_abs_diff(sq.matrix(), make_squeezed_vacuum({0.3, 0}, 60).matrix()) < 1e-12L);

    CHECK_THROWS_AS(apply_map(make_fock(0, 10), {{3, 0}, 0}), TruncationError);
}

TEST_CASE("operator route matches the amplitude recurrence for D(alpha)S(xi)|0>")
{
    const int dim = 90;
    const Matrix a = annihilation(dim);
    const Matrix ad = a.adjoint();
    Vector vac = Vector::Zero(dim);
    vac(0) = 1;
    for (auto [alpha, xi] : {std::pair{Complex(0.8, -0.3), Complex(0.4, 0.5)}, std::pair{Complex(-1.2, 0.2), Complex(-0.6, 0)},
                             std::pair{Complex(0, 1), Complex(0.2, -0.7)}}) {
        const Matrix s = expm((xi * ad * ad - std::conj(xi) * a * a) / Real(2));
        const Vector psi = displacement_operator(alpha, dim) * s * vac;
        const Matrix ref = psi * psi.adjoint();
        const auto built = make_gaussian_pure(alpha, xi, dim - 1);
        CHECK(max_abs_diff(built.matrix().topLeftCorner(40, 40), ref.topLeftCorner(40, 40)) < 1e-12L);
    }
}

TEST_CASE("Gaussian map moment rules")
{
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
        const auto rho = random_state(rng, 150, 6, 2);
        const auto m0 = moments(rho);

        const Complex beta(unif(rng), unif(rng));
        const auto shifted = apply_map(rho, {beta, 0});
        CHECK(std::abs(moments(shifted).nbar - (m0.nbar + std::norm(beta) + 2 * (std::conj(beta) * m0.a1).real())) <
              1e-8L);
        CHECK(std::abs(shifted.trace() - rho.trace()) < 1e-8L);

        const Real q = unif(rng);
        const Real mu = std::cosh(q), nu = std::sinh(q);
        const auto squeezed = apply_map(rho, {{0, 0}, q});
        const Real expected = nu * nu + (mu * mu + nu * nu) * m0.nbar + mu * nu * 2 * m0.a2.real();
        CHECK(std::abs(moments(squeezed).nbar - expected) < 1e-7L);
    }
}

TEST_CASE("state invariants")
{
    Matrix bad = Matrix::Identity(3, 3) / Real(3);
    bad(0, 1) = Complex(0.1, 0);
    CHECK_THROWS_AS(TruncatedState(bad, 0), DomainError);

    Matrix heavy = Matrix::Identity(3, 3) / Real(2);
    CHECK_THROWS_AS(TruncatedState(heavy, 0), DomainError);

    Matrix neg = Matrix::Zero(3, 3);
    neg(0, 0) = 1.5;
    neg(1, 1) = -0.5;
    CHECK_THROWS_AS(TruncatedState(neg, 0).validate(), DomainError);

    std::mt19937_64 rng(1);
    CHECK_NOTHROW(random_state(rng, 20, 10, 4).validate());
    CHECK_NOTHROW(apply_map(make_pac(1.5, 60), {{-1, 0}, 0.2L}).validate());
}

TEST_CASE("photon_probs")
{
    const auto p2 = photon_probs(make_fock(2, 5));
    CHECK(p2 == std::vector<Real>{0, 0, 1, 0, 0, 0});

    const auto lossy = photon_probs(apply_loss(make_fock(1, 5), {0.3}));
    CHECK(std::abs(lossy[0] - Real(0.3)) < 1e-15L);
    CHECK(std::abs(lossy[1] - Real(0.7)) < 1e-15L);

    std::mt19937_64 rng(2);
    const auto rho = random_state(rng, 25, 20, 5);
    Real total = 0;
    for (Real p : photon_probs(rho)) {
        CHECK(p >= -1e-10L);
        total += p;
    }
    CHECK(std::abs(total - rho.trace()) < 1e-15L);
}
