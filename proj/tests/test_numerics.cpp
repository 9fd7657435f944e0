#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "mpk/numerics.hpp"

using namespace mpk;
using namespace mpk::metaplectic;
namespace ga = mpk::gaussian;
namespace nu = mpk::numerics;

namespace {

nu::GridFunction sample_1d(int n, double hw, const std::function<cplx(double)>& f) {
    nu::GridFunction u = nu::make_grid(1, n, hw);
    for (int k = 0; k < n; ++k) u.samples[k] = f(u.coord(k));
    return u;
}

Mat random_symmetric(std::mt19937_64& rng, int n, double amp = 1.0) {
    std::uniform_real_distribution<double> d(-amp, amp);
    Mat m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) m(i, j) = m(j, i) = d(rng);
    return m;
}

FreeFactor random_free_1d(std::mt19937_64& rng, double amp = 1.0) {
    std::uniform_real_distribution<double> d(-amp, amp);
    double l = d(rng);
    if (std::abs(l) < 0.4) l = l < 0 ? l - 0.6 : l + 0.6;
    return FreeFactor{{Mat(1, 1, {d(rng)}), Mat(1, 1, {l}), Mat(1, 1, {d(rng)})},
                      maslov_set(Mat(1, 1, {l}))[0]};
}

}  // namespace

TEST_CASE("grid_fourier on Gaussian data") {
    const int n = 1024;
    const double hw = 8.0;
    auto u = sample_1d(n, hw, [](double x) { return std::exp(-M_PI * x * x); });
    auto hat = nu::grid_fourier(u);
    auto ref = sample_1d(n, hat.half_width, [](double xi) { return std::exp(-M_PI * xi * xi); });
    CHECK(nu::grid_dist_sup(hat, ref) <= 1e-12);

    // x e^{-pi x^2} maps to -i xi e^{-pi xi^2} under the 2 pi convention
    auto u1 = sample_1d(n, hw, [](double x) { return x * std::exp(-M_PI * x * x); });
    auto hat1 = nu::grid_fourier(u1);
    auto ref1 = sample_1d(n, hat1.half_width,
                          [](double xi) { return cplx(0.0, -xi) * std::exp(-M_PI * xi * xi); });
    CHECK(nu::grid_dist_sup(hat1, ref1) <= 1e-12);

    // unitarity and the double transform = parity
    CHECK(nu::grid_norm_sq(hat) == doctest::Approx(nu::grid_norm_sq(u)).epsilon(1e-12));
    auto twice = nu::grid_fourier(nu::grid_fourier(u1));
    double worst = 0.0;
    for (int k = 1; k < n; ++k) worst = std::max(worst, std::abs(twice.samples[k] - u1.samples[n - k]));
    CHECK(worst <= 1e-8);

    CHECK(nu::grid_dist_sup(nu::grid_fourier_inverse(hat), u) <= 1e-12);
}

TEST_CASE("variance_grid") {
    const int n = 1024;
    const double hw = 8.0;
    const auto g0 = nu::sample_gaussian(ga::standard_gaussian(1), n, hw);
    CHECK(nu::variance_grid(g0) == doctest::Approx(1.0 / (4.0 * M_PI)).epsilon(1e-12));

    // concentration scales the variance by eps^2
    const double eps = 0.5;
    auto ue = sample_1d(n, hw, [&](double x) {
        return std::pow(2.0, 0.25) * std::exp(-M_PI * x * x / (eps * eps)) / std::sqrt(eps);
    });
    CHECK(nu::variance_grid(ue) == doctest::Approx(eps * eps / (4.0 * M_PI)).epsilon(1e-10));

    // translation of an even function adds |y|^2 ||phi||^2
    const nu::PhaseTranslation tau{{1.0}, {0.0}};
    const auto shifted = nu::apply_phase_translation(tau, g0);
    CHECK(nu::variance_grid(shifted) ==
          doctest::Approx(1.0 / (4.0 * M_PI) + 1.0).epsilon(1e-10));
}

TEST_CASE("guard band validation") {
    auto wide = sample_1d(256, 4.0, [](double x) { return std::exp(-0.01 * M_PI * x * x); });
    CHECK_FALSE(nu::guard_band_ok(wide));
    CHECK_THROWS_AS(nu::variance_grid(wide), AliasingRisk);
    const auto narrow = nu::sample_gaussian(ga::standard_gaussian(1), 256, 6.0);
    CHECK(nu::guard_band_ok(narrow));
}

TEST_CASE("apply_elementary_grid basics") {
    const int n = 512;
    const double hw = 8.0;
    std::mt19937_64 rng(3);
    const auto u = sample_1d(n, hw, [](double x) { return std::exp(-M_PI * x * x) * (1.0 + x); });

    // sigma_0 is the reflection
    const auto refl = nu::apply_phase_symmetry({{0.0}, {0.0}}, u);
    double worst = 0.0;
    for (int k = 1; k < n; ++k) worst = std::max(worst, std::abs(refl.samples[k] - u.samples[n - k]));
    CHECK(worst <= 1e-14);

    // plain translation when eta = 0
    const auto shifted = nu::apply_phase_translation({{0.5}, {0.0}}, u);
    const int offset = static_cast<int>(0.5 / u.spacing());
    CHECK(std::abs(shifted.samples[300] - u.samples[300 - offset]) <= 1e-14);

    // chirp pair cancels exactly
    const Mat a = random_symmetric(rng, 1, 2.0);
    auto c1 = nu::apply_elementary_grid(Chirp{a, 0}, u);
    auto c2 = nu::apply_elementary_grid(Chirp{-1.0 * a, 0}, c1);
    CHECK(nu::grid_dist_sup(c2, u) <= 1e-12);

    // freqchirp pair cancels to spectral accuracy
    const Mat cm = random_symmetric(rng, 1, 0.5);
    auto f1 = nu::apply_elementary_grid(FreqChirp{cm, 0}, u);
    auto f2 = nu::apply_elementary_grid(FreqChirp{-1.0 * cm, 0}, f1);
    CHECK(nu::grid_dist_sup(f2, u) <= 1e-10);

    // norm preservation
    CHECK(nu::grid_norm_sq(f1) == doctest::Approx(nu::grid_norm_sq(u)).epsilon(1e-10));

    // integer dilations act by index maps; others are rejected
    const auto par = nu::apply_elementary_grid(Dilation{Mat(1, 1, {-1.0}), 1}, u);
    worst = 0.0;
    for (int k = 1; k < n; ++k)
        worst = std::max(worst, std::abs(par.samples[k] - cplx(0.0, 1.0) * u.samples[n - k]));
    CHECK(worst <= 1e-14);
    CHECK_THROWS_AS(nu::apply_elementary_grid(Dilation{Mat(1, 1, {1.5}), 0}, u), ResamplingRequired);
}

TEST_CASE("apply_free_factor_grid against the closed form and its inverse") {
    std::mt19937_64 rng(5);
    const int n = 1024;
    const double hw = 8.0;
    for (int trial = 0; trial < 5; ++trial) {
        const FreeFactor f = random_free_1d(rng);
        ga::GaussianState g = ga::standard_gaussian(1);
        g.theta(0, 0) = cplx(0.3, 1.2);
        g.c = cplx(0.9, 0.2);
        const auto u = nu::sample_gaussian(g, n, hw);

        const auto img = nu::apply_free_factor_grid(f, u);
        const auto ref = nu::sample_gaussian(ga::apply_free_factor(f, g), n, hw);
        CHECK(nu::grid_dist_sup(img, ref) <= 1e-6);

        const auto back = nu::apply_free_factor_grid(free_inverse(f), img);
        CHECK(nu::grid_dist_sup(back, u) <= 1e-5);

        CHECK(nu::grid_norm_sq(img) == doctest::Approx(nu::grid_norm_sq(u)).epsilon(1e-5));
    }

    auto wide = sample_1d(256, 4.0, [](double x) { return std::exp(-0.01 * M_PI * x * x); });
    CHECK_THROWS_AS(nu::apply_free_factor_grid(random_free_1d(rng), wide), AliasingRisk);
}

TEST_CASE("apply_abc_grid matches the elementary decomposition") {
    std::mt19937_64 rng(7);
    const int n = 1024;
    const double hw = 8.0;
    const symplectic::ABCFormData d{Mat(1, 1, {-0.8}), Mat(1, 1, {1.3}), Mat(1, 1, {0.5})};
    const MetaplecticWord decomposed(
        1, {Chirp{d.a, 0}, Dilation{d.b, 0}, FreqChirp{d.c, 0}});

    ga::GaussianState g = ga::standard_gaussian(1);
    const auto u = nu::sample_gaussian(g, n, hw);
    const auto lhs = nu::apply_abc_grid(d, 0, u);
    const auto rhs = nu::sample_gaussian(ga::apply_word(decomposed, g), n, hw);
    CHECK(nu::grid_dist_sup(lhs, rhs) <= 1e-6);
}

TEST_CASE("wigner_grid") {
    const int n = 1024;
    const double hw = 8.0;
    const auto g0 = nu::sample_gaussian(ga::standard_gaussian(1), n, hw);
    const nu::WignerTable w = nu::wigner_grid(g0, g0);

    // closed form 2 e^{-2 pi (x^2 + xi^2)}
    double worst = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double x = -w.x_half_width + i * w.x_spacing();
            const double xi = -w.xi_half_width + j * w.xi_spacing();
            worst = std::max(worst,
                             std::abs(w.at(i, j) - cplx(2.0 * std::exp(-2.0 * M_PI * (x * x + xi * xi)), 0.0)));
        }
    CHECK(worst <= 1e-10);

    // norm identity and realness / hermitian symmetry
    CHECK(nu::wigner_l2_norm(w) == doctest::Approx(1.0).epsilon(1e-10));
    std::mt19937_64 rng(11);
    std::vector<cplx> cu(7), cv(7);
    for (auto& z : cu) z = cplx(std::uniform_real_distribution<double>(-1, 1)(rng), 0.3);
    for (auto& z : cv) z = cplx(0.1, std::uniform_real_distribution<double>(-1, 1)(rng));
    const auto u = nu::sample_hermite_combination(cu, n, hw);
    const auto v = nu::sample_hermite_combination(cv, n, hw);
    const nu::WignerTable wuu = nu::wigner_grid(u, u);
    double imag_worst = 0.0;
    for (const cplx& z : wuu.values) imag_worst = std::max(imag_worst, std::abs(z.imag()));
    CHECK(imag_worst <= 1e-10);

    const nu::WignerTable wuv = nu::wigner_grid(u, v);
    const nu::WignerTable wvu = nu::wigner_grid(v, u);
    double sym_worst = 0.0;
    for (size_t k = 0; k < wuv.values.size(); ++k)
        sym_worst = std::max(sym_worst, std::abs(std::conj(wuv.values[k]) - wvu.values[k]));
    CHECK(sym_worst <= 1e-10);

    CHECK(std::abs(nu::wigner_l2_norm(wuv) -
                   std::sqrt(nu::grid_norm_sq(u) * nu::grid_norm_sq(v))) <= 1e-8);
}

TEST_CASE("weyl_kernel_matrix on flat, projector and linear symbols") {
    const int na = 512;
    const double hw = 8.0;

    // a = 1: identity scaled by the quadrature weights
    nu::GridFunction flat = nu::make_grid(2, na, hw);
    for (cplx& z : flat.samples) z = 1.0;
    const nu::WeylKernelOperator id_op = nu::weyl_kernel_matrix(flat);
    double worst = 0.0;
    for (int i = 0; i < id_op.n_points; ++i)
        for (int j = 0; j < id_op.n_points; ++j)
            worst = std::max(worst, std::abs(id_op.matrix(i, j) - (i == j ? cplx(1.0, 0.0) : cplx(0.0, 0.0))));
    CHECK(worst <= 1e-9);

    // a = 2 W(g0, g0): rank-one projector onto g0
    nu::GridFunction proj = nu::make_grid(2, na, hw);
    for (int i = 0; i < na; ++i)
        for (int j = 0; j < na; ++j) {
            const double x = proj.coord(i), xi = proj.coord(j);
            proj.samples[static_cast<size_t>(i) * na + j] = 4.0 * std::exp(-2.0 * M_PI * (x * x + xi * xi));
        }
    const nu::WeylKernelOperator p_op = nu::weyl_kernel_matrix(proj);
    const double hop = p_op.spacing();
    worst = 0.0;
    for (int i = 0; i < p_op.n_points; ++i)
        for (int j = 0; j < p_op.n_points; ++j) {
            const double gi = std::pow(2.0, 0.25) * std::exp(-M_PI * p_op.coord(i) * p_op.coord(i));
            const double gj = std::pow(2.0, 0.25) * std::exp(-M_PI * p_op.coord(j) * p_op.coord(j));
            worst = std::max(worst, std::abs(p_op.matrix(i, j) - cplx(gi * gj * hop, 0.0)));
        }
    CHECK(worst <= 1e-9);
    CHECK(nu::operator_norm(p_op) == doctest::Approx(1.0).epsilon(1e-6));

    const nu::SymbolNormBound bound = nu::weyl_norm_bound(proj);
    CHECK(nu::operator_norm(p_op) <= bound.bound * 1.05);

    // a = xi acts as D on band-limited inputs
    nu::GridFunction lin = nu::make_grid(2, na, hw);
    for (int i = 0; i < na; ++i)
        for (int j = 0; j < na; ++j) lin.samples[static_cast<size_t>(i) * na + j] = lin.coord(j);
    const nu::WeylKernelOperator d_op = nu::weyl_kernel_matrix(lin);
    std::mt19937_64 rng(13);
    std::vector<cplx> coeffs(7);
    for (auto& z : coeffs) z = cplx(std::uniform_real_distribution<double>(-1, 1)(rng),
                                    std::uniform_real_distribution<double>(-1, 1)(rng));
    const nu::GridFunction u = nu::sample_hermite_combination(coeffs, d_op.n_points, hw);
    const nu::GridFunction got = nu::apply_weyl_kernel(d_op, u);
    nu::QuadraticSymbol zero;
    zero.n = 1;
    zero.q = Mat(2, 2);
    const nu::GridFunction want = nu::apply_weyl_poly2_grid(zero, {0.0, 1.0}, u);
    CHECK(nu::grid_dist_sup(got, want) <= 1e-5);
}

TEST_CASE("weyl_quadratic_hermite ground energies") {
    nu::QuadraticSymbol harm;
    harm.n = 1;
    harm.q = Mat::identity(2);
    const nu::GroundEnergy g = nu::ground_energy(nu::weyl_quadratic_hermite(harm, 64));
    CHECK(std::abs(g.value - 1.0 / (2.0 * M_PI)) <= 1e-8);
    CHECK(g.converged);
    CHECK_NOTHROW(nu::ground_energy_strict(nu::weyl_quadratic_hermite(harm, 64)));

    // H_{c=1, omega=1}
    nu::QuadraticSymbol hcw;
    hcw.n = 1;
    hcw.q = Mat(2, 2, {2.0, 1.0, 1.0, 1.0});
    CHECK(std::abs(nu::ground_energy(nu::weyl_quadratic_hermite(hcw, 64)).value - 1.0 / (2.0 * M_PI)) <= 1e-8);

    // H_{c=2, omega=3} = 6/(2 pi)
    nu::QuadraticSymbol h23;
    h23.n = 1;
    h23.q = Mat(2, 2, {10.0, 2.0, 2.0, 4.0});
    CHECK(std::abs(nu::ground_energy(nu::weyl_quadratic_hermite(h23, 64)).value - 3.0 / M_PI) <= 1e-6);

    // separable 2-D: sum of per-axis grounds
    nu::QuadraticSymbol two;
    two.n = 2;
    two.q = Mat(4, 4);
    const double l1 = 0.7, l2 = 1.9;
    two.q(0, 0) = two.q(2, 2) = l1;
    two.q(1, 1) = two.q(3, 3) = l2;
    CHECK(std::abs(nu::ground_energy(nu::weyl_quadratic_hermite(two, 24)).value -
                   (l1 + l2) / (2.0 * M_PI)) <= 1e-8);

    // multiplication-only symbol: small positive value, certificate says so
    nu::QuadraticSymbol mult;
    mult.n = 1;
    mult.q = Mat(2, 2);
    mult.q(0, 0) = 1.0;
    const nu::GroundEnergy gm = nu::ground_energy(nu::weyl_quadratic_hermite(mult, 64));
    CHECK(gm.value > 0.0);
    CHECK(gm.value <= 1e-2);
    CHECK_FALSE(gm.converged);
    CHECK_THROWS_AS(nu::ground_energy_strict(nu::weyl_quadratic_hermite(mult, 64)), TruncationUnconverged);
}

TEST_CASE("linear symbols compose: opw(L)^2 equals opw(L^2) in the Hermite basis") {
    const int K = 48;
    const double alpha = 0.8, beta = -1.3;
    const CMat x = nu::hermite_matrix_x(0, 1, K + 2);
    const CMat d = nu::hermite_matrix_d(0, 1, K + 2);
    const CMat l = cplx(alpha, 0.0) * x + cplx(beta, 0.0) * d;
    const CMat l2big = l * l;

    nu::QuadraticSymbol sq;
    sq.n = 1;
    sq.q = Mat(2, 2, {alpha * alpha, alpha * beta, alpha * beta, beta * beta});
    const CMat l2 = nu::weyl_quadratic_hermite(sq, K).matrix;
    double worst = 0.0;
    for (int i = 0; i < K; ++i)
        for (int j = 0; j < K; ++j) worst = std::max(worst, std::abs(l2big(i, j) - l2(i, j)));
    CHECK(worst <= 1e-8);
}

TEST_CASE("partial_min_check") {
    // symbol depending on (x2, xi2) only: full inf equals the 1-D inf
    nu::QuadraticSymbol q;
    q.n = 2;
    q.q = Mat(4, 4);
    q.q(1, 1) = 1.0;
    q.q(3, 3) = 1.0;  // x2^2 + xi2^2
    const nu::PartialMinReport rep = nu::partial_min_check(q, {{0.0}, {0.5}, {-0.5}}, 32);
    CHECK(rep.sliced_coords == std::vector<int>{0});
    CHECK(std::abs(rep.full_energy - 1.0 / (2.0 * M_PI)) <= 2e-3);
    CHECK(std::abs(rep.sliced_min - 1.0 / (2.0 * M_PI)) <= 1e-8);

    nu::QuadraticSymbol all_mult;
    all_mult.n = 1;
    all_mult.q = Mat(2, 2);
    all_mult.q(0, 0) = 1.0;
    CHECK_THROWS_AS(nu::partial_min_check(all_mult, {{0.0}}, 32), Error);
}

TEST_CASE("Heisenberg inequality on the grid") {
    std::mt19937_64 rng(17);
    const int n = 1024;
    const double hw = 8.0;
    nu::QuadraticSymbol zero;
    zero.n = 1;
    zero.q = Mat(2, 2);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<cplx> coeffs(11);
        for (auto& z : coeffs) z = cplx(std::uniform_real_distribution<double>(-1, 1)(rng),
                                        std::uniform_real_distribution<double>(-1, 1)(rng));
        nu::GridFunction u = nu::sample_hermite_combination(coeffs, n, hw);
        const double nn = std::sqrt(nu::grid_norm_sq(u));
        for (cplx& z : u.samples) z /= nn;
        const nu::GridFunction du = nu::apply_weyl_poly2_grid(zero, {0.0, 1.0}, u);
        double xu = 0.0;
        for (int k = 0; k < n; ++k) xu += std::norm(u.coord(k) * u.samples[k]);
        xu = std::sqrt(xu * u.spacing());
        CHECK(std::sqrt(nu::grid_norm_sq(du)) * xu >= (1.0 - 1e-6) / (4.0 * M_PI));
    }
}

TEST_CASE("hermite sampling is orthonormal on the grid") {
    const int n = 1024;
    const double hw = 8.0;
    for (int a = 0; a < 6; ++a)
        for (int b = a; b < 6; ++b) {
            std::vector<cplx> ca(a + 1), cb(b + 1);
            ca[a] = 1.0;
            cb[b] = 1.0;
            const auto ua = nu::sample_hermite_combination(ca, n, hw);
            const auto ub = nu::sample_hermite_combination(cb, n, hw);
            cplx dot(0.0, 0.0);
            for (int k = 0; k < n; ++k) dot += ua.samples[k] * std::conj(ub.samples[k]);
            dot *= ua.spacing();
            CHECK(std::abs(dot - (a == b ? cplx(1.0, 0.0) : cplx(0.0, 0.0))) <= 1e-12);
        }
}
