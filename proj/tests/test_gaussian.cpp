#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "mpk/gaussian.hpp"

using namespace mpk;
using namespace mpk::metaplectic;
namespace ga = mpk::gaussian;
namespace sy = mpk::symplectic;

namespace {

Mat random_symmetric(std::mt19937_64& rng, int n, double amp = 1.0) {
    std::uniform_real_distribution<double> d(-amp, amp);
    Mat m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) m(i, j) = m(j, i) = d(rng);
    return m;
}

Mat random_invertible(std::mt19937_64& rng, int n, double amp = 0.5) {
    std::uniform_real_distribution<double> d(-amp, amp);
    while (true) {
        Mat m(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) m(i, j) = (i == j ? 1.0 : 0.0) + d(rng);
        if (std::abs(det(m)) > 0.2) return m;
    }
}

FreeFactor random_free(std::mt19937_64& rng, int n, double amp = 1.0) {
    sy::FreeFormData d{random_symmetric(rng, n, amp), random_invertible(rng, n), random_symmetric(rng, n, amp)};
    return FreeFactor{d, maslov_set(d.l)[0]};
}

ga::GaussianState random_state(std::mt19937_64& rng, int n) {
    ga::GaussianState g;
    g.n = n;
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    g.c = cplx(d(rng) + 1.5, d(rng));
    const Mat re = random_symmetric(rng, n, 1.0);
    Mat im = random_symmetric(rng, n, 0.3);
    for (int i = 0; i < n; ++i) im(i, i) += 1.0;  // keep Im Theta positive-definite
    g.theta = CMat::from_parts(re, im);
    ga::validate(g);
    return g;
}

ga::GaussianState vt(double t) {
    ga::GaussianState g;
    g.n = 1;
    g.c = std::pow(2.0 * t, 0.25);
    g.theta = CMat(1, 1);
    g.theta(0, 0) = cplx(0.0, t);
    return g;
}

}  // namespace

TEST_CASE("norms of fixed states") {
    CHECK(ga::gaussian_norm_sq(vt(1.0)) == doctest::Approx(1.0).epsilon(1e-14));

    ga::GaussianState g2;
    g2.n = 2;
    g2.c = std::sqrt(2.0);
    g2.theta = cplx(0.0, 1.0) * CMat::identity(2);
    CHECK(ga::gaussian_norm_sq(g2) == doctest::Approx(1.0).epsilon(1e-14));

    g2.c *= 2.0;
    CHECK(ga::gaussian_norm_sq(g2) == doctest::Approx(4.0).epsilon(1e-14));
}

TEST_CASE("variances of fixed states") {
    for (double t : {0.3, 1.0, 4.0})
        CHECK(ga::gaussian_variance(vt(t)) == doctest::Approx(1.0 / (4.0 * M_PI * t)).epsilon(1e-13));

    for (int n : {1, 2, 3})
        CHECK(ga::gaussian_variance(ga::standard_gaussian(n)) ==
              doctest::Approx(n / (4.0 * M_PI)).epsilon(1e-13));

    ga::GaussianState g;
    g.n = 2;
    g.c = 1.0;
    g.theta = CMat(2, 2);
    g.theta(0, 0) = cplx(0.0, 1.0);
    g.theta(1, 1) = cplx(0.0, 4.0);
    CHECK(ga::gaussian_variance(g) ==
          doctest::Approx(ga::gaussian_norm_sq(g) * (1.0 + 0.25) / (4.0 * M_PI)).epsilon(1e-13));
}

TEST_CASE("validate rejects bad states") {
    ga::GaussianState g;
    g.n = 1;
    g.theta = CMat(1, 1);
    g.theta(0, 0) = cplx(1.0, -0.5);  // Im < 0
    CHECK_THROWS_AS(ga::validate(g), NotPositiveSemidefinite);

    ga::GaussianState h;
    h.n = 2;
    h.theta = cplx(0.0, 1.0) * CMat::identity(2);
    h.theta(0, 1) = cplx(0.5, 1.0);  // asymmetric
    CHECK_THROWS_AS(ga::validate(h), NotSymmetric);
}

TEST_CASE("signature data") {
    const ga::SignatureData s = ga::signature(Mat::diag({1.0, -2.0}));
    CHECK(s.sig == 0);
    CHECK(s.index == 1);

    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 4);
        Mat b = random_symmetric(rng, n, 2.0);
        b = b + 0.1 * Mat::identity(n);
        ga::SignatureData d{};
        try {
            d = ga::signature(b);
        } catch (const SingularInput&) {
            continue;
        }
        CHECK(d.sig == n - 2 * d.index);
        CHECK(((det(b) > 0) == (d.index % 2 == 0)));
    }

    CHECK_THROWS_AS(ga::signature(Mat(2, 2)), SingularInput);
}

TEST_CASE("fourier_gaussian fixed cases") {
    // A = I: the standard Gaussian is invariant
    const ga::GaussianState g0 = ga::standard_gaussian(2);
    const ga::GaussianState hat = ga::fourier_gaussian(g0);
    CHECK(std::abs(hat.c - g0.c) <= 1e-13);
    CHECK(max_abs(hat.theta.imag() - g0.theta.imag()) <= 1e-13);
    CHECK(max_abs(hat.theta.real()) <= 1e-13);

    // theta = i t: amplitude scales by t^{-1/2}, matrix maps to i / t
    const double t = 3.7;
    const auto [amp, th] = ga::fourier_gaussian_raw(cplx(1.0, 0.0), cplx(0.0, t) * CMat::identity(1));
    CHECK(std::abs(amp - cplx(1.0 / std::sqrt(t), 0.0)) <= 1e-13);
    CHECK(std::abs(th(0, 0) - cplx(0.0, 1.0 / t)) <= 1e-13);

    // real boundary case diag(1,-2): signature 0, prefactor 2^{-1/2}, -B^{-1}
    Mat b = Mat::diag({1.0, -2.0});
    const auto [amp2, th2] = ga::fourier_gaussian_raw(cplx(1.0, 0.0), CMat::from_real(b));
    CHECK(std::abs(amp2 - cplx(1.0 / std::sqrt(2.0), 0.0)) <= 1e-12);
    CHECK(max_abs(th2.real() - (-1.0 * inverse(b))) <= 1e-12);

    CHECK_THROWS_AS(ga::fourier_gaussian_raw(cplx(1.0, 0.0), CMat::from_real(Mat::diag({1.0, 0.0}))),
                    SingularTheta);
}

TEST_CASE("apply_elementary fixed cases") {
    std::mt19937_64 rng(5);
    const ga::GaussianState g = random_state(rng, 2);

    // chirps leave the modulus pointwise, hence the variance
    const ga::GaussianState cg = ga::apply_elementary(Chirp{random_symmetric(rng, 2), 0}, g);
    CHECK(ga::gaussian_variance(cg) == doctest::Approx(ga::gaussian_variance(g)).epsilon(1e-13));

    // dilation B = 2 on theta = i: theta -> 4i, amplitude gains sqrt(2)
    const ga::GaussianState one = vt(1.0);
    const ga::GaussianState dg = ga::apply_elementary(Dilation{Mat(1, 1, {2.0}), 0}, one);
    CHECK(std::abs(dg.theta(0, 0) - cplx(0.0, 4.0)) <= 1e-14);
    CHECK(std::abs(dg.c - std::sqrt(2.0) * one.c) <= 1e-14);
    CHECK(ga::gaussian_norm_sq(dg) == doctest::Approx(1.0).epsilon(1e-13));

    // normalized Fourier fixes g0 up to the e^{-i pi n/4} phase
    for (int n : {1, 2, 3}) {
        const ga::GaussianState g0 = ga::standard_gaussian(n);
        const ga::GaussianState f = ga::apply_elementary(NormalizedFourier{n}, g0);
        CHECK(std::abs(f.c - std::polar(1.0, -M_PI * n / 4.0) * g0.c) <= 1e-13);
        CHECK(max_abs(f.theta.imag() - g0.theta.imag()) <= 1e-13);
    }

    // freqchirp with C = 0 is the identity
    const ga::GaussianState fg = ga::apply_elementary(FreqChirp{Mat(2, 2), 0}, g);
    CHECK(std::abs(fg.c - g.c) <= 1e-12 * std::abs(g.c));
    CHECK(max_abs(fg.theta.real() - g.theta.real()) <= 1e-12);
    CHECK(max_abs(fg.theta.imag() - g.theta.imag()) <= 1e-12);
}

TEST_CASE("apply_free_factor reproduces the 1-D modulus formula") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> d(-2.0, 2.0);
    for (int trial = 0; trial < 100; ++trial) {
        const double p = d(rng), q = d(rng);
        double l = d(rng);
        if (std::abs(l) < 0.2) l += 1.0;
        const double t = std::abs(d(rng)) + 0.2;
        const FreeFactor f{{Mat(1, 1, {p}), Mat(1, 1, {l}), Mat(1, 1, {q})},
                           maslov_set(Mat(1, 1, {l}))[0]};
        const ga::GaussianState img = ga::apply_free_factor(f, vt(t));

        // |M v_t|^2 = (2t)^{1/2} |l| (t^2+q^2)^{-1/2} e^{-2 pi t l^2 x^2/(t^2+q^2)}
        CHECK(img.theta(0, 0).imag() == doctest::Approx(t * l * l / (t * t + q * q)).epsilon(1e-12));
        CHECK(std::norm(img.c) ==
              doctest::Approx(std::sqrt(2.0 * t) * std::abs(l) / std::sqrt(t * t + q * q)).epsilon(1e-12));

        // variance product of the paper's 1-D family
        const double prod = ga::gaussian_variance(img) * ga::gaussian_variance(vt(t));
        CHECK(prod == doctest::Approx((1.0 + q * q / (t * t)) / std::pow(4.0 * M_PI * l, 2)).epsilon(1e-12));
    }
}

TEST_CASE("free factor (0,I,0,m) acts on g0 as a phase") {
    for (int n : {1, 2}) {
        const FreeFactor f{{Mat(n, n), Mat::identity(n), Mat(n, n)}, 0};
        const ga::GaussianState img = ga::apply_free_factor(f, ga::standard_gaussian(n));
        CHECK(std::abs(std::abs(img.c) - ga::standard_gaussian(n).c) <= 1e-13);
        CHECK(max_abs(img.theta.imag() - Mat::identity(n)) <= 1e-13);
        CHECK(max_abs(img.theta.real()) <= 1e-13);
    }
}

TEST_CASE("unitarity over 500 random factor/state pairs") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 500; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 3);
        const FreeFactor f = random_free(rng, n);
        const ga::GaussianState g = random_state(rng, n);
        CHECK(ga::gaussian_norm_sq(ga::apply_free_factor(f, g)) ==
              doctest::Approx(ga::gaussian_norm_sq(g)).epsilon(1e-10));
    }
}

TEST_CASE("Heisenberg equality case in closed form") {
    for (int n : {1, 2, 3}) {
        const ga::GaussianState g0 = ga::standard_gaussian(n);
        const double prod = ga::gaussian_variance(g0) * ga::gaussian_variance(ga::fourier_gaussian(g0));
        CHECK(prod == doctest::Approx(n * n / std::pow(2.0, 4.0) / (M_PI * M_PI)).epsilon(1e-14));
    }
}

TEST_CASE("lower-bound certification over 500 random draws") {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 500; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 2);
        const FreeFactor f = random_free(rng, n);
        const ga::GaussianState g = random_state(rng, n);
        const double lhs = std::sqrt(ga::gaussian_variance(ga::apply_free_factor(f, g)) *
                                     ga::gaussian_variance(g));
        const double mu = sy::mu_of_symplectic(sy::make_lambda_plq(f.data)).mu;
        CHECK(lhs >= mu * ga::gaussian_norm_sq(g) * (1.0 - 1e-10));
    }
}

TEST_CASE("optimizer family") {
    // n=1 closed form and limit
    const FreeFactor f{{Mat(1, 1, {0.0}), Mat(1, 1, {2.0}), Mat(1, 1, {1.0})},
                       maslov_set(Mat(1, 1, {2.0}))[0]};
    const ga::OptimizerPoint p = ga::optimizer_family(f, 1000.0);
    CHECK(std::sqrt(p.variance_product) ==
          doctest::Approx(std::sqrt(1.0 + 1e-6) / (8.0 * M_PI)).epsilon(1e-12));
    CHECK(p.limit == doctest::Approx(1.0 / (8.0 * M_PI)).epsilon(1e-13));
    CHECK(std::sqrt(p.variance_product) / p.limit - 1.0 <= 5e-7);

    // n-D with L = I approaches n/(4 pi)
    for (int n : {2, 3}) {
        const FreeFactor fn{{Mat(n, n), Mat::identity(n), Mat(n, n)}, 0};
        const ga::OptimizerPoint pn = ga::optimizer_family(fn, 100.0);
        CHECK(pn.limit == doctest::Approx(n / (4.0 * M_PI)).epsilon(1e-13));
        CHECK(std::sqrt(pn.variance_product) ==
              doctest::Approx(n / (4.0 * M_PI)).epsilon(1e-3));
    }

    // monotone approach: product decreases towards the limit
    std::mt19937_64 rng(17);
    const FreeFactor fr = random_free(rng, 2);
    double prev = 1e300;
    for (double t : {1.0, 4.0, 16.0, 64.0, 256.0}) {
        const ga::OptimizerPoint pt = ga::optimizer_family(fr, t);
        CHECK(std::sqrt(pt.variance_product) >= pt.limit * (1.0 - 1e-12));
        CHECK(std::sqrt(pt.variance_product) <= prev + 1e-15);
        prev = std::sqrt(pt.variance_product);
    }
}

TEST_CASE("families of f and its inverse share the variance limit") {
    std::mt19937_64 rng(19);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 2);
        const FreeFactor f = random_free(rng, n);
        const double lim = ga::optimizer_family(f, 2.0).limit;
        const double lim_inv = ga::optimizer_family(free_inverse(f), 2.0).limit;
        CHECK(lim == doctest::Approx(lim_inv).epsilon(1e-9));
    }
}

TEST_CASE("mu_family_state covers singular and zero blocks") {
    // Xi12 = 0: identity projection, variance product tends to zero
    const sy::SymplecticMatrix id(Mat::identity(4));
    const MetaplecticWord empty = MetaplecticWord::empty(2);
    CHECK(ga::word_variance_product(empty, 100.0) <= 1e-8);

    // rank-1 freqchirp: product approaches (lambda / 4 pi)^2
    Mat c(2, 2);
    c(0, 0) = 0.9;
    const MetaplecticWord w(2, {FreqChirp{c, 0}});
    const double mu = sy::mu_of_symplectic(psi_word(w)).mu;
    CHECK(mu == doctest::Approx(0.9 / (4.0 * M_PI)).epsilon(1e-13));
    const double prod = ga::word_variance_product(w, 1000.0);
    CHECK(std::abs(prod - mu * mu) / (mu * mu) <= 1e-2);

    const ga::GaussianState s = ga::mu_family_state(id, 10.0);
    CHECK(ga::gaussian_norm_sq(s) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("pair_states") {
    const ga::GaussianState g0 = ga::standard_gaussian(1);
    CHECK(std::abs(ga::pair_states(g0, g0) - cplx(1.0, 0.0)) <= 1e-13);

    std::mt19937_64 rng(23);
    const ga::GaussianState g = random_state(rng, 2);
    CHECK(std::abs(ga::pair_states(g, g) - cplx(ga::gaussian_norm_sq(g), 0.0)) <= 1e-12);
}
