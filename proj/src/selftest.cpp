#include "mpk/selftest.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>

#include "mpk/gaussian.hpp"
#include "mpk/numerics.hpp"

namespace mpk::selftest {

using namespace mpk::metaplectic;
namespace sy = mpk::symplectic;
namespace ga = mpk::gaussian;
namespace nu = mpk::numerics;

namespace {

std::string fmt(const char* label, double value, double tol) {
    std::ostringstream ss;
    ss << label << " " << value << " (tol " << tol << ")";
    return ss.str();
}

struct Check {
    bool pass = true;
    std::vector<std::string> details;

    void bound(const char* label, double value, double tol) {
        details.push_back(fmt(label, value, tol));
        if (!(value <= tol)) pass = false;
    }
    void require(const char* label, bool ok) {
        details.push_back(std::string(label) + (ok ? " ok" : " FAILED"));
        if (!ok) pass = false;
    }
};

double uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

Mat random_symmetric(std::mt19937_64& rng, int n, double amp) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) m(i, j) = m(j, i) = uniform(rng, -amp, amp);
    return m;
}

Mat random_invertible(std::mt19937_64& rng, int n, double amp) {
    for (int attempt = 0; attempt < 64; ++attempt) {
        Mat m(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) m(i, j) = (i == j ? 1.0 : 0.0) + uniform(rng, -amp, amp);
        if (std::abs(det(m)) > 0.15) return m;
    }
    throw Error("random_invertible: rejection sampling failed");
}

FreeFactor random_free_factor(std::mt19937_64& rng, int n, double amp) {
    FreeFormData d{random_symmetric(rng, n, amp), random_invertible(rng, n, amp), random_symmetric(rng, n, amp)};
    return FreeFactor{d, maslov_set(d.l)[0]};
}

MetaplecticWord random_grid_word(std::mt19937_64& rng, int n, int max_len) {
    // factors whose grid action is exact (pointwise chirps, FFT conjugation,
    // lattice dilations); symplectically they still generate the full group.
    // shear amplitudes stay small so degree-10 inputs keep their guard bands
    std::vector<Factor> fs;
    const int len = 1 + static_cast<int>(rng() % max_len);
    for (int k = 0; k < len; ++k) {
        switch (rng() % 4) {
            case 0: fs.emplace_back(Chirp{random_symmetric(rng, n, 0.35), 0}); break;
            case 1: fs.emplace_back(FreqChirp{random_symmetric(rng, n, 0.35), 0}); break;
            case 2: fs.emplace_back(NormalizedFourier{n}); break;
            default: fs.emplace_back(Dilation{-1.0 * Mat::identity(n), mod4(n)}); break;
        }
    }
    return MetaplecticWord(n, std::move(fs));
}

MetaplecticWord random_word(std::mt19937_64& rng, int n, int max_len) {
    std::vector<Factor> fs;
    const int len = 1 + static_cast<int>(rng() % max_len);
    for (int k = 0; k < len; ++k) {
        switch (rng() % 5) {
            case 0: fs.emplace_back(random_free_factor(rng, n, 0.8)); break;
            case 1: fs.emplace_back(Chirp{random_symmetric(rng, n, 0.8), 0}); break;
            case 2: {
                Mat b = random_invertible(rng, n, 0.5);
                fs.emplace_back(Dilation{b, maslov_set(b)[0]});
                break;
            }
            case 3: fs.emplace_back(FreqChirp{random_symmetric(rng, n, 0.8), 0}); break;
            default: fs.emplace_back(NormalizedFourier{n}); break;
        }
    }
    return MetaplecticWord(n, std::move(fs));
}

nu::GridFunction random_hermite_grid(std::mt19937_64& rng, int n, int npts, double hw, int max_deg) {
    if (n == 1) {
        std::vector<cplx> coeffs(max_deg + 1);
        for (cplx& c : coeffs) c = cplx(uniform(rng, -1, 1), uniform(rng, -1, 1));
        nu::GridFunction u = nu::sample_hermite_combination(coeffs, npts, hw);
        const double nn = std::sqrt(nu::grid_norm_sq(u));
        for (cplx& v : u.samples) v /= nn;
        return u;
    }
    std::vector<std::vector<cplx>> coeffs(max_deg + 1);
    for (int a = 0; a <= max_deg; ++a) {
        coeffs[a].resize(max_deg - a + 1);
        for (cplx& c : coeffs[a]) c = cplx(uniform(rng, -1, 1), uniform(rng, -1, 1));
    }
    nu::GridFunction u = nu::sample_hermite_combination_2d(coeffs, npts, hw);
    const double nn = std::sqrt(nu::grid_norm_sq(u));
    for (cplx& v : u.samples) v /= nn;
    return u;
}

// ------------------------------------------------------------------ criteria

Check c1_optimizer_1d(uint64_t seed) {
    Check c;
    std::mt19937_64 rng(seed ^ 0x01);
    double worst_formula = 0.0, worst_gap = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const double l = (rng() % 2 ? 1.0 : -1.0) * uniform(rng, 0.2, 5.0);
        const double q = uniform(rng, -1.0, 1.0);
        const double p = uniform(rng, -3.0, 3.0);
        FreeFactor f{{Mat(1, 1, {p}), Mat(1, 1, {l}), Mat(1, 1, {q})}, maslov_set(Mat(1, 1, {l}))[0]};
        for (double t : {1.0, 3.7, 31.0, 1000.0}) {
            const ga::OptimizerPoint pt = ga::optimizer_family(f, t);
            const double expected = std::sqrt(1.0 + q * q / (t * t)) / (4.0 * M_PI * std::abs(l));
            worst_formula = std::max(worst_formula,
                                     std::abs(std::sqrt(pt.variance_product) - expected) / expected);
            if (t == 1000.0)
                worst_gap = std::max(worst_gap, std::sqrt(pt.variance_product) / pt.limit - 1.0);
        }
    }
    c.bound("closed-form family vs (1/4pi|l|)sqrt(1+q^2/t^2), max rel residual", worst_formula, 1e-12);
    c.bound("relative gap to |beta|/(4pi) at t=1e3, max", worst_gap, 5e-7);
    return c;
}

Check c2_lower_bound_grid(uint64_t seed) {
    Check c;
    std::mt19937_64 rng(seed ^ 0x02);
    for (int n : {1, 2}) {
        const int npts = n == 1 ? 1024 : 128;
        const double hw = n == 1 ? 8.0 : 6.0;
        std::vector<MetaplecticWord> words;
        for (int w = 0; w < 20; ++w) words.push_back(random_grid_word(rng, n, 3));
        std::vector<nu::GridFunction> funcs;
        for (int f = 0; f < 200; ++f) funcs.push_back(random_hermite_grid(rng, n, npts, hw, 10));

        double worst = 1e300;
        for (const auto& w : words) {
            const double mu = sy::mu_of_symplectic(psi_word(w)).mu;
            for (const auto& u : funcs) {
                const nu::GridFunction v = nu::apply_word_grid(w, u);
                const double lhs = std::sqrt(nu::variance_grid(v) * nu::variance_grid(u));
                const double slack = mu > 0.0 ? lhs / mu - 1.0 : 1.0;
                worst = std::min(worst, slack);
            }
        }
        std::ostringstream label;
        label << "n=" << n << " max of 1 - sqrt(V(Mu)V(u))/mu over 20x200 trials";
        c.bound(label.str().c_str(), -worst, 1e-4);  // lhs >= mu (1 - 1e-4)
    }
    return c;
}

Check c3_singular_rank(uint64_t seed) {
    Check c;
    std::mt19937_64 rng(seed ^ 0x03);
    double worst_endpoint = 0.0;
    for (int trial = 0; trial < 6; ++trial) {
        const double lam = uniform(rng, 0.4, 1.2);
        const double ang = uniform(rng, 0.0, M_PI);
        Mat v(2, 1);
        v(0, 0) = std::cos(ang);
        v(1, 0) = std::sin(ang);
        const Mat cmat = lam * (v * v.transpose());
        MetaplecticWord w(2, {FreqChirp{cmat, 0}});
        const double mu = sy::mu_of_symplectic(psi_word(w)).mu;  // rank-1 block 12
        const double prod = ga::word_variance_product(w, 1000.0);
        worst_endpoint = std::max(worst_endpoint, std::abs(prod - mu * mu) / (mu * mu));
    }
    c.bound("rank-1 freqchirp words, |product - mu^2|/mu^2 at sweep endpoint", worst_endpoint, 0.01);

    // grid cross-validation of the same family at moderate concentration
    const double lam = 0.8;
    Mat cdiag(2, 2);
    cdiag(0, 0) = lam;
    MetaplecticWord w(2, {FreqChirp{cdiag, 0}});
    const sy::SymplecticMatrix xi = psi_word(w);
    const double t = 3.0;
    const ga::GaussianState state = ga::mu_family_state(xi, t);
    const double closed = ga::gaussian_variance(ga::apply_word(w, state)) * ga::gaussian_variance(state);
    const nu::GridFunction u = nu::sample_gaussian(state, 512, 5.0);
    const nu::GridFunction mu_img = nu::apply_word_grid(w, u);
    const double grid = nu::variance_grid(mu_img) * nu::variance_grid(u) /
                        (nu::grid_norm_sq(mu_img) * nu::grid_norm_sq(u));
    c.bound("grid vs closed-form variance product, rel residual", std::abs(grid - closed) / closed, 1e-3);
    return c;
}

Check c4_factorizations(uint64_t seed) {
    Check c;
    std::mt19937_64 rng(seed ^ 0x04);

    const Mat sinblo(4, 4, {0, 0, 1, 0, 0, 1, 0, 0, -1, 0, 0, 0, 0, 0, 0, 1});
    double worst_two = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 4);
        Mat m;
        if (trial == 0) {
            m = sinblo;
        } else if (trial % 97 == 1) {
            Mat cr(n, 1);  // rank-1 freqchirp projection: singular block 12
            for (int i = 0; i < n; ++i) cr(i, 0) = uniform(rng, -1, 1);
            m = psi_factor(FreqChirp{cr * cr.transpose(), 0});
        } else if (trial % 97 == 2) {
            m = Mat::identity(2 * n);
        } else if (trial % 97 == 3) {
            m = sy::standard_form(n);
        } else {
            m = Mat::identity(2 * n);
            for (int k = 0; k < 3; ++k) {
                switch (rng() % 3) {
                    case 0: m = m * psi_factor(Chirp{random_symmetric(rng, n, 1.0), 0}); break;
                    case 1: {
                        Mat b = random_invertible(rng, n, 0.5);
                        m = m * psi_factor(Dilation{b, maslov_set(b)[0]});
                        break;
                    }
                    default: m = m * psi_factor(FreqChirp{random_symmetric(rng, n, 1.0), 0}); break;
                }
            }
        }
        const sy::SymplecticMatrix xi(m, 1e-8 * std::max(1.0, max_abs(m) * max_abs(m)));
        const auto [f1, f2] = sy::factor_two_free(xi);
        const Mat prod = sy::make_lambda_plq(f1).matrix() * sy::make_lambda_plq(f2).matrix();
        worst_two = std::max(worst_two, max_abs(prod - m));
    }
    c.bound("two-free residual over 1000 matrices incl. all-singular-blocks", worst_two, 1e-8);

    double worst_free = 0.0, worst_abc = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 4);
        sy::FreeFormData d{random_symmetric(rng, n, 1.5), random_invertible(rng, n, 0.6),
                           random_symmetric(rng, n, 1.5)};
        const sy::FreeFormData back = sy::factor_free(sy::make_lambda_plq(d));
        worst_free = std::max({worst_free, max_abs(back.p - d.p), max_abs(back.l - d.l), max_abs(back.q - d.q)});

        sy::ABCFormData a{random_symmetric(rng, n, 1.5), random_invertible(rng, n, 0.6),
                          random_symmetric(rng, n, 1.5)};
        const sy::ABCFormData back2 = sy::factor_abc(sy::make_xi_abc(a));
        worst_abc = std::max({worst_abc, max_abs(back2.a - a.a), max_abs(back2.b - a.b), max_abs(back2.c - a.c)});
    }
    c.bound("free-form round trip residual", worst_free, 1e-9);
    c.bound("abc-form round trip residual", worst_abc, 1e-9);
    return c;
}

Check c5_homomorphism(uint64_t seed) {
    Check c;
    std::mt19937_64 rng(seed ^ 0x05);
    double worst_hom = 0.0;
    for (int trial = 0; trial < 500; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 2);
        const MetaplecticWord w1 = random_word(rng, n, 3);
        const MetaplecticWord w2 = random_word(rng, n, 3);
        const Mat lhs = (w1 * w2).psi();
        const Mat rhs = w1.psi() * w2.psi();
        worst_hom = std::max(worst_hom, max_abs(lhs - rhs));
    }
    c.bound("Psi(w1 w2) vs Psi(w1) Psi(w2) over 500 pairs", worst_hom, 1e-9);

    double worst_kernel = 0.0, worst_id = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 2);
        const MetaplecticWord w = random_word(rng, n, 3);
        MetaplecticWord unit = w * w.inverse();
        if (trial % 2 == 1) unit = unit * MetaplecticWord(n, {Dilation{Mat::identity(n), 2}});
        worst_id = std::max(worst_id, max_abs(unit.psi() - Mat::identity(2 * n)));
        const cplx ph = canonical_phase(unit);
        worst_kernel = std::max(worst_kernel, std::min(std::abs(ph - 1.0), std::abs(ph + 1.0)));
    }
    c.bound("Psi-identity words: ||Psi - I||", worst_id, 1e-8);
    c.bound("Psi-identity words: distance of canonical phase to {+1,-1}", worst_kernel, 1e-8);
    return c;
}

Check c6_generator_identity(uint64_t seed) {
    Check c;
    std::mt19937_64 rng(seed ^ 0x06);
    const ABCFormData abc{Mat(1, 1, {-1.0}), Mat(1, 1, {std::sqrt(2.0)}), Mat(1, 1, {-1.0})};
    const int npts = 1024;
    const double hw = 8.0;

    double worst = 0.0;
    for (int kcase = 0; kcase < 3; ++kcase) {
        nu::GridFunction u = kcase == 0 ? nu::sample_gaussian(ga::standard_gaussian(1), npts, hw)
                                       : random_hermite_grid(rng, 1, npts, hw, 6);
        const nu::GridFunction lhs = nu::apply_abc_grid(abc, 0, nu::apply_abc_grid(abc, 0, u));
        nu::GridFunction rhs = nu::grid_fourier(u);
        // frequency lattice meets the spatial lattice at every 4th point
        for (int i = 0; i < npts; i += 4) {
            const int j = 384 + i / 4;
            const cplx want = std::polar(1.0, -M_PI / 4.0) * rhs.samples[j];
            worst = std::max(worst, std::abs(lhs.samples[i] - want));
        }
    }
    c.bound("(M_{-1,sqrt2,-1})^2 vs e^{-i pi/4} F, sup on common lattice", worst, 1e-6);
    return c;
}

Check c7_wigner(uint64_t seed) {
    Check c;
    std::mt19937_64 rng(seed ^ 0x07);
    const int npts = 1024;
    const double hw = 8.0;
    double worst_norm = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const nu::GridFunction u = random_hermite_grid(rng, 1, npts, hw, 8);
        const nu::GridFunction v = random_hermite_grid(rng, 1, npts, hw, 8);
        const nu::WignerTable w = nu::wigner_grid(u, v);
        worst_norm = std::max(worst_norm, std::abs(nu::wigner_l2_norm(w) - 1.0));
    }
    c.bound("||W(u,v)|| vs ||u|| ||v|| over 50 pairs", worst_norm, 1e-8);

    nu::GridFunction u1 = nu::make_grid(1, npts, hw);
    for (int k = 0; k < npts; ++k) {
        const double x = u1.coord(k);
        u1.samples[k] = x * std::exp(-M_PI * x * x);
    }
    const nu::WignerTable w = nu::wigner_grid(u1, u1);
    double worst_cf = 0.0;
    for (int i = 0; i < npts; ++i)
        for (int j = 0; j < npts; ++j) {
            const double x = -w.x_half_width + i * w.x_spacing();
            const double xi = -w.xi_half_width + j * w.xi_spacing();
            const double r2 = x * x + xi * xi;
            const double want = std::sqrt(2.0) * std::exp(-2.0 * M_PI * r2) * (r2 - 1.0 / (4.0 * M_PI));
            worst_cf = std::max(worst_cf, std::abs(w.at(i, j) - cplx(want, 0.0)));
        }
    c.bound("W(x e^{-pi x^2}) vs closed form, sup", worst_cf, 1e-6);
    return c;
}

Check c8_spectra(uint64_t seed) {
    Check c;
    std::mt19937_64 rng(seed ^ 0x08);
    double worst_hcw = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const double cc = (rng() % 2 ? 1.0 : -1.0) * uniform(rng, 0.4, 2.0);
        const double om = (rng() % 2 ? 1.0 : -1.0) * uniform(rng, 0.4, 2.0);
        nu::QuadraticSymbol q;
        q.n = 1;
        q.q = Mat(2, 2, {om * om + 1.0, cc, cc, cc * cc});
        const double got = nu::ground_energy(nu::weyl_quadratic_hermite(q, 64)).value;
        worst_hcw = std::max(worst_hcw, std::abs(got - std::abs(om * cc) / (2.0 * M_PI)));
    }
    c.bound("H_{c,omega} ground vs |c omega|/(2 pi), 20 random draws", worst_hcw, 1e-6);

    nu::QuadraticSymbol harm;
    harm.n = 1;
    harm.q = Mat::identity(2);
    const double hg = nu::ground_energy(nu::weyl_quadratic_hermite(harm, 64)).value;
    c.bound("harmonic oscillator ground vs 1/(2 pi)", std::abs(hg - 1.0 / (2.0 * M_PI)), 1e-8);

    // x1^2 + (xi1 + x1)^2 + 2 x2^2: no xi2 dependence, slice over x2
    nu::QuadraticSymbol q;
    q.n = 2;
    q.q = Mat(4, 4);
    q.q(0, 0) = 2.0;
    q.q(1, 1) = 2.0;
    q.q(2, 2) = 1.0;
    q.q(0, 2) = q.q(2, 0) = 1.0;
    std::vector<std::vector<double>> slices;
    for (int i = -6; i <= 6; ++i) slices.push_back({0.2 * i});
    const nu::PartialMinReport rep = nu::partial_min_check(q, slices, 40);
    c.bound("partial minimization: |full - min slice|", rep.difference, 2e-3);
    return c;
}

Check c9_appendix_constants(uint64_t) {
    Check c;
    for (int n : {1, 2}) {
        const ga::GaussianState g0 = ga::standard_gaussian(n);
        const double closed = ga::gaussian_variance(g0) * ga::gaussian_variance(ga::fourier_gaussian(g0));
        const double want = n * n / (16.0 * M_PI * M_PI);
        std::ostringstream l1;
        l1 << "closed-form V(g0) V(F g0) vs n^2/(2^4 pi^2), n=" << n;
        c.bound(l1.str().c_str(), std::abs(closed - want), 1e-14);

        const int npts = n == 1 ? 1024 : 128;
        const double hw = n == 1 ? 8.0 : 6.0;
        const nu::GridFunction u = nu::sample_gaussian(g0, npts, hw);
        const double grid = nu::variance_grid(u) * nu::variance_grid(nu::grid_fourier(u));
        std::ostringstream l2;
        l2 << "grid V(g0) V(F g0) vs n^2/(2^4 pi^2), n=" << n;
        c.bound(l2.str().c_str(), std::abs(grid - want), 1e-8);
    }

    // Fourier of e^{i pi <Bx,x>}, B = diag(1,-2): signature 0 prefactor
    Mat b(2, 2);
    b(0, 0) = 1.0;
    b(1, 1) = -2.0;
    const auto [amp0, th0] = ga::fourier_gaussian_raw(cplx(1.0, 0.0), CMat::from_real(b));
    c.bound("boundary prefactor vs |det B|^{-1/2} e^{i pi sig/4}",
            std::abs(amp0 - cplx(1.0 / std::sqrt(2.0), 0.0)), 1e-12);
    const Mat minus_binv = -1.0 * inverse(b);
    c.bound("boundary matrix vs -B^{-1}", max_abs(th0.real() - minus_binv) + max_abs(th0.imag()), 1e-12);

    // grid DFT cross-check with an i-epsilon damped copy of the same chirp;
    // the grid must resolve the chirp's local frequency 2|x| at the edge
    const double eps = 0.1;
    ga::GaussianState damped;
    damped.n = 2;
    damped.c = 1.0;
    damped.theta = CMat::from_parts(b, eps * Mat::identity(2));
    const ga::GaussianState hat = ga::fourier_gaussian(damped);
    const nu::GridFunction u = nu::sample_gaussian(damped, 1024, 10.0);
    const nu::GridFunction uhat = nu::grid_fourier(u);
    const nu::GridFunction ref = nu::sample_gaussian(hat, 1024, uhat.half_width);
    c.bound("grid DFT vs closed form for damped diag(1,-2) chirp, sup",
            nu::grid_dist_sup(uhat, ref), 1e-6);
    c.bound("damped prefactor approaches the signature prefactor",
            std::abs(ga::fourier_gaussian_raw(cplx(1.0, 0.0), CMat::from_parts(b, 1e-7 * Mat::identity(2))).first -
                     amp0),
            1e-6);
    return c;
}

Check c10_covariance(uint64_t seed) {
    Check c;
    std::mt19937_64 rng(seed ^ 0x0a);
    const int npts = 1024;
    const double hw = 8.0;

    std::vector<nu::GridFunction> funcs;
    for (int k = 0; k < 3; ++k) funcs.push_back(random_hermite_grid(rng, 1, npts, hw, 6));

    std::vector<nu::QuadraticSymbol> symbols(3);
    symbols[0].n = symbols[1].n = symbols[2].n = 1;
    symbols[0].q = Mat(2, 2, {1, 0, 0, 0});        // x^2
    symbols[1].q = Mat(2, 2, {0, 0, 0, 1});        // xi^2
    symbols[2].q = Mat(2, 2, {0, 0.5, 0.5, 0});    // x xi

    std::vector<std::pair<std::string, MetaplecticWord>> conj;
    conj.emplace_back("segal01 fourier", MetaplecticWord(1, {NormalizedFourier{1}}));
    conj.emplace_back("segal02 chirp", MetaplecticWord(1, {Chirp{Mat(1, 1, {0.7}), 0}}));
    conj.emplace_back("segal03 freqchirp", MetaplecticWord(1, {FreqChirp{Mat(1, 1, {0.6}), 0}}));
    conj.emplace_back("segal04 dilation", MetaplecticWord(1, {Dilation{Mat(1, 1, {2.0}), 0}}));

    for (const auto& [label, w] : conj) {
        // conjugation identity in the product form opw(a) M = M opw(a o chi),
        // which keeps every grid dilation lattice-compatible
        double worst = 0.0;
        for (const auto& a : symbols) {
            const nu::QuadraticSymbol composed = nu::compose_with_linear_map(a, w.psi());
            for (const auto& u : funcs) {
                const nu::GridFunction lhs = nu::apply_weyl_quadratic_grid(a, nu::apply_word_grid(w, u));
                const nu::GridFunction rhs = nu::apply_word_grid(w, nu::apply_weyl_quadratic_grid(composed, u));
                double d2 = 0.0;
                for (size_t k = 0; k < lhs.samples.size(); ++k) d2 += std::norm(lhs.samples[k] - rhs.samples[k]);
                worst = std::max(worst, std::sqrt(d2 * lhs.spacing()));
            }
        }
        c.bound((label + ": ||opw(a) M u - M opw(a o chi) u||").c_str(), worst, 1e-5);
    }

    // sigma_Y covariance on an affine symmetry S_Y(X) = 2Y - X
    const std::vector<double> y0{0.5}, eta0{0.75};
    const nu::PhaseSymmetry sym{y0, eta0};
    double worst_sym = 0.0;
    for (const auto& a : symbols) {
        // a o S_Y: quadratic part unchanged, linear -4 Q Y, constant 4 <QY, Y>
        std::vector<double> yfull{y0[0], eta0[0]};
        std::vector<double> lin(2, 0.0);
        double c0 = 0.0;
        for (int i = 0; i < 2; ++i) {
            for (int j = 0; j < 2; ++j) {
                lin[i] += -4.0 * a.q(i, j) * yfull[j];
                c0 += 4.0 * a.q(i, j) * yfull[i] * yfull[j];
            }
        }
        nu::QuadraticSymbol shifted = a;
        shifted.constant += c0;
        for (const auto& u : funcs) {
            const nu::GridFunction lhs =
                nu::apply_phase_symmetry(sym, nu::apply_weyl_quadratic_grid(a, nu::apply_phase_symmetry(sym, u)));
            const nu::GridFunction rhs = nu::apply_weyl_poly2_grid(shifted, lin, u);
            double d2 = 0.0;
            for (size_t k = 0; k < lhs.samples.size(); ++k) d2 += std::norm(lhs.samples[k] - rhs.samples[k]);
            worst_sym = std::max(worst_sym, std::sqrt(d2 * u.spacing()));
        }
    }
    c.bound("segalsym: ||sigma_Y opw(a) sigma_Y u - opw(a o S_Y) u||", worst_sym, 1e-5);
    return c;
}

struct Entry {
    const char* name;
    double budget;
    Check (*run)(uint64_t);
};

constexpr Entry kEntries[] = {
    {"optimizer-1d", 1.0, c1_optimizer_1d},
    {"lower-bound-grid", 60.0, c2_lower_bound_grid},
    {"singular-rank", 30.0, c3_singular_rank},
    {"factorizations", 10.0, c4_factorizations},
    {"homomorphism-cover", 10.0, c5_homomorphism},
    {"generator-identity", 5.0, c6_generator_identity},
    {"wigner", 10.0, c7_wigner},
    {"spectra", 30.0, c8_spectra},
    {"appendix-constants", 5.0, c9_appendix_constants},
    {"covariance", 20.0, c10_covariance},
};

}  // namespace

std::vector<std::string> criterion_names() {
    std::vector<std::string> names;
    for (const Entry& e : kEntries) names.emplace_back(e.name);
    return names;
}

CriterionResult run_criterion(const std::string& name, uint64_t seed) {
    for (const Entry& e : kEntries) {
        if (name != e.name) continue;
        CriterionResult r;
        r.name = name;
        r.budget_sec = e.budget;
        const auto start = std::chrono::steady_clock::now();
        try {
            Check c = e.run(seed);
            r.pass = c.pass;
            r.details = std::move(c.details);
        } catch (const std::exception& ex) {
            r.pass = false;
            r.details.push_back(std::string("exception: ") + ex.what());
        }
        r.runtime_sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (r.runtime_sec > r.budget_sec) {
            r.pass = false;
            r.details.push_back("runtime budget exceeded");
        }
        return r;
    }
    throw Error("unknown selftest group: " + name);
}

std::vector<CriterionResult> run_all(uint64_t seed) {
    std::vector<CriterionResult> all;
    for (const Entry& e : kEntries) all.push_back(run_criterion(e.name, seed));
    return all;
}

}  // namespace mpk::selftest
