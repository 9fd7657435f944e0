#include "mpk/gaussian.hpp"

#include <cmath>

namespace mpk::gaussian {

using metaplectic::Chirp;
using metaplectic::Dilation;
using metaplectic::FreqChirp;
using metaplectic::NormalizedFourier;

namespace {

using metaplectic::index_phase;

double theta_sym_residual(const CMat& t) {
    double r = 0.0;
    for (int i = 0; i < t.rows(); ++i)
        for (int j = i + 1; j < t.cols(); ++j) r = std::max(r, std::abs(t(i, j) - t(j, i)));
    return r;
}

// det(-i M)^{-1/2} on the branch continuous from M = iI; valid for
// Im M >= 0, M invertible.
cplx inv_sqrt_det_minus_i(const CMat& m) {
    const cplx logdet = log_det_upper(m) - cplx(0.0, M_PI * m.rows() / 2.0);
    return std::exp(-0.5 * logdet);
}

}  // namespace

GaussianState standard_gaussian(int n) {
    GaussianState g;
    g.n = n;
    g.c = std::pow(2.0, n / 4.0);
    g.theta = cplx(0.0, 1.0) * CMat::identity(n);
    return g;
}

void validate(const GaussianState& g) {
    if (g.theta.rows() != g.n || g.theta.cols() != g.n)
        throw DimensionMismatch("GaussianState: theta must be n x n");
    if (theta_sym_residual(g.theta) > 1e-10 * std::max(1.0, max_abs(g.theta)))
        throw NotSymmetric("GaussianState: theta not symmetric");
    const EigResult im = sym_eig(g.theta.imag());
    if (im.values.front() <= 1e-12)
        throw NotPositiveSemidefinite("GaussianState: Im theta not positive-definite");
}

double gaussian_norm_sq(const GaussianState& g) {
    return std::norm(g.c) / std::sqrt(det(2.0 * g.theta.imag()));
}

double gaussian_variance(const GaussianState& g) {
    const EigResult im = sym_eig(g.theta.imag());
    double tr_inv = 0.0;
    for (double v : im.values) tr_inv += 1.0 / v;
    return gaussian_norm_sq(g) * tr_inv / (4.0 * M_PI);
}

SignatureData signature(const Mat& b) {
    EigResult e = sym_eig(b);
    double scale = 0.0;
    for (double v : e.values) scale = std::max(scale, std::abs(v));
    SignatureData s;
    int plus = 0;
    for (double v : e.values) {
        if (std::abs(v) <= 1e-12 * std::max(scale, 1e-300))
            throw SingularInput("signature: matrix is singular");
        if (v > 0.0)
            ++plus;
        else
            ++s.index;
    }
    s.sig = plus - s.index;
    return s;
}

std::pair<cplx, CMat> fourier_gaussian_raw(cplx c, const CMat& theta) {
    if (std::abs(cdet(theta)) < 1e-300) throw SingularTheta("fourier_gaussian: theta singular");
    const cplx amp = c * inv_sqrt_det_minus_i(theta);
    CMat new_theta = cplx(-1.0, 0.0) * cinverse(theta);
    // symmetrize away inversion roundoff
    for (int i = 0; i < new_theta.rows(); ++i)
        for (int j = i + 1; j < new_theta.cols(); ++j) {
            const cplx m = 0.5 * (new_theta(i, j) + new_theta(j, i));
            new_theta(i, j) = new_theta(j, i) = m;
        }
    return {amp, new_theta};
}

GaussianState fourier_gaussian(const GaussianState& g) {
    auto [amp, th] = fourier_gaussian_raw(g.c, g.theta);
    return GaussianState{g.n, amp, th};
}

GaussianState apply_free_factor(const FreeFactor& f, const GaussianState& g) {
    if (f.n() != g.n) throw DimensionMismatch("apply_free_factor: dimension mismatch");
    metaplectic::validate(f);
    const CMat m = CMat::from_real(f.data.q) + g.theta;  // Im = Im theta > 0, never singular
    const CMat minv = cinverse(m);
    const CMat lc = CMat::from_real(f.data.l);
    CMat th = CMat::from_real(f.data.p) - lc.transpose() * minv * lc;
    for (int i = 0; i < th.rows(); ++i)
        for (int j = i + 1; j < th.cols(); ++j) {
            const cplx v = 0.5 * (th(i, j) + th(j, i));
            th(i, j) = th(j, i) = v;
        }
    const cplx pref = std::polar(1.0, -M_PI * g.n / 4.0) * index_phase(f.m) *
                      std::sqrt(std::abs(det(f.data.l))) * inv_sqrt_det_minus_i(m);
    return GaussianState{g.n, g.c * pref, th};
}

GaussianState apply_elementary(const Factor& e, const GaussianState& g) {
    metaplectic::validate(e);
    if (metaplectic::factor_dim(e) != g.n) throw DimensionMismatch("apply_elementary: dimension mismatch");

    if (const auto* ch = std::get_if<Chirp>(&e)) {
        GaussianState r = g;
        r.theta = g.theta + CMat::from_real(ch->a);
        r.c *= index_phase(ch->m);
        return r;
    }
    if (const auto* d = std::get_if<Dilation>(&e)) {
        const CMat b = CMat::from_real(d->b);
        GaussianState r = g;
        r.theta = b.transpose() * g.theta * b;
        r.c *= index_phase(d->m) * std::sqrt(std::abs(det(d->b)));
        return r;
    }
    if (const auto* fc = std::get_if<FreqChirp>(&e)) {
        // e^{i pi <C D, D>} = F^{-1} (chirp C) F; inverse transform equals the
        // forward one on centered even Gaussians
        auto [a1, t1] = fourier_gaussian_raw(g.c, g.theta);
        auto [a2, t2] = fourier_gaussian_raw(a1, t1 + CMat::from_real(fc->c));
        return GaussianState{g.n, a2 * index_phase(fc->m), t2};
    }
    if (const auto* ff = std::get_if<FreeFactor>(&e)) return apply_free_factor(*ff, g);

    const auto& nf = std::get<NormalizedFourier>(e);
    GaussianState r = fourier_gaussian(g);
    r.c *= std::polar(1.0, -M_PI * nf.n / 4.0);
    return r;
}

GaussianState apply_word(const MetaplecticWord& w, const GaussianState& g) {
    if (w.n() != g.n) throw DimensionMismatch("apply_word: dimension mismatch");
    GaussianState cur = g;
    const auto& fs = w.factors();
    for (auto it = fs.rbegin(); it != fs.rend(); ++it) cur = apply_elementary(*it, cur);
    cur.c *= w.scalar_phase();
    return cur;
}

cplx pair_states(const GaussianState& u, const GaussianState& v) {
    if (u.n != v.n) throw DimensionMismatch("pair_states: dimension mismatch");
    CMat m(u.n, u.n);
    for (int i = 0; i < u.n; ++i)
        for (int j = 0; j < u.n; ++j) m(i, j) = u.theta(i, j) - std::conj(v.theta(i, j));
    return u.c * std::conj(v.c) * inv_sqrt_det_minus_i(m);
}

namespace {

GaussianState unit_state_from_metric(int n, const Mat& g_metric) {
    GaussianState w;
    w.n = n;
    w.theta = CMat::from_parts(Mat::zero(n, n), g_metric);
    w.c = std::pow(det(2.0 * g_metric), 0.25);
    return w;
}

}  // namespace

OptimizerPoint optimizer_family(const FreeFactor& f, double t) {
    metaplectic::validate(f);
    if (t <= 0.0) throw Error("optimizer_family: t must be positive");
    const int n = f.n();
    const symplectic::SymplecticMatrix xi = symplectic::make_lambda_plq(f.data);

    Mat g0 = Mat::identity(n);
    if (n > 1) {
        // align the metric with the singular directions of Xi12 = L^{-1}
        const SvdResult s = svd(xi.block12());
        Mat d(n, n);
        for (int k = 0; k < n; ++k) d(k, k) = 1.0 / s.sigma[k];
        g0 = s.v * d * s.v.transpose();
    }
    OptimizerPoint p;
    p.state = unit_state_from_metric(n, t * g0);
    const GaussianState image = apply_free_factor(f, p.state);
    p.variance_product = gaussian_variance(image) * gaussian_variance(p.state);
    p.limit = symplectic::mu_of_symplectic(xi).mu;
    return p;
}

GaussianState mu_family_state(const symplectic::SymplecticMatrix& xi, double t) {
    if (t <= 0.0) throw Error("mu_family_state: t must be positive");
    const int n = xi.n();
    const SvdResult s = svd(xi.block12());
    const double smax = s.sigma.empty() ? 0.0 : s.sigma.front();
    Mat d(n, n);
    for (int k = 0; k < n; ++k) {
        const bool in_range = smax > 0.0 && s.sigma[k] > kRankCutoff * smax;
        d(k, k) = in_range ? t / s.sigma[k] : t * t * t;
    }
    return unit_state_from_metric(n, s.v * d * s.v.transpose());
}

double word_variance_product(const MetaplecticWord& w, double t) {
    const symplectic::SymplecticMatrix xi = metaplectic::psi_word(w);
    const GaussianState u = mu_family_state(xi, t);
    const GaussianState mu_img = apply_word(w, u);
    return gaussian_variance(mu_img) * gaussian_variance(u);
}

}  // namespace mpk::gaussian
