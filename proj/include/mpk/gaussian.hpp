#pragma once

#include "mpk/metaplectic.hpp"

namespace mpk::gaussian {

using metaplectic::Factor;
using metaplectic::FreeFactor;
using metaplectic::MetaplecticWord;

// Centered state u(x) = c * e^{i pi <Theta x, x>} with Theta complex
// symmetric and Im Theta positive-definite.
struct GaussianState {
    int n = 1;
    cplx c{1.0, 0.0};
    CMat theta;
};

GaussianState standard_gaussian(int n);  // 2^{n/4} e^{-pi |x|^2}
void validate(const GaussianState& g);

double gaussian_norm_sq(const GaussianState& g);   // |c|^2 det(2 Im Theta)^{-1/2}
double gaussian_variance(const GaussianState& g);  // ||g||^2 (1/4pi) trace((Im Theta)^{-1})

struct SignatureData {
    int sig = 0;    // nu_+ - nu_-
    int index = 0;  // nu_-
};

SignatureData signature(const Mat& b);

// Fourier transform with the 2pi convention: amplitude gains
// det(-i Theta)^{-1/2} on the branch continuous from Theta = iI, and the
// matrix maps to -Theta^{-1}.  Accepts boundary data with Im Theta = 0
// (real symmetric invertible Theta), where the prefactor reduces to
// |det B|^{-1/2} e^{i pi sign(B)/4}.
GaussianState fourier_gaussian(const GaussianState& g);
std::pair<cplx, CMat> fourier_gaussian_raw(cplx c, const CMat& theta);

GaussianState apply_elementary(const Factor& e, const GaussianState& g);

// Theta' = P - L^T (Q + Theta)^{-1} L with amplitude factor
// e^{-i pi n/4} e^{i pi m/2} |det L|^{1/2} det(-i(Q+Theta))^{-1/2}.
GaussianState apply_free_factor(const FreeFactor& f, const GaussianState& g);

GaussianState apply_word(const MetaplecticWord& w, const GaussianState& g);

// <u, v> = integral of u * conj(v) for two Gaussian states.
cplx pair_states(const GaussianState& u, const GaussianState& v);

struct OptimizerPoint {
    GaussianState state;      // unit-norm member of the variance-minimizing family
    double variance_product;  // V(M w_t) V(w_t), exact closed form
    double limit;             // mu(Psi(f)) = trace norm of Psi(f)_12 / 4pi
};

// Family w_t with Theta = i t G0; G0 = I for n = 1 (the 1-D family v_t) and
// G0 = |Xi12|^{-1} for n >= 2, aligning the metric with the singular vectors
// of Xi12 = L^{-1}.  sqrt(variance_product) -> limit as t -> infinity.
OptimizerPoint optimizer_family(const FreeFactor& f, double t);

// Same family for an arbitrary symplectic projection, including singular
// block 12: directions with singular value sigma_j get metric t/sigma_j,
// kernel directions concentrate at rate t^3.
GaussianState mu_family_state(const symplectic::SymplecticMatrix& xi, double t);

// Variance product V(W u_t) V(u_t) for the word W acting on mu_family_state
// of Psi(W), in closed form.
double word_variance_product(const MetaplecticWord& w, double t);

}  // namespace mpk::gaussian
