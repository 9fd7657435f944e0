#pragma once

#include <functional>

#include "mpk/gaussian.hpp"

namespace mpk::numerics {

using gaussian::GaussianState;
using metaplectic::Factor;
using metaplectic::FreeFactor;
using metaplectic::MetaplecticWord;

// Complex samples on the uniform symmetric grid [-hw, hw)^dim with N points
// per axis, x_k = -hw + k * (2 hw / N); row-major for dim 2.
struct GridFunction {
    int dim = 1;  // 1 or 2
    int n_points = 0;
    double half_width = 0.0;
    std::vector<cplx> samples;

    double spacing() const { return 2.0 * half_width / n_points; }
    double coord(int k) const { return -half_width + k * spacing(); }
    size_t size() const { return samples.size(); }
};

GridFunction make_grid(int dim, int n_points, double half_width);
void validate_shape(const GridFunction& u);

// Outer 5% of each axis must carry less than 1e-10 of the peak modulus;
// violations abort the computation rather than silently alias.
bool guard_band_ok(const GridFunction& u);
void check_guard_band(const GridFunction& u, const char* where);

double grid_norm_sq(const GridFunction& u);
double grid_dist_sup(const GridFunction& u, const GridFunction& v);

// Frequency grid of the transform: same N, spacing 1/(2 hw), so the
// half-width is N/(4 hw).
double freq_half_width(const GridFunction& u);

GridFunction grid_fourier(const GridFunction& u);
GridFunction grid_fourier_inverse(const GridFunction& u);

double variance_grid(const GridFunction& u);

struct PhaseSymmetry {  // sigma_{x,xi}: u(y) -> u(2x - y) e^{-4 i pi (x-y).xi}
    std::vector<double> x, xi;
};
struct PhaseTranslation {  // tau_{y,eta}: u(x) -> u(x-y) e^{2 i pi (x - y/2).eta}
    std::vector<double> y, eta;
};

GridFunction apply_elementary_grid(const Factor& e, const GridFunction& u);
GridFunction apply_phase_symmetry(const PhaseSymmetry& s, const GridFunction& u);
GridFunction apply_phase_translation(const PhaseTranslation& t, const GridFunction& u);

// Dense quadrature of the imaginary-Gaussian kernel of M_{P,L,Q}^{m}.
GridFunction apply_free_factor_grid(const FreeFactor& f, const GridFunction& u);

// Quadrature of the ABC-form kernel against the Fourier transform of u:
// (M_{A,B,C}^{m} u)(x) = e^{i pi m/2} |det B|^{1/2}
//                        int e^{i pi(<Ax,x> + 2<Bx,eta> + <C eta,eta>)} u^(eta) d eta.
GridFunction apply_abc_grid(const metaplectic::ABCFormData& d, int m, const GridFunction& u);

GridFunction apply_word_grid(const MetaplecticWord& w, const GridFunction& u);

GridFunction sample_gaussian(const GaussianState& g, int n_points, double half_width);

// Hermite basis of the convention pi(D^2 + x^2) h_k = (k + 1/2) h_k,
// i.e. physicists' Hermite functions rescaled by y = x sqrt(2 pi).
std::vector<double> hermite_values(int max_degree, double x);  // h_0..h_max at one point
GridFunction sample_hermite_combination(const std::vector<cplx>& coeffs, int n_points, double half_width);
GridFunction sample_hermite_combination_2d(const std::vector<std::vector<cplx>>& coeffs, int n_points,
                                           double half_width);

struct WignerTable {
    int n_points = 0;      // per axis
    double x_half_width = 0.0;
    double xi_half_width = 0.0;  // = N / (8 hw)
    std::vector<cplx> values;    // row-major, x index major

    double x_spacing() const { return 2.0 * x_half_width / n_points; }
    double xi_spacing() const { return 2.0 * xi_half_width / n_points; }
    cplx at(int ix, int ixi) const { return values[static_cast<size_t>(ix) * n_points + ixi]; }
};

// W(u,v)(x,xi) = int e^{-2 i pi z xi} u(x + z/2) conj(v(x - z/2)) dz, 1-D.
WignerTable wigner_grid(const GridFunction& u, const GridFunction& v);

double wigner_l2_norm(const WignerTable& w);

// Dense Weyl operator on the half-resolution x-grid, built from the kernel
// k_a(x,y) = a^[2]((x+y)/2, y-x); the quadrature weight is folded in, so
// application is a plain matrix-vector product.
struct WeylKernelOperator {
    int n_points = 0;  // operator grid: N_a/2 points, spacing 2 h_a
    double half_width = 0.0;
    CMat matrix;

    double spacing() const { return 2.0 * half_width / n_points; }
    double coord(int k) const { return -half_width + k * spacing(); }
};

WeylKernelOperator weyl_kernel_matrix(const GridFunction& symbol);
GridFunction apply_weyl_kernel(const WeylKernelOperator& op, const GridFunction& u);
double operator_norm(const WeylKernelOperator& op);

struct SymbolNormBound {  // Proposition-style bound min(2^n ||a||_1, ||a^||_1)
    double l1 = 0.0;
    double l1_fourier = 0.0;
    double bound = 0.0;
};
SymbolNormBound weyl_norm_bound(const GridFunction& symbol);

// a(x, xi) = <Q (x+xi), (x+xi)> + <linear, (x,xi)> + constant acting on a grid
// function through multiplication, Fourier multipliers and symmetrized cross
// terms; exact to spectral accuracy for band-limited data.
struct QuadraticSymbol {
    int n = 1;
    Mat q;  // 2n x 2n symmetric, ordering (x_1..x_n, xi_1..xi_n)
    double constant = 0.0;
};

void validate(const QuadraticSymbol& q);
QuadraticSymbol compose_with_linear_map(const QuadraticSymbol& q, const Mat& chi);  // a o chi

GridFunction apply_weyl_poly2_grid(const QuadraticSymbol& q, const std::vector<double>& linear,
                                   const GridFunction& u);
inline GridFunction apply_weyl_quadratic_grid(const QuadraticSymbol& q, const GridFunction& u) {
    return apply_weyl_poly2_grid(q, std::vector<double>(2 * q.n, 0.0), u);
}

// Truncated Hermite-basis matrices; entries are exact (ladder products are
// formed two sizes up and cropped).
CMat hermite_matrix_x(int axis, int n, int truncation);
CMat hermite_matrix_d(int axis, int n, int truncation);

struct HermiteOperator {
    int n = 1;
    int truncation = 0;  // per axis
    CMat matrix;         // Hermitian, size truncation^n
    QuadraticSymbol symbol;
    std::vector<double> linear;       // optional degree-1 part used by slices
    std::vector<double> axis_scales;  // dilation of the basis per axis, default 1
};

HermiteOperator weyl_quadratic_hermite(const QuadraticSymbol& q, int truncation);
// axis_scales dilates the basis on selected axes (h_k(x sqrt(s)) s^{1/4});
// useful when a multiplication-only direction needs concentration.
HermiteOperator weyl_poly2_hermite(const QuadraticSymbol& q, const std::vector<double>& linear,
                                   double extra_constant, int truncation,
                                   std::vector<double> axis_scales = {});

struct GroundEnergy {
    double value = 0.0;
    int truncation = 0;
    double drift = 0.0;  // |E(K) - E(K+16)|
    bool converged = false;
};

GroundEnergy ground_energy(const HermiteOperator& h);
double ground_energy_strict(const HermiteOperator& h);  // throws TruncationUnconverged

struct PartialMinReport {
    double full_energy = 0.0;
    double sliced_min = 0.0;
    double difference = 0.0;
    std::vector<int> sliced_coords;  // x_j whose conjugate momentum is absent
};

// Compares the ground energy of opw(q) with the minimum over slice values of
// the reduced operators in the remaining variables.
PartialMinReport partial_min_check(const QuadraticSymbol& q, const std::vector<std::vector<double>>& slices,
                                   int truncation);

}  // namespace mpk::numerics
