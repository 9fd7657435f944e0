#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace mpk {

// Error hierarchy: every throwing path in the library uses one of these,
// so callers (and the CLI) can map failures to exit codes.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};
struct NotSymmetric : Error { using Error::Error; };
struct NotPositiveSemidefinite : Error { using Error::Error; };
struct ConvergenceFailure : Error { using Error::Error; };
struct UnsupportedIndex : Error { using Error::Error; };
struct OddDimension : Error { using Error::Error; };
struct SingularB : Error { using Error::Error; };
struct SingularL : Error { using Error::Error; };
struct SingularBlock11 : Error { using Error::Error; };
struct SingularBlock12 : Error { using Error::Error; };
struct FactorizationFailure : Error { using Error::Error; };
struct SingularInput : Error { using Error::Error; };
struct IncompatibleIndex : Error { using Error::Error; };
struct DimensionMismatch : Error { using Error::Error; };
struct SingularTheta : Error { using Error::Error; };
struct DegeneratePairing : Error { using Error::Error; };
struct GridMismatch : Error { using Error::Error; };
struct ResamplingRequired : Error { using Error::Error; };
struct AliasingRisk : Error { using Error::Error; };
struct TruncationUnconverged : Error { using Error::Error; };

using cplx = std::complex<double>;

// Dense real matrix, row-major.
class Mat {
  public:
    Mat() = default;
    Mat(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols, 0.0) {}
    Mat(int rows, int cols, std::vector<double> entries);

    static Mat identity(int n);
    static Mat zero(int rows, int cols) { return Mat(rows, cols); }
    static Mat diag(const std::vector<double>& d);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    double& operator()(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
    double operator()(int i, int j) const { return a_[static_cast<size_t>(i) * cols_ + j]; }
    const std::vector<double>& data() const { return a_; }
    std::vector<double>& data() { return a_; }

    Mat transpose() const;
    Mat block(int i0, int j0, int r, int c) const;
    void set_block(int i0, int j0, const Mat& b);

  private:
    int rows_ = 0, cols_ = 0;
    std::vector<double> a_;
};

Mat operator+(const Mat& x, const Mat& y);
Mat operator-(const Mat& x, const Mat& y);
Mat operator*(const Mat& x, const Mat& y);
Mat operator*(double s, const Mat& x);
std::vector<double> operator*(const Mat& x, const std::vector<double>& v);

// Dense complex matrix, row-major.
class CMat {
  public:
    CMat() = default;
    CMat(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols) {}

    static CMat identity(int n);
    static CMat from_real(const Mat& re);
    static CMat from_parts(const Mat& re, const Mat& im);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    cplx& operator()(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
    cplx operator()(int i, int j) const { return a_[static_cast<size_t>(i) * cols_ + j]; }
    const std::vector<cplx>& data() const { return a_; }
    std::vector<cplx>& data() { return a_; }

    CMat transpose() const;
    CMat adjoint() const;
    Mat real() const;
    Mat imag() const;

  private:
    int rows_ = 0, cols_ = 0;
    std::vector<cplx> a_;
};

CMat operator+(const CMat& x, const CMat& y);
CMat operator-(const CMat& x, const CMat& y);
CMat operator*(const CMat& x, const CMat& y);
CMat operator*(cplx s, const CMat& x);
std::vector<cplx> operator*(const CMat& x, const std::vector<cplx>& v);

double max_abs(const Mat& x);
double max_abs(const CMat& x);
double sym_residual(const Mat& s);  // ||S - S^T||_max
bool is_symmetric(const Mat& s, double rel_tol = 1e-12);

struct EigResult {
    std::vector<double> values;  // ascending
    Mat vectors;                 // orthogonal, columns are eigenvectors
};

// Cyclic Jacobi; adequate and robust at the dense sizes used here.
EigResult sym_eig(const Mat& s);

struct SvdResult {
    Mat u;
    std::vector<double> sigma;  // descending, nonnegative
    Mat v;                      // T = U diag(sigma) V^T
};

// SVD of a square real matrix via the eigendecomposition of T^T T,
// with left vectors recovered as T v / sigma and a deterministic
// Gram-Schmidt completion on the kernel.
SvdResult svd(const Mat& t);

// Relative singular-value cutoff for all rank decisions.
inline constexpr double kRankCutoff = 1e-10;

int numeric_rank(const std::vector<double>& sigma_descending, double rel_cutoff = kRankCutoff);

Mat abs_op(const Mat& t);    // |T| = (T^T T)^{1/2}
Mat sqrt_psd(const Mat& s);  // symmetric PSD square root

struct PolarPair {
    Mat unitary;   // orthogonal for real input
    Mat absolute;  // symmetric PSD, T = unitary * absolute
};

PolarPair polar_unitary(const Mat& t);

// p in {1, 2, inf}; pass p = 0 for the operator norm (S^inf).
double schatten_norm(const Mat& t, double p);

double det(const Mat& t);
Mat inverse(const Mat& t);

cplx cdet(const CMat& t);
CMat cinverse(const CMat& t);

// log(det M) for a complex matrix whose field of values avoids 0 along the
// homotopy (1-s) iI + s M, i.e. Im M >= 0 and M invertible.  The branch is
// the one continuous along that path starting from log(det iI) = i pi n/2;
// for spectra in the closed upper half-plane it coincides with the sum of
// principal logs of the eigenvalues.
cplx log_det_upper(const CMat& m);

// Smallest eigenvalue of a Hermitian matrix (Lanczos with full
// reorthogonalization; dense Jacobi fallback for small sizes).
double hermitian_ground(const CMat& h);

}  // namespace mpk
