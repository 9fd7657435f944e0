#include "mpk/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace mpk {

Mat::Mat(int rows, int cols, std::vector<double> entries) : rows_(rows), cols_(cols), a_(std::move(entries)) {
    if (a_.size() != static_cast<size_t>(rows) * cols)
        throw Error("Mat: entry count does not match rows*cols");
}

Mat Mat::identity(int n) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Mat Mat::diag(const std::vector<double>& d) {
    Mat m(static_cast<int>(d.size()), static_cast<int>(d.size()));
    for (size_t i = 0; i < d.size(); ++i) m(static_cast<int>(i), static_cast<int>(i)) = d[i];
    return m;
}

Mat Mat::transpose() const {
    Mat r(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
    return r;
}

Mat Mat::block(int i0, int j0, int r, int c) const {
    Mat b(r, c);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j) b(i, j) = (*this)(i0 + i, j0 + j);
    return b;
}

void Mat::set_block(int i0, int j0, const Mat& b) {
    for (int i = 0; i < b.rows(); ++i)
        for (int j = 0; j < b.cols(); ++j) (*this)(i0 + i, j0 + j) = b(i, j);
}

static void check_same_shape(int r1, int c1, int r2, int c2, const char* op) {
    if (r1 != r2 || c1 != c2) throw DimensionMismatch(std::string(op) + ": shape mismatch");
}

Mat operator+(const Mat& x, const Mat& y) {
    check_same_shape(x.rows(), x.cols(), y.rows(), y.cols(), "Mat+");
    Mat r(x.rows(), x.cols());
    for (size_t k = 0; k < r.data().size(); ++k) r.data()[k] = x.data()[k] + y.data()[k];
    return r;
}

Mat operator-(const Mat& x, const Mat& y) {
    check_same_shape(x.rows(), x.cols(), y.rows(), y.cols(), "Mat-");
    Mat r(x.rows(), x.cols());
    for (size_t k = 0; k < r.data().size(); ++k) r.data()[k] = x.data()[k] - y.data()[k];
    return r;
}

Mat operator*(const Mat& x, const Mat& y) {
    if (x.cols() != y.rows()) throw DimensionMismatch("Mat*: inner dimension mismatch");
    Mat r(x.rows(), y.cols());
    for (int i = 0; i < x.rows(); ++i)
        for (int k = 0; k < x.cols(); ++k) {
            const double xik = x(i, k);
            if (xik == 0.0) continue;
            for (int j = 0; j < y.cols(); ++j) r(i, j) += xik * y(k, j);
        }
    return r;
}

Mat operator*(double s, const Mat& x) {
    Mat r = x;
    for (double& v : r.data()) v *= s;
    return r;
}

std::vector<double> operator*(const Mat& x, const std::vector<double>& v) {
    if (x.cols() != static_cast<int>(v.size())) throw DimensionMismatch("Mat*vec: size mismatch");
    std::vector<double> r(x.rows(), 0.0);
    for (int i = 0; i < x.rows(); ++i)
        for (int j = 0; j < x.cols(); ++j) r[i] += x(i, j) * v[j];
    return r;
}

CMat CMat::identity(int n) {
    CMat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

CMat CMat::from_real(const Mat& re) {
    CMat m(re.rows(), re.cols());
    for (size_t k = 0; k < re.data().size(); ++k) m.data()[k] = re.data()[k];
    return m;
}

CMat CMat::from_parts(const Mat& re, const Mat& im) {
    check_same_shape(re.rows(), re.cols(), im.rows(), im.cols(), "CMat::from_parts");
    CMat m(re.rows(), re.cols());
    for (size_t k = 0; k < re.data().size(); ++k) m.data()[k] = cplx(re.data()[k], im.data()[k]);
    return m;
}

CMat CMat::transpose() const {
    CMat r(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
    return r;
}

CMat CMat::adjoint() const {
    CMat r(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) r(j, i) = std::conj((*this)(i, j));
    return r;
}

Mat CMat::real() const {
    Mat r(rows_, cols_);
    for (size_t k = 0; k < a_.size(); ++k) r.data()[k] = a_[k].real();
    return r;
}

Mat CMat::imag() const {
    Mat r(rows_, cols_);
    for (size_t k = 0; k < a_.size(); ++k) r.data()[k] = a_[k].imag();
    return r;
}

CMat operator+(const CMat& x, const CMat& y) {
    check_same_shape(x.rows(), x.cols(), y.rows(), y.cols(), "CMat+");
    CMat r(x.rows(), x.cols());
    for (size_t k = 0; k < r.data().size(); ++k) r.data()[k] = x.data()[k] + y.data()[k];
    return r;
}

CMat operator-(const CMat& x, const CMat& y) {
    check_same_shape(x.rows(), x.cols(), y.rows(), y.cols(), "CMat-");
    CMat r(x.rows(), x.cols());
    for (size_t k = 0; k < r.data().size(); ++k) r.data()[k] = x.data()[k] - y.data()[k];
    return r;
}

CMat operator*(const CMat& x, const CMat& y) {
    if (x.cols() != y.rows()) throw DimensionMismatch("CMat*: inner dimension mismatch");
    CMat r(x.rows(), y.cols());
    for (int i = 0; i < x.rows(); ++i)
        for (int k = 0; k < x.cols(); ++k) {
            const cplx xik = x(i, k);
            if (xik == cplx(0.0, 0.0)) continue;
            for (int j = 0; j < y.cols(); ++j) r(i, j) += xik * y(k, j);
        }
    return r;
}

CMat operator*(cplx s, const CMat& x) {
    CMat r = x;
    for (cplx& v : r.data()) v *= s;
    return r;
}

std::vector<cplx> operator*(const CMat& x, const std::vector<cplx>& v) {
    if (x.cols() != static_cast<int>(v.size())) throw DimensionMismatch("CMat*vec: size mismatch");
    std::vector<cplx> r(x.rows(), cplx(0.0, 0.0));
    for (int i = 0; i < x.rows(); ++i)
        for (int j = 0; j < x.cols(); ++j) r[i] += x(i, j) * v[j];
    return r;
}

double max_abs(const Mat& x) {
    double m = 0.0;
    for (double v : x.data()) m = std::max(m, std::abs(v));
    return m;
}

double max_abs(const CMat& x) {
    double m = 0.0;
    for (const cplx& v : x.data()) m = std::max(m, std::abs(v));
    return m;
}

double sym_residual(const Mat& s) {
    double m = 0.0;
    for (int i = 0; i < s.rows(); ++i)
        for (int j = i + 1; j < s.cols(); ++j) m = std::max(m, std::abs(s(i, j) - s(j, i)));
    return m;
}

bool is_symmetric(const Mat& s, double rel_tol) {
    if (s.rows() != s.cols()) return false;
    const double scale = std::max(max_abs(s), 1e-300);
    return sym_residual(s) <= rel_tol * scale;
}

EigResult sym_eig(const Mat& s_in) {
    if (s_in.rows() != s_in.cols()) throw NotSymmetric("sym_eig: matrix not square");
    if (!is_symmetric(s_in, 1e-12) && sym_residual(s_in) > 1e-10 * std::max(1.0, max_abs(s_in)))
        throw NotSymmetric("sym_eig: symmetry tolerance violated");

    const int n = s_in.rows();
    Mat a = s_in;
    // symmetrize to kill representation noise before rotating
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const double m = 0.5 * (a(i, j) + a(j, i));
            a(i, j) = a(j, i) = m;
        }
    Mat v = Mat::identity(n);

    const int max_sweeps = 60;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
        if (off <= 1e-30 * std::max(1.0, max_abs(a) * max_abs(a))) break;

        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (std::abs(apq) <= 1e-300) continue;
                const double app = a(p, p), aqq = a(q, q);
                if (std::abs(apq) < 1e-18 * (std::abs(app) + std::abs(aqq) + 1e-300)) continue;
                const double theta = (aqq - app) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double sn = t * c;
                for (int k = 0; k < n; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - sn * akq;
                    a(k, q) = sn * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - sn * aqk;
                    a(q, k) = sn * apk + c * aqk;
                }
                for (int k = 0; k < n; ++k) {
                    const double vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - sn * vkq;
                    v(k, q) = sn * vkp + c * vkq;
                }
            }
        }
        if (sweep == max_sweeps - 1) throw ConvergenceFailure("sym_eig: Jacobi sweep limit hit");
    }

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int i, int j) { return a(i, i) < a(j, j); });

    EigResult r;
    r.values.resize(n);
    r.vectors = Mat(n, n);
    for (int j = 0; j < n; ++j) {
        r.values[j] = a(order[j], order[j]);
        for (int i = 0; i < n; ++i) r.vectors(i, j) = v(i, order[j]);
    }
    return r;
}

int numeric_rank(const std::vector<double>& sigma, double rel_cutoff) {
    if (sigma.empty()) return 0;
    const double cut = rel_cutoff * std::max(sigma.front(), 1e-300);
    int r = 0;
    for (double s : sigma)
        if (s > cut) ++r;
    return r;
}

// Deterministic completion of the leading `have` orthonormal columns of u
// to a full orthogonal basis, sweeping canonical vectors in index order.
static void complete_orthonormal(Mat& u, int have) {
    const int n = u.rows();
    int next = have;
    for (int e = 0; e < n && next < n; ++e) {
        std::vector<double> w(n, 0.0);
        w[e] = 1.0;
        for (int pass = 0; pass < 2; ++pass)
            for (int j = 0; j < next; ++j) {
                double d = 0.0;
                for (int i = 0; i < n; ++i) d += w[i] * u(i, j);
                for (int i = 0; i < n; ++i) w[i] -= d * u(i, j);
            }
        double norm = 0.0;
        for (double x : w) norm += x * x;
        norm = std::sqrt(norm);
        if (norm < 1e-8) continue;
        for (int i = 0; i < n; ++i) u(i, next) = w[i] / norm;
        ++next;
    }
    if (next < n) throw ConvergenceFailure("orthonormal completion failed");
}

SvdResult svd(const Mat& t) {
    if (t.rows() != t.cols()) throw Error("svd: only square matrices supported");
    const int n = t.rows();
    EigResult eig = sym_eig(t.transpose() * t);

    SvdResult r;
    r.sigma.resize(n);
    r.v = Mat(n, n);
    r.u = Mat(n, n);
    // eigenvalues come ascending; singular values go descending
    for (int j = 0; j < n; ++j) {
        const int src = n - 1 - j;
        r.sigma[j] = std::sqrt(std::max(eig.values[src], 0.0));
        for (int i = 0; i < n; ++i) r.v(i, j) = eig.vectors(i, src);
    }
    const int rank = numeric_rank(r.sigma);
    for (int j = 0; j < rank; ++j) {
        double norm = 0.0;
        std::vector<double> col(n, 0.0);
        for (int i = 0; i < n; ++i) {
            double s = 0.0;
            for (int k = 0; k < n; ++k) s += t(i, k) * r.v(k, j);
            col[i] = s;
            norm += s * s;
        }
        norm = std::sqrt(norm);
        r.sigma[j] = norm;  // recomputed directly; more accurate than sqrt of eigenvalue
        for (int i = 0; i < n; ++i) r.u(i, j) = col[i] / norm;
    }
    for (int j = rank; j < n; ++j) r.sigma[j] = 0.0;
    complete_orthonormal(r.u, rank);
    return r;
}

Mat abs_op(const Mat& t) {
    SvdResult s = svd(t);
    Mat r(t.rows(), t.rows());
    for (int i = 0; i < t.rows(); ++i)
        for (int j = 0; j < t.rows(); ++j) {
            double acc = 0.0;
            for (int k = 0; k < t.rows(); ++k) acc += s.v(i, k) * s.sigma[k] * s.v(j, k);
            r(i, j) = acc;
        }
    return r;
}

Mat sqrt_psd(const Mat& s_in) {
    EigResult eig = sym_eig(s_in);
    const int n = s_in.rows();
    double scale = 0.0;
    for (double v : eig.values) scale = std::max(scale, std::abs(v));
    for (double v : eig.values)
        if (v < -1e-8 * std::max(scale, 1e-300))
            throw NotPositiveSemidefinite("sqrt_psd: negative eigenvalue " + std::to_string(v));
    Mat r(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double acc = 0.0;
            for (int k = 0; k < n; ++k) acc += eig.vectors(i, k) * std::sqrt(std::max(eig.values[k], 0.0)) * eig.vectors(j, k);
            r(i, j) = acc;
        }
    return r;
}

PolarPair polar_unitary(const Mat& t) {
    SvdResult s = svd(t);
    PolarPair p;
    p.unitary = s.u * s.v.transpose();
    Mat sv(t.rows(), t.rows());
    for (int i = 0; i < t.rows(); ++i)
        for (int j = 0; j < t.rows(); ++j) {
            double acc = 0.0;
            for (int k = 0; k < t.rows(); ++k) acc += s.v(i, k) * s.sigma[k] * s.v(j, k);
            sv(i, j) = acc;
        }
    p.absolute = sv;
    return p;
}

double schatten_norm(const Mat& t, double p) {
    if (t.rows() != t.cols()) throw Error("schatten_norm: matrix not square");
    if (p == 2.0) {
        double s = 0.0;
        for (double v : t.data()) s += v * v;
        return std::sqrt(s);
    }
    const bool inf = (p == 0.0 || std::isinf(p));
    if (p != 1.0 && !inf) throw UnsupportedIndex("schatten_norm: p must be 1, 2 or inf");
    SvdResult s = svd(t);
    if (inf) return s.sigma.empty() ? 0.0 : s.sigma.front();
    double acc = 0.0;
    for (double v : s.sigma) acc += v;
    return acc;
}

// LU with partial pivoting; shared by det and inverse.
namespace {

struct Lu {
    Mat lu;
    std::vector<int> piv;
    int swaps = 0;
    bool singular = false;
};

Lu lu_decompose(const Mat& t) {
    const int n = t.rows();
    Lu f{t, std::vector<int>(n), 0, false};
    std::iota(f.piv.begin(), f.piv.end(), 0);
    for (int k = 0; k < n; ++k) {
        int p = k;
        for (int i = k + 1; i < n; ++i)
            if (std::abs(f.lu(i, k)) > std::abs(f.lu(p, k))) p = i;
        if (p != k) {
            for (int j = 0; j < n; ++j) std::swap(f.lu(k, j), f.lu(p, j));
            std::swap(f.piv[k], f.piv[p]);
            ++f.swaps;
        }
        if (f.lu(k, k) == 0.0) {
            f.singular = true;
            continue;
        }
        for (int i = k + 1; i < n; ++i) {
            f.lu(i, k) /= f.lu(k, k);
            const double m = f.lu(i, k);
            if (m == 0.0) continue;
            for (int j = k + 1; j < n; ++j) f.lu(i, j) -= m * f.lu(k, j);
        }
    }
    return f;
}

}  // namespace

double det(const Mat& t) {
    if (t.rows() != t.cols()) throw Error("det: matrix not square");
    Lu f = lu_decompose(t);
    if (f.singular) return 0.0;
    double d = (f.swaps % 2 == 0) ? 1.0 : -1.0;
    for (int i = 0; i < t.rows(); ++i) d *= f.lu(i, i);
    return d;
}

Mat inverse(const Mat& t) {
    const int n = t.rows();
    if (t.rows() != t.cols()) throw Error("inverse: matrix not square");
    Lu f = lu_decompose(t);
    if (f.singular) throw SingularInput("inverse: singular matrix");
    Mat inv(n, n);
    std::vector<double> x(n);
    for (int col = 0; col < n; ++col) {
        for (int i = 0; i < n; ++i) x[i] = (f.piv[i] == col) ? 1.0 : 0.0;
        for (int i = 1; i < n; ++i)
            for (int j = 0; j < i; ++j) x[i] -= f.lu(i, j) * x[j];
        for (int i = n - 1; i >= 0; --i) {
            for (int j = i + 1; j < n; ++j) x[i] -= f.lu(i, j) * x[j];
            x[i] /= f.lu(i, i);
        }
        for (int i = 0; i < n; ++i) inv(i, col) = x[i];
    }
    return inv;
}

namespace {

cplx complex_det(const CMat& m) {
    const int n = m.rows();
    CMat a = m;
    cplx d = 1.0;
    for (int k = 0; k < n; ++k) {
        int p = k;
        for (int i = k + 1; i < n; ++i)
            if (std::abs(a(i, k)) > std::abs(a(p, k))) p = i;
        if (p != k) {
            for (int j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
            d = -d;
        }
        const cplx akk = a(k, k);
        if (akk == cplx(0.0, 0.0)) return 0.0;
        d *= akk;
        for (int i = k + 1; i < n; ++i) {
            const cplx f = a(i, k) / akk;
            if (f == cplx(0.0, 0.0)) continue;
            for (int j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
        }
    }
    return d;
}

}  // namespace

cplx cdet(const CMat& t) {
    if (t.rows() != t.cols()) throw Error("cdet: matrix not square");
    return complex_det(t);
}

CMat cinverse(const CMat& t) {
    const int n = t.rows();
    if (n != t.cols()) throw Error("cinverse: matrix not square");
    CMat a = t;
    CMat inv = CMat::identity(n);
    for (int k = 0; k < n; ++k) {
        int p = k;
        for (int i = k + 1; i < n; ++i)
            if (std::abs(a(i, k)) > std::abs(a(p, k))) p = i;
        if (std::abs(a(p, k)) < 1e-300) throw SingularInput("cinverse: singular matrix");
        if (p != k)
            for (int j = 0; j < n; ++j) {
                std::swap(a(k, j), a(p, j));
                std::swap(inv(k, j), inv(p, j));
            }
        const cplx piv = a(k, k);
        for (int j = 0; j < n; ++j) {
            a(k, j) /= piv;
            inv(k, j) /= piv;
        }
        for (int i = 0; i < n; ++i) {
            if (i == k) continue;
            const cplx f = a(i, k);
            if (f == cplx(0.0, 0.0)) continue;
            for (int j = 0; j < n; ++j) {
                a(i, j) -= f * a(k, j);
                inv(i, j) -= f * inv(k, j);
            }
        }
    }
    return inv;
}

cplx log_det_upper(const CMat& m) {
    const int n = m.rows();
    if (n != m.cols()) throw Error("log_det_upper: matrix not square");
    const CMat start = cplx(0.0, 1.0) * CMat::identity(n);

    // Track arg(det) continuously along (1-s) iI + s M; the path never hits a
    // singular matrix when Im M >= 0 and det M != 0.
    cplx d_prev = complex_det(start);
    double arg_acc = n * (M_PI / 2.0);  // log(det iI) = i pi n / 2, no wrapping at the start
    double log_abs = std::log(std::abs(d_prev));

    double step = 1.0 / 16.0;
    double s = 0.0;
    int guard = 0;
    while (s < 1.0) {
        if (++guard > 100000) throw ConvergenceFailure("log_det_upper: homotopy failed to advance");
        double s_next = std::min(1.0, s + step);
        CMat mix(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                cplx v = s_next * m(i, j);
                if (i == j) v += cplx(0.0, 1.0 - s_next);
                mix(i, j) = v;
            }
        const cplx d_next = complex_det(mix);
        if (d_next == cplx(0.0, 0.0)) throw SingularTheta("log_det_upper: singular along homotopy");
        const cplx ratio = d_next / d_prev;
        const double dphi = std::arg(ratio);
        if (std::abs(dphi) > 1.2 && s_next - s > 1e-12) {
            step *= 0.5;  // phase step too coarse to unwrap safely
            continue;
        }
        arg_acc += dphi;
        log_abs += std::log(std::abs(ratio));
        d_prev = d_next;
        s = s_next;
        if (std::abs(dphi) < 0.3) step = std::min(step * 2.0, 0.25);
    }
    return cplx(log_abs, arg_acc);
}

namespace {

// Smallest eigenvalue of a symmetric tridiagonal matrix via Sturm bisection.
double tridiag_ground(const std::vector<double>& alpha, const std::vector<double>& beta) {
    const int m = static_cast<int>(alpha.size());
    double lo = alpha[0], hi = alpha[0];
    for (int i = 0; i < m; ++i) {
        const double bl = i > 0 ? std::abs(beta[i - 1]) : 0.0;
        const double br = i < m - 1 ? std::abs(beta[i]) : 0.0;
        lo = std::min(lo, alpha[i] - bl - br);
        hi = std::max(hi, alpha[i] + bl + br);
    }
    auto count_below = [&](double x) {
        int cnt = 0;
        double d = 1.0;
        for (int i = 0; i < m; ++i) {
            const double b2 = i > 0 ? beta[i - 1] * beta[i - 1] : 0.0;
            d = alpha[i] - x - (d != 0.0 ? b2 / d : b2 / 1e-300);
            if (d < 0.0) ++cnt;
        }
        return cnt;
    };
    for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (count_below(mid) >= 1)
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

double dense_hermitian_ground(const CMat& h) {
    // real symmetric embedding [[Re, -Im], [Im, Re]]; spectrum is doubled
    const int n = h.rows();
    Mat e(2 * n, 2 * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            e(i, j) = h(i, j).real();
            e(i, j + n) = -h(i, j).imag();
            e(i + n, j) = h(i, j).imag();
            e(i + n, j + n) = h(i, j).real();
        }
    return sym_eig(e).values.front();
}

}  // namespace

double hermitian_ground(const CMat& h) {
    const int n = h.rows();
    if (n != h.cols()) throw Error("hermitian_ground: matrix not square");
    if (n <= 160) return dense_hermitian_ground(h);

    // Lanczos with full reorthogonalization.
    std::mt19937_64 rng(0x9e3779b97f4a7c15ull);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<std::vector<cplx>> basis;
    std::vector<double> alpha, beta;

    std::vector<cplx> v(n);
    for (auto& x : v) x = cplx(gauss(rng), gauss(rng));
    double nv = 0.0;
    for (auto& x : v) nv += std::norm(x);
    nv = std::sqrt(nv);
    for (auto& x : v) x /= nv;
    basis.push_back(v);

    const int m_max = std::min(300, n);
    double prev_ground = 1e300;
    for (int it = 0; it < m_max; ++it) {
        std::vector<cplx> w = h * basis.back();
        cplx a(0.0, 0.0);
        for (int i = 0; i < n; ++i) a += std::conj(basis.back()[i]) * w[i];
        alpha.push_back(a.real());
        for (size_t b = 0; b < basis.size(); ++b) {
            cplx d(0.0, 0.0);
            for (int i = 0; i < n; ++i) d += std::conj(basis[b][i]) * w[i];
            for (int i = 0; i < n; ++i) w[i] -= d * basis[b][i];
        }
        double nw = 0.0;
        for (auto& x : w) nw += std::norm(x);
        nw = std::sqrt(nw);

        const double ground = tridiag_ground(alpha, beta);
        if (it > 24 && std::abs(ground - prev_ground) < 1e-13 * std::max(1.0, std::abs(ground))) return ground;
        prev_ground = ground;

        if (nw < 1e-14) return ground;  // invariant subspace exhausted
        beta.push_back(nw);
        for (auto& x : w) x /= nw;
        basis.push_back(std::move(w));
    }
    return prev_ground;
}

}  // namespace mpk
