#include "mpk/symplectic.hpp"

#include <cmath>
#include <random>

namespace mpk::symplectic {

Mat standard_form(int n) {
    Mat s(2 * n, 2 * n);
    for (int i = 0; i < n; ++i) {
        s(i, n + i) = 1.0;
        s(n + i, i) = -1.0;
    }
    return s;
}

VerifyReport is_symplectic(const Mat& m, double tol) {
    VerifyReport r;
    r.tol = tol;
    if (m.rows() != m.cols()) throw OddDimension("is_symplectic: matrix not square");
    if (m.rows() % 2 != 0) throw OddDimension("is_symplectic: odd dimension");
    const int n = m.rows() / 2;
    const Mat sig = standard_form(n);
    r.residual = max_abs(m.transpose() * sig * m - sig);
    r.det = det(m);
    r.ok = r.residual <= tol;
    return r;
}

SymplecticMatrix::SymplecticMatrix(Mat m, double tol) : m_(std::move(m)) {
    VerifyReport r = is_symplectic(m_, tol);
    if (!r.ok)
        throw Error("SymplecticMatrix: condition ||Xi^T sigma Xi - sigma|| <= tol violated, residual " +
                    std::to_string(r.residual));
    if (std::abs(r.det - 1.0) > 1e-8)
        throw Error("SymplecticMatrix: det must be 1, got " + std::to_string(r.det));
    n_ = m_.rows() / 2;
}

SymplecticMatrix symplectic_inverse(const SymplecticMatrix& xi) {
    const int n = xi.n();
    Mat r(2 * n, 2 * n);
    r.set_block(0, 0, xi.block22().transpose());
    r.set_block(0, n, -1.0 * xi.block12().transpose());
    r.set_block(n, 0, -1.0 * xi.block21().transpose());
    r.set_block(n, n, xi.block11().transpose());
    return SymplecticMatrix(std::move(r));
}

void validate(const FreeFormData& d) {
    const int n = d.l.rows();
    if (d.p.rows() != n || d.p.cols() != n || d.q.rows() != n || d.q.cols() != n || d.l.cols() != n)
        throw DimensionMismatch("FreeFormData: inconsistent dimensions");
    if (sym_residual(d.p) > 1e-10 * std::max(1.0, max_abs(d.p)))
        throw NotSymmetric("FreeFormData: P not symmetric");
    if (sym_residual(d.q) > 1e-10 * std::max(1.0, max_abs(d.q)))
        throw NotSymmetric("FreeFormData: Q not symmetric");
    if (std::abs(det(d.l)) <= 1e-12) throw SingularL("FreeFormData: L singular");
}

void validate(const ABCFormData& d) {
    const int n = d.b.rows();
    if (d.a.rows() != n || d.a.cols() != n || d.c.rows() != n || d.c.cols() != n || d.b.cols() != n)
        throw DimensionMismatch("ABCFormData: inconsistent dimensions");
    if (sym_residual(d.a) > 1e-10 * std::max(1.0, max_abs(d.a)))
        throw NotSymmetric("ABCFormData: A not symmetric");
    if (sym_residual(d.c) > 1e-10 * std::max(1.0, max_abs(d.c)))
        throw NotSymmetric("ABCFormData: C not symmetric");
    if (std::abs(det(d.b)) <= 1e-12) throw SingularB("ABCFormData: B singular");
}

SymplecticMatrix make_lambda_plq(const FreeFormData& d) {
    validate(d);
    const int n = d.l.rows();
    const Mat linv = inverse(d.l);
    Mat m(2 * n, 2 * n);
    m.set_block(0, 0, linv * d.q);
    m.set_block(0, n, linv);
    m.set_block(n, 0, d.p * linv * d.q - d.l.transpose());
    m.set_block(n, n, d.p * linv);
    const double scale = std::max(1.0, max_abs(m) * max_abs(m));
    return SymplecticMatrix(std::move(m), 1e-9 * scale);
}

SymplecticMatrix make_xi_abc(const ABCFormData& d) {
    validate(d);
    const int n = d.b.rows();
    const Mat binv = inverse(d.b);
    Mat m(2 * n, 2 * n);
    m.set_block(0, 0, binv);
    m.set_block(0, n, -1.0 * (binv * d.c));
    m.set_block(n, 0, d.a * binv);
    m.set_block(n, n, d.b.transpose() - d.a * binv * d.c);
    const double scale = std::max(1.0, max_abs(m) * max_abs(m));
    return SymplecticMatrix(std::move(m), 1e-9 * scale);
}

FreeFormData factor_free(const SymplecticMatrix& xi) {
    const Mat x12 = xi.block12();
    SvdResult s = svd(x12);
    if (numeric_rank(s.sigma) < xi.n())
        throw SingularBlock12("factor_free: block 12 singular (smallest sv " +
                              std::to_string(s.sigma.back()) + ")");
    const Mat l = inverse(x12);
    FreeFormData d{xi.block22() * l, l, l * xi.block11()};
    // P, Q are symmetric by the symplectic relations; symmetrize roundoff away
    for (int i = 0; i < xi.n(); ++i)
        for (int j = i + 1; j < xi.n(); ++j) {
            d.p(i, j) = d.p(j, i) = 0.5 * (d.p(i, j) + d.p(j, i));
            d.q(i, j) = d.q(j, i) = 0.5 * (d.q(i, j) + d.q(j, i));
        }
    return d;
}

ABCFormData factor_abc(const SymplecticMatrix& xi) {
    const Mat x11 = xi.block11();
    SvdResult s = svd(x11);
    if (numeric_rank(s.sigma) < xi.n())
        throw SingularBlock11("factor_abc: block 11 singular");
    const Mat b = inverse(x11);
    ABCFormData d{xi.block21() * b, b, -1.0 * (b * xi.block12())};
    for (int i = 0; i < xi.n(); ++i)
        for (int j = i + 1; j < xi.n(); ++j) {
            d.a(i, j) = d.a(j, i) = 0.5 * (d.a(i, j) + d.a(j, i));
            d.c(i, j) = d.c(j, i) = 0.5 * (d.c(i, j) + d.c(j, i));
        }
    return d;
}

std::pair<FreeFormData, FreeFormData> factor_two_free(const SymplecticMatrix& xi) {
    const int n = xi.n();

    auto try_shift = [&](double t) -> bool {
        // Lambda_t = Lambda_{0,I,tI}; Xi Lambda_t^{-1} has block 12 = t Xi12 - Xi11
        Mat cand = t * xi.block12() - xi.block11();
        SvdResult s = svd(cand);
        return numeric_rank(s.sigma) == n && s.sigma.back() > 1e-6 * s.sigma.front();
    };

    double chosen = 0.0;
    bool found = false;
    for (int k = 1; k <= 8 && !found; ++k)
        for (double t : {static_cast<double>(k), static_cast<double>(-k)}) {
            if (try_shift(t)) {
                chosen = t;
                found = true;
                break;
            }
        }
    if (!found) {
        std::mt19937_64 rng(0x5ca1ab1eull);
        std::uniform_real_distribution<double> dist(-10.0, 10.0);
        for (int k = 0; k < 8 && !found; ++k) {
            const double t = dist(rng);
            if (try_shift(t)) {
                chosen = t;
                found = true;
            }
        }
    }
    if (!found) throw FactorizationFailure("factor_two_free: no admissible shift parameter found");

    FreeFormData second{Mat::zero(n, n), Mat::identity(n), chosen * Mat::identity(n)};
    const SymplecticMatrix lam_t = make_lambda_plq(second);
    Mat prod = xi.matrix() * symplectic_inverse(lam_t).matrix();
    const double scale = std::max(1.0, max_abs(prod) * max_abs(prod));
    const SymplecticMatrix rest(std::move(prod), 1e-8 * scale);
    FreeFormData first = factor_free(rest);
    return {first, second};
}

MuReport mu_of_symplectic(const SymplecticMatrix& xi) {
    MuReport r;
    SvdResult s = svd(xi.block12());
    r.singular_values = s.sigma;
    for (double v : s.sigma) r.trace_norm += v;
    r.mu = r.trace_norm / (4.0 * M_PI);
    return r;
}

}  // namespace mpk::symplectic
