#pragma once

#include "mpk/linalg.hpp"

namespace mpk::symplectic {

/// sigma = [[0, I], [-I, 0]] of size 2n x 2n.
Mat standard_form(int n);

struct VerifyReport {
    bool ok = false;
    double residual = 0.0;  // ||M^T sigma M - sigma||_max
    double det = 0.0;
    double tol = 0.0;
};

VerifyReport is_symplectic(const Mat& m, double tol = 1e-9);

// Validated element of Sp(2n, R) with block access; upper-right is block 12.
class SymplecticMatrix {
  public:
    explicit SymplecticMatrix(Mat m, double tol = 1e-9);

    int n() const { return n_; }
    const Mat& matrix() const { return m_; }
    Mat block11() const { return m_.block(0, 0, n_, n_); }
    Mat block12() const { return m_.block(0, n_, n_, n_); }
    Mat block21() const { return m_.block(n_, 0, n_, n_); }
    Mat block22() const { return m_.block(n_, n_, n_, n_); }

  private:
    int n_ = 0;
    Mat m_;
};

// [[Xi22^T, -Xi12^T], [-Xi21^T, Xi11^T]]
SymplecticMatrix symplectic_inverse(const SymplecticMatrix& xi);

struct FreeFormData {
    Mat p, l, q;  // P, Q symmetric; L invertible
};

struct ABCFormData {
    Mat a, b, c;  // A, C symmetric; B invertible
};

void validate(const FreeFormData& d);
void validate(const ABCFormData& d);

// Lambda_{P,L,Q} = (L^{-1}Q, L^{-1}; P L^{-1} Q - L^T, P L^{-1})
SymplecticMatrix make_lambda_plq(const FreeFormData& d);

// Xi_{A,B,C} = (I,0;A,I)(B^{-1},0;0,B^T)(I,-C;0,I)
SymplecticMatrix make_xi_abc(const ABCFormData& d);

// Requires Xi12 invertible: L = Xi12^{-1}, P = Xi22 Xi12^{-1}, Q = Xi12^{-1} Xi11.
FreeFormData factor_free(const SymplecticMatrix& xi);

// Requires Xi11 invertible: B = Xi11^{-1}, C = -Xi11^{-1} Xi12, A = Xi21 Xi11^{-1}.
ABCFormData factor_abc(const SymplecticMatrix& xi);

// Splits any symplectic matrix into two free factors by scanning the shift
// family Lambda_{0,I,tI}; make_lambda_plq(first) * make_lambda_plq(second)
// reproduces the input.
std::pair<FreeFormData, FreeFormData> factor_two_free(const SymplecticMatrix& xi);

struct MuReport {
    double mu = 0.0;                 // (1/4pi) * S1 norm of block 12
    double trace_norm = 0.0;         // S1 norm of block 12
    std::vector<double> singular_values;
};

MuReport mu_of_symplectic(const SymplecticMatrix& xi);

}  // namespace mpk::symplectic
