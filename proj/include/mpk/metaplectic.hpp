#pragma once

#include <array>
#include <variant>
#include <vector>

#include "mpk/symplectic.hpp"

namespace mpk::metaplectic {

using symplectic::ABCFormData;
using symplectic::FreeFormData;
using symplectic::SymplecticMatrix;

// Z4 index set compatible with an invertible B: {0,2} if det B > 0, {1,3} otherwise.
std::array<int, 2> maslov_set(const Mat& b);
bool maslov_compatible(const Mat& b, int m);
inline int mod4(int m) { return ((m % 4) + 4) % 4; }

inline cplx index_phase(int m) {  // e^{i pi m / 2}
    switch (mod4(m)) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, 1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, -1.0};
    }
}

struct MaslovTransforms {
    int negated;    // element of m(-B): m + n mod 4
    int transposed; // element of m(B^T): m
    int inverted;   // element of m(B^{-1}): m
};

MaslovTransforms maslov_transforms(const Mat& b, int m);

// Free metaplectic factor M_{P,L,Q}^{m}: imaginary-Gaussian kernel with
// prefactor e^{-i pi n/4} e^{i pi m/2} |det L|^{1/2}.
struct FreeFactor {
    FreeFormData data;
    int m = 0;

    int n() const { return data.l.rows(); }
};

void validate(const FreeFactor& f);

// (M_{P,L,Q}^{m})^{-1} = M_{-Q,-L^T,-P}^{n-m}
FreeFactor free_inverse(const FreeFactor& f);

// Elementary generators.
struct Chirp {               // multiplication by e^{i pi <Ax,x>}, index in {0,2}
    Mat a;
    int m = 0;
};
struct Dilation {            // v -> e^{i pi m/2} |det B|^{1/2} v(Bx), m in m(B)
    Mat b;
    int m = 0;
};
struct FreqChirp {           // Fourier multiplier e^{i pi <C xi, xi>}, index in {0,2}
    Mat c;
    int m = 0;
};
struct NormalizedFourier {   // e^{-i pi n/4} F
    int n = 1;
};

using Factor = std::variant<FreeFactor, Chirp, Dilation, FreqChirp, NormalizedFourier>;

int factor_dim(const Factor& f);
void validate(const Factor& f);

// Symplectic projection of a single factor.
Mat psi_factor(const Factor& f);

// Ordered product of unitary factors; factors.front() acts last.
class MetaplecticWord {
  public:
    MetaplecticWord(int n, std::vector<Factor> factors, cplx scalar_phase = cplx(1.0, 0.0));

    int n() const { return n_; }
    const std::vector<Factor>& factors() const { return factors_; }
    cplx scalar_phase() const { return scalar_phase_; }
    const Mat& psi() const { return cached_psi_; }
    cplx phase() const { return cached_phase_; }

    static MetaplecticWord empty(int n) { return MetaplecticWord(n, {}); }
    MetaplecticWord operator*(const MetaplecticWord& rhs) const;
    MetaplecticWord inverse() const;

  private:
    int n_ = 1;
    std::vector<Factor> factors_;
    cplx scalar_phase_{1.0, 0.0};
    Mat cached_psi_;
    cplx cached_phase_{1.0, 0.0};
};

SymplecticMatrix psi_word(const MetaplecticWord& w);

// Phase of the pairing <W g0, g0> against the standard Gaussian
// g0 = 2^{n/4} e^{-pi |x|^2}; separates W from -W on the double cover.
cplx canonical_phase(const MetaplecticWord& w);

// Normal form of a product of two free factors as five elementary factors
// Chirp(P1) Dilation(-I,-n) Dilation(B,m1+m2) FreqChirp(C) Chirp(Q2),
// with B = L2^{-T} L1 and C = L2^{-T} (Q1 + P2) L2^{-1}.
MetaplecticWord compose_free_normal(const FreeFactor& f1, const FreeFactor& f2);

// M_{P,L,Q}^{m} = M^{abc}_{P,-L,Q}^{m-n} (e^{-i pi n/4} F)^{-1}: the ABC-form
// side is returned as the word Chirp(P) Dilation(-L, m-n) FreqChirp(Q)
// followed by the inverse normalized Fourier.
MetaplecticWord link_to_abc_word(const FreeFactor& f);

// Inverse direction: the ABC data (A,B,C,m) as the word of a single free
// factor M_{A,-B,C}^{m+n} times the normalized Fourier.
MetaplecticWord link_from_abc_word(const ABCFormData& d, int m);

// Word for the inverse of the normalized Fourier: (e^{-i pi n/4} F)^{-1}
// = (e^{-i pi n/4} F) Dilation(-I, n).
MetaplecticWord normalized_fourier_inverse(int n);

}  // namespace mpk::metaplectic
