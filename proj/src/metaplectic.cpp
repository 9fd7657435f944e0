#include "mpk/metaplectic.hpp"

#include <cmath>

#include "mpk/gaussian.hpp"

namespace mpk::metaplectic {

std::array<int, 2> maslov_set(const Mat& b) {
    const double d = det(b);
    if (std::abs(d) <= 1e-12) throw SingularInput("maslov_set: det B too small");
    return d > 0.0 ? std::array<int, 2>{0, 2} : std::array<int, 2>{1, 3};
}

bool maslov_compatible(const Mat& b, int m) {
    const auto set = maslov_set(b);
    const int mm = mod4(m);
    return mm == set[0] || mm == set[1];
}

MaslovTransforms maslov_transforms(const Mat& b, int m) {
    if (!maslov_compatible(b, m)) throw IncompatibleIndex("maslov_transforms: m not in m(B)");
    const int n = b.rows();
    return {mod4(m + n), mod4(m), mod4(m)};
}

void validate(const FreeFactor& f) {
    symplectic::validate(f.data);
    if (!maslov_compatible(f.data.l, f.m))
        throw IncompatibleIndex("FreeFactor: index " + std::to_string(f.m) + " not compatible with L");
}

FreeFactor free_inverse(const FreeFactor& f) {
    validate(f);
    FreeFactor inv{{-1.0 * f.data.q, -1.0 * f.data.l.transpose(), -1.0 * f.data.p}, mod4(f.n() - f.m)};
    validate(inv);  // n - m lands in m(-L^T)
    return inv;
}

int factor_dim(const Factor& f) {
    return std::visit(
        [](const auto& v) -> int {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, FreeFactor>)
                return v.n();
            else if constexpr (std::is_same_v<T, Chirp>)
                return v.a.rows();
            else if constexpr (std::is_same_v<T, Dilation>)
                return v.b.rows();
            else if constexpr (std::is_same_v<T, FreqChirp>)
                return v.c.rows();
            else
                return v.n;
        },
        f);
}

void validate(const Factor& f) {
    if (const auto* ff = std::get_if<FreeFactor>(&f)) {
        validate(*ff);
        return;
    }
    if (const auto* ch = std::get_if<Chirp>(&f)) {
        if (sym_residual(ch->a) > 1e-10 * std::max(1.0, max_abs(ch->a)))
            throw NotSymmetric("Chirp: A not symmetric");
        if (mod4(ch->m) % 2 != 0) throw IncompatibleIndex("Chirp: index must lie in {0,2}");
        return;
    }
    if (const auto* d = std::get_if<Dilation>(&f)) {
        if (!maslov_compatible(d->b, d->m)) throw IncompatibleIndex("Dilation: index not in m(B)");
        return;
    }
    if (const auto* fc = std::get_if<FreqChirp>(&f)) {
        if (sym_residual(fc->c) > 1e-10 * std::max(1.0, max_abs(fc->c)))
            throw NotSymmetric("FreqChirp: C not symmetric");
        if (mod4(fc->m) % 2 != 0) throw IncompatibleIndex("FreqChirp: index must lie in {0,2}");
        return;
    }
    if (std::get<NormalizedFourier>(f).n < 1) throw Error("NormalizedFourier: n must be >= 1");
}

Mat psi_factor(const Factor& f) {
    const int n = factor_dim(f);
    if (const auto* ff = std::get_if<FreeFactor>(&f)) return symplectic::make_lambda_plq(ff->data).matrix();
    if (const auto* ch = std::get_if<Chirp>(&f)) {
        Mat m = Mat::identity(2 * n);
        m.set_block(n, 0, ch->a);
        return m;
    }
    if (const auto* d = std::get_if<Dilation>(&f)) {
        Mat m(2 * n, 2 * n);
        m.set_block(0, 0, inverse(d->b));
        m.set_block(n, n, d->b.transpose());
        return m;
    }
    if (const auto* fc = std::get_if<FreqChirp>(&f)) {
        Mat m = Mat::identity(2 * n);
        m.set_block(0, n, -1.0 * fc->c);
        return m;
    }
    return symplectic::standard_form(n);
}

MetaplecticWord::MetaplecticWord(int n, std::vector<Factor> factors, cplx scalar_phase)
    : n_(n), factors_(std::move(factors)), scalar_phase_(scalar_phase) {
    if (n_ < 1) throw Error("MetaplecticWord: n must be >= 1");
    if (std::abs(std::abs(scalar_phase_) - 1.0) > 1e-9)
        throw Error("MetaplecticWord: scalar phase must be unimodular");
    for (const Factor& f : factors_) {
        validate(f);
        if (factor_dim(f) != n_) throw DimensionMismatch("MetaplecticWord: factor dimension mismatch");
    }
    cached_psi_ = Mat::identity(2 * n_);
    for (const Factor& f : factors_) cached_psi_ = cached_psi_ * psi_factor(f);

    gaussian::GaussianState g = gaussian::standard_gaussian(n_);
    for (auto it = factors_.rbegin(); it != factors_.rend(); ++it) g = gaussian::apply_elementary(*it, g);
    g.c *= scalar_phase_;
    const cplx z = gaussian::pair_states(g, gaussian::standard_gaussian(n_));
    if (std::abs(z) < 1e-12) throw DegeneratePairing("MetaplecticWord: Gaussian pairing degenerate");
    cached_phase_ = z / std::abs(z);
}

MetaplecticWord MetaplecticWord::operator*(const MetaplecticWord& rhs) const {
    if (n_ != rhs.n_) throw DimensionMismatch("word product: dimension mismatch");
    std::vector<Factor> fs = factors_;
    fs.insert(fs.end(), rhs.factors_.begin(), rhs.factors_.end());
    return MetaplecticWord(n_, std::move(fs), scalar_phase_ * rhs.scalar_phase_);
}

MetaplecticWord MetaplecticWord::inverse() const {
    std::vector<Factor> fs;
    for (auto it = factors_.rbegin(); it != factors_.rend(); ++it) {
        if (const auto* ff = std::get_if<FreeFactor>(&*it)) {
            fs.push_back(free_inverse(*ff));
        } else if (const auto* ch = std::get_if<Chirp>(&*it)) {
            fs.push_back(Chirp{-1.0 * ch->a, mod4(-ch->m)});
        } else if (const auto* d = std::get_if<Dilation>(&*it)) {
            fs.push_back(Dilation{mpk::inverse(d->b), mod4(-d->m)});
        } else if (const auto* fc = std::get_if<FreqChirp>(&*it)) {
            fs.push_back(FreqChirp{-1.0 * fc->c, mod4(-fc->m)});
        } else {
            // (e^{-i pi n/4} F)^{-1} = (e^{-i pi n/4} F) M_{0,-I,0}^{n}
            fs.push_back(*it);
            fs.push_back(Dilation{-1.0 * Mat::identity(n_), mod4(n_)});
        }
    }
    return MetaplecticWord(n_, std::move(fs), std::conj(scalar_phase_));
}

SymplecticMatrix psi_word(const MetaplecticWord& w) {
    const double scale = std::max(1.0, max_abs(w.psi()) * max_abs(w.psi()));
    return SymplecticMatrix(w.psi(), 1e-8 * scale);
}

cplx canonical_phase(const MetaplecticWord& w) { return w.phase(); }

MetaplecticWord compose_free_normal(const FreeFactor& f1, const FreeFactor& f2) {
    validate(f1);
    validate(f2);
    const int n = f1.n();
    if (n != f2.n()) throw DimensionMismatch("compose_free_normal: dimension mismatch");

    const Mat l2ti = inverse(f2.data.l.transpose());
    const Mat b = l2ti * f1.data.l;
    Mat c = l2ti * (f1.data.q + f2.data.p) * inverse(f2.data.l);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) c(i, j) = c(j, i) = 0.5 * (c(i, j) + c(j, i));

    std::vector<Factor> fs;
    fs.push_back(Chirp{f1.data.p, 0});
    fs.push_back(Dilation{-1.0 * Mat::identity(n), mod4(-n)});
    fs.push_back(Dilation{b, mod4(f1.m + f2.m)});
    fs.push_back(FreqChirp{c, 0});
    fs.push_back(Chirp{f2.data.q, 0});
    return MetaplecticWord(n, std::move(fs));
}

MetaplecticWord normalized_fourier_inverse(int n) {
    std::vector<Factor> fs{NormalizedFourier{n}, Dilation{-1.0 * Mat::identity(n), mod4(n)}};
    return MetaplecticWord(n, std::move(fs));
}

MetaplecticWord link_to_abc_word(const FreeFactor& f) {
    validate(f);
    const int n = f.n();
    std::vector<Factor> fs;
    fs.push_back(Chirp{f.data.p, 0});
    fs.push_back(Dilation{-1.0 * f.data.l, mod4(f.m - n)});
    fs.push_back(FreqChirp{f.data.q, 0});
    fs.push_back(NormalizedFourier{n});
    fs.push_back(Dilation{-1.0 * Mat::identity(n), mod4(n)});
    return MetaplecticWord(n, std::move(fs));
}

MetaplecticWord link_from_abc_word(const ABCFormData& d, int m) {
    symplectic::validate(d);
    const int n = d.b.rows();
    if (!maslov_compatible(d.b, m)) throw IncompatibleIndex("link_from_abc_word: m not in m(B)");
    FreeFactor ff{{d.a, -1.0 * d.b, d.c}, mod4(m + n)};
    std::vector<Factor> fs{Factor{ff}, Factor{NormalizedFourier{n}}};
    return MetaplecticWord(n, std::move(fs));
}

}  // namespace mpk::metaplectic
