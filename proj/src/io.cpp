#include "mpk/io.hpp"

#include <cinttypes>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace mpk::io {

using metaplectic::Chirp;
using metaplectic::Dilation;
using metaplectic::Factor;
using metaplectic::FreeFactor;
using metaplectic::FreqChirp;
using metaplectic::MetaplecticWord;
using metaplectic::NormalizedFourier;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json load_json_file(const std::string& path) {
    const std::string text = read_file(path);
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw ParseError("invalid JSON in " + path);
    return j;
}

namespace {

Mat parse_dense(const json& rows, const std::string& what) {
    if (!rows.is_array() || rows.empty()) throw ParseError(what + ": expected a non-empty array of rows");
    const int r = static_cast<int>(rows.size());
    const int c = static_cast<int>(rows[0].size());
    Mat m(r, c);
    for (int i = 0; i < r; ++i) {
        if (static_cast<int>(rows[i].size()) != c) throw ParseError(what + ": ragged rows");
        for (int j = 0; j < c; ++j) {
            if (!rows[i][j].is_number()) throw ParseError(what + ": non-numeric entry");
            m(i, j) = rows[i][j].get<double>();
        }
    }
    return m;
}

cplx parse_cplx(const json& j, const std::string& what) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw ParseError(what + ": expected [re, im]");
    return {j[0].get<double>(), j[1].get<double>()};
}

json cplx_to_json(cplx z) { return json::array({z.real(), z.imag()}); }

}  // namespace

Mat parse_matrix(const json& j) {
    if (!j.is_object() || !j.contains("n")) throw ParseError("matrix: missing \"n\"");
    const int n = j.at("n").get<int>();
    if (n < 1) throw ParseError("matrix: n must be >= 1");
    if (j.contains("matrix")) {
        Mat m = parse_dense(j.at("matrix"), "matrix");
        if (m.rows() != 2 * n || m.cols() != 2 * n) throw ParseError("matrix: expected 2n x 2n entries");
        return m;
    }
    if (j.contains("blocks")) {
        const json& b = j.at("blocks");
        Mat m(2 * n, 2 * n);
        const char* names[4] = {"11", "12", "21", "22"};
        const int at[4][2] = {{0, 0}, {0, 1}, {1, 0}, {1, 1}};
        for (int k = 0; k < 4; ++k) {
            if (!b.contains(names[k])) throw ParseError(std::string("matrix: missing block ") + names[k]);
            Mat blk = parse_dense(b.at(names[k]), std::string("block ") + names[k]);
            if (blk.rows() != n || blk.cols() != n) throw ParseError("matrix: blocks must be n x n");
            m.set_block(at[k][0] * n, at[k][1] * n, blk);
        }
        return m;
    }
    throw ParseError("matrix: need \"matrix\" or \"blocks\"");
}

json matrix_to_json(const Mat& m) {
    json rows = json::array();
    for (int i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(row);
    }
    return rows;
}

MetaplecticWord parse_word(const json& j) {
    if (!j.is_object() || !j.contains("n")) throw ParseError("word: missing \"n\"");
    const int n = j.at("n").get<int>();
    cplx phase(1.0, 0.0);
    if (j.contains("scalar_phase")) phase = parse_cplx(j.at("scalar_phase"), "scalar_phase");
    std::vector<Factor> fs;
    for (const json& fj : j.value("factors", json::array())) {
        const std::string kind = fj.value("kind", "");
        const int m = fj.value("m", 0);
        if (kind == "free") {
            FreeFactor f{{parse_dense(fj.at("P"), "P"), parse_dense(fj.at("L"), "L"),
                          parse_dense(fj.at("Q"), "Q")},
                         m};
            fs.emplace_back(f);
        } else if (kind == "chirp") {
            fs.emplace_back(Chirp{parse_dense(fj.at("A"), "A"), m});
        } else if (kind == "dilation") {
            fs.emplace_back(Dilation{parse_dense(fj.at("B"), "B"), m});
        } else if (kind == "freqchirp") {
            fs.emplace_back(FreqChirp{parse_dense(fj.at("C"), "C"), m});
        } else if (kind == "fourier") {
            fs.emplace_back(NormalizedFourier{n});
        } else {
            throw ParseError("word: unknown factor kind \"" + kind + "\"");
        }
    }
    return MetaplecticWord(n, std::move(fs), phase);
}

json word_to_json(const MetaplecticWord& w) {
    json j;
    j["n"] = w.n();
    j["scalar_phase"] = cplx_to_json(w.scalar_phase());
    json fs = json::array();
    for (const Factor& f : w.factors()) {
        json fj;
        if (const auto* ff = std::get_if<FreeFactor>(&f)) {
            fj["kind"] = "free";
            fj["P"] = matrix_to_json(ff->data.p);
            fj["L"] = matrix_to_json(ff->data.l);
            fj["Q"] = matrix_to_json(ff->data.q);
            fj["m"] = ff->m;
        } else if (const auto* ch = std::get_if<Chirp>(&f)) {
            fj["kind"] = "chirp";
            fj["A"] = matrix_to_json(ch->a);
            fj["m"] = ch->m;
        } else if (const auto* d = std::get_if<Dilation>(&f)) {
            fj["kind"] = "dilation";
            fj["B"] = matrix_to_json(d->b);
            fj["m"] = d->m;
        } else if (const auto* fc = std::get_if<FreqChirp>(&f)) {
            fj["kind"] = "freqchirp";
            fj["C"] = matrix_to_json(fc->c);
            fj["m"] = fc->m;
        } else {
            fj["kind"] = "fourier";
        }
        fs.push_back(fj);
    }
    j["factors"] = fs;
    return j;
}

gaussian::GaussianState parse_gaussian(const json& j) {
    if (!j.is_object() || !j.contains("c") || !j.contains("theta"))
        throw ParseError("gaussian: need \"c\" and \"theta\"");
    gaussian::GaussianState g;
    g.c = parse_cplx(j.at("c"), "c");
    const json& rows = j.at("theta");
    const int n = static_cast<int>(rows.size());
    g.n = n;
    g.theta = CMat(n, n);
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(rows[i].size()) != n) throw ParseError("gaussian: theta must be square");
        for (int k = 0; k < n; ++k) g.theta(i, k) = parse_cplx(rows[i][k], "theta entry");
    }
    gaussian::validate(g);
    return g;
}

json gaussian_to_json(const gaussian::GaussianState& g) {
    json j;
    j["c"] = cplx_to_json(g.c);
    json rows = json::array();
    for (int i = 0; i < g.n; ++i) {
        json row = json::array();
        for (int k = 0; k < g.n; ++k) row.push_back(cplx_to_json(g.theta(i, k)));
        rows.push_back(row);
    }
    j["theta"] = rows;
    return j;
}

numerics::GridFunction sample_function_spec(const json& j, int n_points, double half_width) {
    const std::string kind = j.value("kind", "");
    if (kind == "gaussian") return numerics::sample_gaussian(parse_gaussian(j), n_points, half_width);
    if (kind == "hermite") {
        std::vector<cplx> coeffs;
        for (const json& cj : j.at("coeffs")) coeffs.push_back(parse_cplx(cj, "coeff"));
        return numerics::sample_hermite_combination(coeffs, n_points, half_width);
    }
    if (kind == "hermite2d") {
        std::vector<std::vector<cplx>> coeffs;
        for (const json& row : j.at("coeffs")) {
            std::vector<cplx> r;
            for (const json& cj : row) r.push_back(parse_cplx(cj, "coeff"));
            coeffs.push_back(std::move(r));
        }
        return numerics::sample_hermite_combination_2d(coeffs, n_points, half_width);
    }
    throw ParseError("function spec: unknown kind \"" + kind + "\"");
}

numerics::QuadraticSymbol parse_symbol(const json& j) {
    numerics::QuadraticSymbol q;
    if (j.contains("preset")) {
        const std::string p = j.at("preset").get<std::string>();
        if (p == "hcw") {
            const double c = j.value("c", 1.0), omega = j.value("omega", 1.0);
            q.n = 1;
            q.q = Mat(2, 2);
            q.q(0, 0) = omega * omega + 1.0;
            q.q(0, 1) = q.q(1, 0) = c;
            q.q(1, 1) = c * c;
            return q;
        }
        if (p == "harmonic") {
            q.n = 1;
            q.q = Mat::identity(2);
            return q;
        }
        throw ParseError("symbol: unknown preset \"" + p + "\"");
    }
    if (!j.contains("n") || !j.contains("Q")) throw ParseError("symbol: need \"n\" and \"Q\"");
    q.n = j.at("n").get<int>();
    q.q = parse_dense(j.at("Q"), "Q");
    q.constant = j.value("constant", 0.0);
    numerics::validate(q);
    return q;
}

void write_complex_binary(const std::string& path, int rank, int n_per_axis, const std::vector<cplx>& data) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot open for writing: " + path);
    const char magic[4] = {'M', 'P', 'K', 'G'};
    const uint32_t r = static_cast<uint32_t>(rank), n = static_cast<uint32_t>(n_per_axis), pad = 0;
    out.write(magic, 4);
    out.write(reinterpret_cast<const char*>(&r), 4);
    out.write(reinterpret_cast<const char*>(&n), 4);
    out.write(reinterpret_cast<const char*>(&pad), 4);
    for (const cplx& z : data) {
        const double re = z.real(), im = z.imag();
        out.write(reinterpret_cast<const char*>(&re), 8);
        out.write(reinterpret_cast<const char*>(&im), 8);
    }
}

std::vector<cplx> read_complex_binary(const std::string& path, int& rank, int& n_per_axis) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open: " + path);
    char magic[4];
    uint32_t r = 0, n = 0, pad = 0;
    in.read(magic, 4);
    in.read(reinterpret_cast<char*>(&r), 4);
    in.read(reinterpret_cast<char*>(&n), 4);
    in.read(reinterpret_cast<char*>(&pad), 4);
    if (!in || std::memcmp(magic, "MPKG", 4) != 0) throw ParseError("bad MPKG header in " + path);
    rank = static_cast<int>(r);
    n_per_axis = static_cast<int>(n);
    size_t count = 1;
    for (int k = 0; k < rank; ++k) count *= n_per_axis;
    std::vector<cplx> data(count);
    for (cplx& z : data) {
        double re = 0.0, im = 0.0;
        in.read(reinterpret_cast<char*>(&re), 8);
        in.read(reinterpret_cast<char*>(&im), 8);
        z = {re, im};
    }
    if (!in) throw ParseError("truncated MPKG payload in " + path);
    return data;
}

std::string format_sig(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

void write_grid_csv(const std::string& path, const numerics::GridFunction& u) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open for writing: " + path);
    out << "# mpk-csv/1\n";
    if (u.dim == 1) {
        out << "x,re,im\n";
        for (int k = 0; k < u.n_points; ++k)
            out << format_sig(u.coord(k)) << ',' << format_sig(u.samples[k].real()) << ','
                << format_sig(u.samples[k].imag()) << '\n';
        return;
    }
    out << "x,y,re,im\n";
    for (int i = 0; i < u.n_points; ++i)
        for (int j = 0; j < u.n_points; ++j) {
            const cplx z = u.samples[static_cast<size_t>(i) * u.n_points + j];
            out << format_sig(u.coord(i)) << ',' << format_sig(u.coord(j)) << ',' << format_sig(z.real())
                << ',' << format_sig(z.imag()) << '\n';
        }
}

void write_wigner_csv(const std::string& path, const numerics::WignerTable& w) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open for writing: " + path);
    out << "# mpk-csv/1\n";
    out << "x,y,re,im\n";
    for (int i = 0; i < w.n_points; ++i)
        for (int j = 0; j < w.n_points; ++j) {
            const cplx z = w.at(i, j);
            const double x = -w.x_half_width + i * w.x_spacing();
            const double xi = -w.xi_half_width + j * w.xi_spacing();
            out << format_sig(x) << ',' << format_sig(xi) << ',' << format_sig(z.real()) << ','
                << format_sig(z.imag()) << '\n';
        }
}

std::string fnv1a_digest(const std::string& bytes) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016" PRIx64, h);
    return buf;
}

}  // namespace mpk::io
