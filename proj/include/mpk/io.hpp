#pragma once

#include <string>

#include "json.hpp"
#include "mpk/numerics.hpp"

namespace mpk::io {

using nlohmann::json;

struct ParseError : Error {
    using Error::Error;
};

json load_json_file(const std::string& path);

// {"n": int, "matrix": [[...]]} or {"n": int, "blocks": {"11":.., "12":.., "21":.., "22":..}}
Mat parse_matrix(const json& j);
json matrix_to_json(const Mat& m);

// {"n": int, "factors": [{"kind": "free"|"chirp"|"dilation"|"freqchirp"|"fourier", ...}],
//  "scalar_phase": [re, im]}
metaplectic::MetaplecticWord parse_word(const json& j);
json word_to_json(const metaplectic::MetaplecticWord& w);

// {"c": [re, im], "theta": [[[re,im], ...], ...]}
gaussian::GaussianState parse_gaussian(const json& j);
json gaussian_to_json(const gaussian::GaussianState& g);

// Function specs for grid sampling:
//   {"kind": "gaussian", "c": [re,im], "theta": ...}
//   {"kind": "hermite", "coeffs": [[re,im], ...]}            (1-D)
//   {"kind": "hermite2d", "coeffs": [[[re,im], ...], ...]}   (2-D)
numerics::GridFunction sample_function_spec(const json& j, int n_points, double half_width);

// Quadratic symbols: {"n": int, "Q": [[...]], "constant": c} or presets
//   {"preset": "hcw", "c": .., "omega": ..}   ->  (omega x)^2 + (c xi + x)^2
//   {"preset": "harmonic"}                    ->  x^2 + xi^2
numerics::QuadraticSymbol parse_symbol(const json& j);

// Binary dump: 16-byte header (magic "MPKG", u32 rank, u32 per-axis N,
// u32 reserved), little-endian float64 interleaved complex pairs, row-major.
void write_complex_binary(const std::string& path, int rank, int n_per_axis, const std::vector<cplx>& data);
std::vector<cplx> read_complex_binary(const std::string& path, int& rank, int& n_per_axis);

// CSV with versioned header "mpk-csv/1"; columns x[,y],re,im.
void write_grid_csv(const std::string& path, const numerics::GridFunction& u);
void write_wigner_csv(const std::string& path, const numerics::WignerTable& w);

std::string fnv1a_digest(const std::string& bytes);
std::string read_file(const std::string& path);

std::string format_sig(double v);  // 12 significant digits

}  // namespace mpk::io
