#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <fstream>

#include "mpk/io.hpp"

using namespace mpk;
namespace io = mpk::io;
using nlohmann::json;

TEST_CASE("matrix json: full and block forms") {
    const json full = json::parse(R"({"n": 1, "matrix": [[0, 1], [-1, 0]]})");
    const Mat m = io::parse_matrix(full);
    CHECK(max_abs(m - symplectic::standard_form(1)) <= 1e-15);

    const json blocks = json::parse(R"({"n": 1, "blocks": {"11": [[0]], "12": [[1]], "21": [[-1]], "22": [[0]]}})");
    CHECK(max_abs(io::parse_matrix(blocks) - symplectic::standard_form(1)) <= 1e-15);

    CHECK_THROWS_AS(io::parse_matrix(json::parse(R"({"n": 2, "matrix": [[1, 0], [0, 1]]})")), io::ParseError);
    CHECK_THROWS_AS(io::parse_matrix(json::parse(R"({"n": 1})")), io::ParseError);
    CHECK_THROWS_AS(io::parse_matrix(json::parse(R"({"n": 1, "matrix": [[1, "x"], [0, 1]]})")), io::ParseError);
}

TEST_CASE("word json round trip") {
    const json j = json::parse(R"({
        "n": 1,
        "factors": [
            {"kind": "free", "P": [[0.5]], "L": [[1.5]], "Q": [[-0.25]], "m": 0},
            {"kind": "chirp", "A": [[0.75]], "m": 2},
            {"kind": "dilation", "B": [[-2.0]], "m": 1},
            {"kind": "freqchirp", "C": [[0.3]], "m": 0},
            {"kind": "fourier"}
        ],
        "scalar_phase": [0.0, 1.0]
    })");
    const metaplectic::MetaplecticWord w = io::parse_word(j);
    CHECK(w.factors().size() == 5);
    CHECK(std::abs(w.scalar_phase() - cplx(0.0, 1.0)) <= 1e-15);

    const metaplectic::MetaplecticWord back = io::parse_word(io::word_to_json(w));
    CHECK(max_abs(back.psi() - w.psi()) <= 1e-14);
    CHECK(std::abs(back.phase() - w.phase()) <= 1e-12);

    CHECK_THROWS_AS(io::parse_word(json::parse(R"({"n": 1, "factors": [{"kind": "nope"}]})")), io::ParseError);
    // incompatible Maslov index is a math error, not a parse error
    CHECK_THROWS_AS(io::parse_word(json::parse(
                        R"({"n": 1, "factors": [{"kind": "dilation", "B": [[2.0]], "m": 1}]})")),
                    IncompatibleIndex);
}

TEST_CASE("gaussian json round trip") {
    const json j = json::parse(R"({"c": [1.0, 0.5], "theta": [[[0.25, 2.0]]]})");
    const gaussian::GaussianState g = io::parse_gaussian(j);
    CHECK(g.n == 1);
    CHECK(std::abs(g.c - cplx(1.0, 0.5)) <= 1e-15);
    const gaussian::GaussianState back = io::parse_gaussian(io::gaussian_to_json(g));
    CHECK(std::abs(back.theta(0, 0) - g.theta(0, 0)) <= 1e-15);
}

TEST_CASE("function specs sample onto grids") {
    const json gj = json::parse(R"({"kind": "gaussian", "c": [1.189207115002721, 0.0],
                                    "theta": [[[0.0, 1.0]]]})");
    const numerics::GridFunction u = io::sample_function_spec(gj, 256, 8.0);
    CHECK(numerics::grid_norm_sq(u) == doctest::Approx(1.0).epsilon(1e-10));

    const json hj = json::parse(R"({"kind": "hermite", "coeffs": [[1.0, 0.0], [0.0, 1.0]]})");
    const numerics::GridFunction h = io::sample_function_spec(hj, 256, 8.0);
    CHECK(numerics::grid_norm_sq(h) == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("symbol json with presets") {
    const numerics::QuadraticSymbol hcw = io::parse_symbol(json::parse(R"({"preset": "hcw", "c": 2.0, "omega": 3.0})"));
    CHECK(hcw.q(0, 0) == doctest::Approx(10.0));
    CHECK(hcw.q(0, 1) == doctest::Approx(2.0));
    CHECK(hcw.q(1, 1) == doctest::Approx(4.0));

    const numerics::QuadraticSymbol harm = io::parse_symbol(json::parse(R"({"preset": "harmonic"})"));
    CHECK(max_abs(harm.q - Mat::identity(2)) <= 1e-15);

    const numerics::QuadraticSymbol raw =
        io::parse_symbol(json::parse(R"({"n": 1, "Q": [[1.0, 0.0], [0.0, 2.0]], "constant": 0.5})"));
    CHECK(raw.constant == doctest::Approx(0.5));

    CHECK_THROWS_AS(io::parse_symbol(json::parse(R"({"preset": "unknown"})")), io::ParseError);
}

TEST_CASE("binary dump round trip matches the 16-byte header layout") {
    const std::string path = "/tmp/mpk_test_dump.bin";
    std::vector<cplx> data(16);
    for (int k = 0; k < 16; ++k) data[k] = cplx(k, -k);
    io::write_complex_binary(path, 1, 16, data);

    std::ifstream in(path, std::ios::binary);
    std::string header(16, '\0');
    in.read(header.data(), 16);
    CHECK(header.substr(0, 4) == "MPKG");
    in.close();

    int rank = 0, n = 0;
    const std::vector<cplx> back = io::read_complex_binary(path, rank, n);
    CHECK(rank == 1);
    CHECK(n == 16);
    REQUIRE(back.size() == 16);
    for (int k = 0; k < 16; ++k) CHECK(back[k] == data[k]);
    std::remove(path.c_str());
}

TEST_CASE("csv dumps carry the version header") {
    const std::string path = "/tmp/mpk_test_dump.csv";
    numerics::GridFunction u = numerics::make_grid(1, 16, 2.0);
    for (int k = 0; k < 16; ++k) u.samples[k] = cplx(k, 0.5);
    io::write_grid_csv(path, u);
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    CHECK(line == "# mpk-csv/1");
    std::getline(in, line);
    CHECK(line == "x,re,im");
    std::remove(path.c_str());
}

TEST_CASE("digest and formatting") {
    CHECK(io::fnv1a_digest("") == "cbf29ce484222325");
    CHECK(io::fnv1a_digest("a") != io::fnv1a_digest("b"));
    CHECK(io::format_sig(1.0 / (4.0 * M_PI)) == "0.0795774715459");
}
