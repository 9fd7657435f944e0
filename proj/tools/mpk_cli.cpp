// mpk: compute, factor and certify the uncertainty constant of metaplectic
// transformations; grid and Hermite oracles included.

#include <chrono>
#include <cstdio>
#include <string>

#include "CLI11.hpp"
#include "mpk/io.hpp"
#include "mpk/selftest.hpp"

using namespace mpk;
namespace io = mpk::io;
namespace sy = mpk::symplectic;
namespace ga = mpk::gaussian;
namespace nu = mpk::numerics;
using nlohmann::json;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitMathFailure = 1;
constexpr int kExitParseFailure = 2;

struct Report {
    json j;
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

    Report(const std::string& command, const std::string& input_path) {
        j["command"] = command;
        if (!input_path.empty()) {
            j["input"] = input_path;
            j["input_digest"] = io::fnv1a_digest(io::read_file(input_path));
        }
    }
    void finish(bool pass) {
        j["pass"] = pass;
        j["wall_time_sec"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
    void dump(const std::string& path) const {
        if (path.empty()) return;
        std::ofstream out(path);
        out << j.dump(2) << "\n";
    }
};

void print_kv(const char* key, const std::string& value) { std::printf("%-24s %s\n", key, value.c_str()); }
void print_num(const char* key, double v) { print_kv(key, io::format_sig(v)); }

std::vector<int> block_ranks(const sy::SymplecticMatrix& xi) {
    std::vector<int> r;
    for (const Mat& b : {xi.block11(), xi.block12(), xi.block21(), xi.block22()})
        r.push_back(numeric_rank(svd(b).sigma));
    return r;
}

int cmd_verify(const std::string& path, double tol, const std::string& json_out) {
    Report rep("verify", path);
    const Mat m = io::parse_matrix(io::load_json_file(path));
    const sy::VerifyReport v = sy::is_symplectic(m, tol);
    rep.j["residual"] = v.residual;
    rep.j["tolerance"] = tol;
    rep.j["det"] = v.det;
    print_num("symplectic residual", v.residual);
    print_num("tolerance", tol);
    print_num("det", v.det);
    if (v.ok) {
        const sy::SymplecticMatrix xi(m, tol);
        const std::vector<int> ranks = block_ranks(xi);
        std::string rs;
        for (size_t k = 0; k < ranks.size(); ++k) rs += (k ? "," : "") + std::to_string(ranks[k]);
        rep.j["block_ranks"] = ranks;
        print_kv("block ranks (11,12,21,22)", rs);
    }
    print_kv("verdict", v.ok ? "pass" : "fail");
    rep.finish(v.ok);
    rep.dump(json_out);
    return v.ok ? kExitPass : kExitMathFailure;
}

int cmd_mu(const std::string& path, const std::string& json_out) {
    Report rep("mu", path);
    const Mat m = io::parse_matrix(io::load_json_file(path));
    const sy::VerifyReport v = sy::is_symplectic(m, 1e-9);
    if (!v.ok) {
        std::printf("input is not symplectic (residual %s)\n", io::format_sig(v.residual).c_str());
        rep.finish(false);
        rep.dump(json_out);
        return kExitMathFailure;
    }
    const sy::MuReport mu = sy::mu_of_symplectic(sy::SymplecticMatrix(m));
    print_num("mu", mu.mu);
    print_num("trace norm 4*pi*mu", mu.trace_norm);
    std::string sv;
    for (size_t k = 0; k < mu.singular_values.size(); ++k)
        sv += (k ? ", " : "") + io::format_sig(mu.singular_values[k]);
    print_kv("singular values of 12", sv);
    rep.j["mu"] = mu.mu;
    rep.j["trace_norm"] = mu.trace_norm;
    rep.j["singular_values_12"] = mu.singular_values;
    rep.finish(true);
    rep.dump(json_out);
    return kExitPass;
}

int cmd_factor(const std::string& path, const std::string& form, const std::string& json_out) {
    Report rep("factor", path);
    const Mat m = io::parse_matrix(io::load_json_file(path));
    const sy::SymplecticMatrix xi(m);
    json out;
    double residual = 0.0;

    if (form == "free") {
        try {
            const sy::FreeFormData d = sy::factor_free(xi);
            residual = max_abs(sy::make_lambda_plq(d).matrix() - m);
            out["P"] = io::matrix_to_json(d.p);
            out["L"] = io::matrix_to_json(d.l);
            out["Q"] = io::matrix_to_json(d.q);
        } catch (const SingularBlock12&) {
            std::fprintf(stderr, "block 12 is singular; try --form two-free\n");
            throw;
        }
    } else if (form == "abc") {
        const sy::ABCFormData d = sy::factor_abc(xi);
        residual = max_abs(sy::make_xi_abc(d).matrix() - m);
        out["A"] = io::matrix_to_json(d.a);
        out["B"] = io::matrix_to_json(d.b);
        out["C"] = io::matrix_to_json(d.c);
    } else if (form == "two-free") {
        const auto [f1, f2] = sy::factor_two_free(xi);
        residual = max_abs(sy::make_lambda_plq(f1).matrix() * sy::make_lambda_plq(f2).matrix() - m);
        out["first"] = {{"P", io::matrix_to_json(f1.p)}, {"L", io::matrix_to_json(f1.l)}, {"Q", io::matrix_to_json(f1.q)}};
        out["second"] = {{"P", io::matrix_to_json(f2.p)}, {"L", io::matrix_to_json(f2.l)}, {"Q", io::matrix_to_json(f2.q)}};
    } else {
        throw io::ParseError("unknown factor form: " + form);
    }
    const double tol = form == "two-free" ? 1e-8 : 1e-9;
    rep.j["form"] = form;
    rep.j["factors"] = out;
    rep.j["round_trip_residual"] = residual;
    rep.j["tolerance"] = tol;
    std::printf("%s\n", out.dump(2).c_str());
    print_num("round-trip residual", residual);
    print_num("tolerance", tol);
    const bool ok = residual <= tol;
    print_kv("verdict", ok ? "pass" : "fail");
    rep.finish(ok);
    rep.dump(json_out);
    return ok ? kExitPass : kExitMathFailure;
}

int cmd_sweep(const std::string& path, const std::string& tgrid, const std::string& out_csv,
              const std::string& json_out) {
    Report rep("sweep", path);
    const metaplectic::MetaplecticWord w = io::parse_word(io::load_json_file(path));

    double a = 1.0, b = 1000.0;
    int steps = 16;
    if (std::sscanf(tgrid.c_str(), "%lf:%lf:%d", &a, &b, &steps) != 3 || a <= 0.0 || b <= a || steps < 2)
        throw io::ParseError("--t-grid expects a:b:steps with 0 < a < b, steps >= 2");

    const double limit = sy::mu_of_symplectic(metaplectic::psi_word(w)).mu;
    std::ofstream csv(out_csv);
    if (!csv) throw io::ParseError("cannot open " + out_csv);
    csv << "# mpk-csv/1\n";
    csv << "t,variance_product,limit,gap\n";
    double last_gap = 0.0;
    bool monotone = true;
    double prev_gap = 1e300;
    for (int k = 0; k < steps; ++k) {
        const double t = a * std::pow(b / a, static_cast<double>(k) / (steps - 1));
        const double prod = ga::word_variance_product(w, t);
        last_gap = std::sqrt(prod) - limit;
        if (last_gap > prev_gap + 1e-12) monotone = false;
        prev_gap = last_gap;
        csv << io::format_sig(t) << ',' << io::format_sig(prod) << ',' << io::format_sig(limit) << ','
            << io::format_sig(last_gap) << '\n';
    }
    print_num("limit mu", limit);
    print_num("final gap", last_gap);
    print_kv("gap monotone", monotone ? "yes" : "no");
    rep.j["limit"] = limit;
    rep.j["final_gap"] = last_gap;
    rep.j["monotone"] = monotone;
    rep.j["csv"] = out_csv;
    const bool ok = monotone && last_gap >= -1e-12;
    print_kv("verdict", ok ? "pass" : "fail");
    rep.finish(ok);
    rep.dump(json_out);
    return ok ? kExitPass : kExitMathFailure;
}

int cmd_wigner(const std::string& path, const std::string& grid, const std::string& out_path,
               const std::string& json_out) {
    Report rep("wigner", path);
    int npts = 1024;
    double hw = 8.0;
    if (std::sscanf(grid.c_str(), "%d,%lf", &npts, &hw) != 2)
        throw io::ParseError("--grid expects N,L");
    const nu::GridFunction u = io::sample_function_spec(io::load_json_file(path), npts, hw);
    const nu::WignerTable w = nu::wigner_grid(u, u);

    const double norm_w = nu::wigner_l2_norm(w);
    const double norm_u = std::sqrt(nu::grid_norm_sq(u));
    const double identity_residual = std::abs(norm_w - norm_u * norm_u);

    double peak = 0.0, minimum = 1e300;
    for (const cplx& z : w.values) {
        peak = std::max(peak, z.real());
        minimum = std::min(minimum, z.real());
    }
    if (!out_path.empty()) {
        if (out_path.size() > 4 && out_path.substr(out_path.size() - 4) == ".csv")
            io::write_wigner_csv(out_path, w);
        else
            io::write_complex_binary(out_path, 2, w.n_points, w.values);
        print_kv("dump", out_path);
    }
    print_num("peak value", peak);
    print_num("minimum value", minimum);
    print_num("norm identity residual", identity_residual);
    const bool ok = identity_residual <= 1e-8 * std::max(1.0, norm_u * norm_u);
    print_kv("norm identity", ok ? "pass" : "fail");
    rep.j["peak"] = peak;
    rep.j["minimum"] = minimum;
    rep.j["norm_identity_residual"] = identity_residual;
    rep.finish(ok);
    rep.dump(json_out);
    return ok ? kExitPass : kExitMathFailure;
}

int cmd_spectrum(const std::string& path, const std::string& basis, int truncation, bool strict,
                 const std::string& json_out) {
    Report rep("spectrum", path);
    if (basis != "hermite") throw io::ParseError("only --basis hermite is available");
    const nu::QuadraticSymbol q = io::parse_symbol(io::load_json_file(path));
    const nu::HermiteOperator op = nu::weyl_quadratic_hermite(q, truncation);
    if (strict) {
        const double value = nu::ground_energy_strict(op);
        print_num("ground energy", value);
        rep.j["ground_energy"] = value;
        rep.j["converged"] = true;
    } else {
        const nu::GroundEnergy g = nu::ground_energy(op);
        print_num("ground energy", g.value);
        print_num("drift to next truncation", g.drift);
        print_kv("certificate", g.converged ? "converged (drift <= 1e-8)"
                                            : "not converged; infimum likely not attained");
        rep.j["ground_energy"] = g.value;
        rep.j["drift"] = g.drift;
        rep.j["converged"] = g.converged;
    }
    rep.j["truncation"] = truncation;
    rep.finish(true);
    rep.dump(json_out);
    return kExitPass;
}

int cmd_selftest(const std::vector<std::string>& groups, uint64_t seed) {
    std::vector<std::string> run = groups;
    if (run.empty()) run = selftest::criterion_names();
    int failures = 0;
    for (const std::string& name : run) {
        const selftest::CriterionResult r = selftest::run_criterion(name, seed);
        std::printf("[%s] %-20s %6.2f s (budget %g s)\n", r.pass ? "PASS" : "FAIL", r.name.c_str(),
                    r.runtime_sec, r.budget_sec);
        for (const auto& d : r.details) std::printf("       %s\n", d.c_str());
        if (!r.pass) ++failures;
    }
    return failures == 0 ? kExitPass : kExitMathFailure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"uncertainty constants of metaplectic transformations"};
    app.require_subcommand(1);

    std::string in_path, json_out, form = "free", tgrid = "1:1000:16", out_path, grid = "1024,8";
    std::string basis = "hermite";
    double tol = 1e-9;
    int truncation = 64;
    bool strict = false;
    std::vector<std::string> groups;
    uint64_t seed = 20240817ull;

    auto* verify = app.add_subcommand("verify", "check the symplectic condition");
    verify->add_option("matrix", in_path)->required();
    verify->add_option("--tol", tol);
    verify->add_option("--json", json_out);

    auto* mu = app.add_subcommand("mu", "uncertainty constant of a symplectic matrix");
    mu->add_option("matrix", in_path)->required();
    mu->add_option("--json", json_out);

    auto* factor = app.add_subcommand("factor", "factor into free/abc/two-free forms");
    factor->add_option("matrix", in_path)->required();
    factor->add_option("--form", form)->check(CLI::IsMember({"free", "abc", "two-free"}));
    factor->add_option("--json", json_out);

    auto* sweep = app.add_subcommand("sweep", "variance-product sweep of the optimizer family");
    sweep->add_option("word", in_path)->required();
    sweep->add_option("--t-grid", tgrid);
    sweep->add_option("--out", out_path)->required();
    sweep->add_option("--json", json_out);

    auto* wigner = app.add_subcommand("wigner", "Wigner distribution dump and norm identity");
    wigner->add_option("function", in_path)->required();
    wigner->add_option("--grid", grid);
    wigner->add_option("--out", out_path);
    wigner->add_option("--json", json_out);

    auto* spectrum = app.add_subcommand("spectrum", "ground energy of a quadratic symbol");
    spectrum->add_option("symbol", in_path)->required();
    spectrum->add_option("--basis", basis);
    spectrum->add_option("--N", truncation);
    spectrum->add_flag("--strict", strict);
    spectrum->add_option("--json", json_out);

    auto* selftest_cmd = app.add_subcommand("selftest", "named acceptance criterion groups");
    selftest_cmd->add_option("--group", groups);
    selftest_cmd->add_option("--seed", seed);

    CLI11_PARSE(app, argc, argv);

    try {
        if (verify->parsed()) return cmd_verify(in_path, tol, json_out);
        if (mu->parsed()) return cmd_mu(in_path, json_out);
        if (factor->parsed()) return cmd_factor(in_path, form, json_out);
        if (sweep->parsed()) return cmd_sweep(in_path, tgrid, out_path, json_out);
        if (wigner->parsed()) return cmd_wigner(in_path, grid, out_path, json_out);
        if (spectrum->parsed()) return cmd_spectrum(in_path, basis, truncation, strict, json_out);
        if (selftest_cmd->parsed()) return cmd_selftest(groups, seed);
    } catch (const io::ParseError& e) {
        std::fprintf(stderr, "parse error: %s\n", e.what());
        return kExitParseFailure;
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitMathFailure;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitMathFailure;
    }
    return kExitParseFailure;
}
