#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mpk/gaussian.hpp"
#include "mpk/io.hpp"
#include "mpk/numerics.hpp"
#include "mpk/selftest.hpp"

namespace py = pybind11;
using namespace mpk;
namespace sy = mpk::symplectic;
namespace ga = mpk::gaussian;
namespace nu = mpk::numerics;

namespace {

Mat mat_from_array(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
    if (a.ndim() != 2) throw py::value_error("expected a 2-D array");
    Mat m(static_cast<int>(a.shape(0)), static_cast<int>(a.shape(1)));
    std::copy(a.data(), a.data() + a.size(), m.data().begin());
    return m;
}

py::array_t<double> mat_to_array(const Mat& m) {
    py::array_t<double> a({m.rows(), m.cols()});
    std::copy(m.data().begin(), m.data().end(), a.mutable_data());
    return a;
}

CMat cmat_from_array(const py::array_t<cplx, py::array::c_style | py::array::forcecast>& a) {
    if (a.ndim() != 2) throw py::value_error("expected a 2-D complex array");
    CMat m(static_cast<int>(a.shape(0)), static_cast<int>(a.shape(1)));
    std::copy(a.data(), a.data() + a.size(), m.data().begin());
    return m;
}

py::array_t<cplx> cmat_to_array(const CMat& m) {
    py::array_t<cplx> a({m.rows(), m.cols()});
    std::copy(m.data().begin(), m.data().end(), a.mutable_data());
    return a;
}

ga::GaussianState state_from(py::object c, const py::array_t<cplx, py::array::c_style | py::array::forcecast>& theta) {
    ga::GaussianState g;
    g.c = c.cast<cplx>();
    g.theta = cmat_from_array(theta);
    g.n = g.theta.rows();
    ga::validate(g);
    return g;
}

nu::GridFunction grid_from(const py::array_t<cplx, py::array::c_style | py::array::forcecast>& samples,
                           double half_width) {
    nu::GridFunction u;
    u.half_width = half_width;
    if (samples.ndim() == 1) {
        u.dim = 1;
        u.n_points = static_cast<int>(samples.shape(0));
    } else if (samples.ndim() == 2 && samples.shape(0) == samples.shape(1)) {
        u.dim = 2;
        u.n_points = static_cast<int>(samples.shape(0));
    } else {
        throw py::value_error("samples must be 1-D or square 2-D");
    }
    u.samples.assign(samples.data(), samples.data() + samples.size());
    nu::validate_shape(u);
    return u;
}

py::array_t<cplx> grid_to(const nu::GridFunction& u) {
    if (u.dim == 1) {
        py::array_t<cplx> a(u.n_points);
        std::copy(u.samples.begin(), u.samples.end(), a.mutable_data());
        return a;
    }
    py::array_t<cplx> a({u.n_points, u.n_points});
    std::copy(u.samples.begin(), u.samples.end(), a.mutable_data());
    return a;
}

}  // namespace

PYBIND11_MODULE(_mpk, m) {
    m.doc() = "metaplectic uncertainty constants: symplectic factorization, Gaussian "
              "propagation and grid oracles";

    py::register_exception<Error>(m, "MpkError");

    m.def(
        "is_symplectic",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& a, double tol) {
            const sy::VerifyReport r = sy::is_symplectic(mat_from_array(a), tol);
            py::dict d;
            d["ok"] = r.ok;
            d["residual"] = r.residual;
            d["det"] = r.det;
            return d;
        },
        py::arg("matrix"), py::arg("tol") = 1e-9);

    m.def(
        "mu_of_symplectic",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
            const sy::MuReport r = sy::mu_of_symplectic(sy::SymplecticMatrix(mat_from_array(a)));
            py::dict d;
            d["mu"] = r.mu;
            d["trace_norm"] = r.trace_norm;
            d["singular_values"] = r.singular_values;
            return d;
        },
        py::arg("matrix"));

    m.def("symplectic_form", [](int n) { return mat_to_array(sy::standard_form(n)); }, py::arg("n"));

    m.def(
        "factor_free",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
            const sy::FreeFormData d = sy::factor_free(sy::SymplecticMatrix(mat_from_array(a)));
            return py::make_tuple(mat_to_array(d.p), mat_to_array(d.l), mat_to_array(d.q));
        },
        py::arg("matrix"));

    m.def(
        "factor_abc",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
            const sy::ABCFormData d = sy::factor_abc(sy::SymplecticMatrix(mat_from_array(a)));
            return py::make_tuple(mat_to_array(d.a), mat_to_array(d.b), mat_to_array(d.c));
        },
        py::arg("matrix"));

    m.def(
        "factor_two_free",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
            const auto [f1, f2] = sy::factor_two_free(sy::SymplecticMatrix(mat_from_array(a)));
            return py::make_tuple(py::make_tuple(mat_to_array(f1.p), mat_to_array(f1.l), mat_to_array(f1.q)),
                                  py::make_tuple(mat_to_array(f2.p), mat_to_array(f2.l), mat_to_array(f2.q)));
        },
        py::arg("matrix"));

    m.def(
        "make_lambda_plq",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& p,
           const py::array_t<double, py::array::c_style | py::array::forcecast>& l,
           const py::array_t<double, py::array::c_style | py::array::forcecast>& q) {
            return mat_to_array(
                sy::make_lambda_plq({mat_from_array(p), mat_from_array(l), mat_from_array(q)}).matrix());
        },
        py::arg("P"), py::arg("L"), py::arg("Q"));

    m.def(
        "make_xi_abc",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& a,
           const py::array_t<double, py::array::c_style | py::array::forcecast>& b,
           const py::array_t<double, py::array::c_style | py::array::forcecast>& c) {
            return mat_to_array(
                sy::make_xi_abc({mat_from_array(a), mat_from_array(b), mat_from_array(c)}).matrix());
        },
        py::arg("A"), py::arg("B"), py::arg("C"));

    m.def(
        "schatten_norm",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& a, double p) {
            return schatten_norm(mat_from_array(a), p);
        },
        py::arg("matrix"), py::arg("p") = 1.0);

    m.def(
        "gaussian_variance",
        [](py::object c, const py::array_t<cplx, py::array::c_style | py::array::forcecast>& theta) {
            return ga::gaussian_variance(state_from(c, theta));
        },
        py::arg("c"), py::arg("theta"));

    m.def(
        "fourier_gaussian",
        [](py::object c, const py::array_t<cplx, py::array::c_style | py::array::forcecast>& theta) {
            const auto [amp, th] = ga::fourier_gaussian_raw(c.cast<cplx>(), cmat_from_array(theta));
            return py::make_tuple(amp, cmat_to_array(th));
        },
        py::arg("c"), py::arg("theta"));

    m.def(
        "apply_free_factor",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& p,
           const py::array_t<double, py::array::c_style | py::array::forcecast>& l,
           const py::array_t<double, py::array::c_style | py::array::forcecast>& q, int maslov,
           py::object c, const py::array_t<cplx, py::array::c_style | py::array::forcecast>& theta) {
            metaplectic::FreeFactor f{{mat_from_array(p), mat_from_array(l), mat_from_array(q)}, maslov};
            const ga::GaussianState out = ga::apply_free_factor(f, state_from(c, theta));
            return py::make_tuple(out.c, cmat_to_array(out.theta));
        },
        py::arg("P"), py::arg("L"), py::arg("Q"), py::arg("m"), py::arg("c"), py::arg("theta"));

    m.def(
        "optimizer_family",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& p,
           const py::array_t<double, py::array::c_style | py::array::forcecast>& l,
           const py::array_t<double, py::array::c_style | py::array::forcecast>& q, int maslov, double t) {
            metaplectic::FreeFactor f{{mat_from_array(p), mat_from_array(l), mat_from_array(q)}, maslov};
            const ga::OptimizerPoint pt = ga::optimizer_family(f, t);
            py::dict d;
            d["variance_product"] = pt.variance_product;
            d["limit"] = pt.limit;
            d["c"] = pt.state.c;
            d["theta"] = cmat_to_array(pt.state.theta);
            return d;
        },
        py::arg("P"), py::arg("L"), py::arg("Q"), py::arg("m"), py::arg("t"));

    m.def(
        "word_variance_product",
        [](const std::string& word_json, double t) {
            return ga::word_variance_product(io::parse_word(nlohmann::json::parse(word_json)), t);
        },
        py::arg("word_json"), py::arg("t"));

    m.def(
        "psi_word",
        [](const std::string& word_json) {
            return mat_to_array(io::parse_word(nlohmann::json::parse(word_json)).psi());
        },
        py::arg("word_json"));

    m.def(
        "canonical_phase",
        [](const std::string& word_json) {
            return metaplectic::canonical_phase(io::parse_word(nlohmann::json::parse(word_json)));
        },
        py::arg("word_json"));

    m.def(
        "grid_fourier",
        [](const py::array_t<cplx, py::array::c_style | py::array::forcecast>& samples, double half_width) {
            const nu::GridFunction out = nu::grid_fourier(grid_from(samples, half_width));
            return py::make_tuple(grid_to(out), out.half_width);
        },
        py::arg("samples"), py::arg("half_width"));

    m.def(
        "variance_grid",
        [](const py::array_t<cplx, py::array::c_style | py::array::forcecast>& samples, double half_width) {
            return nu::variance_grid(grid_from(samples, half_width));
        },
        py::arg("samples"), py::arg("half_width"));

    m.def(
        "sample_gaussian",
        [](py::object c, const py::array_t<cplx, py::array::c_style | py::array::forcecast>& theta,
           int n_points, double half_width) {
            return grid_to(nu::sample_gaussian(state_from(c, theta), n_points, half_width));
        },
        py::arg("c"), py::arg("theta"), py::arg("n_points"), py::arg("half_width"));

    m.def(
        "wigner_grid",
        [](const py::array_t<cplx, py::array::c_style | py::array::forcecast>& u,
           const py::array_t<cplx, py::array::c_style | py::array::forcecast>& v, double half_width) {
            const nu::WignerTable w = nu::wigner_grid(grid_from(u, half_width), grid_from(v, half_width));
            py::array_t<cplx> a({w.n_points, w.n_points});
            std::copy(w.values.begin(), w.values.end(), a.mutable_data());
            py::dict d;
            d["values"] = a;
            d["x_half_width"] = w.x_half_width;
            d["xi_half_width"] = w.xi_half_width;
            d["l2_norm"] = nu::wigner_l2_norm(w);
            return d;
        },
        py::arg("u"), py::arg("v"), py::arg("half_width"));

    m.def(
        "ground_energy",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& q, double constant,
           int truncation) {
            nu::QuadraticSymbol sym;
            sym.q = mat_from_array(q);
            sym.n = sym.q.rows() / 2;
            sym.constant = constant;
            const nu::GroundEnergy g = nu::ground_energy(nu::weyl_quadratic_hermite(sym, truncation));
            py::dict d;
            d["value"] = g.value;
            d["drift"] = g.drift;
            d["converged"] = g.converged;
            d["truncation"] = g.truncation;
            return d;
        },
        py::arg("Q"), py::arg("constant") = 0.0, py::arg("truncation") = 64);

    m.def(
        "selftest",
        [](const std::string& group, uint64_t seed) {
            const selftest::CriterionResult r = selftest::run_criterion(group, seed);
            py::dict d;
            d["name"] = r.name;
            d["pass"] = r.pass;
            d["runtime_sec"] = r.runtime_sec;
            d["details"] = r.details;
            return d;
        },
        py::arg("group"), py::arg("seed") = 20240817ull);

    m.def("selftest_groups", [] { return selftest::criterion_names(); });

    m.attr("__version__") = "1.0.0";
}
