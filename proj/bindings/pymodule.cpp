#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hyperkappa/kappa.hpp"

namespace py = pybind11;
namespace hk = hyperkappa;

namespace {

using ComplexRows = std::vector<std::vector<std::complex<double>>>;

ComplexRows to_rows(const hk::CMatrix& m) {
    ComplexRows rows(m.rows());
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        rows[r].resize(m.cols());
        for (Eigen::Index c = 0; c < m.cols(); ++c) rows[r][c] = m(r, c);
    }
    return rows;
}

hk::CMatrix from_rows(const ComplexRows& rows) {
    const auto r = static_cast<Eigen::Index>(rows.size());
    const auto c = r == 0 ? 0 : static_cast<Eigen::Index>(rows[0].size());
    hk::CMatrix m(r, c);
    for (Eigen::Index i = 0; i < r; ++i) {
        if (static_cast<Eigen::Index>(rows[i].size()) != c)
            throw hk::validation_error("matrix rows must have equal length");
        for (Eigen::Index j = 0; j < c; ++j) m(i, j) = rows[i][j];
    }
    return m;
}

std::vector<std::vector<long long>> to_int_rows(const hk::IMatrix& m) {
    std::vector<std::vector<long long>> rows(m.rows());
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        rows[r].resize(m.cols());
        for (Eigen::Index c = 0; c < m.cols(); ++c) rows[r][c] = m(r, c);
    }
    return rows;
}

hk::Characteristic make_char(const std::vector<int>& eps2, const std::vector<int>& eps_prime2) {
    if (eps2.size() != eps_prime2.size())
        throw hk::validation_error("characteristic halves must have equal length");
    hk::Characteristic ch = hk::Characteristic::zero(static_cast<int>(eps2.size()));
    for (size_t i = 0; i < eps2.size(); ++i) {
        ch.eps2[static_cast<int>(i)] = eps2[i];
        ch.eps_prime2[static_cast<int>(i)] = eps_prime2[i];
    }
    return ch;
}

py::dict periods_dict(const hk::Curve& curve, double tol, int threads) {
    const hk::PeriodSet p = hk::compute_periods(curve, tol, threads);
    py::dict out;
    out["two_omega"] = to_rows(p.two_omega);
    out["two_omega_prime"] = to_rows(p.two_omega_prime);
    out["two_eta"] = to_rows(p.two_eta);
    out["two_eta_prime"] = to_rows(p.two_eta_prime);
    out["tau"] = to_rows(p.tau);
    out["inv_two_omega"] = to_rows(p.inv_two_omega);
    out["legendre"] = p.legendre;
    return out;
}

py::dict kappa_dict(const hk::Curve& curve, double tol, std::uint64_t seed, int threads) {
    const hk::PeriodSet p = hk::compute_periods(curve, tol, threads);
    const hk::KappaResult direct = hk::kappa_direct(p);
    hk::LambdaMatrix lm;
    lm.coefficients = hk::lambda_table_exact(curve.genus(), seed, threads);
    lm.matrix = hk::lambda_from_coefficients(lm.coefficients, curve);
    const hk::KappaResult modular = hk::kappa_modular(curve, p, lm, tol, threads);
    py::dict out;
    out["kappa"] = to_rows(direct.kappa);
    out["kappa_modular"] = to_rows(modular.kappa);
    out["route_agreement"] = modular.residual_vs_direct;
    out["legendre"] = p.legendre;
    out["lambda_coefficients"] = to_int_rows(lm.coefficients);
    return out;
}

py::object kappa_single(const hk::Curve& curve, const std::vector<int>& i0, double tol) {
    const hk::PeriodSet p = hk::compute_periods(curve, tol);
    const hk::Partition part = hk::make_partition(curve.genus(), i0);
    const hk::KappaResult single = hk::kappa_single_characteristic(curve, p, part, tol);
    py::dict out;
    out["kappa"] = to_rows(single.kappa);
    out["vs_direct"] = single.residual_vs_direct;
    return out;
}

}  // namespace

PYBIND11_MODULE(_hyperkappa, m) {
    m.doc() = "Period matrices, theta constants and the kappa matrix of hyperelliptic curves";
    m.attr("__version__") = "0.1.0";

    py::register_exception<hk::validation_error>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<hk::numeric_error>(m, "NumericError", PyExc_ArithmeticError);

    py::class_<hk::Curve>(m, "Curve")
        .def_static("from_coefficients", &hk::Curve::from_coefficients, py::arg("coefficients"))
        .def_static("from_roots", &hk::Curve::from_roots, py::arg("roots"))
        .def_property_readonly("genus", &hk::Curve::genus)
        .def_property_readonly("coefficients", &hk::Curve::coefficients)
        .def_property_readonly("branch_points", &hk::Curve::branch_points)
        .def_property_readonly("monic", &hk::Curve::monic)
        .def("__repr__", [](const hk::Curve& c) {
            return "<hyperkappa.Curve genus=" + std::to_string(c.genus()) + ">";
        });

    m.def("polar", &hk::polar, py::arg("curve"), py::arg("x"), py::arg("z"),
          "Kleinian 2-polar F(x, z) with F(x, x) = 2 f(x)");
    m.def("baker_numerator", &hk::baker_numerator, py::arg("curve"), py::arg("j"), py::arg("x"));

    m.def("periods", &periods_dict, py::arg("curve"), py::arg("tol") = 1e-12,
          py::arg("threads") = 1,
          "Period matrices 2omega, 2omega', 2eta, 2eta', tau and the Legendre residual");

    m.def("kappa", &kappa_dict, py::arg("curve"), py::arg("tol") = 1e-12,
          py::arg("seed") = 12345, py::arg("threads") = 1,
          "kappa by the direct and the summed modular-form route, with their deviation");

    m.def("kappa_single", &kappa_single, py::arg("curve"), py::arg("i0"), py::arg("tol") = 1e-12,
          "kappa from a single branch-point partition I0 (1-based indices)");

    m.def(
        "lambda_table",
        [](int genus, std::uint64_t seed, int threads) {
            return to_int_rows(hk::lambda_table_exact(genus, seed, threads));
        },
        py::arg("genus"), py::arg("seed") = 12345, py::arg("threads") = 1,
        "Exact integer coefficient table of Lambda_g");

    m.def("antidiagonal_sum_coefficient", &hk::antidiagonal_sum_coefficient, py::arg("genus"),
          py::arg("k"));
    m.def("first_row_coefficient", &hk::first_row_coefficient, py::arg("genus"), py::arg("k"));
    m.def("first_row_sum", &hk::first_row_sum, py::arg("genus"));

    m.def(
        "theta",
        [](const std::vector<int>& eps2, const std::vector<int>& eps_prime2,
           const std::vector<std::complex<double>>& z, const ComplexRows& tau, double tol) {
            const hk::CMatrix tau_m = from_rows(tau);
            hk::CVector zv(static_cast<Eigen::Index>(z.size()));
            for (size_t i = 0; i < z.size(); ++i) zv[static_cast<Eigen::Index>(i)] = z[i];
            const hk::ThetaValue v = hk::theta(make_char(eps2, eps_prime2), zv, tau_m, tol);
            return py::make_tuple(v.value, v.est_error);
        },
        py::arg("eps2"), py::arg("eps_prime2"), py::arg("z"), py::arg("tau"),
        py::arg("tol") = 1e-12,
        "theta[eps](z; tau) with doubled half-integer characteristics; returns (value, est_error)");

    m.def(
        "nonsingular_even_count",
        [](const ComplexRows& tau, double tol) {
            return hk::enumerate_nonsingular_even(from_rows(tau), tol).size();
        },
        py::arg("tau"), py::arg("tol") = 1e-10);
}
