#include "hyperkappa/curve.hpp"

#include <algorithm>
#include <cmath>

namespace hyperkappa {

namespace {

bool lex_less(const Complex& a, const Complex& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
}

Complex horner(const std::vector<Complex>& c, Complex x) {
    Complex v = 0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * x + *it;
    return v;
}

std::vector<Complex> derivative_coeffs(const std::vector<Complex>& c) {
    std::vector<Complex> d;
    d.reserve(c.size() - 1);
    for (size_t i = 1; i < c.size(); ++i) d.push_back(double(i) * c[i]);
    return d;
}

// Companion-matrix roots followed by a few Newton steps.
std::vector<Complex> polynomial_roots(const std::vector<Complex>& coeffs) {
    const int n = static_cast<int>(coeffs.size()) - 1;
    CMatrix companion = CMatrix::Zero(n, n);
    for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
    for (int i = 0; i < n; ++i) companion(i, n - 1) = -coeffs[i] / coeffs[n];
    Eigen::ComplexEigenSolver<CMatrix> solver(companion, false);
    if (solver.info() != Eigen::Success)
        throw numeric_error("root finding: eigenvalue iteration failed");

    std::vector<Complex> roots(solver.eigenvalues().data(), solver.eigenvalues().data() + n);
    const auto deriv = derivative_coeffs(coeffs);
    for (Complex& r : roots) {
        for (int it = 0; it < 40; ++it) {
            Complex fv = horner(coeffs, r);
            Complex dv = horner(deriv, r);
            if (std::abs(dv) == 0.0) break;
            Complex step = fv / dv;
            r -= step;
            if (std::abs(step) < 1e-16 * (1.0 + std::abs(r))) break;
        }
        // A real axis snap keeps conjugate-pair jitter out of sorted order.
        if (std::abs(r.imag()) < 1e-13 * (1.0 + std::abs(r.real()))) r = Complex(r.real(), 0.0);
    }
    std::sort(roots.begin(), roots.end(), lex_less);
    return roots;
}

}  // namespace

Curve::Curve(int genus, std::vector<Complex> coeffs, std::vector<Complex> roots)
    : genus_(genus), coeffs_(std::move(coeffs)), roots_(std::move(roots)) {
    std::sort(roots_.begin(), roots_.end(), lex_less);
    validate();
}

void Curve::validate() const {
    const size_t n = 2 * static_cast<size_t>(genus_) + 2;
    if (genus_ < 1) throw validation_error("curve: genus must be >= 1");
    if (coeffs_.size() != n + 1) throw validation_error("curve: coefficient list length mismatch");
    if (roots_.size() != n) throw validation_error("curve: branch point list length mismatch");
    if (std::abs(coeffs_.back()) == 0.0)
        throw validation_error("curve: leading coefficient must be nonzero");

    double max_e = 0.0;
    for (const Complex& e : roots_) max_e = std::max(max_e, std::abs(e));
    const double sep_tol = 1e-9 * std::max(1.0, max_e);
    for (size_t i = 0; i < roots_.size(); ++i)
        for (size_t j = i + 1; j < roots_.size(); ++j)
            if (std::abs(roots_[i] - roots_[j]) <= sep_tol)
                throw validation_error("curve: repeated or nearly coincident branch points (singular curve)");

    // Coefficients and branch points must describe the same polynomial:
    // compare prod(x - e_m) with f(x)/lambda_{2g+2} at 2g+3 sample points on
    // a circle enclosing every root.
    const double radius = 1.5 * max_e + 1.0;
    for (size_t s = 0; s < coeffs_.size(); ++s) {
        const double angle = 2.0 * M_PI * (double(s) + 0.37) / double(coeffs_.size());
        const Complex x = radius * Complex(std::cos(angle), std::sin(angle));
        Complex prod = 1.0;
        double scale = 1.0;
        for (const Complex& e : roots_) {
            prod *= (x - e);
            scale *= std::abs(x) + std::abs(e);
        }
        const Complex fx = f(x) / coeffs_.back();
        if (std::abs(prod - fx) > 1e-12 * std::max(scale, 1.0))
            throw validation_error("curve: coefficients inconsistent with branch points");
    }
}

Curve Curve::from_coefficients(const std::vector<Complex>& coeffs) {
    if (coeffs.size() < 5 || coeffs.size() % 2 == 0)
        throw validation_error("curve: need an odd number >= 5 of coefficients (degree 2g+2, g >= 1)");
    if (std::abs(coeffs.back()) == 0.0)
        throw validation_error("curve: leading coefficient must be nonzero");
    const int genus = (static_cast<int>(coeffs.size()) - 3) / 2;
    auto roots = polynomial_roots(coeffs);

    // Polish target: |f(e)| < 1e-12 * max|lambda| * max(1, |e|)^{2g+2}.
    std::vector<Complex> work = coeffs;
    double max_l = 0.0;
    for (const Complex& l : coeffs) max_l = std::max(max_l, std::abs(l));
    for (const Complex& r : roots) {
        const double bound =
            1e-12 * max_l * std::pow(std::max(1.0, std::abs(r)), double(coeffs.size() - 1));
        Complex fv = 0;
        for (auto it = work.rbegin(); it != work.rend(); ++it) fv = fv * r + *it;
        if (std::abs(fv) > bound)
            throw numeric_error("curve: root polish did not reach the residual target");
    }
    return Curve(genus, coeffs, std::move(roots));
}

Curve Curve::from_roots(const std::vector<Complex>& roots) {
    if (roots.size() < 4 || roots.size() % 2 != 0)
        throw validation_error("curve: need an even number >= 4 of roots (degree 2g+2, g >= 1)");
    const int genus = (static_cast<int>(roots.size()) - 2) / 2;
    // Vieta: monic expansion of prod (x - e_m).
    std::vector<Complex> coeffs{1.0};
    for (const Complex& e : roots) {
        coeffs.push_back(0.0);
        for (size_t k = coeffs.size() - 1; k >= 1; --k)
            coeffs[k] = coeffs[k - 1] - e * coeffs[k];
        coeffs[0] = -e * coeffs[0];
    }
    return Curve(genus, std::move(coeffs), roots);
}

bool Curve::monic() const {
    return std::abs(coeffs_.back() - Complex(1.0)) < 1e-14;
}

Complex Curve::f(Complex x) const { return horner(coeffs_, x); }

Complex Curve::f_derivative(Complex x) const {
    Complex v = 0;
    for (size_t i = coeffs_.size() - 1; i >= 1; --i) v = v * x + double(i) * coeffs_[i];
    return v;
}

bool Curve::has_real_branch_points(double imag_tol) const {
    for (const Complex& e : roots_)
        if (std::abs(e.imag()) > imag_tol * (1.0 + std::abs(e.real()))) return false;
    return true;
}

std::vector<double> Curve::real_branch_points() const {
    if (!has_real_branch_points())
        throw validation_error("curve: real branch points required for this operation");
    std::vector<double> pts;
    pts.reserve(roots_.size());
    for (const Complex& e : roots_) pts.push_back(e.real());
    std::sort(pts.begin(), pts.end());
    return pts;
}

DifferentialBasis differential_basis(const Curve& curve) {
    const int g = curve.genus();
    const auto& l = curve.coefficients();
    DifferentialBasis basis;
    basis.holomorphic.reserve(g);
    basis.meromorphic.reserve(g);
    for (int i = 1; i <= g; ++i) {
        std::vector<Complex> mono(i, Complex(0.0));
        mono.back() = 1.0;  // x^{i-1}
        basis.holomorphic.push_back(std::move(mono));
    }
    for (int j = 1; j <= g; ++j) {
        std::vector<Complex> numer(2 * g + 2 - j, Complex(0.0));
        for (int k = j; k <= 2 * g + 1 - j; ++k) numer[k] = double(k + 1 - j) * l[k + 1 + j];
        basis.meromorphic.push_back(std::move(numer));
    }
    return basis;
}

Complex polar(const Curve& curve, Complex x, Complex z) {
    const auto& l = curve.coefficients();
    const int g = curve.genus();
    Complex sum = 2.0 * l[2 * g + 2] * std::pow(z, g + 1) * std::pow(x, g + 1);
    Complex xz_pow = 1.0;
    for (int k = 0; k <= g; ++k) {
        sum += xz_pow * (2.0 * l[2 * k] + (x + z) * l[2 * k + 1]);
        xz_pow *= x * z;
    }
    return sum;
}

Complex baker_numerator(const Curve& curve, int j, Complex x) {
    const int g = curve.genus();
    if (j < 1 || j > g) throw validation_error("baker_numerator: index j out of range 1..g");
    const auto& l = curve.coefficients();
    Complex sum = 0.0;
    Complex xk = std::pow(x, j);
    for (int k = j; k <= 2 * g + 1 - j; ++k) {
        sum += double(k + 1 - j) * l[k + 1 + j] * xk;
        xk *= x;
    }
    return sum;
}

std::pair<Curve, ScalingReport> rescale(const Curve& curve, Complex c) {
    if (std::abs(c) == 0.0) throw validation_error("rescale: factor must be nonzero");
    std::vector<Complex> coeffs = curve.coefficients();
    for (Complex& l : coeffs) l *= c;
    const Complex sqrt_c = std::sqrt(c);
    ScalingReport report{c, c, sqrt_c, 1.0 / sqrt_c};
    return {Curve::from_coefficients(coeffs), report};
}

}  // namespace hyperkappa
