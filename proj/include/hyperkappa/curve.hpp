#pragma once

#include <span>
#include <utility>
#include <vector>

#include "hyperkappa/types.hpp"

namespace hyperkappa {

/// Multipliers induced on downstream objects by f -> c*f.
struct ScalingReport {
    Complex factor;             // c
    Complex kappa_multiplier;   // c
    Complex eta_multiplier;     // principal sqrt(c)
    Complex omega_multiplier;   // 1 / sqrt(c)
};

/// A hyperelliptic curve y^2 = f(x), deg f = 2g+2 with distinct roots.
///
/// Coefficients are stored lowest-degree-first, so coefficients()[i] is the
/// weight attached to x^i. Branch points are kept sorted lexicographically
/// by (re, im) so that index-based bookkeeping (cycles, partitions,
/// characteristics) is deterministic.
class Curve {
  public:
    static Curve from_coefficients(const std::vector<Complex>& coeffs);
    static Curve from_roots(const std::vector<Complex>& roots);

    int genus() const { return genus_; }
    const std::vector<Complex>& coefficients() const { return coeffs_; }
    const std::vector<Complex>& branch_points() const { return roots_; }
    Complex leading() const { return coeffs_.back(); }
    bool monic() const;

    Complex f(Complex x) const;
    Complex f_derivative(Complex x) const;

    bool has_real_branch_points(double imag_tol = 1e-10) const;
    /// Branch points as sorted reals; throws validation_error when any is
    /// genuinely complex.
    std::vector<double> real_branch_points() const;

  private:
    Curve(int genus, std::vector<Complex> coeffs, std::vector<Complex> roots);
    void validate() const;

    int genus_;
    std::vector<Complex> coeffs_;  // lambda_0 .. lambda_{2g+2}
    std::vector<Complex> roots_;   // e_1 .. e_{2g+2}
};

/// Numerator polynomials of the 2g basis differentials: u_i = x^{i-1} dx / y
/// (holomorphic) and r_j = (Baker numerator) dx / (4y) (second kind). Each
/// polynomial is a lowest-degree-first coefficient list; the numerator of
/// r_j has degree <= 2g+1-j and lowest term of degree >= j.
struct DifferentialBasis {
    std::vector<std::vector<Complex>> holomorphic;
    std::vector<std::vector<Complex>> meromorphic;
};

DifferentialBasis differential_basis(const Curve& curve);

/// Kleinian 2-polar F(x,z); F(x,x) = 2 f(x).
Complex polar(const Curve& curve, Complex x, Complex z);

/// Numerator of the second-kind differential r_j (the 1/(4y) factor is the
/// differential convention, not part of the numerator). 1 <= j <= g.
Complex baker_numerator(const Curve& curve, int j, Complex x);

/// f -> c*f. Branch points are unchanged; the report carries the induced
/// multipliers for kappa, eta and omega.
std::pair<Curve, ScalingReport> rescale(const Curve& curve, Complex c);

/// Elementary symmetric function S_order of the values, S_0 = 1.
/// Incremental product expansion; works for any ring-like scalar.
template <typename T>
T elementary_symmetric(std::span<const T> values, int order) {
    if (order < 0 || static_cast<size_t>(order) > values.size())
        throw validation_error("elementary_symmetric: order out of range");
    std::vector<T> acc(static_cast<size_t>(order) + 1, T(0));
    acc[0] = T(1);
    size_t used = 0;
    for (const T& v : values) {
        ++used;
        size_t top = std::min(static_cast<size_t>(order), used);
        for (size_t k = top; k >= 1; --k) acc[k] = acc[k] + v * acc[k - 1];
    }
    return acc[static_cast<size_t>(order)];
}

template <typename T>
T elementary_symmetric(const std::vector<T>& values, int order) {
    return elementary_symmetric(std::span<const T>(values.data(), values.size()), order);
}

}  // namespace hyperkappa
