#include "hyperkappa/theta.hpp"

#include <algorithm>
#include <cmath>

namespace hyperkappa {

namespace {

constexpr long long kLatticeCap = 10'000'000;

struct Lattice {
    RMatrix upper;     // U with Im(tau) = U^T U
    double min_eig;    // smallest eigenvalue of Im(tau)
};

Lattice prepare_lattice(const CMatrix& tau) {
    if (symmetry_defect(tau) > 1e-8 * std::max(1.0, max_abs(tau)))
        throw validation_error("theta: tau must be symmetric");
    RMatrix y = 0.5 * (tau.imag() + tau.imag().transpose());
    Eigen::SelfAdjointEigenSolver<RMatrix> eig(y);
    if (eig.eigenvalues().minCoeff() <= 0.0)
        throw validation_error("theta: Im tau must be positive definite");
    Eigen::LLT<RMatrix> llt(y);
    if (llt.info() != Eigen::Success)
        throw validation_error("theta: Im tau must be positive definite");
    return {RMatrix(llt.matrixU()), eig.eigenvalues().minCoeff()};
}

// Truncation radius from the Gaussian tail: points beyond radius R
// contribute at most about (2R+3)^g (2 pi R)^order exp(-pi l_min R^2).
double truncation_radius(int g, double min_eig, double tol, int deriv_order) {
    double r = 2.0;
    for (int it = 0; it < 40; ++it) {
        double need = std::log(1.0 / tol) + g * std::log(2.0 * r + 3.0) +
                      deriv_order * std::log(2.0 * M_PI * r + 1.0) + 4.0;
        double next = std::sqrt(need / (M_PI * min_eig));
        if (std::abs(next - r) < 1e-9) { r = next; break; }
        r = next;
    }
    return r;
}

double tail_bound(int g, double min_eig, double r, int deriv_order) {
    return std::pow(2.0 * r + 3.0, g) * std::pow(2.0 * M_PI * r + 1.0, deriv_order) *
           std::exp(-M_PI * min_eig * r * r);
}

// Neumaier-compensated complex accumulator.
struct CompensatedSum {
    long double re = 0, re_c = 0, im = 0, im_c = 0;
    void add(const Complex& v) {
        auto acc = [](long double& s, long double& c, long double x) {
            long double t = s + x;
            if (std::abs(s) >= std::abs(x)) c += (s - t) + x;
            else c += (x - t) + s;
            s = t;
        };
        acc(re, re_c, v.real());
        acc(im, im_c, v.imag());
    }
    Complex get() const { return {double(re + re_c), double(im + im_c)}; }
};

// Enumerate n in Z^g with (n + off + center)^T Y (n + off + center) <= R^2
// (Fincke-Pohst on the Cholesky factor) and call visit(n + off) per point.
template <typename Visitor>
void enumerate_ellipsoid(const Lattice& lat, const RVector& off, const RVector& center,
                         double radius, Visitor&& visit) {
    const int g = static_cast<int>(off.size());
    const RMatrix& u = lat.upper;
    RVector m = RVector::Zero(g);  // n + off, filled from the last coordinate down
    long long count = 0;

    auto recurse = [&](auto&& self, int level, double budget) -> void {
        if (level < 0) {
            if (++count > kLatticeCap)
                throw numeric_error("theta: lattice enumeration exceeded the point cap");
            visit(m);
            return;
        }
        double s = 0.0;
        for (int j = level + 1; j < g; ++j) s += u(level, j) * (m[j] + center[j]);
        const double diag = u(level, level);
        const double half_width = std::sqrt(std::max(budget, 0.0)) / diag;
        const double c = -s / diag - center[level] - off[level];  // center in n_level
        const long lo = std::lround(std::ceil(c - half_width - 1e-12));
        const long hi = std::lround(std::floor(c + half_width + 1e-12));
        for (long n = lo; n <= hi; ++n) {
            m[level] = double(n) + off[level];
            const double axis = diag * (m[level] + center[level]) + s;
            const double used = axis * axis;
            if (used <= budget + 1e-12) self(self, level - 1, budget - used);
        }
    };
    recurse(recurse, g - 1, radius * radius);
}

Complex quad_form(const CMatrix& tau, const RVector& m) {
    Complex q = 0.0;
    const int g = static_cast<int>(m.size());
    for (int i = 0; i < g; ++i)
        for (int j = 0; j < g; ++j) q += m[i] * tau(i, j) * m[j];
    return q;
}

}  // namespace

ThetaValue theta(const Characteristic& ch, const CVector& z, const CMatrix& tau, double tol) {
    const int g = static_cast<int>(tau.rows());
    if (ch.g() != g || (z.size() != 0 && z.size() != g))
        throw validation_error("theta: dimension mismatch");
    const CVector zz = z.size() == 0 ? CVector::Zero(g) : z;

    if (!ch.is_even() && zz.isZero(0.0))
        return {Complex(0.0, 0.0), 0.0, 0.0};  // exact: terms cancel in pairs

    const Lattice lat = prepare_lattice(tau);
    const RVector eps = ch.eps2.cast<double>() * 0.5;
    const RVector eps_prime = ch.eps_prime2.cast<double>() * 0.5;

    // |term| = exp(-pi (m + c)^T Y (m + c) + pi c^T Y c), c = Y^{-1} Im z.
    RMatrix y = 0.5 * (tau.imag() + tau.imag().transpose());
    const RVector imz = zz.imag();
    const RVector center = imz.isZero(0.0) ? RVector::Zero(g) : RVector(y.ldlt().solve(imz));

    const double radius = truncation_radius(g, lat.min_eig, tol, 0);
    CompensatedSum sum;
    enumerate_ellipsoid(lat, eps, center, radius, [&](const RVector& m) {
        Complex lin = 0.0;
        for (int i = 0; i < g; ++i) lin += m[i] * (zz[i] + eps_prime[i]);
        sum.add(std::exp(Complex(0.0, M_PI) * quad_form(tau, m) +
                         Complex(0.0, 2.0 * M_PI) * lin));
    });
    const double scale = std::exp(M_PI * center.dot(y * center));
    return {sum.get(), radius, scale * tail_bound(g, lat.min_eig, radius, 0)};
}

CMatrix theta_hessian_at_zero(const Characteristic& ch, const CMatrix& tau, double tol) {
    if (!ch.is_even())
        throw validation_error("theta_hessian_at_zero: characteristic must be even");
    const int g = static_cast<int>(tau.rows());
    if (ch.g() != g) throw validation_error("theta_hessian_at_zero: dimension mismatch");

    const Lattice lat = prepare_lattice(tau);
    const RVector eps = ch.eps2.cast<double>() * 0.5;
    const RVector eps_prime = ch.eps_prime2.cast<double>() * 0.5;

    const double radius = truncation_radius(g, lat.min_eig, tol, 2);
    std::vector<CompensatedSum> acc(static_cast<size_t>(g) * g);
    enumerate_ellipsoid(lat, eps, RVector::Zero(g), radius, [&](const RVector& m) {
        Complex lin = 0.0;
        for (int i = 0; i < g; ++i) lin += m[i] * eps_prime[i];
        const Complex term = std::exp(Complex(0.0, M_PI) * quad_form(tau, m) +
                                      Complex(0.0, 2.0 * M_PI) * lin);
        for (int i = 0; i < g; ++i)
            for (int j = i; j < g; ++j)
                acc[size_t(i) * g + j].add(-4.0 * M_PI * M_PI * m[i] * m[j] * term);
    });
    CMatrix h(g, g);
    for (int i = 0; i < g; ++i)
        for (int j = i; j < g; ++j) {
            h(i, j) = acc[size_t(i) * g + j].get();
            h(j, i) = h(i, j);
        }
    return h;
}

CMatrix directional_hessian(const Characteristic& ch, const PeriodSet& periods, double tol) {
    const CMatrix h = theta_hessian_at_zero(ch, periods.tau, tol);
    const CMatrix& w = periods.inv_two_omega;
    return w.transpose() * h * w;
}

std::vector<Characteristic> all_even_characteristics(int g) {
    std::vector<Characteristic> out;
    for (unsigned a = 0; a < (1u << g); ++a)
        for (unsigned b = 0; b < (1u << g); ++b) {
            Characteristic ch = Characteristic::zero(g);
            for (int i = 0; i < g; ++i) {
                ch.eps2[i] = int((a >> (g - 1 - i)) & 1u);
                ch.eps_prime2[i] = int((b >> (g - 1 - i)) & 1u);
            }
            if (ch.is_even()) out.push_back(std::move(ch));
        }
    return out;
}

std::vector<Characteristic> enumerate_nonsingular_even(const CMatrix& tau, double tol,
                                                       int expected_count) {
    auto evens = all_even_characteristics(static_cast<int>(tau.rows()));
    std::vector<double> mags(evens.size());
    double max_mag = 0.0;
    for (size_t i = 0; i < evens.size(); ++i) {
        mags[i] = std::abs(theta(evens[i], CVector(), tau, tol).value);
        max_mag = std::max(max_mag, mags[i]);
    }
    std::vector<Characteristic> out;
    for (size_t i = 0; i < evens.size(); ++i)
        if (mags[i] > 1e-6 * max_mag) out.push_back(evens[i]);
    std::sort(out.begin(), out.end(),
              [](const Characteristic& a, const Characteristic& b) { return a.key() < b.key(); });
    if (expected_count >= 0 && static_cast<int>(out.size()) != expected_count)
        throw numeric_error("non-singular even census mismatch: found " +
                            std::to_string(out.size()) + ", expected " +
                            std::to_string(expected_count));
    return out;
}

std::pair<Characteristic, double> characteristic_from_vector(const PeriodSet& periods,
                                                             const CVector& v) {
    const int g = periods.genus();
    RMatrix system(2 * g, 2 * g);
    system.topLeftCorner(g, g) = periods.two_omega.real();
    system.topRightCorner(g, g) = periods.two_omega_prime.real();
    system.bottomLeftCorner(g, g) = periods.two_omega.imag();
    system.bottomRightCorner(g, g) = periods.two_omega_prime.imag();
    RVector rhs(2 * g);
    rhs.head(g) = v.real();
    rhs.tail(g) = v.imag();
    const RVector sol = system.partialPivLu().solve(rhs);

    // The solved pair is (a, b) with v = (2 omega) a + (2 omega') b, i.e. a
    // normalized point a + tau b. The theta series shifts the lattice by its
    // TOP row, which pairs with the tau direction, so the characteristic is
    // [b; a].
    Characteristic ch = Characteristic::zero(g);
    double residual = 0.0;
    for (int i = 0; i < 2 * g; ++i) {
        const double doubled = 2.0 * sol[i];
        const long rounded = std::lround(doubled);
        residual = std::max(residual, std::abs(doubled - double(rounded)) / 2.0);
        const int bit = int(((rounded % 2) + 2) % 2);
        (i < g ? ch.eps_prime2[i] : ch.eps2[i - g]) = bit;
    }
    return {ch, residual};
}

AbelDictionary abel_dictionary(const Curve& curve, const PeriodSet& periods, int base_index,
                               double tol) {
    const std::vector<double> pts = curve.real_branch_points();
    const int g = curve.genus();
    const int n = 2 * g + 2;
    if (base_index < 0) base_index = n;
    if (base_index < 1 || base_index > n)
        throw validation_error("abel_dictionary: base index out of range");

    // Integrals of the holomorphic basis over every interval, then prefix
    // sums along the real axis on the upper-branch sheet.
    std::vector<CVector> prefix(n);  // prefix[j] = integral from e_1 to e_{j+1}
    prefix[0] = CVector::Zero(g);
    for (int m = 1; m < n; ++m)
        prefix[m] = prefix[m - 1] + holomorphic_interval_integrals(curve, pts, m - 1, tol);

    AbelDictionary dict;
    dict.base_index = base_index;
    dict.abel.assign(n + 1, CVector::Zero(g));
    dict.chars.assign(n + 1, Characteristic::zero(g));
    dict.residuals.assign(n + 1, 0.0);
    dict.riemann_constants = CVector::Zero(g);

    for (int j = 1; j <= n; ++j) {
        dict.abel[j] = prefix[j - 1] - prefix[base_index - 1];
        auto [ch, res] = characteristic_from_vector(periods, dict.abel[j]);
        if (res > 1e-6)
            throw numeric_error("abel_dictionary: branch image does not round to the half lattice");
        dict.chars[j] = ch;
        dict.residuals[j] = res;
        if (!ch.is_even()) dict.riemann_constants += dict.abel[j];
    }
    return dict;
}

Characteristic branch_characteristic(const Curve& curve, const PeriodSet& periods, int j,
                                     int base_index) {
    if (j < 1 || j > 2 * curve.genus() + 2)
        throw validation_error("branch_characteristic: index out of range");
    const auto dict = abel_dictionary(curve, periods, base_index, periods.quad_tol);
    return dict.chars[j];
}

CVector riemann_constants(const Curve& curve, const PeriodSet& periods) {
    return abel_dictionary(curve, periods, -1, periods.quad_tol).riemann_constants;
}

Characteristic partition_characteristic(const PeriodSet& periods, const AbelDictionary& dict,
                                        const Partition& partition, double nonsingular_floor) {
    const int g = periods.genus();
    if (partition.genus() != g)
        throw validation_error("partition_characteristic: partition size mismatch");

    CVector v = dict.riemann_constants;
    for (int idx : partition.i0) v += dict.abel[idx];
    auto [ch, res] = characteristic_from_vector(periods, v);
    if (res > 1e-6)
        throw numeric_error("partition_characteristic: image does not round to the half lattice");
    if (!ch.is_even())
        throw numeric_error("partition_characteristic: expected an even characteristic");
    if (std::abs(theta(ch, CVector(), periods.tau, 1e-10).value) <= nonsingular_floor)
        throw numeric_error("partition_characteristic: theta constant vanishes (singular)");
    return ch;
}

Characteristic partition_characteristic(const Curve& curve, const PeriodSet& periods,
                                        const Partition& partition) {
    const auto dict = abel_dictionary(curve, periods, -1, periods.quad_tol);
    double max_mag = 0.0;
    for (const auto& e : all_even_characteristics(curve.genus()))
        max_mag = std::max(max_mag, std::abs(theta(e, CVector(), periods.tau, 1e-10).value));
    return partition_characteristic(periods, dict, partition, 1e-6 * max_mag);
}

}  // namespace hyperkappa
