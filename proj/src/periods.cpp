#include "hyperkappa/periods.hpp"

#include <cmath>

#include "hyperkappa/parallel.hpp"

namespace hyperkappa {

namespace {

// Sign of the a-cycle loops (clockwise around the cuts) and of the b-cycle
// corridors (rightward on the upper sheet). With these choices the pairing
// comes out a_i o b_j = +delta_ij and Im tau is positive definite.
constexpr double kACoeff = 2.0;
constexpr double kBCoeff = 2.0;
// The generalized Legendre relation with constant +i pi/2 requires the
// second-kind period matrices to be the negated raw cycle integrals.
constexpr double kEtaSign = -1.0;

// sqrt on the boundary of the upper half-plane: principal for t >= 0,
// i*sqrt|t| for t < 0.
inline Complex sqrt_upper(double t) {
    return t >= 0.0 ? Complex(std::sqrt(t), 0.0) : Complex(0.0, std::sqrt(-t));
}

constexpr int kMinNodes = 16;
constexpr int kMaxNodes = 4096;

}  // namespace

CVector interval_integrals(const Curve& curve, const std::vector<double>& pts, int interval,
                           const std::vector<std::function<Complex(Complex)>>& numerators,
                           double tol) {
    const int n_pts = static_cast<int>(pts.size());
    if (interval < 0 || interval + 1 >= n_pts)
        throw validation_error("interval_integrals: interval index out of range");
    const double a = pts[interval], b = pts[interval + 1];
    const double mid = 0.5 * (a + b), h = 0.5 * (b - a);
    const Complex lead_root = std::sqrt(curve.leading());
    const int n_fn = static_cast<int>(numerators.size());

    // x = mid + h cos(theta) absorbs both endpoint square-root
    // singularities: with y = i h sin(theta) R(x) on this interval the
    // integrand of int phi/y dx reduces to phi(x)/(i R(x)) d(theta), an
    // analytic periodic function of theta. Midpoint nodes in theta give
    // spectral convergence.
    auto reduced = [&](double theta, CVector& out) {
        const double x = mid + h * std::cos(theta);
        Complex rest = lead_root;
        for (int m = 0; m < n_pts; ++m) {
            if (m == interval || m == interval + 1) continue;
            rest *= sqrt_upper(x - pts[m]);
        }
        const Complex w = 1.0 / (Complex(0.0, 1.0) * rest);
        for (int f = 0; f < n_fn; ++f) out[f] = numerators[f](Complex(x, 0.0)) * w;
    };

    CVector prev = CVector::Zero(n_fn);
    CVector node = CVector::Zero(n_fn);
    double err = 0.0;
    for (int n = kMinNodes; n <= kMaxNodes; n *= 2) {
        CVector sum = CVector::Zero(n_fn);
        const double step = M_PI / n;
        for (int t = 0; t < n; ++t) {
            reduced((t + 0.5) * step, node);
            sum += node;
        }
        sum *= step;
        if (n > kMinNodes) {
            err = (sum - prev).cwiseAbs().maxCoeff();
            const double scale = std::max(1.0, sum.cwiseAbs().maxCoeff());
            if (err < tol * scale) return sum;
        }
        prev = sum;
    }
    throw numeric_error("interval quadrature did not converge at the node cap (achieved error " +
                        std::to_string(err) + ")");
}

CVector holomorphic_interval_integrals(const Curve& curve, const std::vector<double>& pts,
                                       int interval, double tol) {
    const int g = curve.genus();
    std::vector<std::function<Complex(Complex)>> fns;
    fns.reserve(g);
    for (int i = 0; i < g; ++i)
        fns.emplace_back([i](Complex x) { return i == 0 ? Complex(1.0) : std::pow(x, i); });
    return interval_integrals(curve, pts, interval, fns, tol);
}

CycleSpec cycle_basis(const Curve& curve) {
    const std::vector<double> pts = curve.real_branch_points();
    const int g = curve.genus();
    CycleSpec spec;
    spec.points = pts;

    double min_gap = pts[1] - pts[0];
    for (size_t i = 1; i + 1 < pts.size(); ++i) min_gap = std::min(min_gap, pts[i + 1] - pts[i]);
    const double margin = 0.3 * min_gap;
    const double rect_h = 1.0;

    // a_k: clockwise rectangle around cut k on face 0.
    for (int k = 1; k <= g; ++k) {
        CycleSpec::Cycle cyc;
        cyc.terms.push_back({2 * (k - 1), kACoeff});
        const double l = pts[2 * k - 2] - margin, r = pts[2 * k - 1] + margin;
        cyc.polyline = {
            {0, {l, rect_h}}, {0, {r, rect_h}}, {0, {r, -rect_h}}, {0, {l, -rect_h}}, {0, {l, rect_h}}};
        spec.a_cycles.push_back(std::move(cyc));
    }

    // b_k: through cut k (at its midpoint) and the last cut; rightward
    // corridor above the axis on face 0, return below the axis on face 1.
    // Only the gap integrals survive: the cut portions of the two legs
    // cancel (opposite branch values on the two banks).
    const double last_l = pts[2 * g], last_r = pts[2 * g + 1];
    for (int k = 1; k <= g; ++k) {
        CycleSpec::Cycle cyc;
        for (int j = k; j <= g; ++j) cyc.terms.push_back({2 * j - 1, kBCoeff});
        const double p = 0.5 * (pts[2 * k - 2] + pts[2 * k - 1]);
        const double t = last_l + (last_r - last_l) * double(k) / double(2 * g + 2);
        const double height = 2.0 + k;
        cyc.polyline = {{0, {p, 0.0}}, {0, {p, height}},  {0, {t, height}},  {0, {t, 0.0}},
                        {1, {t, 0.0}}, {1, {t, -height}}, {1, {p, -height}}, {1, {p, 0.0}},
                        {0, {p, 0.0}}};
        spec.b_cycles.push_back(std::move(cyc));
    }

    Eigen::MatrixXi pairing = spec.pairing();
    Eigen::MatrixXi canonical = Eigen::MatrixXi::Zero(2 * g, 2 * g);
    for (int k = 0; k < g; ++k) {
        canonical(k, g + k) = 1;
        canonical(g + k, k) = -1;
    }
    if (pairing != canonical)
        throw numeric_error("cycle_basis: constructed pairing is not canonical");
    return spec;
}

namespace {

// Signed count of proper crossings between two polylines on the same face.
int signed_crossings(const std::vector<std::pair<int, Eigen::Vector2d>>& p,
                     const std::vector<std::pair<int, Eigen::Vector2d>>& q) {
    auto cross2 = [](const Eigen::Vector2d& u, const Eigen::Vector2d& v) {
        return u.x() * v.y() - u.y() * v.x();
    };
    int total = 0;
    for (size_t i = 0; i + 1 < p.size(); ++i) {
        if (p[i].first != p[i + 1].first) continue;  // sheet passage, not a segment
        const Eigen::Vector2d a1 = p[i].second, a2 = p[i + 1].second;
        for (size_t j = 0; j + 1 < q.size(); ++j) {
            if (q[j].first != q[j + 1].first || q[j].first != p[i].first) continue;
            const Eigen::Vector2d b1 = q[j].second, b2 = q[j + 1].second;
            const double d1 = cross2(a2 - a1, b1 - a1);
            const double d2 = cross2(a2 - a1, b2 - a1);
            const double d3 = cross2(b2 - b1, a1 - b1);
            const double d4 = cross2(b2 - b1, a2 - b1);
            if (d1 * d2 < 0.0 && d3 * d4 < 0.0)
                total += cross2(a2 - a1, b2 - b1) > 0.0 ? 1 : -1;
        }
    }
    return total;
}

}  // namespace

Eigen::MatrixXi CycleSpec::pairing() const {
    const int g = genus();
    std::vector<const Cycle*> cycles;
    for (const auto& c : a_cycles) cycles.push_back(&c);
    for (const auto& c : b_cycles) cycles.push_back(&c);
    Eigen::MatrixXi m = Eigen::MatrixXi::Zero(2 * g, 2 * g);
    for (int i = 0; i < 2 * g; ++i)
        for (int j = 0; j < 2 * g; ++j)
            if (i != j) m(i, j) = signed_crossings(cycles[i]->polyline, cycles[j]->polyline);
    return m;
}

namespace {

CMatrix assemble(const std::vector<CVector>& interval_values,
                 const std::vector<CycleSpec::Cycle>& cycles, int row_offset, int g,
                 double sign) {
    CMatrix out(g, g);
    for (int k = 0; k < g; ++k) {
        CVector acc = CVector::Zero(g);
        for (const auto& term : cycles[k].terms)
            acc += term.coeff * interval_values[term.interval].segment(row_offset, g);
        out.col(k) = sign * acc;
    }
    return out;
}

double relation_scale(const CMatrix& a, const CMatrix& b) {
    return std::max(1.0, std::max(max_abs(a), max_abs(b)));
}

}  // namespace

double legendre_residual(const PeriodSet& p) {
    const CMatrix omega = 0.5 * p.two_omega;
    const CMatrix omega_p = 0.5 * p.two_omega_prime;
    const CMatrix eta = 0.5 * p.two_eta;
    const CMatrix eta_p = 0.5 * p.two_eta_prime;
    const CMatrix id = CMatrix::Identity(omega.rows(), omega.cols());
    const double r1 = max_abs(eta.transpose() * omega - omega.transpose() * eta);
    const double r2 = max_abs(eta.transpose() * omega_p - omega.transpose() * eta_p -
                              Complex(0.0, M_PI / 2.0) * id);
    const double r3 = max_abs(eta_p.transpose() * omega_p - omega_p.transpose() * eta_p);
    return std::max({r1, r2, r3});
}

CMatrix tau_matrix(const PeriodSet& periods) {
    Eigen::PartialPivLU<CMatrix> lu(periods.two_omega);
    const CMatrix inv = lu.inverse();
    if (!(max_abs(periods.two_omega) * max_abs(inv) < 1e12))
        throw numeric_error("tau: 2omega is singular or near-singular");
    return inv * periods.two_omega_prime;
}

PeriodSet integrate_basis(const Curve& curve, const CycleSpec& spec, double tol, int threads) {
    if (!(tol >= 1e-14 && tol <= 1e-4))
        throw validation_error("integrate_basis: tol must lie in [1e-14, 1e-4]");
    const int g = curve.genus();
    if (spec.genus() != g) throw validation_error("integrate_basis: cycle spec genus mismatch");

    std::vector<std::function<Complex(Complex)>> fns;
    fns.reserve(2 * g);
    for (int i = 0; i < g; ++i)
        fns.emplace_back([i](Complex x) { return i == 0 ? Complex(1.0) : std::pow(x, i); });
    for (int j = 1; j <= g; ++j)
        fns.emplace_back([&curve, j](Complex x) { return baker_numerator(curve, j, x) / 4.0; });

    const int n_intervals = static_cast<int>(spec.points.size()) - 1;
    std::vector<CVector> values(n_intervals);
    parallel_for(n_intervals, threads,
                 [&](int j) { values[j] = interval_integrals(curve, spec.points, j, fns, tol); });

    PeriodSet p;
    p.quad_tol = tol;
    p.two_omega = assemble(values, spec.a_cycles, 0, g, 1.0);
    p.two_omega_prime = assemble(values, spec.b_cycles, 0, g, 1.0);
    p.two_eta = assemble(values, spec.a_cycles, g, g, kEtaSign);
    p.two_eta_prime = assemble(values, spec.b_cycles, g, g, kEtaSign);

    p.tau = tau_matrix(p);
    auto im_tau_min_eig = [](const CMatrix& tau) {
        RMatrix im = 0.5 * (tau.imag() + tau.imag().transpose());
        Eigen::SelfAdjointEigenSolver<RMatrix> eig(im);
        return eig.eigenvalues().minCoeff();
    };
    if (symmetry_defect(p.tau) > 1e-9 * std::max(1.0, max_abs(p.tau)))
        throw numeric_error("integrate_basis: tau is not symmetric");
    if (im_tau_min_eig(p.tau) <= 0.0) {
        // One automated b-orientation retry; anything beyond that means the
        // homology construction is inconsistent for this input.
        p.two_omega_prime = -p.two_omega_prime;
        p.two_eta_prime = -p.two_eta_prime;
        p.tau = tau_matrix(p);
        if (im_tau_min_eig(p.tau) <= 0.0)
            throw numeric_error("integrate_basis: Im tau not positive definite");
    }
    p.inv_two_omega = Eigen::PartialPivLU<CMatrix>(p.two_omega).inverse();

    p.legendre = legendre_residual(p);
    const double scale =
        std::max(relation_scale(p.two_eta, p.two_omega_prime), relation_scale(p.two_omega, p.two_eta_prime));
    if (p.legendre > 1e6 * tol * scale)
        throw numeric_error("integrate_basis: generalized Legendre relation violated (residual " +
                            std::to_string(p.legendre) + ")");
    return p;
}

PeriodSet compute_periods(const Curve& curve, double tol, int threads) {
    return integrate_basis(curve, cycle_basis(curve), tol, threads);
}

}  // namespace hyperkappa
