#pragma once

#include <functional>
#include <vector>

#include "hyperkappa/curve.hpp"
#include "hyperkappa/types.hpp"

namespace hyperkappa {

/// Homology basis for a curve whose branch points are all real.
///
/// Branch points are sorted ascending; cut k is the interval
/// [e_{2k-1}, e_{2k}] (1-based), k = 1..g+1, and gap k the interval between
/// cut k and cut k+1. Cycle a_k is a clockwise loop around cut k; cycle b_k
/// passes through cut k and the last cut, running rightward above the real
/// axis on the upper-branch sheet and back below it on the other sheet.
///
/// `terms` is the reduced quadrature support of each cycle: pairs
/// (interval index, coefficient) such that the cycle period of a
/// differential equals sum coeff * integral over [pts[j], pts[j+1]] taken on
/// the branch of y continuous from the upper half-plane.
struct CycleSpec {
    struct QuadTerm {
        int interval;  // 0-based: [points[j], points[j+1]]
        double coeff;
    };
    struct Cycle {
        std::vector<QuadTerm> terms;
        // Geometric realization on the two-sheet model (face 0 / face 1),
        // used to validate the intersection pairing combinatorially.
        std::vector<std::pair<int, Eigen::Vector2d>> polyline;
    };

    std::vector<double> points;  // e_1 < ... < e_{2g+2}
    std::vector<Cycle> a_cycles, b_cycles;

    int genus() const { return static_cast<int>(points.size()) / 2 - 1; }

    /// Signed intersection matrix of (a_1..a_g, b_1..b_g) computed from the
    /// polylines. Canonical means [[0, I], [-I, 0]].
    Eigen::MatrixXi pairing() const;
};

CycleSpec cycle_basis(const Curve& curve);

struct PeriodSet {
    CMatrix two_omega;        // a-periods of the holomorphic basis
    CMatrix two_omega_prime;  // b-periods
    CMatrix two_eta;          // a-periods of the second-kind basis
    CMatrix two_eta_prime;    // b-periods
    CMatrix tau;              // omega^{-1} omega'
    CMatrix inv_two_omega;    // columns are the direction vectors V_k
    double quad_tol = 0.0;
    double legendre = 0.0;    // residual achieved at construction

    int genus() const { return static_cast<int>(two_omega.rows()); }
};

/// Quadrature of all 2g basis differentials over the cycles of `spec`.
/// tol must lie in [1e-14, 1e-4].
PeriodSet integrate_basis(const Curve& curve, const CycleSpec& spec, double tol,
                          int threads = 1);

/// cycle_basis + integrate_basis.
PeriodSet compute_periods(const Curve& curve, double tol = 1e-12, int threads = 1);

/// Riemann period matrix of a PeriodSet (recomputed from the stored
/// matrices; integrate_basis already stores it as .tau).
CMatrix tau_matrix(const PeriodSet& periods);

/// Max-norm residual of the three generalized Legendre relations,
/// the middle one checked against (i pi / 2) I.
double legendre_residual(const PeriodSet& periods);

/// Integrals of custom integrands phi(x)/y over one interval between
/// adjacent sorted branch points, on the branch of y continuous from the
/// upper half-plane. Shared by the period assembly and the Abel maps.
CVector interval_integrals(const Curve& curve, const std::vector<double>& pts, int interval,
                           const std::vector<std::function<Complex(Complex)>>& numerators,
                           double tol);

/// Same, for the g holomorphic numerators 1, x, ..., x^{g-1}.
CVector holomorphic_interval_integrals(const Curve& curve, const std::vector<double>& pts,
                                       int interval, double tol);

}  // namespace hyperkappa
