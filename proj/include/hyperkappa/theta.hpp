#pragma once

#include <vector>

#include "hyperkappa/partition.hpp"
#include "hyperkappa/periods.hpp"
#include "hyperkappa/types.hpp"

namespace hyperkappa {

/// Half-integer theta characteristic [eps; eps'], entries stored doubled
/// (0 or 1). Even iff eps2 . eps_prime2 is even.
struct Characteristic {
    Eigen::VectorXi eps2, eps_prime2;

    static Characteristic zero(int g) {
        return {Eigen::VectorXi::Zero(g), Eigen::VectorXi::Zero(g)};
    }
    int g() const { return static_cast<int>(eps2.size()); }
    bool is_even() const { return (eps2.dot(eps_prime2)) % 2 == 0; }

    /// Dense integer key for ordering and set comparisons.
    unsigned key() const {
        unsigned k = 0;
        for (int i = 0; i < g(); ++i) k = (k << 1) | unsigned(eps2[i] & 1);
        for (int i = 0; i < g(); ++i) k = (k << 1) | unsigned(eps_prime2[i] & 1);
        return k;
    }
    bool operator==(const Characteristic& o) const {
        return eps2 == o.eps2 && eps_prime2 == o.eps_prime2;
    }
};

struct ThetaValue {
    Complex value;
    double truncation_radius;
    double est_error;
};

/// theta[eps](z; tau) by lattice summation over the ellipsoid
/// (n+eps+shift)^T Im(tau) (n+eps+shift) <= R^2, R from a Gaussian tail
/// bound for the requested tolerance.
ThetaValue theta(const Characteristic& ch, const CVector& z, const CMatrix& tau, double tol);

/// Matrix of second z-derivatives at z = 0; requires an even characteristic.
CMatrix theta_hessian_at_zero(const Characteristic& ch, const CMatrix& tau, double tol);

/// (Theta_{a,b}[eps]) = V^T theta'' V with V the columns of (2 omega)^{-1}.
CMatrix directional_hessian(const Characteristic& ch, const PeriodSet& periods, double tol);

std::vector<Characteristic> all_even_characteristics(int g);

/// Even characteristics whose theta constant exceeds 1e-6 of the largest
/// one. If expected_count >= 0, a census mismatch throws numeric_error.
std::vector<Characteristic> enumerate_nonsingular_even(const CMatrix& tau, double tol,
                                                       int expected_count = -1);

/// Abel images of the branch points, their characteristics, and the vector
/// of Riemann constants, for a branch-point base (default e_{2g+2}).
struct AbelDictionary {
    int base_index;                      // 1-based into the sorted points
    std::vector<CVector> abel;           // A_j, j = 1..2g+2 (index 0 unused)
    std::vector<Characteristic> chars;   // [A_j]
    std::vector<double> residuals;       // half-lattice rounding residuals
    CVector riemann_constants;           // K = sum of odd A_j
};

AbelDictionary abel_dictionary(const Curve& curve, const PeriodSet& periods,
                               int base_index = -1, double tol = 1e-12);

Characteristic branch_characteristic(const Curve& curve, const PeriodSet& periods, int j,
                                     int base_index = -1);

CVector riemann_constants(const Curve& curve, const PeriodSet& periods);

/// Characteristic of a branch-point partition via
/// sum_{k in I0} A_k + K = 2 omega eps + 2 omega' eps'. Even and
/// non-singular by construction; anything else throws. The overload with a
/// prebuilt dictionary avoids recomputing the Abel integrals per call.
Characteristic partition_characteristic(const Curve& curve, const PeriodSet& periods,
                                        const Partition& partition);
Characteristic partition_characteristic(const PeriodSet& periods, const AbelDictionary& dict,
                                        const Partition& partition, double nonsingular_floor);

/// Solve (2 omega) eps + (2 omega') eps' = v and round to the half lattice.
/// Returns the characteristic and the max entry-wise rounding residual.
std::pair<Characteristic, double> characteristic_from_vector(const PeriodSet& periods,
                                                             const CVector& v);

}  // namespace hyperkappa
