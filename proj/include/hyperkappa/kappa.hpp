#pragma once

#include "hyperkappa/lambda_exact.hpp"
#include "hyperkappa/periods.hpp"
#include "hyperkappa/theta.hpp"
#include "hyperkappa/types.hpp"

namespace hyperkappa {

enum class KappaRoute { direct, single_char, modular, klein };

struct KappaResult {
    CMatrix kappa;
    KappaRoute route;
    double residual_vs_direct = 0.0;
};

/// kappa = eta (2 omega)^{-1} from the stored half-period matrices.
KappaResult kappa_direct(const PeriodSet& periods);

/// Reconstruct (2 eta, 2 eta') from kappa and the first-kind periods:
/// eta = 2 kappa omega, eta' = 2 kappa omega' - i pi ((2 omega)^T)^{-1}.
std::pair<CMatrix, CMatrix> eta_from_kappa(const CMatrix& kappa, const CMatrix& two_omega,
                                           const CMatrix& two_omega_prime);

/// (1/N_g) sum over the non-singular even characteristics of
/// (Theta_{ab}[eps]) / Theta[eps]; the transcendental half of every route.
CMatrix theta_constant_sum(const PeriodSet& periods, double tol, int threads = 1);

/// kappa = Lambda/(8 N_g) - (theta constant sum)/2, Lambda rebuilt for this
/// curve from the integer coefficient table.
KappaResult kappa_modular(const Curve& curve, const PeriodSet& periods,
                          const LambdaMatrix& lambda, double tol, int threads = 1);

/// kappa = Lambda^{[eps]}/8 - (Theta_{ab}[eps])/(2 Theta[eps]) with eps the
/// characteristic matched to the partition through the Abel dictionary.
/// The overload reuses a prebuilt dictionary across partitions.
KappaResult kappa_single_characteristic(const Curve& curve, const PeriodSet& periods,
                                        const Partition& partition, double tol);
KappaResult kappa_single_characteristic(const Curve& curve, const PeriodSet& periods,
                                        const AbelDictionary& dict, double nonsingular_floor,
                                        const Partition& partition, double tol);

/// Basis change r -> r + C u with C = -Lambda/(4 N_g): shifts the
/// second-kind periods so that kappa becomes the pure theta-constant sum.
/// Returns the shifted PeriodSet and the new kappa (residual_vs_direct
/// holds the deviation from the pure theta sum).
std::pair<PeriodSet, KappaResult> klein_shift(const Curve& curve, const PeriodSet& periods,
                                              const LambdaMatrix& lambda, double tol,
                                              int threads = 1);

}  // namespace hyperkappa
