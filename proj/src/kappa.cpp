#include "hyperkappa/kappa.hpp"

#include <cmath>

#include "hyperkappa/parallel.hpp"

namespace hyperkappa {

namespace {

void require_symmetric(const CMatrix& kappa, const char* who) {
    if (symmetry_defect(kappa) > 1e-9 * std::max(1.0, max_abs(kappa)))
        throw numeric_error(std::string(who) + ": kappa is not symmetric");
}

}  // namespace

KappaResult kappa_direct(const PeriodSet& periods) {
    const CMatrix inv = periods.inv_two_omega;
    if (!(max_abs(periods.two_omega) * max_abs(inv) < 1e12))
        throw numeric_error("kappa_direct: 2omega is singular or near-singular");
    // eta (2 omega)^{-1} = (two_eta / 2) * inv_two_omega
    CMatrix kappa = 0.5 * periods.two_eta * inv;
    require_symmetric(kappa, "kappa_direct");
    return {std::move(kappa), KappaRoute::direct, 0.0};
}

std::pair<CMatrix, CMatrix> eta_from_kappa(const CMatrix& kappa, const CMatrix& two_omega,
                                           const CMatrix& two_omega_prime) {
    const auto g = kappa.rows();
    if (two_omega.rows() != g || two_omega_prime.rows() != g || kappa.cols() != g)
        throw validation_error("eta_from_kappa: shape mismatch");
    const CMatrix two_eta = 2.0 * kappa * two_omega;
    const CMatrix inv_t = Eigen::PartialPivLU<CMatrix>(two_omega.transpose()).inverse();
    const CMatrix two_eta_prime =
        2.0 * kappa * two_omega_prime - Complex(0.0, 2.0 * M_PI) * inv_t;
    return {two_eta, two_eta_prime};
}

CMatrix theta_constant_sum(const PeriodSet& periods, double tol, int threads) {
    const int g = periods.genus();
    const long long n_g = binomial(2 * g + 1, g);
    const auto chars = enumerate_nonsingular_even(periods.tau, tol, static_cast<int>(n_g));
    std::vector<CMatrix> terms(chars.size());
    parallel_for(static_cast<int>(chars.size()), threads, [&](int i) {
        const Complex constant = theta(chars[i], CVector(), periods.tau, tol).value;
        terms[i] = directional_hessian(chars[i], periods, tol) / constant;
    });
    CMatrix sum = CMatrix::Zero(g, g);
    for (const auto& t : terms) sum += t;
    return sum / double(n_g);
}

KappaResult kappa_modular(const Curve& curve, const PeriodSet& periods,
                          const LambdaMatrix& lambda, double tol, int threads) {
    if (!curve.monic())
        throw validation_error("kappa_modular: monic curve required (rescale first)");
    const int g = curve.genus();
    const long long n_g = binomial(2 * g + 1, g);
    const CMatrix lam = lambda_from_coefficients(lambda.coefficients, curve);
    CMatrix kappa = lam / (8.0 * double(n_g)) - 0.5 * theta_constant_sum(periods, tol, threads);
    require_symmetric(kappa, "kappa_modular");
    KappaResult result{std::move(kappa), KappaRoute::modular, 0.0};
    result.residual_vs_direct = max_abs(result.kappa - kappa_direct(periods).kappa);
    return result;
}

KappaResult kappa_single_characteristic(const Curve& curve, const PeriodSet& periods,
                                        const AbelDictionary& dict, double nonsingular_floor,
                                        const Partition& partition, double tol) {
    if (!curve.monic())
        throw validation_error("kappa_single_characteristic: monic curve required");
    const Characteristic ch =
        partition_characteristic(periods, dict, partition, nonsingular_floor);
    const CMatrix lam = solve_partition_lambda(curve, partition);
    const Complex constant = theta(ch, CVector(), periods.tau, tol).value;
    const CMatrix hess = directional_hessian(ch, periods, tol);
    CMatrix kappa = lam / 8.0 - 0.5 * hess / constant;
    require_symmetric(kappa, "kappa_single_characteristic");
    KappaResult result{std::move(kappa), KappaRoute::single_char, 0.0};
    result.residual_vs_direct = max_abs(result.kappa - kappa_direct(periods).kappa);
    return result;
}

KappaResult kappa_single_characteristic(const Curve& curve, const PeriodSet& periods,
                                        const Partition& partition, double tol) {
    const auto dict = abel_dictionary(curve, periods, -1, periods.quad_tol);
    double max_mag = 0.0;
    for (const auto& e : all_even_characteristics(curve.genus()))
        max_mag = std::max(max_mag, std::abs(theta(e, CVector(), periods.tau, 1e-10).value));
    return kappa_single_characteristic(curve, periods, dict, 1e-6 * max_mag, partition, tol);
}

std::pair<PeriodSet, KappaResult> klein_shift(const Curve& curve, const PeriodSet& periods,
                                              const LambdaMatrix& lambda, double tol,
                                              int threads) {
    const int g = periods.genus();
    const long long n_g = binomial(2 * g + 1, g);
    const CMatrix lam = lambda_from_coefficients(lambda.coefficients, curve);
    if (symmetry_defect(lam) > 1e-9 * std::max(1.0, max_abs(lam)))
        throw validation_error("klein_shift: Lambda must be symmetric");
    const CMatrix shift = -lam / (4.0 * double(n_g));  // C

    PeriodSet shifted = periods;
    shifted.two_eta = periods.two_eta + shift * periods.two_omega;
    shifted.two_eta_prime = periods.two_eta_prime + shift * periods.two_omega_prime;
    shifted.legendre = legendre_residual(shifted);

    KappaResult result = kappa_direct(shifted);
    result.route = KappaRoute::klein;
    const CMatrix pure = -0.5 * theta_constant_sum(periods, tol, threads);
    result.residual_vs_direct = max_abs(result.kappa - pure);
    return {std::move(shifted), std::move(result)};
}

}  // namespace hyperkappa
