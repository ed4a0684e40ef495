// Acceptance suite: every criterion prints one line; exit code is the
// number of failures. Usage: acceptance <path-to-hyperkappa-cli>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <unistd.h>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "hyperkappa/kappa.hpp"

using namespace hyperkappa;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(int criterion, bool pass, const std::string& what, const std::string& detail) {
    std::printf("[%s] criterion %d: %s (%s)\n", pass ? "PASS" : "FAIL", criterion, what.c_str(),
                detail.c_str());
    if (!pass) ++failures;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

// --- small oracles (independent of the library paths they check) ---------

double agm_elliptic_k(double k) {
    double a = 1.0, b = std::sqrt(1.0 - k * k);
    for (int i = 0; i < 60 && std::abs(a - b) > 1e-17 * a; ++i) {
        const double an = 0.5 * (a + b);
        b = std::sqrt(a * b);
        a = an;
    }
    return M_PI / (2.0 * a);
}

Complex brute_force_theta(const Characteristic& ch, const CMatrix& tau, int radius) {
    const int g = static_cast<int>(tau.rows());
    std::vector<int> n(g, -radius);
    Complex sum = 0.0;
    while (true) {
        Complex quad = 0.0, lin = 0.0;
        std::vector<double> m(g);
        for (int i = 0; i < g; ++i) m[i] = double(n[i]) + 0.5 * ch.eps2[i];
        for (int i = 0; i < g; ++i) {
            for (int j = 0; j < g; ++j) quad += m[i] * tau(i, j) * m[j];
            lin += m[i] * (0.5 * ch.eps_prime2[i]);
        }
        sum += std::exp(Complex(0.0, M_PI) * quad + Complex(0.0, 2.0 * M_PI) * lin);
        int level = 0;
        while (level < g && ++n[level] > radius) n[level++] = -radius;
        if (level == g) break;
    }
    return sum;
}

mpq_class symmetric_rat(const std::vector<mpq_class>& values, int order) {
    return elementary_symmetric(std::span<const mpq_class>(values.data(), values.size()), order);
}

Curve seeded_real_curve(int g, std::uint64_t seed, double min_gap = 0.35) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> draw(-4.0, 4.0);
    while (true) {
        std::vector<Complex> roots;
        for (int i = 0; i < 2 * g + 2; ++i) roots.emplace_back(draw(rng), 0.0);
        std::sort(roots.begin(), roots.end(),
                  [](const Complex& a, const Complex& b) { return a.real() < b.real(); });
        bool ok = true;
        for (size_t i = 1; i < roots.size(); ++i)
            if (roots[i].real() - roots[i - 1].real() < min_gap) ok = false;
        if (ok) return Curve::from_roots(roots);
    }
}

nlohmann::json run_cli(const std::string& cli, const std::string& args) {
    std::string tmpl = "/tmp/hyperkappa_accept_XXXXXX";
    const int fd = mkstemp(tmpl.data());
    if (fd < 0) throw std::runtime_error("mkstemp failed");
    close(fd);
    std::remove(tmpl.c_str());
    const std::string path = tmpl + ".json";
    const std::string cmd = cli + " " + args + " --out " + path;
    const int status = std::system(cmd.c_str());
    if (WEXITSTATUS(status) != 0) throw std::runtime_error("cli failed: " + cmd);
    std::ifstream in(path);
    nlohmann::json doc;
    in >> doc;
    std::remove(path.c_str());
    return doc;
}

// --- criteria -------------------------------------------------------------

void criterion_1(const std::string& cli) {
    const std::vector<std::vector<std::vector<long long>>> expected{
        {{4, 1}, {1, 4}},
        {{15, 5, 1}, {5, 18, 5}, {1, 5, 15}},
        {{56, 21, 6, 1}, {21, 72, 27, 6}, {6, 27, 72, 21}, {1, 6, 21, 56}},
        {{210, 84, 28, 7, 1},
         {84, 280, 119, 38, 7},
         {28, 119, 300, 119, 28},
         {7, 38, 119, 280, 84},
         {1, 7, 28, 84, 210}},
        {{792, 330, 120, 36, 8, 1},
         {330, 1080, 492, 184, 51, 8},
         {120, 492, 1200, 542, 184, 36},
         {36, 184, 542, 1200, 492, 120},
         {8, 51, 184, 492, 1080, 330},
         {1, 8, 36, 120, 330, 792}}};
    bool pass = true;
    std::string detail;
    double g6_seconds = 0.0;
    try {
        for (int g = 2; g <= 6; ++g) {
            const auto t0 = Clock::now();
            const auto doc = run_cli(cli, "lambda --genus " + std::to_string(g) + " --exact");
            const double dt = seconds_since(t0);
            if (g == 6) g6_seconds = dt;
            const auto got =
                doc["results"]["coefficients"].get<std::vector<std::vector<long long>>>();
            if (got != expected[g - 2]) {
                pass = false;
                detail = "table mismatch at g=" + std::to_string(g);
            }
            if (doc["residuals"]["extraction"].get<double>() != 0.0) pass = false;
        }
        if (g6_seconds >= 120.0) {
            pass = false;
            detail = "g=6 runtime " + fmt(g6_seconds) + "s";
        }
        if (detail.empty()) detail = "g=2..6 exact, g=6 in " + fmt(g6_seconds) + "s";
    } catch (const std::exception& e) {
        pass = false;
        detail = e.what();
    }
    report(1, pass, "cmd_lambda --exact reproduces the integer tables", detail);
}

void criterion_2() {
    bool pass = antidiagonal_sum_coefficient(3, 4) == 20 &&
                antidiagonal_sum_coefficient(5, 6) == 378;
    for (int g = 2; g <= 6 && pass; ++g) {
        long long row_sum = 0;
        const IMatrix table = lambda_table_exact(g, 31415);
        for (int k = 1; k <= g; ++k) {
            if (table(0, k - 1) != first_row_coefficient(g, k)) pass = false;
            row_sum += table(0, k - 1);
        }
        if (row_sum != first_row_sum(g)) pass = false;
        for (int k = 2; k <= 2 * g + 2 && pass; ++k) {
            long long sum = 0;
            for (int i = 0; i < g; ++i) {
                const int j = k - 2 - i;
                if (j >= 0 && j < g) sum += table(i, j);
            }
            if (sum != antidiagonal_sum_coefficient(g, k)) pass = false;
        }
    }
    report(2, pass, "closed-form anti-diagonal sums, first-row binomials, row sums (exact)",
           pass ? "20 at (3,4), 378 at (5,6), rows g=2..6" : "identity failed");
}

void criterion_3() {
    bool pass = true;
    std::string detail = "g=3 corner entry, g=5 X entry and 38, g=2 split";
    try {
        // g=3, I0 = {1,2,3,4}: printed paired-products form of Lambda_{3;3,3}.
        const RationalCurve c3 = sample_rational_curve(3, 777);
        const auto lam3 = solve_partition_lambda_exact(c3, make_partition(3, {1, 2, 3, 4}));
        const auto& e = c3.roots;
        const mpq_class printed = e[0] * e[1] + e[2] * e[3] + e[4] * e[5] + e[6] * e[7] +
                                  (e[0] + e[1]) * (e[2] + e[3]) + (e[4] + e[5]) * (e[6] + e[7]);
        if (lam3[2][2] != printed) pass = false;

        // g=5, I0 = {1..6}: X = 2 s6 + 2 s~6 + s1 s~5 + s5 s~1, full sum 38.
        const RationalCurve c5 = sample_rational_curve(5, 778);
        const Partition p5 = make_partition(5, {1, 2, 3, 4, 5, 6});
        const auto lam5 = solve_partition_lambda_exact(c5, p5);
        std::vector<mpq_class> s, st;
        for (int i : p5.i0) s.push_back(c5.roots[i - 1]);
        for (int i : p5.j0) st.push_back(c5.roots[i - 1]);
        const mpq_class x_expected = 2 * symmetric_rat(s, 6) + 2 * symmetric_rat(st, 6) +
                                     symmetric_rat(s, 1) * symmetric_rat(st, 5) +
                                     symmetric_rat(s, 5) * symmetric_rat(st, 1);
        if (lam5[1][3] != x_expected) pass = false;
        if (lambda_table_exact(5, 779)(1, 3) != 38) pass = false;

        // g=2 split into symmetric functions, every partition, exact.
        const RationalCurve c2 = sample_rational_curve(2, 780);
        for (const auto& part : enumerate_partitions(2)) {
            const auto lam = solve_partition_lambda_exact(c2, part);
            std::vector<mpq_class> i0, j0;
            for (int i : part.i0) i0.push_back(c2.roots[i - 1]);
            for (int i : part.j0) j0.push_back(c2.roots[i - 1]);
            if (lam[0][0] != symmetric_rat(i0, 3) * symmetric_rat(j0, 1) +
                                 symmetric_rat(j0, 3) * symmetric_rat(i0, 1))
                pass = false;
            if (lam[0][1] != -symmetric_rat(i0, 3) - symmetric_rat(j0, 3)) pass = false;
            if (lam[1][1] != symmetric_rat(i0, 2) + symmetric_rat(j0, 2)) pass = false;
        }
    } catch (const std::exception& e) {
        pass = false;
        detail = e.what();
    }
    report(3, pass, "per-partition solutions match the printed closed forms", detail);
}

void criterion_4() {
    bool pass = true;
    std::string detail;
    try {
        const auto t0 = Clock::now();
        const Curve curve = Curve::from_roots({-3, -2, -1, 1, 2, 3});
        const PeriodSet p = compute_periods(curve, 1e-12);
        LambdaMatrix lm;
        lm.coefficients = lambda_table_exact(2, 515);
        lm.matrix = lambda_from_coefficients(lm.coefficients, curve);
        const double census = double(enumerate_nonsingular_even(p.tau, 1e-12, 10).size());
        const KappaResult modular = kappa_modular(curve, p, lm, 1e-12);
        const double t2 = seconds_since(t0);
        pass = pass && census == 10 && p.legendre < 1e-10 &&
               modular.residual_vs_direct < 1e-7 && t2 < 30.0;

        const auto t1 = Clock::now();
        const Curve c3 = seeded_real_curve(3, 2718);
        const PeriodSet p3 = compute_periods(c3, 1e-12);
        LambdaMatrix lm3;
        lm3.coefficients = lambda_table_exact(3, 515);
        lm3.matrix = lambda_from_coefficients(lm3.coefficients, c3);
        const double census3 = double(enumerate_nonsingular_even(p3.tau, 1e-12, 35).size());
        const KappaResult modular3 = kappa_modular(c3, p3, lm3, 1e-12);
        const double t3 = seconds_since(t1);
        pass = pass && census3 == 35 && modular3.residual_vs_direct < 1e-6 && t3 < 300.0;
        detail = "g=2 res " + fmt(modular.residual_vs_direct) + " in " + fmt(t2) + "s; g=3 res " +
                 fmt(modular3.residual_vs_direct) + " in " + fmt(t3) + "s";
    } catch (const std::exception& e) {
        pass = false;
        detail = e.what();
    }
    report(4, pass, "central identity: modular formula vs eta(2omega)^{-1}", detail);
}

void criterion_5() {
    bool pass = true;
    std::string detail;
    try {
        const Curve curve = Curve::from_roots({-3, -2, -1, 1, 2, 3});
        const PeriodSet p = compute_periods(curve, 1e-12);
        const AbelDictionary dict = abel_dictionary(curve, p);
        double max_even = 0.0;
        for (const auto& ch : all_even_characteristics(2))
            max_even = std::max(max_even, std::abs(theta(ch, CVector(), p.tau, 1e-10).value));
        std::vector<CMatrix> kappas;
        for (const auto& part : enumerate_partitions(2))
            kappas.push_back(
                kappa_single_characteristic(curve, p, dict, 1e-6 * max_even, part, 1e-12).kappa);
        double worst = 0.0;
        for (size_t a = 0; a < kappas.size(); ++a)
            for (size_t b = a + 1; b < kappas.size(); ++b)
                worst = std::max(worst, max_abs(kappas[a] - kappas[b]));
        pass = kappas.size() == 10 && worst < 1e-7;
        detail = "max pairwise deviation " + fmt(worst);
    } catch (const std::exception& e) {
        pass = false;
        detail = e.what();
    }
    report(5, pass, "all 10 single-characteristic routes agree at g=2", detail);
}

void criterion_6() {
    bool pass = true;
    std::string detail;
    try {
        const Curve curve = Curve::from_roots({-3, -2, -1, 1, 2, 3});
        const PeriodSet p = compute_periods(curve, 1e-12);
        LambdaMatrix lm;
        lm.coefficients = lambda_table_exact(2, 515);
        lm.matrix = lambda_from_coefficients(lm.coefficients, curve);
        const auto [shifted, klein] = klein_shift(curve, p, lm, 1e-12);
        const double drift = std::abs(shifted.legendre - p.legendre);
        pass = klein.residual_vs_direct < 1e-7 && drift < 1e-10;
        detail = "theta-sum residual " + fmt(klein.residual_vs_direct) + ", Legendre drift " +
                 fmt(drift);
    } catch (const std::exception& e) {
        pass = false;
        detail = e.what();
    }
    report(6, pass, "Klein basis: kappa becomes the pure theta-constant sum", detail);
}

void criterion_7() {
    bool pass = true;
    std::string detail = "residuals:";
    try {
        for (int g = 2; g <= 6; ++g) {
            const Curve curve = seeded_real_curve(g, 4000 + g);
            const LambdaMatrix lm = lambda_matrix(curve);
            const double res = verify_lemma_identity(curve, lm, 10);
            detail += " g" + std::to_string(g) + "=" + fmt(res);
            if (res >= 1e-8) pass = false;
        }
    } catch (const std::exception& e) {
        pass = false;
        detail = e.what();
    }
    report(7, pass, "lemma identity X^T Lambda X matches the anti-diagonal polynomial", detail);
}

void criterion_8() {
    bool pass = true;
    std::string detail;
    try {
        // theta vs brute-force cube sums, g <= 2
        CMatrix tau1(1, 1);
        tau1(0, 0) = Complex(0.3, 1.1);
        double worst_theta = 0.0;
        for (const auto& ch : all_even_characteristics(1))
            worst_theta = std::max(worst_theta,
                                   std::abs(theta(ch, CVector(), tau1, 1e-12).value -
                                            brute_force_theta(ch, tau1, 40)));
        const Curve g2 = Curve::from_roots({-3, -2, -1, 1, 2, 3});
        const PeriodSet p2 = compute_periods(g2, 1e-12);
        for (const auto& ch : all_even_characteristics(2))
            worst_theta = std::max(worst_theta,
                                   std::abs(theta(ch, CVector(), p2.tau, 1e-12).value -
                                            brute_force_theta(ch, p2.tau, 30)));
        pass = pass && worst_theta < 1e-10;

        // Hessian vs finite differences
        const Characteristic zero2 = Characteristic::zero(2);
        const CMatrix hess = theta_hessian_at_zero(zero2, p2.tau, 1e-13);
        double worst_fd = 0.0;
        const double h = 1e-4;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                Complex fd;
                if (i == j) {
                    CVector zp = CVector::Zero(2), zm = CVector::Zero(2);
                    zp[i] += h;
                    zm[i] -= h;
                    fd = (theta(zero2, zp, p2.tau, 1e-13).value -
                          2.0 * theta(zero2, CVector::Zero(2), p2.tau, 1e-13).value +
                          theta(zero2, zm, p2.tau, 1e-13).value) /
                         (h * h);
                } else {
                    CVector zpp = CVector::Zero(2), zpm = CVector::Zero(2),
                            zmp = CVector::Zero(2), zmm = CVector::Zero(2);
                    zpp[i] += h; zpp[j] += h;
                    zpm[i] += h; zpm[j] -= h;
                    zmp[i] -= h; zmp[j] += h;
                    zmm[i] -= h; zmm[j] -= h;
                    fd = (theta(zero2, zpp, p2.tau, 1e-13).value -
                          theta(zero2, zpm, p2.tau, 1e-13).value -
                          theta(zero2, zmp, p2.tau, 1e-13).value +
                          theta(zero2, zmm, p2.tau, 1e-13).value) /
                         (4.0 * h * h);
                }
                worst_fd = std::max(worst_fd, std::abs(fd - hess(i, j)));
            }
        pass = pass && worst_fd < 1e-6;

        // q_value dual formulas, 50 draws
        std::mt19937_64 rng(321);
        double worst_q = 0.0;
        for (int draw = 0; draw < 50; ++draw) {
            const int g = 1 + int(rng() % 4);
            const Curve c = seeded_real_curve(g, rng());
            const int n = 2 * g + 2;
            const int i = 1 + int(rng() % n);
            int j = 1 + int(rng() % n);
            while (j == i) j = 1 + int(rng() % n);
            const Complex a = q_value(c, i, j), b = q_value_expansion(c, i, j);
            worst_q = std::max(worst_q, std::abs(a - b) / std::max(1.0, std::abs(a)));
        }
        pass = pass && worst_q < 1e-9;

        // genus-1 period vs AGM
        const Curve g1 = Curve::from_roots({-2, -1, 1, 2});
        const PeriodSet p1 = compute_periods(g1, 1e-12);
        const double agm_err =
            std::abs(p1.two_omega(0, 0) - Complex(0.0, agm_elliptic_k(std::sqrt(3.0) / 2.0)));
        pass = pass && agm_err < 1e-10;

        // rescaling covariance kappa(4f) = 4 kappa(f)
        const CMatrix base = kappa_direct(p2).kappa;
        const auto [scaled, rep] = rescale(g2, 4.0);
        const CMatrix kc = kappa_direct(compute_periods(scaled, 1e-12)).kappa;
        const double cov = max_abs(kc - 4.0 * base) / std::max(1.0, 4.0 * max_abs(base));
        pass = pass && cov < 1e-8;

        detail = "theta " + fmt(worst_theta) + ", hessian " + fmt(worst_fd) + ", q " +
                 fmt(worst_q) + ", agm " + fmt(agm_err) + ", cov " + fmt(cov);
    } catch (const std::exception& e) {
        pass = false;
        detail = e.what();
    }
    report(8, pass, "oracle property suites", detail);
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: acceptance <path-to-hyperkappa-cli>\n");
        return 64;
    }
    criterion_1(argv[1]);
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    if (failures == 0) std::printf("all criteria passed\n");
    return failures;
}
