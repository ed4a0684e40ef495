#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "hyperkappa/curve.hpp"
#include "hyperkappa/periods.hpp"
#include "hyperkappa/theta.hpp"

using namespace hyperkappa;

namespace {

// Oracle: plain lattice sum over the integer cube |n_i| <= radius.
Complex brute_force_theta(const Characteristic& ch, const CVector& z, const CMatrix& tau,
                          int radius) {
    const int g = static_cast<int>(tau.rows());
    std::vector<int> n(g, -radius);
    Complex sum = 0.0;
    while (true) {
        CVector m(g);
        for (int i = 0; i < g; ++i) m[i] = double(n[i]) + 0.5 * ch.eps2[i];
        Complex quad = 0.0, lin = 0.0;
        for (int i = 0; i < g; ++i) {
            for (int j = 0; j < g; ++j) quad += m[i] * tau(i, j) * m[j];
            lin += m[i] * (z[i] + 0.5 * ch.eps_prime2[i]);
        }
        sum += std::exp(Complex(0.0, M_PI) * quad + Complex(0.0, 2.0 * M_PI) * lin);
        int level = 0;
        while (level < g && ++n[level] > radius) n[level++] = -radius;
        if (level == g) break;
    }
    return sum;
}

Characteristic make_char(std::vector<int> top, std::vector<int> bottom) {
    Characteristic ch = Characteristic::zero(static_cast<int>(top.size()));
    for (size_t i = 0; i < top.size(); ++i) {
        ch.eps2[int(i)] = top[i];
        ch.eps_prime2[int(i)] = bottom[i];
    }
    return ch;
}

}  // namespace

TEST_CASE("parity: definitions and the g=2 even census") {
    CHECK(Characteristic::zero(3).is_even());
    CHECK(!make_char({1}, {1}).is_even());
    CHECK(make_char({1}, {0}).is_even());
    CHECK(all_even_characteristics(2).size() == 10);
    CHECK(all_even_characteristics(3).size() == 36);
}

TEST_CASE("theta: genus-1 value at tau = i against the brute-force oracle") {
    CMatrix tau(1, 1);
    tau(0, 0) = Complex(0.0, 1.0);
    const Characteristic zero = Characteristic::zero(1);
    const ThetaValue val = theta(zero, CVector(), tau, 1e-12);
    const Complex oracle = brute_force_theta(zero, CVector::Zero(1), tau, 50);
    CHECK(std::abs(val.value - oracle) < 1e-12);
    CHECK(std::abs(val.value - Complex(1.0864348112133080)) < 1e-10);
    CHECK(val.est_error < 1e-12);
}

TEST_CASE("theta: genus-2 curve tau against the brute-force cube oracle") {
    const Curve curve = Curve::from_roots({-3, -2, -1, 1, 2, 3});
    const PeriodSet p = compute_periods(curve, 1e-12);
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> draw(-0.4, 0.4);
    for (const auto& ch : all_even_characteristics(2)) {
        CVector z(2);
        z << Complex(draw(rng), draw(rng)), Complex(draw(rng), draw(rng));
        const Complex mine = theta(ch, z, p.tau, 1e-12).value;
        const Complex oracle = brute_force_theta(ch, z, p.tau, 30);
        CHECK(std::abs(mine - oracle) < 1e-10);
    }
}

TEST_CASE("theta: odd characteristic vanishes identically at z = 0") {
    const Curve curve = Curve::from_roots({-3, -2, -1, 1, 2, 3});
    const PeriodSet p = compute_periods(curve, 1e-12);
    for (unsigned a = 0; a < 4; ++a)
        for (unsigned b = 0; b < 4; ++b) {
            const Characteristic ch =
                make_char({int(a >> 1), int(a & 1)}, {int(b >> 1), int(b & 1)});
            if (ch.is_even()) continue;
            const ThetaValue v = theta(ch, CVector(), p.tau, 1e-12);
            CHECK(v.value == Complex(0.0, 0.0));
            CHECK(v.est_error == 0.0);
        }
}

TEST_CASE("theta: indefinite Im tau rejected") {
    CMatrix tau(1, 1);
    tau(0, 0) = Complex(0.0, -1.0);
    CHECK_THROWS_AS(theta(Characteristic::zero(1), CVector(), tau, 1e-10), validation_error);
}

TEST_CASE("theta: truncation is stable under tightening the tolerance") {
    const Curve curve = Curve::from_roots({-3, -2, -1, 1, 2, 3});
    const PeriodSet p = compute_periods(curve, 1e-12);
    const Characteristic zero = Characteristic::zero(2);
    const Complex loose = theta(zero, CVector(), p.tau, 1e-6).value;
    const Complex tight = theta(zero, CVector(), p.tau, 1e-13).value;
    CHECK(std::abs(loose - tight) < 1e-6);
}

TEST_CASE("theta_hessian_at_zero: finite differences, symmetry, parity guard") {
    const Curve curve = Curve::from_roots({-3, -2, -1, 1, 2, 3});
    const PeriodSet p = compute_periods(curve, 1e-12);
    const auto evens = all_even_characteristics(2);
    const double h = 1e-4;
    for (size_t c = 0; c < evens.size(); c += 3) {
        const Characteristic& ch = evens[c];
        const CMatrix hess = theta_hessian_at_zero(ch, p.tau, 1e-12);
        CHECK(symmetry_defect(hess) == 0.0);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                Complex fd;
                if (i == j) {
                    CVector zp = CVector::Zero(2), zm = CVector::Zero(2);
                    zp[i] += h;
                    zm[i] -= h;
                    fd = (theta(ch, zp, p.tau, 1e-13).value -
                          2.0 * theta(ch, CVector::Zero(2), p.tau, 1e-13).value +
                          theta(ch, zm, p.tau, 1e-13).value) /
                         (h * h);
                } else {
                    CVector zpp = CVector::Zero(2), zpm = CVector::Zero(2),
                            zmp = CVector::Zero(2), zmm = CVector::Zero(2);
                    zpp[i] += h; zpp[j] += h;
                    zpm[i] += h; zpm[j] -= h;
                    zmp[i] -= h; zmp[j] += h;
                    zmm[i] -= h; zmm[j] -= h;
                    fd = (theta(ch, zpp, p.tau, 1e-13).value -
                          theta(ch, zpm, p.tau, 1e-13).value -
                          theta(ch, zmp, p.tau, 1e-13).value +
                          theta(ch, zmm, p.tau, 1e-13).value) /
                         (4.0 * h * h);
                }
                CHECK(std::abs(fd - hess(i, j)) < 1e-6);
            }
    }
    const Characteristic odd = make_char({1, 0}, {1, 0});
    REQUIRE(!odd.is_even());
    CHECK_THROWS_AS(theta_hessian_at_zero(odd, p.tau, 1e-10), validation_error);
}

TEST_CASE("directional_hessian: mock identity, column scaling, finite differences") {
    const Curve curve = Curve::from_roots({-3, -2, -1, 1, 2, 3});
    const PeriodSet p = compute_periods(curve, 1e-12);
    const Characteristic zero = Characteristic::zero(2);
    const CMatrix hess = theta_hessian_at_zero(zero, p.tau, 1e-12);

    PeriodSet mock = p;
    mock.inv_two_omega = CMatrix::Identity(2, 2);
    CHECK(max_abs(directional_hessian(zero, mock, 1e-12) - hess) == 0.0);

    mock.inv_two_omega = 2.0 * CMatrix::Identity(2, 2);
    CHECK(max_abs(directional_hessian(zero, mock, 1e-12) - 4.0 * hess) < 1e-12 * max_abs(hess));

    // finite differences of theta along the V_a directions
    const CMatrix dir = directional_hessian(zero, p, 1e-12);
    const double h = 1e-4;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
            const CVector va = p.inv_two_omega.col(a), vb = p.inv_two_omega.col(b);
            Complex fd;
            if (a == b) {
                fd = (theta(zero, CVector(h * va), p.tau, 1e-13).value -
                      2.0 * theta(zero, CVector::Zero(2), p.tau, 1e-13).value +
                      theta(zero, CVector(-h * va), p.tau, 1e-13).value) /
                     (h * h);
            } else {
                fd = (theta(zero, CVector(h * va + h * vb), p.tau, 1e-13).value -
                      theta(zero, CVector(h * va - h * vb), p.tau, 1e-13).value -
                      theta(zero, CVector(-h * va + h * vb), p.tau, 1e-13).value +
                      theta(zero, CVector(-h * va - h * vb), p.tau, 1e-13).value) /
                     (4.0 * h * h);
            }
            CHECK(std::abs(fd - dir(a, b)) < 1e-6);
        }
}

TEST_CASE("non-singular even census equals C(2g+1, g) for curve tau, g = 1..3") {
    std::mt19937_64 rng(31);
    auto census = [&](const Curve& curve, int expected) {
        const PeriodSet p = compute_periods(curve, 1e-12);
        const auto list = enumerate_nonsingular_even(p.tau, 1e-12, expected);
        CHECK(static_cast<int>(list.size()) == expected);
    };
    census(Curve::from_roots({-2, -1, 1, 2}), 3);
    census(Curve::from_roots({-3, -2, -1, 1, 2, 3}), 10);
    census(Curve::from_roots({-3.5, -2.4, -1.6, -0.5, 0.7, 1.3, 2.2, 3.1}), 35);

    // census mismatch is a diagnostic error
    const PeriodSet p = compute_periods(Curve::from_roots({-2, -1, 1, 2}), 1e-12);
    CHECK_THROWS_AS(enumerate_nonsingular_even(p.tau, 1e-12, 4), numeric_error);
}

TEST_CASE("quasi-periodicity: theta(z + e_k) = exp(2 pi i eps_k) theta(z)") {
    std::mt19937_64 rng(37);
    std::uniform_real_distribution<double> draw(-0.3, 0.3);
    const Curve curves[] = {Curve::from_roots({-2, -1, 1, 2}),
                            Curve::from_roots({-3, -2, -1, 1, 2, 3}),
                            Curve::from_roots({-3.5, -2.4, -1.6, -0.5, 0.7, 1.3, 2.2, 3.1})};
    for (const Curve& curve : curves) {
        const int g = curve.genus();
        const PeriodSet p = compute_periods(curve, 1e-12);
        const auto evens = all_even_characteristics(g);
        const Characteristic& ch = evens[evens.size() / 2];
        CVector z(g);
        for (int i = 0; i < g; ++i) z[i] = Complex(draw(rng), draw(rng));
        const Complex base = theta(ch, z, p.tau, 1e-12).value;
        for (int k = 0; k < g; ++k) {
            CVector shifted = z;
            shifted[k] += 1.0;
            const Complex factor = std::exp(Complex(0.0, M_PI) * double(ch.eps2[k]));
            const Complex moved = theta(ch, shifted, p.tau, 1e-12).value;
            CHECK(std::abs(moved - factor * base) < 1e-9 * std::max(1.0, std::abs(base)));
        }
    }
}

TEST_CASE("branch characteristics: rounding, base point, lattice sum") {
    const Curve curve = Curve::from_roots({-3, -2, -1, 1, 2, 3});
    const PeriodSet p = compute_periods(curve, 1e-12);
    const AbelDictionary dict = abel_dictionary(curve, p);

    CHECK(dict.base_index == 6);
    CHECK(branch_characteristic(curve, p, 6) == Characteristic::zero(2));
    for (int j = 1; j <= 6; ++j) CHECK(dict.residuals[j] < 1e-8);

    // the sum of all branch images is a full lattice point
    CVector total = CVector::Zero(2);
    for (int j = 1; j <= 6; ++j) total += dict.abel[j];
    const auto [total_char, res] = characteristic_from_vector(p, total);
    CHECK(res < 1e-8);
    CHECK(total_char == Characteristic::zero(2));

    CHECK_THROWS_AS(branch_characteristic(curve, p, 7), validation_error);
}

TEST_CASE("riemann constants at genus 1: the single odd branch image") {
    const Curve curve = Curve::from_roots({-2, -1, 1, 2});
    const PeriodSet p = compute_periods(curve, 1e-12);
    const AbelDictionary dict = abel_dictionary(curve, p);
    int odd_count = 0, odd_index = 0;
    for (int j = 1; j <= 4; ++j)
        if (!dict.chars[j].is_even()) {
            ++odd_count;
            odd_index = j;
        }
    CHECK(odd_count == 1);
    CHECK(max_abs(CMatrix(dict.riemann_constants - dict.abel[odd_index])) < 1e-12);
    CHECK(max_abs(CMatrix(riemann_constants(curve, p) - dict.riemann_constants)) == 0.0);
}

TEST_CASE("partition characteristics: paper example, distinctness, census match") {
    const Curve curve = Curve::from_roots({-3, -2, -1, 1, 2, 3});
    const PeriodSet p = compute_periods(curve, 1e-12);
    const AbelDictionary dict = abel_dictionary(curve, p);

    // {1,2,3} u {4,5,6} carries the characteristic labeled by the
    // complementary pair {4,5} (base 6): char(A_4 + A_5 + K).
    const Characteristic from_partition =
        partition_characteristic(curve, p, make_partition(2, {1, 2, 3}));
    const auto [from_pair, res] = characteristic_from_vector(
        p, CVector(dict.abel[4] + dict.abel[5] + dict.riemann_constants));
    CHECK(res < 1e-8);
    CHECK(from_partition == from_pair);

    // all 10 partition characteristics are distinct, even, and exactly the
    // non-singular even census
    std::set<unsigned> keys;
    for (const auto& part : enumerate_partitions(2)) {
        const Characteristic ch = partition_characteristic(curve, p, part);
        CHECK(ch.is_even());
        keys.insert(ch.key());
    }
    CHECK(keys.size() == 10);
    std::set<unsigned> census_keys;
    for (const auto& ch : enumerate_nonsingular_even(p.tau, 1e-12, 10))
        census_keys.insert(ch.key());
    CHECK(keys == census_keys);
}

TEST_CASE("partition characteristics survive a base-point change") {
    const Curve curve = Curve::from_roots({-3, -2, -1, 1, 2, 3});
    const PeriodSet p = compute_periods(curve, 1e-12);
    const AbelDictionary dict = abel_dictionary(curve, p, 5);  // base e_5 = 2g+1
    double max_even = 0.0;
    for (const auto& ch : all_even_characteristics(2))
        max_even = std::max(max_even, std::abs(theta(ch, CVector(), p.tau, 1e-10).value));
    std::set<unsigned> keys;
    for (const auto& part : enumerate_partitions(2)) {
        const Characteristic ch = partition_characteristic(p, dict, part, 1e-6 * max_even);
        CHECK(ch.is_even());
        keys.insert(ch.key());
    }
    CHECK(keys.size() == 10);
}
