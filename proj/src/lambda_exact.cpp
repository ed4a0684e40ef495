#include "hyperkappa/lambda_exact.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "hyperkappa/parallel.hpp"

namespace hyperkappa {

Partition make_partition(int g, std::vector<int> i0) {
    const int n = 2 * g + 2;
    std::sort(i0.begin(), i0.end());
    if (static_cast<int>(i0.size()) != g + 1)
        throw validation_error("partition: I0 must have g+1 elements");
    for (size_t k = 0; k < i0.size(); ++k) {
        if (i0[k] < 1 || i0[k] > n - 1)
            throw validation_error("partition: indices must lie in 1..2g+1 (2g+2 belongs to J0)");
        if (k > 0 && i0[k] == i0[k - 1]) throw validation_error("partition: repeated index");
    }
    Partition p;
    p.i0 = std::move(i0);
    size_t pos = 0;
    for (int v = 1; v <= n; ++v) {
        if (pos < p.i0.size() && p.i0[pos] == v) { ++pos; continue; }
        p.j0.push_back(v);
    }
    return p;
}

std::vector<Partition> enumerate_partitions(int g) {
    if (g < 1 || g > 8) throw validation_error("enumerate_partitions: genus must lie in 1..8");
    std::vector<Partition> out;
    std::vector<int> pick(g + 1);
    for (int i = 0; i <= g; ++i) pick[i] = i + 1;
    while (true) {
        out.push_back(make_partition(g, pick));
        int i = g;
        while (i >= 0 && pick[i] == 2 * g + 1 - (g - i)) --i;
        if (i < 0) break;
        ++pick[i];
        for (int j = i + 1; j <= g; ++j) pick[j] = pick[j - 1] + 1;
    }
    return out;
}

namespace {

// Ordered column index pairs (i,j), 1 <= i <= j <= g, lexicographic.
std::vector<std::pair<int, int>> column_pairs(int g) {
    std::vector<std::pair<int, int>> cols;
    for (int i = 1; i <= g; ++i)
        for (int j = i; j <= g; ++j) cols.emplace_back(i, j);
    return cols;
}

// Unordered row pairs {r,s} from I0, lexicographic by position.
std::vector<std::pair<int, int>> row_pairs(const Partition& p) {
    std::vector<std::pair<int, int>> rows;
    for (size_t a = 0; a < p.i0.size(); ++a)
        for (size_t b = a + 1; b < p.i0.size(); ++b) rows.emplace_back(p.i0[a], p.i0[b]);
    return rows;
}

template <typename Scalar>
Scalar scalar_pow(const Scalar& base, int e) {
    Scalar r(1);
    for (int i = 0; i < e; ++i) r = r * base;
    return r;
}

// Kleinian 2-polar from a coefficient list (any scalar field).
template <typename Scalar>
Scalar polar_generic(const std::vector<Scalar>& lambda, int g, const Scalar& x, const Scalar& z) {
    Scalar sum = Scalar(2) * lambda[2 * g + 2] * scalar_pow(z, g + 1) * scalar_pow(x, g + 1);
    Scalar xz_pow(1);
    for (int k = 0; k <= g; ++k) {
        sum = sum + xz_pow * (Scalar(2) * lambda[2 * k] + (x + z) * lambda[2 * k + 1]);
        xz_pow = xz_pow * (x * z);
    }
    return sum;
}

template <typename Scalar>
std::vector<std::vector<Scalar>> build_system(const std::vector<Scalar>& roots_1based,
                                              const Partition& p, int g) {
    const auto rows = row_pairs(p);
    const auto cols = column_pairs(g);
    const size_t dim = rows.size();
    std::vector<std::vector<Scalar>> m(dim, std::vector<Scalar>(dim, Scalar(0)));
    for (size_t r = 0; r < dim; ++r) {
        const Scalar& er = roots_1based[rows[r].first];
        const Scalar& es = roots_1based[rows[r].second];
        for (size_t c = 0; c < dim; ++c) {
            const auto [i, j] = cols[c];
            if (i == j)
                m[r][c] = scalar_pow(er, i - 1) * scalar_pow(es, i - 1);
            else
                m[r][c] = scalar_pow(er, i - 1) * scalar_pow(es, j - 1) +
                          scalar_pow(es, i - 1) * scalar_pow(er, j - 1);
        }
    }
    return m;
}

}  // namespace

Complex q_value(const Curve& curve, int i, int j) {
    if (!curve.monic()) throw validation_error("q_value: monic curve required");
    const int n = 2 * curve.genus() + 2;
    if (i == j) throw validation_error("q_value: need two distinct branch indices");
    if (i < 1 || i > n || j < 1 || j > n) throw validation_error("q_value: index out of range");
    const Complex ei = curve.branch_points()[i - 1];
    const Complex ej = curve.branch_points()[j - 1];
    return -polar(curve, ei, ej) / ((ei - ej) * (ei - ej));
}

Complex q_value_expansion(const Curve& curve, int i, int j) {
    if (!curve.monic()) throw validation_error("q_value_expansion: monic curve required");
    const int g = curve.genus();
    const int n = 2 * g + 2;
    if (i == j) throw validation_error("q_value_expansion: need two distinct branch indices");
    const Complex ei = curve.branch_points()[i - 1];
    const Complex ej = curve.branch_points()[j - 1];
    std::vector<Complex> others;
    others.reserve(n - 2);
    for (int m = 1; m <= n; ++m)
        if (m != i && m != j) others.push_back(curve.branch_points()[m - 1]);
    Complex sum = 0.0, pw = 1.0;
    for (int order = 0; order <= g; ++order) {
        sum += pw * elementary_symmetric(others, 2 * g - 2 * order);
        pw *= ei * ej;
    }
    return sum;
}

CMatrix m_matrix(const Curve& curve, const Partition& partition) {
    const int g = curve.genus();
    if (partition.genus() != g) throw validation_error("m_matrix: partition size mismatch");
    std::vector<Complex> roots1(2 * g + 3);
    for (int m = 1; m <= 2 * g + 2; ++m) roots1[m] = curve.branch_points()[m - 1];
    const auto sys = build_system(roots1, partition, g);
    const size_t dim = sys.size();
    CMatrix m(dim, dim);
    for (size_t r = 0; r < dim; ++r)
        for (size_t c = 0; c < dim; ++c) m(r, c) = sys[r][c];
    return m;
}

CMatrix solve_partition_lambda(const Curve& curve, const Partition& partition) {
    const int g = curve.genus();
    const CMatrix m = m_matrix(curve, partition);
    const auto rows = row_pairs(partition);
    CVector q(rows.size());
    for (size_t r = 0; r < rows.size(); ++r) q[r] = q_value(curve, rows[r].first, rows[r].second);

    const CVector x = m.partialPivLu().solve(q);
    const double residual = (m * x - q).cwiseAbs().maxCoeff();
    if (residual > 1e-9 * std::max(1.0, q.cwiseAbs().maxCoeff()))
        throw numeric_error("solve_partition_lambda: ill-conditioned system (residual " +
                            std::to_string(residual) + ")");

    CMatrix lambda = CMatrix::Zero(g, g);
    const auto cols = column_pairs(g);
    for (size_t c = 0; c < cols.size(); ++c) {
        const auto [i, j] = cols[c];
        lambda(i - 1, j - 1) = x[c];
        lambda(j - 1, i - 1) = x[c];
    }
    return lambda;
}

LambdaMatrix lambda_matrix(const Curve& curve, int threads) {
    if (!curve.monic()) throw validation_error("lambda_matrix: monic curve required");
    const int g = curve.genus();
    const auto partitions = enumerate_partitions(g);
    std::vector<CMatrix> parts(partitions.size());
    parallel_for(static_cast<int>(partitions.size()), threads,
                 [&](int p) { parts[p] = solve_partition_lambda(curve, partitions[p]); });
    CMatrix sum = CMatrix::Zero(g, g);
    for (const auto& part : parts) sum += part;

    LambdaMatrix out;
    out.matrix = sum;
    out.coefficients = IMatrix::Zero(g, g);
    for (int i = 0; i < g; ++i)
        for (int j = 0; j < g; ++j) {
            const Complex lam = curve.coefficients()[i + j + 2];
            if (std::abs(lam) <= 1e-8)
                throw numeric_error(
                    "lambda_matrix: |lambda_" + std::to_string(i + j + 2) +
                    "| too small for coefficient extraction; rerun with a different curve");
            const Complex ratio = sum(i, j) / lam;
            const long long rounded = std::llround(ratio.real());
            out.coefficients(i, j) = rounded;
            out.extraction_residual =
                std::max(out.extraction_residual, std::abs(ratio - Complex(double(rounded))));
        }
    if (out.extraction_residual >= 1e-6)
        throw numeric_error("lambda_matrix: integer extraction residual too large (" +
                            std::to_string(out.extraction_residual) + ")");
    return out;
}

CMatrix lambda_from_coefficients(const IMatrix& coefficients, const Curve& curve) {
    const int g = curve.genus();
    if (coefficients.rows() != g || coefficients.cols() != g)
        throw validation_error("lambda_from_coefficients: size mismatch");
    CMatrix out(g, g);
    for (int i = 0; i < g; ++i)
        for (int j = 0; j < g; ++j)
            out(i, j) = double(coefficients(i, j)) * curve.coefficients()[i + j + 2];
    return out;
}

RationalCurve rational_curve_from_roots(std::vector<mpq_class> roots) {
    if (roots.size() < 4 || roots.size() % 2 != 0)
        throw validation_error("rational curve: need an even number >= 4 of roots");
    std::sort(roots.begin(), roots.end());
    for (size_t i = 1; i < roots.size(); ++i)
        if (roots[i] == roots[i - 1]) throw validation_error("rational curve: repeated root");
    std::vector<mpq_class> lambda{1};
    for (const mpq_class& e : roots) {
        lambda.push_back(0);
        for (size_t k = lambda.size() - 1; k >= 1; --k)
            lambda[k] = lambda[k - 1] - e * lambda[k];
        lambda[0] = -e * lambda[0];
    }
    return {std::move(roots), std::move(lambda)};
}

RationalCurve sample_rational_curve(int g, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const int n = 2 * g + 2;
    std::uniform_int_distribution<int> draw(-4 * g - 6, 4 * g + 6);
    for (int attempt = 0; attempt < 1000; ++attempt) {
        std::vector<int> pts;
        while (static_cast<int>(pts.size()) < n) {
            int v = draw(rng);
            if (std::find(pts.begin(), pts.end(), v) == pts.end()) pts.push_back(v);
        }
        std::vector<mpq_class> roots(pts.begin(), pts.end());
        RationalCurve curve = rational_curve_from_roots(std::move(roots));
        bool ok = true;
        for (int k = 2; k <= 2 * g && ok; ++k)
            if (curve.lambda[k] == 0) ok = false;
        if (ok) return curve;
    }
    throw numeric_error("sample_rational_curve: no generic integer curve found");
}

mpq_class q_value_exact(const RationalCurve& curve, int i, int j) {
    const int g = curve.genus();
    if (i == j) throw validation_error("q_value_exact: need two distinct branch indices");
    const mpq_class& ei = curve.roots[i - 1];
    const mpq_class& ej = curve.roots[j - 1];
    const mpq_class diff = ei - ej;
    mpq_class q = -polar_generic(curve.lambda, g, ei, ej) / (diff * diff);
    q.canonicalize();
    return q;
}

namespace {

// Gaussian elimination over the rationals with magnitude pivoting.
std::vector<mpq_class> solve_rational(std::vector<std::vector<mpq_class>> m,
                                      std::vector<mpq_class> rhs) {
    const size_t n = m.size();
    for (size_t col = 0; col < n; ++col) {
        size_t pivot = col;
        for (size_t r = col + 1; r < n; ++r)
            if (cmp(abs(m[r][col]), abs(m[pivot][col])) > 0) pivot = r;
        if (m[pivot][col] == 0) throw numeric_error("rational solve: singular system");
        std::swap(m[col], m[pivot]);
        std::swap(rhs[col], rhs[pivot]);
        for (size_t r = col + 1; r < n; ++r) {
            if (m[r][col] == 0) continue;
            const mpq_class factor = m[r][col] / m[col][col];
            for (size_t c = col; c < n; ++c) m[r][c] -= factor * m[col][c];
            rhs[r] -= factor * rhs[col];
        }
    }
    std::vector<mpq_class> x(n, 0);
    for (size_t r = n; r-- > 0;) {
        mpq_class acc = rhs[r];
        for (size_t c = r + 1; c < n; ++c) acc -= m[r][c] * x[c];
        x[r] = acc / m[r][r];
        x[r].canonicalize();
    }
    return x;
}

}  // namespace

std::vector<std::vector<mpq_class>> solve_partition_lambda_exact(const RationalCurve& curve,
                                                                 const Partition& partition) {
    const int g = curve.genus();
    if (partition.genus() != g)
        throw validation_error("solve_partition_lambda_exact: partition size mismatch");
    std::vector<mpq_class> roots1(2 * g + 3);
    for (int m = 1; m <= 2 * g + 2; ++m) roots1[m] = curve.roots[m - 1];
    auto sys = build_system(roots1, partition, g);
    const auto rows = row_pairs(partition);
    std::vector<mpq_class> q;
    q.reserve(rows.size());
    for (const auto& [r, s] : rows) q.push_back(q_value_exact(curve, r, s));
    const auto x = solve_rational(std::move(sys), std::move(q));

    std::vector<std::vector<mpq_class>> lambda(g, std::vector<mpq_class>(g, 0));
    const auto cols = column_pairs(g);
    for (size_t c = 0; c < cols.size(); ++c) {
        const auto [i, j] = cols[c];
        lambda[i - 1][j - 1] = x[c];
        lambda[j - 1][i - 1] = x[c];
    }
    return lambda;
}

IMatrix lambda_table_exact(int g, std::uint64_t seed, int threads) {
    const RationalCurve curve = sample_rational_curve(g, seed);
    const auto partitions = enumerate_partitions(g);
    std::vector<std::vector<std::vector<mpq_class>>> parts(partitions.size());
    parallel_for(static_cast<int>(partitions.size()), threads, [&](int p) {
        parts[p] = solve_partition_lambda_exact(curve, partitions[p]);
    });

    IMatrix table = IMatrix::Zero(g, g);
    for (int i = 0; i < g; ++i)
        for (int j = 0; j < g; ++j) {
            mpq_class sum = 0;
            for (const auto& part : parts) sum += part[i][j];
            mpq_class coeff = sum / curve.lambda[i + j + 2];
            coeff.canonicalize();
            if (coeff.get_den() != 1)
                throw numeric_error("lambda_table_exact: entry is not an integer multiple of the curve coefficient");
            if (!coeff.get_num().fits_slong_p())
                throw numeric_error("lambda_table_exact: coefficient overflow");
            table(i, j) = coeff.get_num().get_si();
        }
    return table;
}

long long antidiagonal_sum_coefficient(int g, int k) {
    if (k < 2 || k > 2 * g + 2)
        throw validation_error("antidiagonal_sum_coefficient: k out of range 2..2g+2");
    const long long n_g = binomial(2 * g + 1, g);
    // Sigma_{g;k} = N_g/(4g+2) [ k(2g+2-k)/2 + (2g+1)((-1)^k - 1)/4 ],
    // evaluated in integers over the common denominator 4(4g+2).
    const long long bracket4 = 2LL * k * (2 * g + 2 - k) + (2LL * g + 1) * (k % 2 == 0 ? 0 : -2);
    const long long num = n_g * bracket4;
    const long long den = 4LL * (4 * g + 2);
    if (num % den != 0) throw numeric_error("antidiagonal_sum_coefficient: not an integer");
    return num / den;
}

long long first_row_coefficient(int g, int k) {
    if (k < 1 || k > g) throw validation_error("first_row_coefficient: k out of range 1..g");
    return binomial(2 * g + 1 - k, g - k);
}

long long first_row_sum(int g) { return binomial(2 * g + 1, g - 1); }

double verify_lemma_identity(const Curve& curve, const LambdaMatrix& lambda, int samples,
                             std::uint64_t seed) {
    const int g = curve.genus();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> draw(-2.0, 2.0);
    double worst = 0.0;
    for (int s = 0; s < samples; ++s) {
        const Complex x(draw(rng), 0.0);
        CVector basis(g);
        for (int i = 0; i < g; ++i) basis[i] = i == 0 ? Complex(1.0) : std::pow(x, i);
        const Complex lhs = basis.transpose() * lambda.matrix * basis;
        Complex rhs = 0.0;
        for (int k = 2; k <= 2 * g; ++k)
            rhs += double(antidiagonal_sum_coefficient(g, k)) * curve.coefficients()[k] *
                   std::pow(x, k - 2);
        const double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
        worst = std::max(worst, std::abs(lhs - rhs) / scale);
    }
    return worst;
}

}  // namespace hyperkappa
