#pragma once

#include <cstdint>
#include <vector>

#include <gmpxx.h>

#include "hyperkappa/curve.hpp"
#include "hyperkappa/partition.hpp"
#include "hyperkappa/types.hpp"

namespace hyperkappa {

/// The per-branch-pair right-hand side -F(e_i, e_j)/(e_i - e_j)^2.
/// The equivalent symmetric-function expansion
/// sum_{n=0}^{g} (e_i e_j)^n S_{2g-2n}^{(i,j)} (order-k elementary symmetric
/// functions of the remaining 2g branch points) is provided as a
/// cross-check; the quotient form is the primary definition.
/// i, j are 1-based indices into the sorted branch points, i != j.
Complex q_value(const Curve& curve, int i, int j);
Complex q_value_expansion(const Curve& curve, int i, int j);

/// The g(g+1)/2 x g(g+1)/2 system matrix for a partition: rows indexed by
/// unordered pairs {r,s} of I0 (lexicographic), columns by ordered index
/// pairs (i,j), i <= j (lexicographic); entry e_r^{i-1} e_s^{j-1} +
/// e_s^{i-1} e_r^{j-1} off the column diagonal, e_r^{i-1} e_s^{i-1} on it.
/// det M = Vandermonde(e_{i_1}, ..., e_{i_{g+1}})^{g-1}.
CMatrix m_matrix(const Curve& curve, const Partition& partition);

/// Solve M vec(Lambda) = Q for one partition; returns the symmetric g x g
/// matrix. Residual gate ||M x - Q|| < 1e-9 ||Q||.
CMatrix solve_partition_lambda(const Curve& curve, const Partition& partition);

struct LambdaMatrix {
    CMatrix matrix;         // numeric Lambda_g for the curve it was built on
    IMatrix coefficients;   // integer table C with Lambda_ij = C_ij lambda_{i+j}
    double extraction_residual = 0.0;
};

/// Sum of the per-partition solutions over all canonical partitions, with
/// the integer coefficients extracted entrywise (requires every
/// |lambda_{i+j}| > 1e-8; use a generic curve).
LambdaMatrix lambda_matrix(const Curve& curve, int threads = 1);

/// Numeric Lambda for any monic curve from an integer coefficient table.
CMatrix lambda_from_coefficients(const IMatrix& coefficients, const Curve& curve);

/// Exact-rational branch points, Vieta coefficients and per-partition data.
struct RationalCurve {
    std::vector<mpq_class> roots;   // e_1 < ... < e_{2g+2}
    std::vector<mpq_class> lambda;  // monic Vieta coefficients, lowest first
    int genus() const { return static_cast<int>(roots.size()) / 2 - 1; }
};

RationalCurve rational_curve_from_roots(std::vector<mpq_class> roots);

/// Seeded random integer branch points with all of lambda_2..lambda_2g
/// nonzero (so that coefficient extraction divides safely).
RationalCurve sample_rational_curve(int g, std::uint64_t seed);

std::vector<std::vector<mpq_class>> solve_partition_lambda_exact(const RationalCurve& curve,
                                                                 const Partition& partition);

mpq_class q_value_exact(const RationalCurve& curve, int i, int j);

/// Exact integer coefficient table: per-partition systems solved over the
/// rationals and summed; extraction residual is identically zero.
IMatrix lambda_table_exact(int g, std::uint64_t seed, int threads = 1);

/// Closed forms: (k-1)th anti-diagonal sum coefficient Sigma_{g;k}
/// (2 <= k <= 2g+2) and the first-row binomial C(2g+1-k, g-k) (1 <= k <= g)
/// with its row sum C(2g+1, g-1).
long long antidiagonal_sum_coefficient(int g, int k);
long long first_row_coefficient(int g, int k);
long long first_row_sum(int g);

/// Max relative residual of X^T Lambda X against the anti-diagonal-sum
/// polynomial sum_k Sigma_{g;k} lambda_k x^{k-2} at `samples` seeded points.
double verify_lemma_identity(const Curve& curve, const LambdaMatrix& lambda, int samples,
                             std::uint64_t seed = 20160624);

}  // namespace hyperkappa
