#ifndef PDPROBE_LDLT_HPP
#define PDPROBE_LDLT_HPP

#include "pdprobe/errors.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

namespace pdprobe {

/// Counts of positive, zero and negative eigenvalues.
struct Inertia
{
    Eigen::Index positive = 0;
    Eigen::Index zero = 0;
    Eigen::Index negative = 0;

    friend bool operator==(const Inertia&, const Inertia&) = default;
};

///
/// Symmetric indefinite factorization P^T A P = L D L^T with Bunch-Kaufman
/// partial pivoting. L is unit lower triangular, D is block diagonal with
/// 1x1 and 2x2 blocks, P is a symmetric permutation.
///
/// Only the lower triangle of the input is read. A pivot block whose
/// magnitude falls below n * eps * max|a_ij| is treated as a zero pivot and
/// raises SingularOperatorError.
///
template <typename Scalar>
class BunchKaufmanLdlt
{
public:
    using Index = Eigen::Index;
    using MatrixType = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    using VectorType = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

    explicit BunchKaufmanLdlt(const MatrixType& a) { compute(a); }

    Index dim() const noexcept { return m_l.rows(); }

    /// Unit lower-triangular factor.
    const MatrixType& matrix_l() const noexcept { return m_l; }

    /// Block-diagonal factor as a dense matrix.
    MatrixType matrix_d() const
    {
        const Index n = dim();
        MatrixType d = MatrixType::Zero(n, n);
        for (Index k = 0; k < n; ++k)
        {
            d(k, k) = m_diag[k];
            if (m_block[k] == 2)
                d(k + 1, k) = d(k, k + 1) = m_offdiag[k];
        }
        return d;
    }

    /// perm[i] is the row of A that sits at row i of P^T A P.
    const std::vector<Index>& permutation() const noexcept { return m_perm; }

    /// 1 at the start of a 1x1 block, 2 at the start of a 2x2 block, 0 at the
    /// second row of a 2x2 block.
    const std::vector<int>& block_sizes() const noexcept { return m_block; }

    /// P L D L^T P^T, for checking.
    MatrixType reconstruct() const
    {
        const MatrixType ldl = m_l * matrix_d() * m_l.transpose();
        const Index n = dim();
        MatrixType a(n, n);
        for (Index j = 0; j < n; ++j)
            for (Index i = 0; i < n; ++i)
                a(m_perm[i], m_perm[j]) = ldl(i, j);
        return a;
    }

    Inertia inertia() const
    {
        Inertia in;
        const Index n = dim();
        for (Index k = 0; k < n; ++k)
        {
            if (m_block[k] == 1)
            {
                count(in, m_diag[k]);
            }
            else if (m_block[k] == 2)
            {
                const Scalar a = m_diag[k], c = m_diag[k + 1], b = m_offdiag[k];
                const Scalar half_tr = (a + c) / 2;
                const Scalar rad = std::hypot((a - c) / 2, b);
                count(in, half_tr + rad);
                count(in, half_tr - rad);
            }
        }
        return in;
    }

    VectorType solve(const VectorType& b) const
    {
        const Index n = dim();
        if (b.size() != n)
            throw DimensionError("ldlt solve: right-hand side has wrong length");
        VectorType y(n);
        for (Index i = 0; i < n; ++i)
            y[i] = b[m_perm[i]];
        m_l.template triangularView<Eigen::UnitLower>().solveInPlace(y);
        for (Index k = 0; k < n; ++k)
        {
            if (m_block[k] == 1)
            {
                y[k] /= m_diag[k];
            }
            else if (m_block[k] == 2)
            {
                const Scalar a = m_diag[k], c = m_diag[k + 1], off = m_offdiag[k];
                const Scalar det = a * c - off * off;
                const Scalar y0 = y[k], y1 = y[k + 1];
                y[k] = (c * y0 - off * y1) / det;
                y[k + 1] = (a * y1 - off * y0) / det;
            }
        }
        m_l.transpose().template triangularView<Eigen::UnitUpper>().solveInPlace(y);
        VectorType x(n);
        for (Index i = 0; i < n; ++i)
            x[m_perm[i]] = y[i];
        return x;
    }

private:
    static void count(Inertia& in, Scalar v)
    {
        if (v > 0)
            ++in.positive;
        else if (v < 0)
            ++in.negative;
        else
            ++in.zero;
    }

    void compute(const MatrixType& a)
    {
        if (a.rows() != a.cols())
            throw DimensionError("ldlt: matrix must be square");
        const Index n = a.rows();
        MatrixType w = a.template selfadjointView<Eigen::Lower>();

        m_l = MatrixType::Identity(n, n);
        m_diag.assign(n, Scalar(0));
        m_offdiag.assign(n, Scalar(0));
        m_block.assign(n, 1);
        m_perm.resize(n);
        std::iota(m_perm.begin(), m_perm.end(), Index(0));
        if (n == 0)
            return;

        const Scalar alpha = (Scalar(1) + std::sqrt(Scalar(17))) / Scalar(8);
        const Scalar amax = w.cwiseAbs().maxCoeff();
        const Scalar tol = std::numeric_limits<Scalar>::epsilon() * Scalar(n) * amax;
        if (!(amax > 0))
            throw SingularOperatorError("ldlt: zero matrix");

        Index k = 0;
        while (k < n)
        {
            int kstep = 1;
            Index kp = k;
            const Scalar absakk = std::abs(w(k, k));
            Index imax = k;
            Scalar colmax = 0;
            if (k + 1 < n)
            {
                colmax = w.col(k).tail(n - k - 1).cwiseAbs().maxCoeff(&imax);
                imax += k + 1;
            }
            if (std::max(absakk, colmax) <= tol)
                throw SingularOperatorError("ldlt: zero pivot at step " + std::to_string(k));

            if (absakk < alpha * colmax)
            {
                Scalar rowmax = 0;
                for (Index j = k; j < n; ++j)
                    if (j != imax)
                        rowmax = std::max(rowmax, std::abs(w(imax, j)));

                if (absakk * rowmax >= alpha * colmax * colmax)
                {
                    kp = k;
                }
                else if (std::abs(w(imax, imax)) >= alpha * rowmax)
                {
                    kp = imax;
                }
                else
                {
                    kp = imax;
                    kstep = 2;
                }
            }

            const Index kk = k + kstep - 1;
            if (kp != kk)
                interchange(w, kk, kp, k);

            if (kstep == 1)
            {
                const Scalar d = w(k, k);
                if (std::abs(d) <= tol)
                    throw SingularOperatorError("ldlt: zero pivot at step " + std::to_string(k));
                m_diag[k] = d;
                const Index rest = n - k - 1;
                if (rest > 0)
                {
                    const VectorType c = w.col(k).tail(rest);
                    const VectorType l = c / d;
                    w.bottomRightCorner(rest, rest).noalias() -= l * c.transpose();
                    m_l.col(k).tail(rest) = l;
                }
            }
            else
            {
                const Scalar d11 = w(k, k), d21 = w(k + 1, k), d22 = w(k + 1, k + 1);
                const Scalar det = d11 * d22 - d21 * d21;
                const Scalar smallest = std::abs(det) / (std::abs((d11 + d22) / 2) + std::hypot((d11 - d22) / 2, d21));
                if (!(smallest > tol))
                    throw SingularOperatorError("ldlt: singular 2x2 pivot at step " + std::to_string(k));
                m_diag[k] = d11;
                m_diag[k + 1] = d22;
                m_offdiag[k] = d21;
                m_block[k] = 2;
                m_block[k + 1] = 0;
                const Index rest = n - k - 2;
                if (rest > 0)
                {
                    const MatrixType c = w.block(k + 2, k, rest, 2);
                    Eigen::Matrix<Scalar, 2, 2> dinv;
                    dinv << d22, -d21, -d21, d11;
                    dinv /= det;
                    const MatrixType l = c * dinv;
                    w.bottomRightCorner(rest, rest).noalias() -= l * c.transpose();
                    m_l.block(k + 2, k, rest, 2) = l;
                }
            }
            k += kstep;
        }
    }

    // Symmetric swap of rows/columns i and j of the active block starting at k,
    // plus the matching rows of the finished part of L.
    void interchange(MatrixType& w, Index i, Index j, Index k)
    {
        w.row(i).swap(w.row(j));
        w.col(i).swap(w.col(j));
        if (k > 0)
            m_l.row(i).head(k).swap(m_l.row(j).head(k));
        std::swap(m_perm[i], m_perm[j]);
    }

    MatrixType m_l;
    std::vector<Scalar> m_diag;
    std::vector<Scalar> m_offdiag;
    std::vector<int> m_block;
    std::vector<Index> m_perm;
};

}  // namespace pdprobe

#endif  // PDPROBE_LDLT_HPP
