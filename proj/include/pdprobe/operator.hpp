#ifndef PDPROBE_OPERATOR_HPP
#define PDPROBE_OPERATOR_HPP

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <atomic>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

namespace pdprobe {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Largest dimension for which dense storage and dense factorizations are used.
inline constexpr Index default_dense_cap = 2000;

/// Dense symmetric matrix with exactly mirrored entries.
class DenseSymmetricMatrix
{
public:
    /// Throws DimensionError when `values` is not square, not exactly symmetric,
    /// contains non-finite entries, or exceeds `cap`.
    explicit DenseSymmetricMatrix(Matrix values, Index cap = default_dense_cap);

    Index dim() const noexcept { return m_values.rows(); }
    const Matrix& values() const noexcept { return m_values; }
    double operator()(Index i, Index j) const { return m_values(i, j); }

private:
    Matrix m_values;
};

/// Sparse symmetric matrix in CSR form. Both triangles are stored so the
/// product is a plain row sweep.
class SparseSymmetricMatrix
{
public:
    using Storage = Eigen::SparseMatrix<double, Eigen::RowMajor>;

    /// Validates structural and numerical symmetry and finiteness.
    explicit SparseSymmetricMatrix(Storage csr);

    /// Builds the full pattern from entries of one triangle. Entries with
    /// i != j are mirrored; duplicates are summed.
    static SparseSymmetricMatrix from_triangle(Index n, const std::vector<Eigen::Triplet<double>>& entries);

    Index dim() const noexcept { return m_csr.rows(); }
    const Storage& csr() const noexcept { return m_csr; }
    Matrix to_dense() const { return Matrix(m_csr); }

private:
    Storage m_csr;
};

/// Type-erased symmetric linear map. Cheap to copy; the underlying model is
/// immutable and shared.
class SymmetricOperator
{
public:
    class Model
    {
    public:
        virtual ~Model() = default;
        virtual Index dim() const = 0;
        virtual void apply(const Vector& x, Vector& y) const = 0;
        /// Dense form of the operator if it can be formed without applying it
        /// column by column, and its dimension is at most `cap`.
        virtual std::optional<Matrix> materialize(Index /*cap*/) const { return std::nullopt; }
    };

    explicit SymmetricOperator(std::shared_ptr<const Model> model);

    Index dim() const { return m_model->dim(); }

    /// Same as matvec(*this, x).
    Vector operator*(const Vector& x) const;

    std::optional<Matrix> materialize(Index cap = default_dense_cap) const { return m_model->materialize(cap); }

    const Model& model() const noexcept { return *m_model; }

private:
    std::shared_ptr<const Model> m_model;
};

/// Applies `op` to `x`. Throws DimensionError on size mismatch and
/// OverflowError if `x` or the result is not finite.
Vector matvec(const SymmetricOperator& op, const Vector& x);

/// Shared, thread-safe count of operator applications.
class ApplicationCounter
{
public:
    ApplicationCounter() : m_count(std::make_shared<std::atomic<std::uint64_t>>(0)) {}

    std::uint64_t value() const noexcept { return m_count->load(); }
    void increment() const noexcept { m_count->fetch_add(1); }
    void reset() const noexcept { m_count->store(0); }

private:
    std::shared_ptr<std::atomic<std::uint64_t>> m_count;
};

SymmetricOperator make_operator(DenseSymmetricMatrix m);
SymmetricOperator make_operator(SparseSymmetricMatrix m);
SymmetricOperator identity_operator(Index n);
SymmetricOperator diagonal_operator(const Vector& diag);

/// x -> op(op(x)); never assembles the square.
SymmetricOperator squared(const SymmetricOperator& op);

/// x -> alpha * x + beta * op(x).
SymmetricOperator shifted(const SymmetricOperator& op, double alpha, double beta);

/// Wraps `op` so that every application increments `counter`.
SymmetricOperator counted(const SymmetricOperator& op, const ApplicationCounter& counter);

/// <b, op(b)>.
double quadratic_form(const SymmetricOperator& op, const Vector& b);

}  // namespace pdprobe

#endif  // PDPROBE_OPERATOR_HPP
