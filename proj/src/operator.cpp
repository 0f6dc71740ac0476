#include "pdprobe/operator.hpp"

#include "pdprobe/errors.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace pdprobe {

DenseSymmetricMatrix::DenseSymmetricMatrix(Matrix values, Index cap) :
    m_values(std::move(values))
{
    if (m_values.rows() != m_values.cols())
        throw DimensionError("dense symmetric matrix must be square");
    if (m_values.rows() < 1)
        throw DimensionError("dense symmetric matrix must have positive dimension");
    if (m_values.rows() > cap)
        throw DimensionError("dense dimension " + std::to_string(m_values.rows()) + " exceeds cap " +
                             std::to_string(cap));
    if (!m_values.allFinite())
        throw DimensionError("dense symmetric matrix has non-finite entries");
    for (Index j = 0; j < m_values.cols(); ++j)
        for (Index i = j + 1; i < m_values.rows(); ++i)
            if (m_values(i, j) != m_values(j, i))
                throw DimensionError("dense matrix is not exactly symmetric at (" + std::to_string(i) + ", " +
                                     std::to_string(j) + ")");
}

SparseSymmetricMatrix::SparseSymmetricMatrix(Storage csr) :
    m_csr(std::move(csr))
{
    if (m_csr.rows() != m_csr.cols())
        throw DimensionError("sparse symmetric matrix must be square");
    if (m_csr.rows() < 1)
        throw DimensionError("sparse symmetric matrix must have positive dimension");
    m_csr.makeCompressed();

    const Storage transposed = m_csr.transpose();
    if (transposed.nonZeros() != m_csr.nonZeros())
        throw DimensionError("sparse matrix pattern is not symmetric");
    for (Index r = 0; r < m_csr.outerSize(); ++r)
    {
        Storage::InnerIterator a(m_csr, r);
        Storage::InnerIterator b(transposed, r);
        for (; a && b; ++a, ++b)
        {
            if (a.col() != b.col())
                throw DimensionError("sparse matrix pattern is not symmetric in row " + std::to_string(r));
            if (a.value() != b.value())
                throw DimensionError("sparse matrix is not exactly symmetric at (" + std::to_string(r) + ", " +
                                     std::to_string(a.col()) + ")");
            if (!std::isfinite(a.value()))
                throw DimensionError("sparse matrix has non-finite entries");
        }
        if (a || b)
            throw DimensionError("sparse matrix pattern is not symmetric in row " + std::to_string(r));
    }
}

SparseSymmetricMatrix SparseSymmetricMatrix::from_triangle(Index n, const std::vector<Eigen::Triplet<double>>& entries)
{
    std::vector<Eigen::Triplet<double>> full;
    full.reserve(2 * entries.size());
    for (const auto& t : entries)
    {
        if (t.row() < 0 || t.row() >= n || t.col() < 0 || t.col() >= n)
            throw DimensionError("triplet index out of range");
        full.push_back(t);
        if (t.row() != t.col())
            full.emplace_back(t.col(), t.row(), t.value());
    }
    Storage csr(n, n);
    csr.setFromTriplets(full.begin(), full.end());
    return SparseSymmetricMatrix(std::move(csr));
}

SymmetricOperator::SymmetricOperator(std::shared_ptr<const Model> model) :
    m_model(std::move(model))
{
    if (!m_model)
        throw Error("null operator model");
}

Vector SymmetricOperator::operator*(const Vector& x) const
{
    return matvec(*this, x);
}

Vector matvec(const SymmetricOperator& op, const Vector& x)
{
    if (x.size() != op.dim())
        throw DimensionError("matvec: vector of length " + std::to_string(x.size()) + " for operator of dimension " +
                             std::to_string(op.dim()));
    if (!x.allFinite())
        throw OverflowError("matvec: non-finite input vector");
    Vector y(op.dim());
    op.model().apply(x, y);
    if (!y.allFinite())
        throw OverflowError("matvec: non-finite result");
    return y;
}

namespace {

class DenseModel final : public SymmetricOperator::Model
{
public:
    explicit DenseModel(DenseSymmetricMatrix m) : m_matrix(std::move(m)) {}
    Index dim() const override { return m_matrix.dim(); }
    void apply(const Vector& x, Vector& y) const override { y.noalias() = m_matrix.values() * x; }
    std::optional<Matrix> materialize(Index cap) const override
    {
        if (dim() > cap)
            return std::nullopt;
        return m_matrix.values();
    }

private:
    DenseSymmetricMatrix m_matrix;
};

class SparseModel final : public SymmetricOperator::Model
{
public:
    explicit SparseModel(SparseSymmetricMatrix m) : m_matrix(std::move(m)) {}
    Index dim() const override { return m_matrix.dim(); }
    void apply(const Vector& x, Vector& y) const override { y.noalias() = m_matrix.csr() * x; }
    std::optional<Matrix> materialize(Index cap) const override
    {
        if (dim() > cap)
            return std::nullopt;
        return m_matrix.to_dense();
    }

private:
    SparseSymmetricMatrix m_matrix;
};

class DiagonalModel final : public SymmetricOperator::Model
{
public:
    explicit DiagonalModel(Vector d) : m_diag(std::move(d)) {}
    Index dim() const override { return m_diag.size(); }
    void apply(const Vector& x, Vector& y) const override { y = m_diag.cwiseProduct(x); }
    std::optional<Matrix> materialize(Index cap) const override
    {
        if (dim() > cap)
            return std::nullopt;
        return Matrix(m_diag.asDiagonal());
    }

private:
    Vector m_diag;
};

class SquaredModel final : public SymmetricOperator::Model
{
public:
    explicit SquaredModel(SymmetricOperator op) : m_op(std::move(op)) {}
    Index dim() const override { return m_op.dim(); }
    void apply(const Vector& x, Vector& y) const override { y = matvec(m_op, matvec(m_op, x)); }
    std::optional<Matrix> materialize(Index cap) const override
    {
        auto m = m_op.materialize(cap);
        if (!m)
            return std::nullopt;
        return Matrix(*m * *m);
    }

private:
    SymmetricOperator m_op;
};

class ShiftedModel final : public SymmetricOperator::Model
{
public:
    ShiftedModel(SymmetricOperator op, double alpha, double beta) : m_op(std::move(op)), m_alpha(alpha), m_beta(beta) {}
    Index dim() const override { return m_op.dim(); }
    void apply(const Vector& x, Vector& y) const override
    {
        // beta == 0 must not touch the inner operator (it may be expensive or singular).
        if (m_beta == 0.0)
            y = m_alpha * x;
        else
            y = m_alpha * x + m_beta * matvec(m_op, x);
    }
    std::optional<Matrix> materialize(Index cap) const override
    {
        if (m_beta == 0.0)
        {
            if (dim() > cap)
                return std::nullopt;
            return Matrix(m_alpha * Matrix::Identity(dim(), dim()));
        }
        auto m = m_op.materialize(cap);
        if (!m)
            return std::nullopt;
        Matrix out = m_beta * *m;
        out.diagonal().array() += m_alpha;
        return out;
    }

private:
    SymmetricOperator m_op;
    double m_alpha;
    double m_beta;
};

class CountedModel final : public SymmetricOperator::Model
{
public:
    CountedModel(SymmetricOperator op, ApplicationCounter counter) : m_op(std::move(op)), m_counter(std::move(counter))
    {}
    Index dim() const override { return m_op.dim(); }
    void apply(const Vector& x, Vector& y) const override
    {
        m_counter.increment();
        y = matvec(m_op, x);
    }
    // Forming the dense matrix is not an application of the operator.
    std::optional<Matrix> materialize(Index cap) const override { return m_op.materialize(cap); }

private:
    SymmetricOperator m_op;
    ApplicationCounter m_counter;
};

}  // namespace

SymmetricOperator make_operator(DenseSymmetricMatrix m)
{
    return SymmetricOperator(std::make_shared<DenseModel>(std::move(m)));
}

SymmetricOperator make_operator(SparseSymmetricMatrix m)
{
    return SymmetricOperator(std::make_shared<SparseModel>(std::move(m)));
}

SymmetricOperator identity_operator(Index n)
{
    if (n < 1)
        throw DimensionError("identity operator needs positive dimension");
    return diagonal_operator(Vector::Ones(n));
}

SymmetricOperator diagonal_operator(const Vector& diag)
{
    if (diag.size() < 1)
        throw DimensionError("diagonal operator needs positive dimension");
    if (!diag.allFinite())
        throw DimensionError("diagonal operator has non-finite entries");
    return SymmetricOperator(std::make_shared<DiagonalModel>(diag));
}

SymmetricOperator squared(const SymmetricOperator& op)
{
    return SymmetricOperator(std::make_shared<SquaredModel>(op));
}

SymmetricOperator shifted(const SymmetricOperator& op, double alpha, double beta)
{
    if (!std::isfinite(alpha) || !std::isfinite(beta))
        throw OverflowError("shifted: non-finite coefficients");
    return SymmetricOperator(std::make_shared<ShiftedModel>(op, alpha, beta));
}

SymmetricOperator counted(const SymmetricOperator& op, const ApplicationCounter& counter)
{
    return SymmetricOperator(std::make_shared<CountedModel>(op, counter));
}

double quadratic_form(const SymmetricOperator& op, const Vector& b)
{
    return b.dot(matvec(op, b));
}

}  // namespace pdprobe
