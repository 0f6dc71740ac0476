#include "pdprobe/shifted_solver.hpp"

#include "pdprobe/errors.hpp"
#include "pdprobe/minres.hpp"

#include <cmath>
#include <limits>
#include <memory>
#include <utility>

namespace pdprobe {

std::string to_string(SolverBackend backend)
{
    return backend == SolverBackend::direct ? "direct" : "iterative";
}

SolverBackend solver_backend_from_string(const std::string& name)
{
    if (name == "direct")
        return SolverBackend::direct;
    if (name == "iterative")
        return SolverBackend::iterative;
    throw Error("unknown solver backend '" + name + "'");
}

void SolveConfig::validate() const
{
    if (!(rel_residual_tol > 0.0 && rel_residual_tol < 1.0))
        throw Error("solve tolerance must lie in (0, 1)");
    if (max_iterations && *max_iterations < 1)
        throw Error("solve iteration budget must be at least 1");
    if (dense_cap < 1)
        throw Error("dense cap must be positive");
}

LdltFactorization factorize_ldlt(const DenseSymmetricMatrix& m)
{
    return LdltFactorization(m.values());
}

namespace {

constexpr double eps = std::numeric_limits<double>::epsilon();
constexpr int max_refinement_steps = 3;
constexpr int max_restarts = 50;

// A solution with |op| |x| / |b| >= 1 / (n eps) only meets the rounding floor
// because |x| blew up: the operator is singular to working precision.
bool residual_ok(double res, double rhs_norm, double x_norm, double op_norm, Index n, double tol)
{
    const double n_eps = static_cast<double>(n) * eps;
    if (!(res <= std::max(tol * rhs_norm, n_eps * (op_norm * x_norm + rhs_norm))))
        return false;
    if (op_norm * x_norm * n_eps > rhs_norm)
        throw SingularOperatorError("solution norm exceeds 1 / (n eps) relative to the data; operator is singular to working precision");
    return true;
}

class DirectSolver
{
public:
    DirectSolver(Matrix m, double tol) :
        m_matrix(std::move(m)),
        m_norm(m_matrix.norm()),
        m_tol(tol),
        m_factor(m_matrix)
    {}

    Vector solve(const Vector& rhs) const
    {
        const double rhs_norm = rhs.norm();
        Vector x = m_factor.solve(rhs);
        double res = 0.0;
        for (int step = 0;; ++step)
        {
            if (!x.allFinite())
                throw SingularOperatorError("direct solve produced non-finite values");
            const Vector r = rhs - m_matrix.selfadjointView<Eigen::Lower>() * x;
            res = r.norm();
            if (residual_ok(res, rhs_norm, x.norm(), m_norm, m_matrix.rows(), m_tol))
                return x;
            if (step == max_refinement_steps)
                break;
            x += m_factor.solve(r);
        }
        throw NoConvergenceError("direct solve did not reach the residual target", res / rhs_norm);
    }

private:
    Matrix m_matrix;
    double m_norm;
    double m_tol;
    LdltFactorization m_factor;
};

Vector solve_iterative(const SymmetricOperator& op, const Vector& rhs, const SolveConfig& cfg)
{
    const Index n = op.dim();
    const double rhs_norm = rhs.norm();
    Vector x = Vector::Zero(n);
    if (rhs_norm == 0.0)
        return x;

    const Index budget = cfg.iteration_budget(n);
    Index used = 0;
    double op_norm = 0.0;
    bool breakdown = false;
    for (int restart = 0;; ++restart)
    {
        const Vector r = rhs - matvec(op, x);
        const double res = r.norm();
        if (residual_ok(res, rhs_norm, x.norm(), op_norm, n, cfg.rel_residual_tol))
            return x;
        if (breakdown)
            throw SingularOperatorError("MINRES breakdown without convergence; operator is singular to working precision");
        if (used >= budget || restart == max_restarts)
            throw NoConvergenceError("MINRES exhausted its iteration budget", res / rhs_norm);

        Vector dx;
        const double inner_tol = std::min(0.5, 0.5 * cfg.rel_residual_tol * rhs_norm / res);
        const MinresResult mr =
            minres<double>([&op](const Vector& v) { return matvec(op, v); }, r, dx, inner_tol, budget - used);
        used += std::max<Index>(mr.iterations, 1);
        op_norm = std::max(op_norm, mr.operator_norm);
        breakdown = mr.breakdown;
        x += dx;
        if (!x.allFinite())
            throw SingularOperatorError("MINRES produced non-finite iterates");
    }
}

bool use_direct(const SymmetricOperator& op, const SolveConfig& cfg)
{
    return cfg.backend == SolverBackend::direct && op.dim() <= cfg.dense_cap;
}

class InverseModel final : public SymmetricOperator::Model
{
public:
    InverseModel(SymmetricOperator op, SolveConfig cfg, std::shared_ptr<const DirectSolver> direct) :
        m_op(std::move(op)), m_cfg(std::move(cfg)), m_direct(std::move(direct))
    {}

    Index dim() const override { return m_op.dim(); }

    void apply(const Vector& x, Vector& y) const override
    {
        y = m_direct ? m_direct->solve(x) : solve_iterative(m_op, x, m_cfg);
    }

private:
    SymmetricOperator m_op;
    SolveConfig m_cfg;
    std::shared_ptr<const DirectSolver> m_direct;
};

std::shared_ptr<const DirectSolver> make_direct(const SymmetricOperator& op, const SolveConfig& cfg)
{
    if (!use_direct(op, cfg))
        return nullptr;
    auto m = op.materialize(cfg.dense_cap);
    if (!m)
        return nullptr;
    return std::make_shared<const DirectSolver>(std::move(*m), cfg.rel_residual_tol);
}

}  // namespace

Vector solve(const SymmetricOperator& op, const Vector& rhs, const SolveConfig& cfg)
{
    cfg.validate();
    if (rhs.size() != op.dim())
        throw DimensionError("solve: right-hand side has wrong length");
    if (!rhs.allFinite())
        throw OverflowError("solve: non-finite right-hand side");
    if (auto direct = make_direct(op, cfg))
        return direct->solve(rhs);
    return solve_iterative(op, rhs, cfg);
}

SymmetricOperator inverse_operator(const SymmetricOperator& op, const SolveConfig& cfg)
{
    cfg.validate();
    return SymmetricOperator(std::make_shared<InverseModel>(op, cfg, make_direct(op, cfg)));
}

}  // namespace pdprobe
