#ifndef PDPROBE_SHIFTED_SOLVER_HPP
#define PDPROBE_SHIFTED_SOLVER_HPP

#include "pdprobe/ldlt.hpp"
#include "pdprobe/operator.hpp"

#include <optional>
#include <string>

namespace pdprobe {

enum class SolverBackend
{
    iterative,  ///< MINRES, valid for indefinite operators.
    direct,     ///< Dense Bunch-Kaufman LDL^T; needs a materializable operator.
};

std::string to_string(SolverBackend backend);
SolverBackend solver_backend_from_string(const std::string& name);

struct SolveConfig
{
    double rel_residual_tol = 1e-10;
    /// Defaults to 10 * N when unset.
    std::optional<Index> max_iterations;
    SolverBackend backend = SolverBackend::direct;
    /// Operators larger than this are solved iteratively even when the direct
    /// backend is requested.
    Index dense_cap = default_dense_cap;

    /// Throws Error when a field is out of range.
    void validate() const;
    Index iteration_budget(Index n) const { return max_iterations.value_or(10 * n); }
};

using LdltFactorization = BunchKaufmanLdlt<double>;

/// Factorizes a dense symmetric matrix. Throws SingularOperatorError on a zero pivot.
LdltFactorization factorize_ldlt(const DenseSymmetricMatrix& m);

///
/// Solves op x = rhs.
///
/// On success |op x - rhs| <= rel_residual_tol * |rhs|, except where that
/// target lies under the rounding floor n * eps * (|op| |x| + |rhs|); then the
/// floor is the bound that is checked. Throws NoConvergenceError when the
/// budget runs out and SingularOperatorError on detected singularity.
///
Vector solve(const SymmetricOperator& op, const Vector& rhs, const SolveConfig& cfg = {});

/// x -> op^{-1} x. With the direct backend the factorization happens here,
/// so a singular operator is reported at construction.
SymmetricOperator inverse_operator(const SymmetricOperator& op, const SolveConfig& cfg = {});

}  // namespace pdprobe

#endif  // PDPROBE_SHIFTED_SOLVER_HPP
