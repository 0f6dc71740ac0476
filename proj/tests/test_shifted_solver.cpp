#include "doctest.h"
#include "support.hpp"

#include "pdprobe/errors.hpp"
#include "pdprobe/ldlt.hpp"
#include "pdprobe/minres.hpp"
#include "pdprobe/oracle.hpp"
#include "pdprobe/shifted_solver.hpp"

#include <Eigen/Cholesky>
#include <Eigen/LU>

#include <cmath>

using namespace pdprobe;
using pdtest::random_symmetric;
using pdtest::random_vector;

namespace {

SolveConfig with_backend(SolverBackend backend)
{
    SolveConfig cfg;
    cfg.backend = backend;
    return cfg;
}

const SolverBackend backends[] = {SolverBackend::direct, SolverBackend::iterative};

double residual(const SymmetricOperator& op, const Vector& x, const Vector& b)
{
    return (matvec(op, x) - b).norm() / b.norm();
}

// Sign counts of eigenvalues from Eigen's own symmetric eigensolver.
Inertia reference_inertia(const Matrix& m)
{
    Inertia in;
    for (const double l : pdtest::reference_eigenvalues(m))
        (l > 0 ? in.positive : (l < 0 ? in.negative : in.zero))++;
    return in;
}

}  // namespace

TEST_CASE("solve on trivial operators")
{
    for (const SolverBackend be : backends)
    {
        CAPTURE(to_string(be));
        const SolveConfig cfg = with_backend(be);
        CHECK((solve(identity_operator(2), Vector{{1.0, 2.0}}, cfg) - Vector{{1.0, 2.0}}).norm() <= 1e-14);
        CHECK((solve(diagonal_operator(Vector{{2.0, 4.0}}), Vector{{2.0, 4.0}}, cfg) - Vector::Ones(2)).norm() <=
              1e-14);
        CHECK(solve(identity_operator(3), Vector::Zero(3), cfg) == Vector::Zero(3));
    }
}

TEST_CASE("solve matches a dense oracle on SPD input")
{
    for (std::uint64_t seed = 1; seed <= 5; ++seed)
    {
        const GeneratedMatrix g = generate_spd(50, 1e3, seed);
        const Vector b = random_vector(50, seed + 100);
        const Vector ref = g.matrix.values().ldlt().solve(b);
        for (const SolverBackend be : backends)
        {
            CAPTURE(to_string(be));
            const Vector x = solve(make_operator(g.matrix), b, with_backend(be));
            CHECK(pdtest::rel_diff(x, ref) <= 1e-8);
        }
    }
}

TEST_CASE("residual contract")
{
    for (std::uint64_t seed = 1; seed <= 6; ++seed)
    {
        const GeneratedMatrix g = seed % 2 ? generate_spd(60, 1e4, seed) : generate_indefinite(60, 1e4, seed, 20);
        const SymmetricOperator op = make_operator(g.matrix);
        const Vector b = random_vector(60, seed);
        for (const SolverBackend be : backends)
        {
            CAPTURE(to_string(be));
            CHECK(residual(op, solve(op, b, with_backend(be)), b) <= 1e-10);
        }
    }
}

TEST_CASE("residual holds at the rounding floor for ill-conditioned input")
{
    const GeneratedMatrix g = generate_spd(40, 1e8, 3);
    const SymmetricOperator op = make_operator(g.matrix);
    const Vector b = random_vector(40, 4);
    const Vector x = solve(op, b);
    const double floor = 40 * std::numeric_limits<double>::epsilon() * (g.matrix.values().norm() * x.norm() + b.norm());
    CHECK((matvec(op, x) - b).norm() <= std::max(1e-10 * b.norm(), floor));
}

TEST_CASE("backends agree")
{
    for (const Index n : {5, 40, 120, 200})
    {
        const Matrix m = random_symmetric(n, 300 + n) + 3.0 * std::sqrt(static_cast<double>(n)) * Matrix::Identity(n, n);
        const SymmetricOperator op = make_operator(DenseSymmetricMatrix(m));
        const Vector b = random_vector(n, 400 + n);
        const Vector xd = solve(op, b, with_backend(SolverBackend::direct));
        const Vector xi = solve(op, b, with_backend(SolverBackend::iterative));
        CHECK(pdtest::rel_diff(xi, xd) <= 1e-6);
    }
}

TEST_CASE("sparse operators fall back to the iterative path when too large")
{
    std::vector<Eigen::Triplet<double>> t;
    const Index n = 300;
    for (Index i = 0; i < n; ++i)
    {
        t.emplace_back(i, i, 4.0);
        if (i > 0)
            t.emplace_back(i, i - 1, -1.0);
    }
    const SymmetricOperator op = make_operator(SparseSymmetricMatrix::from_triangle(n, t));
    SolveConfig cfg;
    cfg.dense_cap = 100;
    const Vector b = random_vector(n, 5);
    CHECK(residual(op, solve(op, b, cfg), b) <= 1e-10);
}

TEST_CASE("inverse operator")
{
    for (const SolverBackend be : backends)
    {
        const SolveConfig cfg = with_backend(be);
        const SymmetricOperator inv_i = inverse_operator(identity_operator(3), cfg);
        CHECK((matvec(inv_i, Vector{{1.0, 2.0, 3.0}}) - Vector{{1.0, 2.0, 3.0}}).norm() <= 1e-14);
        const SymmetricOperator inv_d = inverse_operator(diagonal_operator(Vector{{2.0, 0.5}}), cfg);
        CHECK((matvec(inv_d, Vector::Ones(2)) - Vector{{0.5, 2.0}}).norm() <= 1e-14);

        for (std::uint64_t seed = 1; seed <= 3; ++seed)
        {
            const GeneratedMatrix g = generate_spd(30, 1e2, seed);
            const SymmetricOperator op = make_operator(g.matrix);
            const SymmetricOperator inv = inverse_operator(op, cfg);
            const Vector x = random_vector(30, seed);
            CHECK((matvec(inv, matvec(op, x)) - x).norm() <= 1e-8 * x.norm());

            double worst = 0.0;
            for (int p = 0; p < 20; ++p)
            {
                const Vector u = random_vector(30, 1000 + 2 * p), v = random_vector(30, 1001 + 2 * p);
                const double gap = std::abs(matvec(inv, u).dot(v) - u.dot(matvec(inv, v)));
                worst = std::max(worst, gap / (u.norm() * v.norm() * 1e2));
            }
            CHECK(worst <= 1e-10);
        }
    }
}

TEST_CASE("singular operators are reported")
{
    const SymmetricOperator zero_diag = diagonal_operator(Vector{{1.0, 0.0, 2.0}});
    CHECK_THROWS_AS(inverse_operator(zero_diag), SingularOperatorError);
    CHECK_THROWS_AS(solve(zero_diag, Vector::Ones(3)), SingularOperatorError);

    // rank one, iterative: Krylov space collapses.
    const Vector u = Vector::Ones(4).normalized();
    const SymmetricOperator rank1 = make_operator(DenseSymmetricMatrix(u * u.transpose()));
    CHECK_THROWS_AS(solve(rank1, Vector::Unit(4, 0), with_backend(SolverBackend::iterative)), SingularOperatorError);
}

TEST_CASE("iteration budget")
{
    const GeneratedMatrix g = generate_spd(100, 1e6, 8);
    SolveConfig cfg = with_backend(SolverBackend::iterative);
    cfg.max_iterations = 3;
    CHECK_THROWS_AS(solve(make_operator(g.matrix), random_vector(100, 1), cfg), NoConvergenceError);
    try
    {
        solve(make_operator(g.matrix), random_vector(100, 1), cfg);
    }
    catch (const NoConvergenceError& e)
    {
        CHECK(e.relative_residual() > 1e-10);
    }
}

TEST_CASE("solve config validation")
{
    SolveConfig cfg;
    cfg.rel_residual_tol = 0.0;
    CHECK_THROWS_AS(cfg.validate(), Error);
    cfg.rel_residual_tol = 1.0;
    CHECK_THROWS_AS(cfg.validate(), Error);
    cfg = {};
    cfg.max_iterations = 0;
    CHECK_THROWS_AS(cfg.validate(), Error);
    CHECK(SolveConfig{}.iteration_budget(7) == 70);
    CHECK(solver_backend_from_string("iterative") == SolverBackend::iterative);
    CHECK(to_string(SolverBackend::direct) == "direct");
    CHECK_THROWS_AS(solver_backend_from_string("cholesky"), Error);
}

TEST_CASE("ldlt of the identity")
{
    const LdltFactorization f = factorize_ldlt(DenseSymmetricMatrix(Matrix::Identity(4, 4)));
    CHECK(f.matrix_l() == Matrix::Identity(4, 4));
    CHECK(f.matrix_d() == Matrix::Identity(4, 4));
    CHECK(f.inertia() == Inertia{4, 0, 0});
}

TEST_CASE("ldlt inertia of a diagonal")
{
    const LdltFactorization f = factorize_ldlt(DenseSymmetricMatrix(Matrix{{4.0, 0.0}, {0.0, -9.0}}));
    CHECK(f.inertia() == Inertia{1, 0, 1});
}

TEST_CASE("ldlt needs a 2x2 pivot for a zero diagonal")
{
    const LdltFactorization f = factorize_ldlt(DenseSymmetricMatrix(Matrix{{0.0, 1.0}, {1.0, 0.0}}));
    CHECK(f.block_sizes()[0] == 2);
    CHECK(f.inertia() == Inertia{1, 0, 1});
    CHECK((f.solve(Vector{{2.0, 3.0}}) - Vector{{3.0, 2.0}}).norm() <= 1e-15);
}

TEST_CASE("ldlt reconstruction, solve and inertia on random input")
{
    for (std::uint64_t seed = 1; seed <= 20; ++seed)
    {
        const Index n = 5 + static_cast<Index>(seed * 7 % 60);
        const Matrix m = random_symmetric(n, seed);
        const LdltFactorization f = factorize_ldlt(DenseSymmetricMatrix(m));
        CHECK((f.reconstruct() - m).norm() <= 1e-8 * m.norm());
        CHECK((f.matrix_l().diagonal().array() == 1.0).all());
        CHECK(f.inertia() == reference_inertia(m));
        const Vector b = random_vector(n, seed + 50);
        const Vector ref = m.partialPivLu().solve(b);
        CHECK(pdtest::rel_diff(f.solve(b), ref) <= 1e-8);
    }
}

TEST_CASE("ldlt inertia against the Jacobi oracle")
{
    for (std::uint64_t seed = 1; seed <= 10; ++seed)
    {
        const Matrix m = random_symmetric(30, 500 + seed);
        const Vector eig = jacobi_eigenvalues(m);
        const Inertia in = factorize_ldlt(DenseSymmetricMatrix(m)).inertia();
        CHECK(in.positive == (eig.array() > 0).count());
        CHECK(in.negative == (eig.array() < 0).count());
    }
}

TEST_CASE("ldlt singular matrices")
{
    CHECK_THROWS_AS(factorize_ldlt(DenseSymmetricMatrix(Matrix::Zero(3, 3))), SingularOperatorError);
    const Vector u = Vector{{1.0, 2.0, 3.0}};
    CHECK_THROWS_AS(factorize_ldlt(DenseSymmetricMatrix(u * u.transpose())), SingularOperatorError);
}

TEST_CASE("minres on an indefinite system")
{
    const GeneratedMatrix g = generate_indefinite(80, 50.0, 12, 30);
    const Matrix& m = g.matrix.values();
    const Vector b = random_vector(80, 13);
    Vector x;
    const MinresResult r = minres<double>([&](const Vector& v) -> Vector { return m * v; }, b, x, 1e-12, 1000);
    CHECK_FALSE(r.breakdown);
    CHECK(r.estimated_relative_residual <= 1e-12);
    CHECK((m * x - b).norm() <= 1e-9 * b.norm());
    CHECK(r.iterations <= 4 * 80);
}
