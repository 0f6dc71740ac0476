#include "doctest.h"
#include "support.hpp"

#include "pdprobe/certifier.hpp"
#include "pdprobe/errors.hpp"
#include "pdprobe/oracle.hpp"
#include "pdprobe/report.hpp"

#include <cmath>

using namespace pdprobe;

namespace {

Vector ascending(const Matrix& m)
{
    return pdtest::reference_eigenvalues(m);
}

// Eigenvalues of an operator that can only be applied, via its columns.
Matrix columns_of(const SymmetricOperator& op)
{
    const Index n = op.dim();
    Matrix m(n, n);
    for (Index j = 0; j < n; ++j)
        m.col(j) = matvec(op, Vector::Unit(n, j));
    return 0.5 * (m + m.transpose());
}

}  // namespace

TEST_CASE("default probability budget")
{
    const ProbabilityBudget b;
    CHECK(b.is_default());
    CHECK_NOTHROW(b.validate());
    CHECK(b.delta_0() <= b.delta_0_bound);
    CHECK(b.rho() == doctest::Approx((1.0 - 1e-6) / (1.0 - 1e-9)).epsilon(1e-15));
    CHECK(b.rho() > 0.0);
    CHECK(b.rho() < 1.0);
    for (const Index j : {1, 2, 10, 1000, 1000000})
    {
        const double d = b.delta_tilde(j);
        CHECK(d > 0.0);
        CHECK(d < 1.0);
        CHECK(d == doctest::Approx(1.0 - std::pow(b.rho(), 1.0 / static_cast<double>(j))).epsilon(1e-6));
    }
    CHECK_THROWS_AS(b.delta_tilde(0), Error);
}

TEST_CASE("per-probe failure bound holds for every J up to a million")
{
    const ProbabilityBudget b;
    Index violations = 0;
    for (Index j = 1; j <= 1000000; ++j)
        if (!(std::log10(1.0 / b.delta_tilde(j)) < 7.0 + std::log10(static_cast<double>(j))))
            ++violations;
    CHECK(violations == 0);
}

TEST_CASE("overridden budget")
{
    const ProbabilityBudget b = ProbabilityBudget::with_overrides(1e-3, 0.99);
    CHECK_FALSE(b.is_default());
    CHECK(b.delta_0_bound == doctest::Approx(1.0 - (1.0 - 1e-3) * (1.0 - 1e-3)).epsilon(1e-12));
    CHECK(bound_iteration_count(100, b) == iteration_count_bound(1e-3, 100));
    CHECK(probe_iteration_count(100, 5, b) == iteration_count_bound(b.delta_tilde(5), 100));
    CHECK(bound_iteration_count(100, b) < bound_iteration_count(100));

    const ProbabilityBudget same = ProbabilityBudget::with_overrides(4e-10, 0.99);
    CHECK(same.delta_0_bound == 1e-9);

    CHECK_THROWS_AS(ProbabilityBudget::with_overrides(0.0, 0.9), Error);
    CHECK_THROWS_AS(ProbabilityBudget::with_overrides(0.1, 1.0), Error);
    CHECK_THROWS_AS(ProbabilityBudget::with_overrides(0.1, 0.95), Error);
}

TEST_CASE("bisection schedule")
{
    const BisectionSchedule ten = bisection_schedule_for_ratio(10.0);
    CHECK(ten.steps == 4);
    CHECK(ten.mus == std::vector<double>{2.0, 1.5, 1.25, 1.125});

    const BisectionSchedule two = bisection_schedule_for_ratio(2.0);
    CHECK(two.steps == 1);
    CHECK(two.mus == std::vector<double>{2.0});

    CHECK(bisection_schedule_for_ratio(1.0).steps == 1);
    CHECK(bisection_schedule_for_ratio(0.5).steps == 1);
    CHECK_THROWS_AS(bisection_schedule_for_ratio(0.0), Error);

    RngState rng(3);
    for (int i = 0; i < 100; ++i)
    {
        const double r = std::pow(10.0, 9.0 * rng.uniform());
        const BisectionSchedule s = bisection_schedule_for_ratio(r);
        CHECK(1.0 + std::ldexp(1.0, -static_cast<int>(s.steps)) <= 1.0 + 1.0 / r);
        CHECK(static_cast<Index>(s.mus.size()) == s.steps);
        for (std::size_t j = 0; j < s.mus.size(); ++j)
        {
            CHECK(s.mus[j] > 1.0);
            CHECK(s.mus[j] <= 2.0);
            if (j > 0)
                CHECK(s.mus[j] < s.mus[j - 1]);
        }
    }

    SpectrumBounds b;
    b.mu_lo = 0.1;
    b.mu_hi = 1.0;
    CHECK(bisection_schedule(b).steps == 4);
}

TEST_CASE("probe iteration counts")
{
    CHECK(bisection_iteration_count(1000000000, 4) == 70);
    CHECK(bisection_iteration_count(10, 1) == 44);
    CHECK_THROWS_AS(bisection_iteration_count(10, 0), Error);

    const ProbabilityBudget b;
    for (Index n = 10; n <= 1000000000; n *= 10)
        for (Index j = 1; j <= 10000; j = j < 10 ? j + 1 : j * 3)
            CHECK(bisection_iteration_count(n, j) >= iteration_count_bound(b.delta_tilde(j), n));
}

TEST_CASE("iteration counts cover the exact requirement")
{
    const ProbabilityBudget b;
    for (Index n = 1; n <= 1000000000; n = n * 3 + 1)
    {
        CHECK(bound_iteration_count(n) >= iteration_count(0.4, b.delta_kappa, n));
        for (const Index j : {1, 4, 20, 200})
            CHECK(probe_iteration_count(n, j) >= iteration_count(0.4, b.delta_tilde(j), n));
    }
    CHECK(bound_iteration_count(100) == 60);
    CHECK(bound_iteration_count(1000000000) == 81);
}

TEST_CASE("auxiliary matrix")
{
    const Vector x = pdtest::random_vector(3, 1);
    CHECK(matvec(build_auxiliary(diagonal_operator(Vector::Constant(3, 4.0)), 4.0), x).norm() == 0.0);
    const Vector m = matvec(build_auxiliary(diagonal_operator(Vector{{1.0, 10.0}}), 12.0), Vector::Ones(2));
    CHECK(m(0) == doctest::Approx(11.0 / 12.0).epsilon(1e-15));
    CHECK(m(1) == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
    CHECK_THROWS_AS(build_auxiliary(identity_operator(2), 0.0), Error);
}

TEST_CASE("auxiliary spectrum splits around one")
{
    for (std::uint64_t seed = 1; seed <= 20; ++seed)
    {
        const GeneratedMatrix g = seed % 2 ? generate_spd(25, 1e3, seed) : generate_indefinite(25, 1e3, seed, 6);
        const SymmetricOperator a = make_operator(g.matrix);
        RngState rng(derive_seed(seed, 1));
        const SpectrumBounds b = estimate_bounds(a, {}, rng, 57);
        const Vector mags = g.true_spectrum.cwiseAbs();
        REQUIRE(b.mu_lo < mags.minCoeff());
        REQUIRE(mags.maxCoeff() < b.mu_hi);
        const double gap = b.mu_lo / b.mu_hi;
        for (const double l : ascending(*build_auxiliary(a, b.mu_hi).materialize()))
        {
            CHECK(l > 0.0);
            CHECK(l < 2.0);
            CHECK((l <= 1.0 - gap + 1e-12 || l >= 1.0 + gap - 1e-12));
        }
    }
}

TEST_CASE("probe on a diagonal")
{
    const SymmetricOperator a = diagonal_operator(Vector{{0.9, 0.5}});
    const SymmetricOperator z = probe_operator(a, ProbeShift{1.0, 1.5}, {});
    const Vector d = matvec(z, Vector::Ones(2));
    CHECK(d(0) == doctest::Approx(0.5 / 1.4).epsilon(1e-14));
    CHECK(d(1) == doctest::Approx(0.5).epsilon(1e-14));

    for (std::uint64_t seed = 1; seed <= 20; ++seed)
    {
        RngState rng(seed);
        const PowerIterResult r = probe_step(a, 1.0, 1.5, rng, 20, {});
        CHECK(r.lambda_tilde <= 0.5 + 1e-14);
        CHECK(r.lambda_tilde < 1.0);
    }
}

TEST_CASE("probe detects an eigenvalue of M above one")
{
    // M = I - A has eigenvalues 1.2, 0.5, 0.1; Z at mu = 2 has 1.25.
    const SymmetricOperator a = diagonal_operator(Vector{{-0.2, 0.5, 0.9}});
    const Vector z = ascending(columns_of(probe_operator(a, ProbeShift{1.0, 2.0}, {})));
    CHECK(z(2) == doctest::Approx(1.25).epsilon(1e-13));
    for (std::uint64_t seed = 1; seed <= 20; ++seed)
    {
        RngState rng(seed);
        CHECK(probe_step(a, 1.0, 2.0, rng, 44, {}).lambda_tilde >= 1.0);
    }
}

TEST_CASE("probe solves are counted")
{
    const ApplicationCounter solves;
    RngState rng(1);
    probe_step(identity_operator(4), 2.0, 1.5, rng, 9, {}, &solves);
    CHECK(solves.value() == 10);
}

TEST_CASE("probe argument checks")
{
    RngState rng(1);
    CHECK_THROWS_AS(probe_step(identity_operator(2), 1.0, 1.0, rng, 3, {}), Error);
    CHECK_THROWS_AS(probe_step(identity_operator(2), 1.0, 2.5, rng, 3, {}), Error);
    CHECK_THROWS_AS(probe_step(identity_operator(2), 1.0, 1.5, rng, 0, {}), Error);
    CHECK_THROWS_AS(probe_step(identity_operator(2), 0.0, 1.5, rng, 3, {}), Error);
}

TEST_CASE("eigenvalue map of the probe operator")
{
    for (std::uint64_t seed = 1; seed <= 10; ++seed)
    {
        const GeneratedMatrix g = generate_indefinite(20, 1e2, seed, 4);
        const SymmetricOperator a = make_operator(g.matrix);
        const double mu_hi = 1.3 * g.true_spectrum.cwiseAbs().maxCoeff();
        const Vector m = ascending(*build_auxiliary(a, mu_hi).materialize());
        for (const double mu : {1.1, 1.5, 2.0})
        {
            const Vector z = ascending(columns_of(probe_operator(a, ProbeShift{mu_hi, mu}, {})));
            Vector expect = ((mu - 1.0) / (mu - m.array())).matrix();
            std::sort(expect.data(), expect.data() + expect.size());
            CHECK(((z - expect).array().abs() / expect.array().abs()).maxCoeff() <= 1e-8);
        }
    }
}

TEST_CASE("verify certificate")
{
    CHECK(verify_certificate(shifted(identity_operator(3), 0.0, -1.0), Vector::Ones(3).normalized()) ==
          doctest::Approx(-1.0).epsilon(1e-15));
    const SymmetricOperator d = diagonal_operator(Vector{{1.0, -1.0}});
    CHECK(verify_certificate(d, Vector::Unit(2, 1)) == -1.0);
    CHECK(verify_certificate(d, Vector::Ones(2) / std::sqrt(2.0)) <= 0.0);
}

TEST_CASE("refinement keeps a valid certificate")
{
    const SymmetricOperator a = diagonal_operator(Vector{{-1.0, 2.0}});
    const RefinedCertificate r = refine_certificate(a, Vector::Unit(2, 0), ProbeShift{3.0, 2.0}, {}, 10);
    CHECK(r.verified);
    CHECK(r.rounds == 0);
    CHECK(r.b == Vector::Unit(2, 0));
}

TEST_CASE("refinement finds a tiny negative direction")
{
    const Index n = 10;
    Vector diag = Vector::Ones(n);
    diag(0) = -1e-3;
    const SymmetricOperator a = diagonal_operator(diag);
    Vector b = Vector::Ones(n);
    b(0) = 0.05;
    b.normalize();
    REQUIRE(verify_certificate(a, b) > 0.0);

    const RefinedCertificate r = refine_certificate(a, b, ProbeShift{1.2, 1.0 + std::ldexp(1.0, -10)}, {}, 50);
    CHECK(r.verified);
    CHECK(r.quadratic_form < 0.0);
    CHECK(r.rounds >= 1);
    CHECK(std::abs(r.b(0)) > 0.99);
    for (std::size_t i = 1; i < r.accepted_forms.size(); ++i)
        CHECK(r.accepted_forms[i] < r.accepted_forms[i - 1]);
    CHECK(r.accepted_forms.back() == r.quadratic_form);
}

TEST_CASE("refinement gives up on a definite matrix")
{
    const RefinedCertificate r =
        refine_certificate(identity_operator(3), Vector::Unit(3, 0), ProbeShift{1.5, 1.5}, {}, 5);
    CHECK_FALSE(r.verified);
    CHECK(r.quadratic_form > 0.0);
    CHECK(r.rounds == 5);
}

TEST_CASE("outcome names")
{
    for (const Outcome o : {Outcome::NotPositiveDefinite, Outcome::PositiveDefiniteWhp, Outcome::SingularToTolerance})
        CHECK(outcome_from_string(to_string(o)) == o);
    CHECK_THROWS_AS(outcome_from_string("maybe"), Error);
}

TEST_CASE("certify the identity")
{
    RngState rng(1);
    const Verdict v = certify(identity_operator(8), rng);
    CHECK(v.outcome == Outcome::PositiveDefiniteWhp);
    CHECK(v.probability_of_correctness == ProbabilityBudget{}.target_confidence);
    CHECK_FALSE(v.certificate);
    CHECK(v.diagnostics.steps == 1);
    CHECK(v.diagnostics.k_kappa == 57);
    CHECK(v.diagnostics.n_for == 2 * 57);
    CHECK(v.diagnostics.n_inv == 2 * 57 + static_cast<std::uint64_t>(v.diagnostics.k_tilde));
}

TEST_CASE("certify a small indefinite diagonal")
{
    for (std::uint64_t seed = 1; seed <= 10; ++seed)
    {
        for (const SolverBackend be : {SolverBackend::direct, SolverBackend::iterative})
        {
            RngState rng(seed);
            SolveConfig cfg;
            cfg.backend = be;
            const SymmetricOperator a = diagonal_operator(Vector{{-1.0, 1.0, 2.0}});
            const Verdict v = certify(a, rng, cfg);
            REQUIRE(v.outcome == Outcome::NotPositiveDefinite);
            REQUIRE(v.certificate);
            CHECK(v.certificate->verified);
            CHECK(v.certificate->quadratic_form <= 0.0);
            CHECK(verify_certificate(a, v.certificate->b) == v.certificate->quadratic_form);
            CHECK(std::abs(v.certificate->b.norm() - 1.0) <= 1e-12);
            CHECK(v.probability_of_correctness == 1.0);
            CHECK(v.certificate->raw_lambda_tilde >= 1.0);
        }
    }
}

TEST_CASE("singular input")
{
    RngState rng(1);
    const Verdict v = certify(diagonal_operator(Vector{{1.0, 0.0, 2.0}}), rng);
    CHECK(v.outcome == Outcome::SingularToTolerance);
    CHECK_FALSE(v.probability_of_correctness);
    CHECK_FALSE(v.diagnostics.note.empty());
}

TEST_CASE("iteration accounting")
{
    for (std::uint64_t seed = 1; seed <= 12; ++seed)
    {
        const Index n = 10 + static_cast<Index>(seed) * 7;
        const GeneratedMatrix g =
            seed % 3 == 0 ? generate_indefinite(n, 1e5, seed, 1, NegativeShape::tiny_minimum) : generate_spd(n, 1e5, seed);
        RngState rng(derive_seed(seed, 1));
        const Verdict v = certify(make_operator(g.matrix), rng);
        const CertifyDiagnostics& d = v.diagnostics;
        const Index k_kappa = static_cast<Index>(std::ceil(2.9 * std::log10(static_cast<double>(n)) + 54.1));
        const Index k_tilde = static_cast<Index>(
            std::ceil(2.9 * std::log10(static_cast<double>(n)) + 1.8 * std::log2(static_cast<double>(d.steps)) + 40.3));
        CHECK(d.k_kappa == k_kappa);
        CHECK(d.k_tilde == k_tilde);
        CHECK(d.n_for == static_cast<std::uint64_t>(2 * k_kappa));
        const auto probes = static_cast<Index>(d.mus.size());
        CHECK(d.n_inv == static_cast<std::uint64_t>(2 * k_kappa + probes * k_tilde));
        if (v.outcome == Outcome::PositiveDefiniteWhp)
            CHECK(probes == d.steps);
        else
            CHECK(probes <= d.steps);
        CHECK(d.lambda_tildes.size() == d.mus.size());
    }
}

TEST_CASE("verdicts agree with the oracle")
{
    for (std::uint64_t seed = 1; seed <= 30; ++seed)
    {
        const Index n = 15;
        const double kappa = std::pow(10.0, 1 + static_cast<double>(seed % 6));
        GeneratedMatrix g = generate_spd(n, kappa, seed);
        if (seed % 3 == 1)
            g = generate_indefinite(n, kappa, seed, 1, NegativeShape::tiny_minimum);
        else if (seed % 3 == 2)
            g = generate_indefinite(n, kappa, seed, 3);
        const SymmetricOperator a = make_operator(g.matrix);
        RngState rng(derive_seed(seed, 1));
        const Verdict v = certify(a, rng);
        const Vector eig = jacobi_eigenvalues(g.matrix.values());
        if (v.outcome == Outcome::NotPositiveDefinite)
        {
            CHECK(eig(n - 1) <= 1e-8 * g.matrix.values().norm());
            CHECK(v.certificate->verified);
        }
        else
        {
            REQUIRE(v.outcome == Outcome::PositiveDefiniteWhp);
            CHECK(eig(n - 1) > 0.0);
            const SpectrumBounds& b = *v.diagnostics.bounds;
            if (b.mu_lo < eig.cwiseAbs().minCoeff() && eig.cwiseAbs().maxCoeff() < b.mu_hi)
                for (const double l : ascending(*build_auxiliary(a, b.mu_hi).materialize()))
                {
                    CHECK(l > 0.0);
                    CHECK(l <= 1.0 - b.mu_lo / b.mu_hi + 1e-12);
                }
        }
    }
}

TEST_CASE("fixed seed gives identical verdicts")
{
    const GeneratedMatrix g = generate_indefinite(30, 1e4, 5, 2);
    RngState r1(17), r2(17);
    const Verdict a = certify(make_operator(g.matrix), r1);
    const Verdict b = certify(make_operator(g.matrix), r2);
    CHECK(to_json(a).dump() == to_json(b).dump());
    CHECK(a.diagnostics.seed == 17);
}

TEST_CASE("overridden budget changes the iteration counts")
{
    RngState rng(4);
    CertifyOptions opt;
    opt.budget = ProbabilityBudget::with_overrides(1e-4, 0.999);
    const Verdict v = certify(identity_operator(10), rng, {}, opt);
    CHECK(v.outcome == Outcome::PositiveDefiniteWhp);
    CHECK(v.diagnostics.k_kappa == iteration_count_bound(1e-4, 10));
    CHECK(v.probability_of_correctness == 0.999);
}
