#include "pdprobe/certifier.hpp"

#include "pdprobe/errors.hpp"

#include <algorithm>
#include <cmath>

namespace pdprobe {

ProbabilityBudget ProbabilityBudget::with_overrides(double delta_kappa, double target_confidence)
{
    ProbabilityBudget b;
    b.delta_kappa = delta_kappa;
    b.target_confidence = target_confidence;
    if (delta_kappa != default_delta_kappa)
        b.delta_0_bound = delta_kappa * (2.0 - delta_kappa);
    b.validate();
    return b;
}

bool ProbabilityBudget::is_default() const
{
    return delta_kappa == default_delta_kappa && delta_0_bound == default_delta_0_bound &&
           target_confidence == default_target_confidence;
}

void ProbabilityBudget::validate() const
{
    if (!(delta_kappa > 0.0 && delta_kappa < 1.0))
        throw Error("delta_kappa must lie in (0, 1)");
    if (!(delta_0_bound >= delta_0() && delta_0_bound < 1.0))
        throw Error("delta_0 bound must cover 1 - (1 - delta_kappa)^2 and stay below 1");
    if (!(target_confidence > 0.0 && target_confidence < 1.0 - delta_0_bound))
        throw Error("target confidence must lie in (0, 1 - delta_0)");
}

double ProbabilityBudget::delta_0() const
{
    return delta_kappa * (2.0 - delta_kappa);
}

double ProbabilityBudget::rho() const
{
    return target_confidence / (1.0 - delta_0_bound);
}

double ProbabilityBudget::delta_tilde(Index j_steps) const
{
    if (j_steps < 1)
        throw Error("delta_tilde: J must be at least 1");
    const double log_rho = std::log1p(-(1.0 - target_confidence)) - std::log1p(-delta_0_bound);
    return -std::expm1(log_rho / static_cast<double>(j_steps));
}

BisectionSchedule bisection_schedule_for_ratio(double mu_ratio)
{
    if (!(mu_ratio > 0.0) || !std::isfinite(mu_ratio))
        throw Error("bisection_schedule: ratio must be positive and finite");
    BisectionSchedule s;
    s.steps = std::max<Index>(1, static_cast<Index>(std::ceil(std::log2(mu_ratio))));
    s.mus.reserve(static_cast<std::size_t>(s.steps));
    for (Index j = 0; j < s.steps; ++j)
        s.mus.push_back(1.0 + std::ldexp(1.0, -static_cast<int>(j)));
    return s;
}

BisectionSchedule bisection_schedule(const SpectrumBounds& bounds)
{
    return bisection_schedule_for_ratio(bounds.ratio());
}

Index bound_iteration_count(Index n, const ProbabilityBudget& budget)
{
    if (n < 1)
        throw Error("bound_iteration_count: n must be positive");
    if (budget.delta_kappa == ProbabilityBudget::default_delta_kappa)
        return static_cast<Index>(std::ceil(2.9 * std::log10(static_cast<double>(n)) + 54.1));
    return iteration_count_bound(budget.delta_kappa, n);
}

Index bisection_iteration_count(Index n, Index j_steps)
{
    if (n < 1 || j_steps < 1)
        throw Error("bisection_iteration_count: n and J must be positive");
    return static_cast<Index>(std::ceil(2.9 * std::log10(static_cast<double>(n)) +
                                        1.8 * std::log2(static_cast<double>(j_steps)) + 40.3));
}

Index probe_iteration_count(Index n, Index j_steps, const ProbabilityBudget& budget)
{
    if (budget.target_confidence == ProbabilityBudget::default_target_confidence &&
        budget.delta_0_bound == ProbabilityBudget::default_delta_0_bound)
        return bisection_iteration_count(n, j_steps);
    return iteration_count_bound(budget.delta_tilde(j_steps), n);
}

SymmetricOperator build_auxiliary(const SymmetricOperator& a, double mu_hi)
{
    if (!(mu_hi > 0.0))
        throw Error("build_auxiliary: mu_hi must be positive");
    return shifted(a, 1.0, -1.0 / mu_hi);
}

SymmetricOperator probe_operand(const SymmetricOperator& a, const ProbeShift& shift)
{
    if (!(shift.mu_hi > 0.0))
        throw Error("probe: mu_hi must be positive");
    if (!(shift.mu > 1.0 && shift.mu <= 2.0))
        throw Error("probe: shift mu must lie in (1, 2]");
    return shifted(a, shift.mu - 1.0, 1.0 / shift.mu_hi);
}

SymmetricOperator probe_operator(const SymmetricOperator& a, const ProbeShift& shift, const SolveConfig& solver_cfg)
{
    return shifted(inverse_operator(probe_operand(a, shift), solver_cfg), 0.0, shift.mu - 1.0);
}

PowerIterResult probe_step(const SymmetricOperator& a,
                           double mu_hi,
                           double mu_j,
                           RngState& rng,
                           Index k,
                           const SolveConfig& solver_cfg,
                           const ApplicationCounter* solves)
{
    if (k < 1)
        throw Error("probe_step: k must be at least 1");
    const ProbeShift shift{mu_hi, mu_j};
    SymmetricOperator inv = inverse_operator(probe_operand(a, shift), solver_cfg);
    if (solves)
        inv = counted(inv, *solves);
    const SymmetricOperator z = shifted(inv, 0.0, mu_j - 1.0);
    const Vector b0 = sample_unit_sphere(rng, a.dim());
    return power_iteration(z, b0, k);
}

double verify_certificate(const SymmetricOperator& a, const Vector& b)
{
    return quadratic_form(a, b);
}

RefinedCertificate refine_certificate(const SymmetricOperator& a,
                                      const Vector& b,
                                      const ProbeShift& shift,
                                      const SolveConfig& solver_cfg,
                                      Index max_rounds)
{
    RefinedCertificate out;
    out.b = b;
    out.quadratic_form = verify_certificate(a, b);
    out.accepted_forms.push_back(out.quadratic_form);
    if (out.quadratic_form <= 0.0)
    {
        out.verified = true;
        return out;
    }

    try
    {
        const SymmetricOperator inv = inverse_operator(probe_operand(a, shift), solver_cfg);
        Vector current = b;
        for (Index round = 1; round <= max_rounds; ++round)
        {
            current = matvec(inv, current);
            const double norm = current.norm();
            if (norm == 0.0)
                break;
            current /= norm;
            out.rounds = round;
            const double q = verify_certificate(a, current);
            if (q < out.quadratic_form)
            {
                out.b = current;
                out.quadratic_form = q;
                out.accepted_forms.push_back(q);
            }
            if (q <= 0.0)
            {
                out.verified = true;
                return out;
            }
        }
    }
    catch (const Error&)
    {
        // Unverified; the caller keeps the best iterate and the raw probe data.
    }
    return out;
}

std::string to_string(Outcome outcome)
{
    switch (outcome)
    {
    case Outcome::NotPositiveDefinite:
        return "not_positive_definite";
    case Outcome::PositiveDefiniteWhp:
        return "positive_definite_whp";
    case Outcome::SingularToTolerance:
        return "singular_to_tolerance";
    }
    return "unknown";
}

Outcome outcome_from_string(const std::string& name)
{
    if (name == "not_positive_definite")
        return Outcome::NotPositiveDefinite;
    if (name == "positive_definite_whp")
        return Outcome::PositiveDefiniteWhp;
    if (name == "singular_to_tolerance")
        return Outcome::SingularToTolerance;
    throw Error("unknown outcome '" + name + "'");
}

Verdict certify(const SymmetricOperator& a, RngState& rng, const SolveConfig& solver_cfg, const CertifyOptions& options)
{
    options.budget.validate();
    solver_cfg.validate();

    const Index n = a.dim();
    Verdict verdict;
    CertifyDiagnostics& diag = verdict.diagnostics;
    diag.seed = rng.seed();
    diag.budget = options.budget;
    diag.k_kappa = bound_iteration_count(n, options.budget);

    auto singular = [&](const std::string& stage, const SingularOperatorError& e) {
        verdict.outcome = Outcome::SingularToTolerance;
        verdict.probability_of_correctness.reset();
        diag.note = stage + ": " + e.what();
        return verdict;
    };

    // Each "k" of the method counts operator applications; power_iteration(.., k)
    // makes k + 1 passes, hence the k - 1 below.
    SpectrumBounds bounds;
    try
    {
        bounds = estimate_bounds(a, solver_cfg, rng, diag.k_kappa - 1);
    }
    catch (const SingularOperatorError& e)
    {
        return singular("spectrum bounds", e);
    }
    diag.bounds = bounds;
    diag.n_for = bounds.forward_products;
    diag.n_inv = bounds.inverse_solves;

    const BisectionSchedule schedule = bisection_schedule(bounds);
    diag.steps = schedule.steps;
    diag.k_tilde = probe_iteration_count(n, schedule.steps, options.budget);

    const ApplicationCounter solves;
    for (const double mu : schedule.mus)
    {
        PowerIterResult probe;
        try
        {
            probe = probe_step(a, bounds.mu_hi, mu, rng, diag.k_tilde - 1, solver_cfg, &solves);
        }
        catch (const SingularOperatorError& e)
        {
            diag.n_inv = bounds.inverse_solves + solves.value();
            return singular("probe at mu = " + std::to_string(mu), e);
        }
        diag.mus.push_back(mu);
        diag.lambda_tildes.push_back(probe.lambda_tilde);
        diag.n_inv = bounds.inverse_solves + solves.value();

        if (probe.lambda_tilde >= 1.0)
        {
            verdict.outcome = Outcome::NotPositiveDefinite;
            verdict.probability_of_correctness = 1.0;

            Certificate cert;
            cert.raw_probe_vector = probe.b;
            cert.raw_lambda_tilde = probe.lambda_tilde;
            const RefinedCertificate refined =
                refine_certificate(a, probe.b, ProbeShift{bounds.mu_hi, mu}, solver_cfg, options.refinement_rounds);
            cert.b = refined.b;
            cert.quadratic_form = refined.quadratic_form;
            cert.verified = refined.verified;
            cert.refinement_rounds = refined.rounds;
            // One product per checked vector: the probe iterate plus every refinement round.
            diag.certificate_products = 1 + static_cast<std::uint64_t>(refined.rounds);
            if (!cert.verified)
                diag.note = "certificate unverified: no iterate with b^T A b <= 0 found";
            verdict.certificate = std::move(cert);
            return verdict;
        }
    }

    verdict.outcome = Outcome::PositiveDefiniteWhp;
    verdict.probability_of_correctness = options.budget.target_confidence;
    return verdict;
}

}  // namespace pdprobe
