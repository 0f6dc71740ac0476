#ifndef PDPROBE_CERTIFIER_HPP
#define PDPROBE_CERTIFIER_HPP

#include "pdprobe/operator.hpp"
#include "pdprobe/power_iteration.hpp"
#include "pdprobe/random_sphere.hpp"
#include "pdprobe/shifted_solver.hpp"
#include "pdprobe/spectrum_bounds.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace pdprobe {

/// Failure-probability bookkeeping for the whole test.
struct ProbabilityBudget
{
    static constexpr double default_delta_kappa = 4e-10;
    static constexpr double default_delta_0_bound = 1e-9;
    static constexpr double default_target_confidence = 1.0 - 1e-6;

    /// Failure probability of each of the two bound-estimating power iterations.
    double delta_kappa = default_delta_kappa;
    /// Upper bound on the failure probability of the bound estimation.
    double delta_0_bound = default_delta_0_bound;
    /// Required probability q_J that a "positive definite" answer is right.
    double target_confidence = default_target_confidence;

    /// Budget with delta_kappa and target replaced; delta_0_bound becomes
    /// 1 - (1 - delta_kappa)^2 unless delta_kappa keeps its default.
    static ProbabilityBudget with_overrides(double delta_kappa, double target_confidence);

    bool is_default() const;
    void validate() const;

    double delta_0() const;
    /// (target) / (1 - delta_0_bound).
    double rho() const;
    /// Per-probe failure probability 1 - rho^(1/J).
    double delta_tilde(Index j_steps) const;
};

/// Shifts mu_j = 1 + 2^-j for j = 0 .. J-1 with J = max(1, ceil(log2(mu_hi / mu_lo))).
struct BisectionSchedule
{
    Index steps = 1;
    std::vector<double> mus;
};

BisectionSchedule bisection_schedule(const SpectrumBounds& bounds);
BisectionSchedule bisection_schedule_for_ratio(double mu_ratio);

/// Iterations for the bound estimation: ceil(2.9 log10(n) + 54.1) for the
/// default budget, iteration_count_bound(delta_kappa, n) otherwise.
Index bound_iteration_count(Index n, const ProbabilityBudget& budget = {});

/// ceil(2.9 log10(n) + 1.8 log2(J) + 40.3).
Index bisection_iteration_count(Index n, Index j_steps);

/// Per-probe iterations: bisection_iteration_count for the default target,
/// iteration_count_bound(delta_tilde(J), n) otherwise.
Index probe_iteration_count(Index n, Index j_steps, const ProbabilityBudget& budget = {});

/// M = I - A / mu_hi.
SymmetricOperator build_auxiliary(const SymmetricOperator& a, double mu_hi);

/// The shift of one bisection probe.
struct ProbeShift
{
    double mu_hi = 1.0;
    double mu = 2.0;
};

/// (mu - 1) I + A / mu_hi, i.e. mu I - M.
SymmetricOperator probe_operand(const SymmetricOperator& a, const ProbeShift& shift);

/// Z = (mu - 1) ((mu - 1) I + A / mu_hi)^-1.
SymmetricOperator probe_operator(const SymmetricOperator& a, const ProbeShift& shift, const SolveConfig& solver_cfg);

///
/// One bisection step: power iteration with k on Z from a fresh sphere sample.
/// Every solve with the probe operand increments `solves` when given.
///
/// lambda_tilde >= 1 proves lambda_max(M) >= 1 (Rayleigh bound); otherwise
/// lambda_max(M) < (1 + mu) / 2 holds with the power iteration's probability.
///
PowerIterResult probe_step(const SymmetricOperator& a,
                           double mu_hi,
                           double mu_j,
                           RngState& rng,
                           Index k,
                           const SolveConfig& solver_cfg,
                           const ApplicationCounter* solves = nullptr);

/// <b, A b>.
double verify_certificate(const SymmetricOperator& a, const Vector& b);

struct RefinedCertificate
{
    Vector b;
    double quadratic_form = 0.0;
    Index rounds = 0;
    bool verified = false;
    /// Quadratic form of every accepted (strictly improving) iterate, starting
    /// with the input vector.
    std::vector<double> accepted_forms;
};

///
/// Inverse iteration with the probe operand of `shift`, started from `b`.
/// Returns the first iterate with <b, A b> <= 0, or the best iterate seen when
/// none qualifies within `max_rounds`. Solver failures end the refinement and
/// leave the certificate unverified.
///
RefinedCertificate refine_certificate(const SymmetricOperator& a,
                                      const Vector& b,
                                      const ProbeShift& shift,
                                      const SolveConfig& solver_cfg,
                                      Index max_rounds);

enum class Outcome
{
    NotPositiveDefinite,
    PositiveDefiniteWhp,
    SingularToTolerance,
};

std::string to_string(Outcome outcome);
Outcome outcome_from_string(const std::string& name);

struct Certificate
{
    /// Unit vector offered as proof of indefiniteness.
    Vector b;
    double quadratic_form = 0.0;
    bool verified = false;
    Index refinement_rounds = 0;
    /// The iterate returned by the detecting probe and its Rayleigh estimate.
    Vector raw_probe_vector;
    double raw_lambda_tilde = 0.0;
};

struct CertifyDiagnostics
{
    std::uint64_t seed = 0;
    ProbabilityBudget budget;
    Index k_kappa = 0;
    Index k_tilde = 0;
    std::optional<SpectrumBounds> bounds;
    Index steps = 0;               ///< J
    std::vector<double> mus;       ///< shifts probed, in order
    std::vector<double> lambda_tildes;
    std::uint64_t n_for = 0;       ///< products with A
    std::uint64_t n_inv = 0;       ///< solves with A or a shifted A
    std::uint64_t certificate_products = 0;
    std::string note;
};

struct Verdict
{
    Outcome outcome = Outcome::PositiveDefiniteWhp;
    std::optional<Certificate> certificate;
    /// Target confidence for the PD branch, 1 for a detected indefiniteness,
    /// empty for SingularToTolerance.
    std::optional<double> probability_of_correctness;
    CertifyDiagnostics diagnostics;
};

struct CertifyOptions
{
    ProbabilityBudget budget;
    Index refinement_rounds = 50;
};

///
/// Decides whether A is positive definite.
///
/// Estimates the spectral interval with k_kappa products / solve pairs, then
/// probes the shifts 1 + 2^-j with k_tilde solves each. Returns
/// NotPositiveDefinite with a certificate as soon as a probe's Rayleigh
/// estimate reaches 1, PositiveDefiniteWhp after all J probes, and
/// SingularToTolerance when a required solve finds a singular operator.
///
/// Throws EstimationInconsistentError (retry with another seed) and other
/// solver errors.
///
Verdict certify(const SymmetricOperator& a, RngState& rng, const SolveConfig& solver_cfg = {},
                const CertifyOptions& options = {});

}  // namespace pdprobe

#endif  // PDPROBE_CERTIFIER_HPP
