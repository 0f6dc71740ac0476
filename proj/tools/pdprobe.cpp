// pdprobe: randomized positive-definiteness check for symmetric matrices.
//
//   pdprobe check <file.mtx> [--seed S] [--solver direct|iterative] [--json]
//   pdprobe gen --n N --cond C --kind spd|indefinite|negdef [--neg K] --seed S --out F
//   pdprobe bench --sizes 20,100 --conds 1e2,1e4 --trials T --seed S --out F.csv
//
// Exit codes: 0 positive definite, 1 not positive definite, 2 anything else.

#include "pdprobe/certifier.hpp"
#include "pdprobe/errors.hpp"
#include "pdprobe/log.hpp"
#include "pdprobe/matrix_market.hpp"
#include "pdprobe/oracle.hpp"
#include "pdprobe/report.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

using namespace pdprobe;

namespace {

constexpr int exit_pd = 0;
constexpr int exit_not_pd = 1;
constexpr int exit_error = 2;

std::string fmt(double v)
{
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return ec == std::errc() ? std::string(buf, ptr) : std::string("nan");
}

double elapsed_ms(std::chrono::steady_clock::time_point start)
{
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

struct SolverFlags
{
    std::string backend = "direct";
    double tol = 1e-10;
    std::optional<Index> maxit;
    Index dense_cap = default_dense_cap;

    void add_to(CLI::App* cmd)
    {
        cmd->add_option("--solver", backend, "Linear solver for shifted systems")
            ->check(CLI::IsMember({"direct", "iterative"}))
            ->capture_default_str();
        cmd->add_option("--solve-tol", tol, "Relative residual tolerance of each solve")->capture_default_str();
        cmd->add_option("--solve-maxit", maxit, "Iteration budget of the iterative solver (default 10 N)");
        cmd->add_option("--dense-cap", dense_cap, "Largest dimension factored densely")->capture_default_str();
    }

    SolveConfig config() const
    {
        SolveConfig cfg;
        cfg.backend = solver_backend_from_string(backend);
        cfg.rel_residual_tol = tol;
        cfg.max_iterations = maxit;
        cfg.dense_cap = dense_cap;
        cfg.validate();
        return cfg;
    }
};

struct BudgetFlags
{
    double delta_kappa = ProbabilityBudget::default_delta_kappa;
    double target = ProbabilityBudget::default_target_confidence;

    void add_to(CLI::App* cmd)
    {
        cmd->add_option("--delta-kappa", delta_kappa, "Failure probability of each bound estimate")
            ->capture_default_str();
        cmd->add_option("--target-confidence", target, "Required confidence of a positive-definite answer")
            ->capture_default_str();
    }

    ProbabilityBudget budget() const
    {
        if (delta_kappa == ProbabilityBudget::default_delta_kappa &&
            target == ProbabilityBudget::default_target_confidence)
            return {};
        return ProbabilityBudget::with_overrides(delta_kappa, target);
    }
};

// check -----------------------------------------------------------------------

struct CheckArgs
{
    std::string file;
    std::optional<std::uint64_t> seed;
    bool json = false;
    bool timing = false;
    Index refine_rounds = 50;
    SolverFlags solver;
    BudgetFlags budget;
};

void print_human(const CheckReport& r, std::ostream& out)
{
    const Verdict& v = r.verdict;
    const CertifyDiagnostics& d = v.diagnostics;
    switch (v.outcome)
    {
    case Outcome::PositiveDefiniteWhp:
    {
        std::ostringstream risk;
        risk << std::setprecision(6) << 1.0 - d.budget.target_confidence;
        out << "positive definite with probability > 1 - " << risk.str() << '\n';
        break;
    }
    case Outcome::NotPositiveDefinite:
    {
        const Certificate& c = *v.certificate;
        out << "not positive definite: certificate attached"
            << (c.verified ? "" : " (UNVERIFIED: no vector with b^T A b <= 0 found)") << '\n';
        out << "b^T A b = " << fmt(c.quadratic_form) << '\n';
        out << "b =";
        for (Index i = 0; i < c.b.size(); ++i)
            out << ' ' << fmt(c.b(i));
        out << '\n';
        break;
    }
    case Outcome::SingularToTolerance:
        out << "singular to working precision: no definiteness claim (" << d.note << ")\n";
        break;
    }
    out << "seed " << r.seed;
    if (d.bounds)
        out << ", mu_lo " << fmt(d.bounds->mu_lo) << ", mu_hi " << fmt(d.bounds->mu_hi);
    out << ", J " << d.steps << ", N_for " << d.n_for << ", N_inv " << d.n_inv;
    if (r.wall_ms)
        out << ", " << fmt(*r.wall_ms) << " ms";
    out << '\n';
}

int cmd_check(const CheckArgs& args)
{
    const auto start = std::chrono::steady_clock::now();
    const SolveConfig cfg = args.solver.config();
    CertifyOptions options;
    options.budget = args.budget.budget();
    options.refinement_rounds = args.refine_rounds;

    const LoadedMatrix m = load_matrix_market(args.file);
    RngState rng = args.seed ? RngState(*args.seed) : RngState::from_entropy();
    log(LogLevel::info, "check " + args.file + ": n = " + std::to_string(dim(m)) + ", seed " + std::to_string(rng.seed()));

    CheckReport report;
    report.input = args.file;
    report.seed = rng.seed();
    report.solver = cfg;
    report.verdict = certify(make_operator(m), rng, cfg, options);
    if (args.timing)
        report.wall_ms = elapsed_ms(start);

    const CertifyDiagnostics& d = report.verdict.diagnostics;
    if (log_enabled(LogLevel::debug))
        for (std::size_t i = 0; i < d.mus.size(); ++i)
            log(LogLevel::debug, "probe mu = " + fmt(d.mus[i]) + ": lambda~ = " + fmt(d.lambda_tildes[i]));

    if (args.json)
        std::cout << to_json(report).dump(2) << '\n';
    else
        print_human(report, std::cout);

    switch (report.verdict.outcome)
    {
    case Outcome::PositiveDefiniteWhp: return exit_pd;
    case Outcome::NotPositiveDefinite: return exit_not_pd;
    case Outcome::SingularToTolerance: return exit_error;
    }
    return exit_error;
}

// gen -------------------------------------------------------------------------

struct GenArgs
{
    Index n = 0;
    double cond = 1.0;
    std::string kind = "spd";
    std::optional<Index> neg;
    bool tiny = false;
    double scale = 1.0;
    std::uint64_t seed = 0;
    std::string out;
};

GeneratedMatrix generate(const GenArgs& a)
{
    if (a.kind == "spd")
    {
        if (a.neg && *a.neg != 0)
            throw Error("--neg is not allowed with --kind spd");
        return generate_spd(a.n, a.cond, a.seed, a.scale);
    }
    if (a.kind == "negdef")
    {
        if (a.neg && *a.neg != a.n)
            throw Error("--kind negdef negates all n eigenvalues");
        return generate_indefinite(a.n, a.cond, a.seed, a.n, NegativeShape::spread, a.scale);
    }
    const Index neg = a.neg.value_or(1);
    return generate_indefinite(a.n, a.cond, a.seed, neg,
                               a.tiny ? NegativeShape::tiny_minimum : NegativeShape::spread, a.scale);
}

int cmd_gen(const GenArgs& args)
{
    if (args.tiny && args.kind != "indefinite")
        throw Error("--tiny-negative needs --kind indefinite");
    const GeneratedMatrix g = generate(args);
    save_matrix_market(g.matrix, args.out);

    Json truth;
    truth["seed"] = g.seed;
    truth["n"] = g.matrix.dim();
    truth["kind"] = args.kind;
    truth["requested_cond"] = args.cond;
    truth["tiny_negative"] = args.tiny;
    truth["true_spectrum"] = std::vector<double>(g.true_spectrum.data(), g.true_spectrum.data() + g.true_spectrum.size());
    truth["lambda_max"] = g.lambda_max();
    truth["lambda_min"] = g.lambda_min();
    truth["condition_number"] = g.condition_number();
    truth["negative_count"] = g.negative_count();
    truth["positive_definite"] = g.positive_definite();

    const std::string sidecar = args.out + ".truth.json";
    std::ofstream f(sidecar);
    f << truth.dump(2) << '\n';
    f.close();
    if (!f)
        throw IoError("cannot write '" + sidecar + "'");
    log(LogLevel::info, "wrote " + args.out + " and " + sidecar);
    return 0;
}

// bench -----------------------------------------------------------------------

struct BenchArgs
{
    std::vector<Index> sizes;
    std::vector<double> conds;
    Index trials = 1;
    std::uint64_t seed = 0;
    std::string out;
    std::string kind = "spd";
    unsigned threads = 0;
    SolverFlags solver;
    BudgetFlags budget;
};

struct BenchRow
{
    Index n = 0;
    double kappa = 0.0;
    std::string kind;
    Index trial = 0;
    std::uint64_t seed = 0;
    std::string verdict;
    bool correct = false;
    std::uint64_t n_for = 0;
    std::uint64_t n_inv = 0;
    Index j = 0;
    double wall_ms = 0.0;
    std::optional<double> envelope_ratio;
};

double envelope(double kappa, Index n)
{
    return std::log2(kappa) * (6.0 * std::log10(static_cast<double>(n)) + 108.0);
}

BenchRow run_trial(const BenchArgs& args, const SolveConfig& cfg, const CertifyOptions& options, Index n, double kappa,
                   Index trial, std::uint64_t seed)
{
    BenchRow row;
    row.n = n;
    row.kappa = kappa;
    row.trial = trial;
    row.seed = seed;

    bool indefinite = args.kind == "indefinite" || (args.kind == "mixed" && trial % 2 == 1);
    if (n == 1 && args.kind == "mixed")
        indefinite = false;
    const bool tiny = indefinite && n >= 2 && (args.kind == "indefinite" ? trial % 2 == 1 : trial % 4 == 3);
    row.kind = !indefinite ? "spd" : (tiny ? "tiny_negative" : "indefinite");

    const auto start = std::chrono::steady_clock::now();
    try
    {
        const GeneratedMatrix g =
            !indefinite ? generate_spd(n, kappa, seed)
                        : generate_indefinite(n, kappa, seed, tiny ? 1 : std::max<Index>(1, n / 10),
                                              tiny ? NegativeShape::tiny_minimum : NegativeShape::spread);
        RngState rng(derive_seed(seed, 1));
        const Verdict v = certify(make_operator(g.matrix), rng, cfg, options);
        row.verdict = to_string(v.outcome);
        row.correct = (v.outcome == Outcome::PositiveDefiniteWhp && g.positive_definite()) ||
                      (v.outcome == Outcome::NotPositiveDefinite && !g.positive_definite() && v.certificate &&
                       v.certificate->verified);
        row.n_for = v.diagnostics.n_for;
        row.n_inv = v.diagnostics.n_inv;
        row.j = v.diagnostics.steps;
        const double true_kappa = g.condition_number();
        if (true_kappa >= 4.0 && n >= 1)
            row.envelope_ratio = static_cast<double>(row.n_inv) / envelope(true_kappa, n);
    }
    catch (const Error& e)
    {
        row.verdict = "error";
        row.correct = false;
        log(LogLevel::warn, "bench trial " + std::to_string(trial) + " (seed " + std::to_string(seed) + "): " + e.what());
    }
    row.wall_ms = elapsed_ms(start);
    return row;
}

constexpr const char* bench_header = "N,kappa,kind,trial,seed,verdict,correct,N_for,N_inv,J,wall_ms,envelope_ratio";

int cmd_bench(const BenchArgs& args)
{
    if (args.trials < 1)
        throw Error("--trials must be at least 1");
    if (args.sizes.empty() || args.conds.empty())
        throw Error("--sizes and --conds must be nonempty");
    for (const Index n : args.sizes)
        if (n < 1)
            throw Error("sizes must be positive");
    for (const double c : args.conds)
        if (!(c >= 1.0))
            throw Error("condition numbers must be at least 1");

    const SolveConfig cfg = args.solver.config();
    CertifyOptions options;
    options.budget = args.budget.budget();

    struct Task
    {
        Index n;
        double kappa;
        Index trial;
        std::uint64_t seed;
    };
    std::vector<Task> tasks;
    for (const Index n : args.sizes)
        for (const double kappa : args.conds)
            for (Index t = 0; t < args.trials; ++t)
                tasks.push_back({n, kappa, t, args.seed + static_cast<std::uint64_t>(tasks.size())});

    std::vector<BenchRow> rows(tasks.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < tasks.size(); i = next++)
            rows[i] = run_trial(args, cfg, options, tasks[i].n, tasks[i].kappa, tasks[i].trial, tasks[i].seed);
    };
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const unsigned workers = std::clamp<unsigned>(args.threads ? args.threads : hw, 1u,
                                                  static_cast<unsigned>(tasks.size()));
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < workers; ++w)
        pool.emplace_back(worker);
    worker();
    for (auto& t : pool)
        t.join();

    std::sort(rows.begin(), rows.end(), [](const BenchRow& a, const BenchRow& b) {
        return std::tie(a.n, a.kappa, a.trial) < std::tie(b.n, b.kappa, b.trial);
    });

    std::ofstream out(args.out);
    if (!out)
        throw IoError("cannot open '" + args.out + "' for writing");
    out << bench_header << '\n';
    std::size_t failures = 0;
    std::uint64_t max_inv = 0;
    double max_ratio = 0.0;
    double total_ms = 0.0;
    for (const BenchRow& r : rows)
    {
        failures += r.correct ? 0 : 1;
        max_inv = std::max(max_inv, r.n_inv);
        if (r.envelope_ratio)
            max_ratio = std::max(max_ratio, *r.envelope_ratio);
        total_ms += r.wall_ms;
        out << r.n << ',' << fmt(r.kappa) << ',' << r.kind << ',' << r.trial << ',' << r.seed << ',' << r.verdict << ','
            << (r.correct ? 1 : 0) << ',' << r.n_for << ',' << r.n_inv << ',' << r.j << ',' << fmt(r.wall_ms) << ','
            << (r.envelope_ratio ? fmt(*r.envelope_ratio) : "") << '\n';
    }
    const double rate = static_cast<double>(failures) / static_cast<double>(rows.size());
    // Summary: trial = row count, seed = base seed, correct = failure rate,
    // N_inv = largest N_inv, wall_ms = total, envelope_ratio = largest ratio.
    out << "summary,,," << rows.size() << ',' << args.seed << ",," << fmt(rate) << ",," << max_inv << ",,"
        << fmt(total_ms) << ',' << fmt(max_ratio) << '\n';
    out.close();
    if (!out)
        throw IoError("write to '" + args.out + "' failed");

    std::cerr << rows.size() << " trials, " << failures << " incorrect, max N_inv/envelope " << fmt(max_ratio) << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Randomized positive-definiteness test for symmetric matrices"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "pdprobe 1.0.0");

    CheckArgs check;
    CLI::App* check_cmd = app.add_subcommand("check", "Test a Matrix Market file for positive definiteness");
    check_cmd->add_option("file", check.file, "Symmetric Matrix Market file")->required();
    check_cmd->add_option("--seed", check.seed, "RNG seed (random when omitted)");
    check_cmd->add_flag("--json", check.json, "Print a JSON report");
    check_cmd->add_flag("--timing", check.timing, "Include wall time in the report");
    check_cmd->add_option("--refine-rounds", check.refine_rounds, "Certificate refinement rounds")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    check.solver.add_to(check_cmd);
    check.budget.add_to(check_cmd);

    GenArgs gen;
    CLI::App* gen_cmd = app.add_subcommand("gen", "Generate a test matrix with known spectrum");
    gen_cmd->add_option("--n", gen.n, "Dimension")->required()->check(CLI::PositiveNumber);
    gen_cmd->add_option("--cond", gen.cond, "Condition number")->required();
    gen_cmd->add_option("--kind", gen.kind, "Matrix kind")
        ->check(CLI::IsMember({"spd", "indefinite", "negdef"}))
        ->capture_default_str();
    gen_cmd->add_option("--neg", gen.neg, "Number of negative eigenvalues (indefinite)");
    gen_cmd->add_flag("--tiny-negative", gen.tiny, "Shrink the negative part to lambda_min = -1e-6 lambda_max");
    gen_cmd->add_option("--scale", gen.scale, "Largest |eigenvalue|")->capture_default_str();
    gen_cmd->add_option("--seed", gen.seed, "RNG seed")->required();
    gen_cmd->add_option("--out", gen.out, "Output .mtx path; truth goes to <out>.truth.json")->required();

    BenchArgs bench;
    CLI::App* bench_cmd = app.add_subcommand("bench", "Run a seeded sweep and write CSV");
    bench_cmd->add_option("--sizes", bench.sizes, "Dimensions")->required()->delimiter(',');
    bench_cmd->add_option("--conds", bench.conds, "Condition numbers")->required()->delimiter(',');
    bench_cmd->add_option("--trials", bench.trials, "Trials per (size, cond)")->required();
    bench_cmd->add_option("--seed", bench.seed, "Base seed; trial i uses seed + i")->required();
    bench_cmd->add_option("--out", bench.out, "CSV output path")->required();
    bench_cmd->add_option("--kind", bench.kind, "Matrix kinds in the sweep")
        ->check(CLI::IsMember({"spd", "indefinite", "mixed"}))
        ->capture_default_str();
    bench_cmd->add_option("--threads", bench.threads, "Worker threads (default: hardware concurrency)");
    bench.solver.add_to(bench_cmd);
    bench.budget.add_to(bench_cmd);

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e)
    {
        const int code = app.exit(e);
        return code == 0 ? 0 : exit_error;
    }

    try
    {
        if (*check_cmd)
            return cmd_check(check);
        if (*gen_cmd)
            return cmd_gen(gen);
        if (*bench_cmd)
            return cmd_bench(bench);
    }
    catch (const EstimationInconsistentError& e)
    {
        std::cerr << "pdprobe: error: " << e.what() << " (lambda~_1 = " << fmt(e.lambda_tilde_1())
                  << ", lambda~_N = " << fmt(e.lambda_tilde_n()) << "); rerun with another seed\n";
        return exit_error;
    }
    catch (const std::exception& e)
    {
        std::cerr << "pdprobe: error: " << e.what() << '\n';
        return exit_error;
    }
    return exit_error;
}
