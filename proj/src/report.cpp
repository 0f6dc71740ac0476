#include "pdprobe/report.hpp"

#include "pdprobe/errors.hpp"

#include <vector>

namespace pdprobe {

namespace {

Json vector_json(const Vector& v)
{
    return Json(std::vector<double>(v.data(), v.data() + v.size()));
}

Vector vector_from(const Json& j)
{
    const auto values = j.get<std::vector<double>>();
    return Eigen::Map<const Vector>(values.data(), static_cast<Index>(values.size()));
}

template <typename T>
Json optional_json(const std::optional<T>& v)
{
    return v ? Json(*v) : Json(nullptr);
}

template <typename T>
std::optional<T> optional_from(const Json& j)
{
    if (j.is_null())
        return std::nullopt;
    return j.get<T>();
}

Json budget_json(const ProbabilityBudget& b)
{
    return {{"delta_kappa", b.delta_kappa},
            {"delta_0_bound", b.delta_0_bound},
            {"target_confidence", b.target_confidence}};
}

ProbabilityBudget budget_from(const Json& j)
{
    ProbabilityBudget b;
    b.delta_kappa = j.at("delta_kappa").get<double>();
    b.delta_0_bound = j.at("delta_0_bound").get<double>();
    b.target_confidence = j.at("target_confidence").get<double>();
    return b;
}

Json solver_json(const SolveConfig& cfg)
{
    return {{"backend", to_string(cfg.backend)},
            {"rel_residual_tol", cfg.rel_residual_tol},
            {"max_iterations", optional_json(cfg.max_iterations)},
            {"dense_cap", cfg.dense_cap}};
}

SolveConfig solver_from(const Json& j)
{
    SolveConfig cfg;
    cfg.backend = solver_backend_from_string(j.at("backend").get<std::string>());
    cfg.rel_residual_tol = j.at("rel_residual_tol").get<double>();
    cfg.max_iterations = optional_from<Index>(j.at("max_iterations"));
    cfg.dense_cap = j.at("dense_cap").get<Index>();
    return cfg;
}

}  // namespace

Json to_json(const Verdict& verdict)
{
    const CertifyDiagnostics& d = verdict.diagnostics;
    Json j;
    j["outcome"] = to_string(verdict.outcome);
    j["probability_of_correctness"] = optional_json(verdict.probability_of_correctness);
    if (verdict.certificate)
    {
        const Certificate& c = *verdict.certificate;
        j["certificate"] = {{"b", vector_json(c.b)},
                            {"quadratic_form", c.quadratic_form},
                            {"verified", c.verified},
                            {"refinement_rounds", c.refinement_rounds},
                            {"raw_probe_vector", vector_json(c.raw_probe_vector)},
                            {"raw_lambda_tilde", c.raw_lambda_tilde}};
        j["quadratic_form"] = c.quadratic_form;
    }
    else
    {
        j["certificate"] = nullptr;
        j["quadratic_form"] = nullptr;
    }
    if (d.bounds)
    {
        j["mu_lo"] = d.bounds->mu_lo;
        j["mu_hi"] = d.bounds->mu_hi;
        j["lambda_tilde_1"] = d.bounds->lambda_tilde_1;
        j["lambda_tilde_n"] = d.bounds->lambda_tilde_n;
    }
    else
    {
        j["mu_lo"] = j["mu_hi"] = j["lambda_tilde_1"] = j["lambda_tilde_n"] = nullptr;
    }
    j["J"] = d.steps;
    j["mus"] = d.mus;
    j["lambda_tildes"] = d.lambda_tildes;
    j["N_for"] = d.n_for;
    j["N_inv"] = d.n_inv;
    j["certificate_products"] = d.certificate_products;
    j["k_kappa"] = d.k_kappa;
    j["k_tilde"] = d.k_tilde;
    j["seed"] = d.seed;
    j["budget"] = budget_json(d.budget);
    j["note"] = d.note;
    return j;
}

Verdict verdict_from_json(const Json& j)
{
    try
    {
        Verdict v;
        v.outcome = outcome_from_string(j.at("outcome").get<std::string>());
        v.probability_of_correctness = optional_from<double>(j.at("probability_of_correctness"));
        if (const Json& c = j.at("certificate"); !c.is_null())
        {
            Certificate cert;
            cert.b = vector_from(c.at("b"));
            cert.quadratic_form = c.at("quadratic_form").get<double>();
            cert.verified = c.at("verified").get<bool>();
            cert.refinement_rounds = c.at("refinement_rounds").get<Index>();
            cert.raw_probe_vector = vector_from(c.at("raw_probe_vector"));
            cert.raw_lambda_tilde = c.at("raw_lambda_tilde").get<double>();
            v.certificate = std::move(cert);
        }
        CertifyDiagnostics& d = v.diagnostics;
        if (!j.at("mu_lo").is_null())
        {
            SpectrumBounds b;
            b.mu_lo = j.at("mu_lo").get<double>();
            b.mu_hi = j.at("mu_hi").get<double>();
            b.lambda_tilde_1 = j.at("lambda_tilde_1").get<double>();
            b.lambda_tilde_n = j.at("lambda_tilde_n").get<double>();
            d.bounds = b;
        }
        d.steps = j.at("J").get<Index>();
        d.mus = j.at("mus").get<std::vector<double>>();
        d.lambda_tildes = j.at("lambda_tildes").get<std::vector<double>>();
        d.n_for = j.at("N_for").get<std::uint64_t>();
        d.n_inv = j.at("N_inv").get<std::uint64_t>();
        d.certificate_products = j.at("certificate_products").get<std::uint64_t>();
        d.k_kappa = j.at("k_kappa").get<Index>();
        d.k_tilde = j.at("k_tilde").get<Index>();
        d.seed = j.at("seed").get<std::uint64_t>();
        d.budget = budget_from(j.at("budget"));
        d.note = j.at("note").get<std::string>();
        return v;
    }
    catch (const Json::exception& e)
    {
        throw Error(std::string("malformed verdict: ") + e.what());
    }
}

Json to_json(const CheckReport& report)
{
    Json j;
    j["schema"] = check_report_schema;
    j["input"] = report.input;
    j["seed"] = report.seed;
    j["solver"] = solver_json(report.solver);
    if (report.wall_ms)
        j["wall_ms"] = *report.wall_ms;
    j["verdict"] = to_json(report.verdict);
    return j;
}

CheckReport check_report_from_json(const Json& j)
{
    validate_check_report(j);
    CheckReport r;
    r.input = j.at("input").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.solver = solver_from(j.at("solver"));
    if (j.contains("wall_ms"))
        r.wall_ms = j.at("wall_ms").get<double>();
    r.verdict = verdict_from_json(j.at("verdict"));
    return r;
}

namespace {

enum class Kind
{
    string,
    boolean,
    number,
    unsigned_int,
    array,
    object,
};

bool has_kind(const Json& v, Kind kind)
{
    switch (kind)
    {
    case Kind::string: return v.is_string();
    case Kind::boolean: return v.is_boolean();
    case Kind::number: return v.is_number();
    case Kind::unsigned_int: return v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0);
    case Kind::array: return v.is_array();
    case Kind::object: return v.is_object();
    }
    return false;
}

void require(const Json& obj, const std::string& path, const char* key, Kind kind, bool nullable = false)
{
    if (!obj.contains(key))
        throw Error("report field '" + path + key + "' is missing");
    const Json& v = obj.at(key);
    if (nullable && v.is_null())
        return;
    if (!has_kind(v, kind))
        throw Error("report field '" + path + key + "' has the wrong type");
}

void require_numbers(const Json& arr, const std::string& name)
{
    for (const auto& x : arr)
        if (!x.is_number())
            throw Error("report field '" + name + "' must hold numbers");
}

}  // namespace

void validate_check_report(const Json& j)
{
    if (!j.is_object())
        throw Error("report must be a JSON object");
    require(j, "", "schema", Kind::string);
    if (j.at("schema") != check_report_schema)
        throw Error("unknown report schema '" + j.at("schema").get<std::string>() + "'");
    require(j, "", "input", Kind::string);
    require(j, "", "seed", Kind::unsigned_int);
    require(j, "", "solver", Kind::object);
    if (j.contains("wall_ms"))
        require(j, "", "wall_ms", Kind::number);
    require(j, "", "verdict", Kind::object);

    const Json& s = j.at("solver");
    require(s, "solver.", "backend", Kind::string);
    require(s, "solver.", "rel_residual_tol", Kind::number);
    require(s, "solver.", "max_iterations", Kind::unsigned_int, true);
    require(s, "solver.", "dense_cap", Kind::unsigned_int);

    const Json& v = j.at("verdict");
    const std::string p = "verdict.";
    require(v, p, "outcome", Kind::string);
    outcome_from_string(v.at("outcome").get<std::string>());
    require(v, p, "probability_of_correctness", Kind::number, true);
    require(v, p, "certificate", Kind::object, true);
    require(v, p, "quadratic_form", Kind::number, true);
    for (const char* key : {"mu_lo", "mu_hi", "lambda_tilde_1", "lambda_tilde_n"})
        require(v, p, key, Kind::number, true);
    for (const char* key : {"J", "N_for", "N_inv", "certificate_products", "k_kappa", "k_tilde", "seed"})
        require(v, p, key, Kind::unsigned_int);
    require(v, p, "mus", Kind::array);
    require(v, p, "lambda_tildes", Kind::array);
    require_numbers(v.at("mus"), p + "mus");
    require_numbers(v.at("lambda_tildes"), p + "lambda_tildes");
    require(v, p, "budget", Kind::object);
    require(v, p, "note", Kind::string);
    for (const char* key : {"delta_kappa", "delta_0_bound", "target_confidence"})
        require(v.at("budget"), p + "budget.", key, Kind::number);

    if (const Json& c = v.at("certificate"); !c.is_null())
    {
        const std::string cp = p + "certificate.";
        require(c, cp, "b", Kind::array);
        require_numbers(c.at("b"), cp + "b");
        require(c, cp, "quadratic_form", Kind::number);
        require(c, cp, "verified", Kind::boolean);
        require(c, cp, "refinement_rounds", Kind::unsigned_int);
        require(c, cp, "raw_probe_vector", Kind::array);
        require_numbers(c.at("raw_probe_vector"), cp + "raw_probe_vector");
        require(c, cp, "raw_lambda_tilde", Kind::number);
    }
}

}  // namespace pdprobe
