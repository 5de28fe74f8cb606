#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "wavebif/error.hpp"
#include "wavebif/range_solver.hpp"

namespace wavebif::cli {

using nlohmann::json;

namespace {

struct Flags {
    int p = 1;
    std::string m = "sqrt2";
    double rho = 0.0;
    double rho_min = 1e-3;
    double rho_max = 1e-2;
    int points = 3;
    int k0 = 2;
    std::optional<double> s;
    int nt = kDefaultTruncation.t;
    int nx = kDefaultTruncation.x;
    double tol_range = 1e-10;
    double tol_bif = 1e-8;
    int max_iter = 200;
    double rho_threshold = 0.05;
    bool allow_s_override = false;
    std::string floor_policy = "fail";
    std::string backend = "direct";
    std::string out;
    std::string format;
    bool quick = false;
    std::string resume;
};

void add_model_flags(CLI::App& cmd, Flags& f) {
    cmd.add_option("--p", f.p, "Nonlinearity exponent (u_t)^{2p+1}")->check(CLI::PositiveNumber);
    cmd.add_option("--m", f.m, "Mass: sqrt2, e-2, pi-3 or a decimal");
    cmd.add_option("--k0", f.k0, "Target smoothness C^{k0}");
    cmd.add_option("--s", f.s, "Sobolev index (default k0+10)");
    cmd.add_flag("--allow-s-override", f.allow_s_override, "Accept s outside [k0+10, k0+20]");
    cmd.add_option("--nt", f.nt, "Temporal truncation |n| <= nt");
    cmd.add_option("--nx", f.nx, "Spatial truncation k <= nx");
    cmd.add_option("--tol-range", f.tol_range, "Range equation tolerance (relative to rho^{2p+1})");
    cmd.add_option("--tol-bif", f.tol_bif, "Bifurcation equation tolerance (relative to rho^{2p})");
    cmd.add_option("--max-iter", f.max_iter, "Iteration cap for every fixed-point loop");
    cmd.add_option("--rho-threshold", f.rho_threshold, "Largest admissible amplitude");
    cmd.add_option("--floor-policy", f.floor_policy, "Damping below the admissible floor: fail or warn")
        ->check(CLI::IsMember({"fail", "warn"}));
    cmd.add_option("--backend", f.backend, "Product backend: direct or pseudo-spectral")
        ->check(CLI::IsMember({"direct", "pseudo-spectral"}));
    cmd.add_option("--out", f.out, "Write the result to this file instead of stdout");
}

ModelParams build_params(const Flags& f) {
    ModelParams params = ModelParams::make(f.p, parse_mass(f.m), f.k0);
    if (f.s) params.s = *f.s;
    params.allow_s_override = f.allow_s_override;
    params.trunc = {f.nt, f.nx};
    params.tol_range = f.tol_range;
    params.tol_bif = f.tol_bif;
    params.max_iter = f.max_iter;
    params.rho_max = f.rho_threshold;
    params.floor_policy = f.floor_policy == "warn" ? FloorPolicy::Warn : FloorPolicy::Fail;
    params.product.backend = f.backend == "pseudo-spectral" ? ProductBackend::PseudoSpectral : ProductBackend::Direct;
    params.validate();
    return params;
}

std::string backend_name(ProductBackend b) { return b == ProductBackend::Direct ? "direct" : "pseudo-spectral"; }

// Writes `text` to --out or `out`.
bool emit(const Flags& f, const std::string& text, std::ostream& out, std::ostream& err) {
    if (f.out.empty()) {
        out << text;
        return true;
    }
    std::ofstream file(f.out, std::ios::binary);
    if (!file) {
        err << "cannot open " << f.out << " for writing\n";
        return false;
    }
    file << text;
    return static_cast<bool>(file);
}

std::string dump(const json& doc) { return doc.dump(2) + "\n"; }

int cmd_solve(const Flags& f, std::ostream& out, std::ostream& err) {
    ModelParams params;
    try {
        params = build_params(f);
    } catch (const Error& e) {
        err << e.what() << "\n";
        return kExitInvalid;
    }

    if (!f.resume.empty()) {
        std::ifstream in(f.resume, std::ios::binary);
        if (!in) {
            err << "cannot read " << f.resume << "\n";
            return kExitInvalid;
        }
        json doc;
        try {
            doc = json::parse(in);
        } catch (const json::exception& e) {
            err << "resume file is not JSON: " << e.what() << "\n";
            return kExitInvalid;
        }
        if (const auto problems = validate_solve_document(doc); !problems.empty()) {
            err << "resume file does not match the solve schema: " << problems.front() << "\n";
            return kExitInvalid;
        }
        if (doc.at("params") != params_to_json(params)) {
            err << "resume file was produced with different parameters\n";
            return kExitInvalid;
        }
        BranchPoint bp = point_from_document(doc, params);
        const double pde = pde_residual(bp.u(params), bp.rho, bp.omega, bp.alpha, params);
        if (pde != bp.resid_pde) {
            err << "stored PDE residual " << format_double(bp.resid_pde) << " does not reproduce (got "
                << format_double(pde) << ")\n";
            return kExitSolverFailed;
        }
        return emit(f, dump(solve_document(bp, params)), out, err) ? kExitOk : kExitInvalid;
    }

    if (!(f.rho > 0.0)) {
        err << "InvalidParams: --rho must be positive\n";
        return kExitInvalid;
    }
    try {
        const BranchPoint bp = solve_point(f.rho, params);
        return emit(f, dump(solve_document(bp, params)), out, err) ? kExitOk : kExitInvalid;
    } catch (const Error& e) {
        err << e.what() << "\n";
        return e.code() == ErrorCode::InvalidParams ? kExitInvalid : kExitSolverFailed;
    }
}

int cmd_branch(const Flags& f, std::ostream& out, std::ostream& err) {
    ModelParams params;
    std::vector<double> grid;
    try {
        params = build_params(f);
        if (f.points < 1) throw Error(ErrorCode::InvalidParams, "--points must be >= 1");
        if (!(f.rho_min > 0.0)) throw Error(ErrorCode::InvalidParams, "--rho-min must be positive");
        if (f.points == 1 ? f.rho_min != f.rho_max : !(f.rho_min < f.rho_max)) {
            throw Error(ErrorCode::InvalidParams,
                        "need --rho-min < --rho-max (or equal bounds with --points 1)");
        }
        grid = log_grid(f.rho_min, f.rho_max, f.points);
    } catch (const Error& e) {
        err << e.what() << "\n";
        return kExitInvalid;
    }

    const std::vector<BranchRow> rows = trace_branch(grid, params);
    for (const BranchRow& row : rows) {
        if (!row.point) err << "rho = " << format_double(row.rho) << ": " << row.message << "\n";
    }
    std::string text;
    if (f.format == "json") {
        json arr = json::array();
        for (const BranchRow& row : rows) {
            json r = row.point ? point_to_json(*row.point, params) : json{{"rho", row.rho}};
            r["status"] = row.point ? "converged" : "failed";
            if (!row.point) r["error"] = row.status;
            arr.push_back(std::move(r));
        }
        text = dump(json{{"schema_version", kSchemaVersion}, {"kind", "branch"}, {"params", params_to_json(params)}, {"rows", arr}});
    } else {
        text = branch_csv(rows, params);
    }
    if (!emit(f, text, out, err)) return kExitInvalid;
    const bool any = std::any_of(rows.begin(), rows.end(), [](const BranchRow& r) { return r.point.has_value(); });
    return any ? kExitOk : kExitSolverFailed;
}

int cmd_verify(const Flags& f, std::ostream& out, std::ostream& err) {
    ModelParams params;
    try {
        params = build_params(f);
    } catch (const Error& e) {
        err << e.what() << "\n";
        return kExitInvalid;
    }
    SuiteOptions opts;
    opts.quick = f.quick;
    const std::vector<CheckResult> checks = run_verification_suite(params, opts);

    std::vector<std::string> failing;
    std::ostringstream human;
    for (const CheckResult& c : checks) {
        human << to_string(c.status) << "  " << c.name << "  " << c.detail << "\n";
        if (c.status == CheckStatus::Fail) failing.push_back(c.name);
    }
    const json doc = verify_document(checks, params);
    if (f.format == "json") {
        if (!emit(f, dump(doc), out, err)) return kExitInvalid;
        err << human.str();
    } else {
        out << human.str();
        if (!f.out.empty() && !emit(f, dump(doc), out, err)) return kExitInvalid;
    }
    if (failing.empty()) return kExitOk;
    err << "failing checks:";
    for (const std::string& name : failing) err << " " << name;
    err << "\n";
    return kExitCheckFailed;
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    for (;;) {
        const std::size_t pos = s.find(sep, start);
        parts.emplace_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) return parts;
        start = pos + 1;
    }
}

bool is_number(const std::string& s) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    return ec == std::errc{} && ptr == s.data() + s.size();
}

}  // namespace

std::string format_double(double x) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return ec == std::errc{} ? std::string(buf, ptr) : std::string("nan");
}

json params_to_json(const ModelParams& params) {
    return {
        {"p", params.p},
        {"m", params.m},
        {"m_token", params.m_token},
        {"k0", params.k0},
        {"s", params.s},
        {"W0", params.W0},
        {"W1", params.W1},
        {"nt", params.trunc.t},
        {"nx", params.trunc.x},
        {"tol_range", params.tol_range},
        {"tol_bif", params.tol_bif},
        {"max_iter", params.max_iter},
        {"rho_threshold", params.rho_max},
        {"floor_policy", params.floor_policy == FloorPolicy::Warn ? "warn" : "fail"},
        {"backend", backend_name(params.product.backend)},
    };
}

json point_to_json(const BranchPoint& bp, const ModelParams& params) {
    return {
        {"rho", bp.rho},
        {"alpha", bp.alpha},
        {"omega", bp.omega},
        {"v_norm", bp.v_norm},
        {"alpha_ratio", bp.alpha_ratio(params)},
        {"residuals", {{"be1", bp.resid_be1}, {"be2", bp.resid_be2}, {"range", bp.resid_range}, {"pde", bp.resid_pde}}},
        {"iterations", {{"outer", bp.iterations_outer}, {"range", bp.range_iterations}}},
        {"contraction_factor", bp.contraction_factor},
        {"below_floor", bp.below_floor},
        {"g_roots", bp.g_roots},
    };
}

json solve_document(const BranchPoint& bp, const ModelParams& params) {
    std::vector<SpectralEntry> entries = bp.u(params).nonzeros();
    std::sort(entries.begin(), entries.end(), [](const SpectralEntry& a, const SpectralEntry& b) {
        return a.k != b.k ? a.k < b.k : a.n < b.n;
    });
    json spectrum = json::array();
    for (const SpectralEntry& e : entries) spectrum.push_back({e.n, e.k, e.c.real(), e.c.imag()});
    return {
        {"schema_version", kSchemaVersion},
        {"kind", "solve"},
        {"params", params_to_json(params)},
        {"result", point_to_json(bp, params)},
        {"spectrum", spectrum},
    };
}

BranchPoint point_from_document(const json& doc, const ModelParams& params) {
    try {
        const json& r = doc.at("result");
        BranchPoint bp;
        bp.rho = r.at("rho").get<double>();
        bp.alpha = r.at("alpha").get<double>();
        bp.omega = r.at("omega").get<double>();
        bp.v_norm = r.at("v_norm").get<double>();
        const json& res = r.at("residuals");
        bp.resid_be1 = res.at("be1").get<double>();
        bp.resid_be2 = res.at("be2").get<double>();
        bp.resid_range = res.at("range").get<double>();
        bp.resid_pde = res.at("pde").get<double>();
        bp.iterations_outer = r.at("iterations").at("outer").get<int>();
        bp.range_iterations = r.at("iterations").at("range").get<int>();
        bp.contraction_factor = r.at("contraction_factor").get<double>();
        bp.below_floor = r.at("below_floor").get<bool>();
        bp.g_roots = r.at("g_roots").get<std::vector<double>>();

        TrigField u(Parity::Sine, params.trunc);
        for (const json& e : doc.at("spectrum")) {
            u.at(e.at(0).get<int>(), e.at(1).get<int>()) = Complex(e.at(2).get<double>(), e.at(3).get<double>());
        }
        bp.v = project_V(SpectralField::from_trig(std::move(u)));
        return bp;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::InvalidParams, std::string("malformed solve document: ") + e.what());
    }
}

std::string branch_csv(const std::vector<BranchRow>& rows, const ModelParams& params) {
    std::string text(kBranchHeader);
    text += "\r\n";
    for (const BranchRow& row : rows) {
        if (row.point) {
            const BranchPoint& bp = *row.point;
            for (double x : {bp.rho, bp.alpha, bp.omega, bp.v_norm, bp.alpha_ratio(params), bp.resid_be1, bp.resid_be2,
                             bp.resid_range, bp.resid_pde}) {
                text += format_double(x) + ",";
            }
            text += "converged";
        } else {
            text += format_double(row.rho) + ",,,,,,,,,failed";
        }
        text += "\r\n";
    }
    return text;
}

json verify_document(const std::vector<CheckResult>& checks, const ModelParams& params) {
    json arr = json::array();
    bool ok = true;
    for (const CheckResult& c : checks) {
        arr.push_back({{"name", c.name}, {"status", std::string(to_string(c.status))}, {"detail", c.detail}});
        ok = ok && c.status != CheckStatus::Fail;
    }
    return {{"schema_version", kSchemaVersion},
            {"kind", "verify"},
            {"params", params_to_json(params)},
            {"passed", ok},
            {"checks", arr}};
}

namespace {

void require(std::vector<std::string>& problems, const json& obj, const char* key, json::value_t type,
             const std::string& where) {
    if (!obj.is_object() || !obj.contains(key)) {
        problems.push_back(where + "." + key + " missing");
        return;
    }
    const json& v = obj.at(key);
    const bool number_ok = type == json::value_t::number_float && v.is_number();
    const bool int_ok = type == json::value_t::number_integer && v.is_number_integer();
    if (!(number_ok || int_ok || v.type() == type)) problems.push_back(where + "." + key + " has the wrong type");
}

}  // namespace

std::vector<std::string> validate_solve_document(const json& doc) {
    using vt = json::value_t;
    std::vector<std::string> problems;
    if (!doc.is_object()) return {"document is not an object"};
    require(problems, doc, "schema_version", vt::number_integer, "$");
    if (doc.contains("schema_version") && doc["schema_version"] != kSchemaVersion) {
        problems.push_back("$.schema_version is not " + std::to_string(kSchemaVersion));
    }
    require(problems, doc, "kind", vt::string, "$");
    require(problems, doc, "params", vt::object, "$");
    require(problems, doc, "result", vt::object, "$");
    require(problems, doc, "spectrum", vt::array, "$");
    if (!problems.empty()) return problems;

    const json& p = doc["params"];
    for (const char* key : {"p", "k0", "nt", "nx", "max_iter"}) require(problems, p, key, vt::number_integer, "$.params");
    for (const char* key : {"m", "s", "W0", "W1", "tol_range", "tol_bif", "rho_threshold"}) {
        require(problems, p, key, vt::number_float, "$.params");
    }
    for (const char* key : {"m_token", "floor_policy", "backend"}) require(problems, p, key, vt::string, "$.params");

    const json& r = doc["result"];
    for (const char* key : {"rho", "alpha", "omega", "v_norm", "alpha_ratio", "contraction_factor"}) {
        require(problems, r, key, vt::number_float, "$.result");
    }
    require(problems, r, "residuals", vt::object, "$.result");
    require(problems, r, "iterations", vt::object, "$.result");
    require(problems, r, "below_floor", vt::boolean, "$.result");
    require(problems, r, "g_roots", vt::array, "$.result");
    if (r.contains("residuals")) {
        for (const char* key : {"be1", "be2", "range", "pde"}) {
            require(problems, r["residuals"], key, vt::number_float, "$.result.residuals");
        }
    }
    if (r.contains("iterations")) {
        for (const char* key : {"outer", "range"}) {
            require(problems, r["iterations"], key, vt::number_integer, "$.result.iterations");
        }
    }

    const json& spec = doc["spectrum"];
    std::pair<int, int> prev{std::numeric_limits<int>::min(), std::numeric_limits<int>::min()};
    for (std::size_t i = 0; i < spec.size(); ++i) {
        const json& e = spec[i];
        const std::string where = "$.spectrum[" + std::to_string(i) + "]";
        if (!e.is_array() || e.size() != 4 || !e[0].is_number_integer() || !e[1].is_number_integer() ||
            !e[2].is_number() || !e[3].is_number()) {
            problems.push_back(where + " is not [n, k, re, im]");
            continue;
        }
        const std::pair<int, int> key{e[1].get<int>(), e[0].get<int>()};
        if (key.first < 1) problems.push_back(where + " has k < 1");
        if (!(prev < key)) problems.push_back(where + " is out of (k, n) order");
        prev = key;
    }
    return problems;
}

std::vector<std::string> validate_branch_csv(std::string_view csv) {
    std::vector<std::string> problems;
    std::vector<std::string> lines;
    for (std::string line : split(csv, '\n')) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(std::move(line));
    }
    if (!lines.empty() && lines.back().empty()) lines.pop_back();
    if (lines.empty() || lines.front() != kBranchHeader) return {"header does not match the frozen column list"};
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const std::vector<std::string> cells = split(lines[i], ',');
        const std::string where = "row " + std::to_string(i);
        if (cells.size() != 10) {
            problems.push_back(where + " has " + std::to_string(cells.size()) + " cells");
            continue;
        }
        const std::string& status = cells[9];
        if (status != "converged" && status != "failed") problems.push_back(where + " has unknown status");
        if (!is_number(cells[0])) problems.push_back(where + " has a non-numeric rho");
        for (std::size_t c = 1; c < 9; ++c) {
            const bool ok = status == "converged" ? is_number(cells[c]) : cells[c].empty();
            if (!ok) problems.push_back(where + " column " + std::to_string(c + 1) + " is malformed");
        }
    }
    return problems;
}

std::vector<std::string> validate_verify_document(const json& doc) {
    using vt = json::value_t;
    std::vector<std::string> problems;
    if (!doc.is_object()) return {"document is not an object"};
    require(problems, doc, "schema_version", vt::number_integer, "$");
    require(problems, doc, "kind", vt::string, "$");
    require(problems, doc, "params", vt::object, "$");
    require(problems, doc, "passed", vt::boolean, "$");
    require(problems, doc, "checks", vt::array, "$");
    if (!problems.empty()) return problems;
    for (std::size_t i = 0; i < doc["checks"].size(); ++i) {
        const json& c = doc["checks"][i];
        const std::string where = "$.checks[" + std::to_string(i) + "]";
        require(problems, c, "name", vt::string, where);
        require(problems, c, "status", vt::string, where);
        require(problems, c, "detail", vt::string, where);
        if (c.contains("status") && c["status"] != "pass" && c["status"] != "warn" && c["status"] != "fail") {
            problems.push_back(where + ".status is not pass/warn/fail");
        }
    }
    return problems;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Time-periodic solutions of the damped nonlinear wave equation"};
    app.require_subcommand(1);
    Flags f;

    CLI::App* solve = app.add_subcommand("solve", "Solve one branch point and print it as JSON");
    add_model_flags(*solve, f);
    solve->add_option("--rho", f.rho, "Amplitude of the cos(t) sin(x) mode");
    solve->add_option("--resume", f.resume, "Reload a solve document, re-check it and print it again");
    solve->add_option("--format", f.format, "Output format")->check(CLI::IsMember({"json"}));

    CLI::App* branch = app.add_subcommand("branch", "Trace the branch over a log-spaced amplitude grid");
    add_model_flags(*branch, f);
    branch->add_option("--rho-min", f.rho_min, "Smallest amplitude");
    branch->add_option("--rho-max", f.rho_max, "Largest amplitude");
    branch->add_option("--points", f.points, "Number of grid points");
    branch->add_option("--format", f.format, "Output format")->check(CLI::IsMember({"csv", "json"}));

    CLI::App* verify = app.add_subcommand("verify", "Run the verification suite");
    add_model_flags(*verify, f);
    verify->add_flag("--quick", f.quick, "Reduced sample counts, no full solve");
    verify->add_option("--format", f.format, "Output format")->check(CLI::IsMember({"text", "json"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitInvalid;
    }

    if (solve->parsed()) return cmd_solve(f, out, err);
    if (branch->parsed()) return cmd_branch(f, out, err);
    return cmd_verify(f, out, err);
}

}  // namespace wavebif::cli
