#pragma once

// Command-line front end. All logic lives here so that tests can drive run()
// with in-memory streams; main.cpp only forwards argv.
//
// Exit codes: 0 success, 1 a law failed, 2 evaluation or data error, 64 usage error.

#include "chronofrac/chronofrac.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace chronofrac::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitLawFailed = 1;
inline constexpr int kExitEval = 2;
inline constexpr int kExitUsage = 64;

enum class Format { Json, Csv };

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string scale;
    std::string fn;
    std::string csv;
    std::string order;
    std::string at;
    int grid = 0;
    std::vector<std::string> window;
    std::string from;
    std::string to;
    std::string base;
    std::string f;
    std::string g;
    std::uint64_t seed = 1;
    int cases = 200;
    bool inject_fault = false;
    std::string format = "json";
    std::optional<double> tol;
    std::optional<int> max_samples;
    std::optional<double> delta0;
};

namespace detail {

inline double parse_number(const std::string& text, const char* what)
{
    try {
        return parse_rational(text).to_double();
    } catch (const Error&) {
    }
    const auto v = chronofrac::detail::parse_double(text);
    if (!v)
        throw UsageError(std::string("invalid ") + what + ": '" + text + "'");
    return *v;
}

inline Rational parse_order(const std::string& text)
{
    try {
        return parse_rational(text);
    } catch (const Error& e) {
        throw UsageError(std::string("invalid order: ") + e.what());
    }
}

inline TimeScale parse_scale_arg(const std::string& text)
{
    try {
        return parse_scale(text);
    } catch (const Error& e) {
        throw UsageError(std::string("invalid scale: ") + e.what());
    }
}

inline Expr parse_expr_arg(const std::string& text, const char* flag)
{
    try {
        return parse_expr(text);
    } catch (const SyntaxError& e) {
        throw UsageError(std::string("invalid expression for ") + flag + ": " + e.what());
    }
}

inline LimitOptions limit_options(const RunConfig& cfg)
{
    LimitOptions opts;
    if (const char* env = std::getenv("CHRONOFRAC_TOL"); env && *env && !cfg.tol) {
        const auto v = chronofrac::detail::parse_double(env);
        if (!v || *v <= 0.0)
            throw UsageError(std::string("CHRONOFRAC_TOL must be a positive number, got '") + env + "'");
        opts.tol = *v;
    }
    if (cfg.tol) {
        if (*cfg.tol <= 0.0)
            throw UsageError("--tol must be positive");
        opts.tol = *cfg.tol;
    }
    if (cfg.max_samples) {
        if (*cfg.max_samples < 2)
            throw UsageError("--max-samples must be at least 2");
        opts.max_samples = *cfg.max_samples;
    }
    if (cfg.delta0) {
        if (*cfg.delta0 <= 0.0)
            throw UsageError("--delta0 must be positive");
        opts.delta0 = *cfg.delta0;
    }
    return opts;
}

// Scale and function from either --scale/--fn or --csv.
inline SignalTable function_source(const RunConfig& cfg)
{
    if (!cfg.csv.empty()) {
        if (!cfg.fn.empty())
            throw UsageError("--fn and --csv are mutually exclusive");
        if (!cfg.scale.empty())
            throw UsageError("--csv defines its own scale; drop --scale");
        return ingest_csv_file(cfg.csv);
    }
    if (cfg.fn.empty())
        throw UsageError("one of --fn or --csv is required");
    if (cfg.scale.empty())
        throw UsageError("--scale is required with --fn");
    return {parse_scale_arg(cfg.scale), parse_expr_arg(cfg.fn, "--fn")};
}

inline std::optional<Window> window_arg(const RunConfig& cfg)
{
    if (cfg.window.empty())
        return std::nullopt;
    if (cfg.window.size() != 2)
        throw UsageError("--window takes two values: lo hi");
    const Window w{parse_number(cfg.window[0], "window"), parse_number(cfg.window[1], "window")};
    if (!(w.lo <= w.hi))
        throw UsageError("--window needs lo <= hi");
    return w;
}

inline Format format_arg(const RunConfig& cfg)
{
    if (cfg.format == "json")
        return Format::Json;
    if (cfg.format == "csv")
        return Format::Csv;
    throw UsageError("--format must be json or csv");
}

// Points of a grid evaluation: every scattered point of the window plus n
// equispaced points on each dense segment.
inline std::vector<double> grid_points(const TimeScale& scale, Window w, int n)
{
    std::vector<double> pts;
    for (const auto& p : scale.pieces(w.lo, w.hi)) {
        if (!p.dense) {
            for (double x : {p.a, p.b})
                if (x >= w.lo - tol_at(w.lo) && x <= w.hi + tol_at(w.hi))
                    pts.push_back(x);
            continue;
        }
        if (n == 1) {
            pts.push_back(0.5 * (p.a + p.b));
            continue;
        }
        for (int i = 0; i < n; ++i) {
            const double x = i == n - 1 ? p.b : p.a + (p.b - p.a) * i / (n - 1);
            if (x >= w.lo - tol_at(w.lo) && x <= w.hi + tol_at(w.hi))
                pts.push_back(x);
        }
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end(), [](double a, double b) { return near(a, b); }), pts.end());
    return pts;
}

class RowWriter {
public:
    RowWriter(std::ostream& out, Format format, std::vector<std::string> columns)
        : out_(out), format_(format), columns_(std::move(columns))
    {
        if (format_ == Format::Csv) {
            for (std::size_t i = 0; i < columns_.size(); ++i)
                out_ << (i ? "," : "") << columns_[i];
            out_ << "\n";
        }
    }

    struct Cell {
        enum class Kind { Number, Text, Bool, Missing } kind;
        double number = 0.0;
        std::string text;
        bool flag = false;
    };
    static Cell num(double x) { return {Cell::Kind::Number, x, {}, false}; }
    static Cell text(std::string s) { return {Cell::Kind::Text, 0.0, std::move(s), false}; }
    static Cell flag(bool b) { return {Cell::Kind::Bool, 0.0, {}, b}; }
    static Cell missing() { return {Cell::Kind::Missing, 0.0, {}, false}; }

    void row(const std::vector<Cell>& cells)
    {
        if (format_ == Format::Json) {
            JsonLine line;
            for (std::size_t i = 0; i < cells.size(); ++i) {
                const auto& c = cells[i];
                switch (c.kind) {
                case Cell::Kind::Number: line.field(columns_[i], c.number); break;
                case Cell::Kind::Text: line.field(columns_[i], c.text); break;
                case Cell::Kind::Bool: line.field(columns_[i], c.flag); break;
                case Cell::Kind::Missing: break;
                }
            }
            out_ << line.str() << "\n";
            return;
        }
        for (std::size_t i = 0; i < cells.size(); ++i) {
            const auto& c = cells[i];
            out_ << (i ? "," : "");
            switch (c.kind) {
            case Cell::Kind::Number: out_ << format_csv_number(c.number); break;
            case Cell::Kind::Text: out_ << csv_field(c.text); break;
            case Cell::Kind::Bool: out_ << (c.flag ? "true" : "false"); break;
            case Cell::Kind::Missing: break;
            }
        }
        out_ << "\n";
    }

private:
    std::ostream& out_;
    Format format_;
    std::vector<std::string> columns_;

    static std::string csv_field(const std::string& s)
    {
        if (s.find_first_of(",\"\n") == std::string::npos)
            return s;
        std::string q = "\"";
        for (char c : s)
            q += c == '"' ? std::string("\"\"") : std::string(1, c);
        return q + "\"";
    }
};

inline std::string error_label(const Error& e) { return "error:" + std::string(to_string(e.code())); }

// ---------------------------------------------------------------------------

inline int cmd_deriv(const RunConfig& cfg, std::ostream& out, std::ostream& err)
{
    const Format format = format_arg(cfg);
    const LimitOptions opts = limit_options(cfg);
    if (cfg.order.empty())
        throw UsageError("--order is required");
    const Rational beta = parse_order(cfg.order);
    if (beta < Rational(0))
        throw UsageError("--order must be nonnegative");
    if (cfg.at.empty() == (cfg.grid <= 0))
        throw UsageError("give exactly one of --at or --grid");
    const SignalTable src = function_source(cfg);

    std::vector<double> points;
    if (!cfg.at.empty()) {
        points.push_back(parse_number(cfg.at, "--at"));
    } else {
        auto w = window_arg(cfg);
        if (!w) {
            const auto lo = src.scale.min();
            const auto hi = src.scale.max();
            if (!lo || !hi)
                throw UsageError("--grid on an unbounded scale needs --window");
            w = Window{*lo, *hi};
        }
        points = grid_points(src.scale, *w, cfg.grid);
    }

    RowWriter rows(out, format, {"t", "value", "method", "error_estimate"});
    bool failed = false;
    for (double t : points) {
        try {
            const DerivResult r = beta > Rational(0) && beta <= Rational(1)
                                      ? frac_derivative(src.fn, src.scale, t, FractionalOrder(beta), opts)
                                      : higher_frac_derivative(src.fn, src.scale, t, HigherOrder(beta), opts);
            rows.row({RowWriter::num(t), RowWriter::num(r.value), RowWriter::text(std::string(to_string(r.method))),
                      RowWriter::num(r.error_estimate)});
        } catch (const Error& e) {
            failed = true;
            err << "t = " << shortest_repr(t) << ": " << e.what() << "\n";
            rows.row({RowWriter::num(t), RowWriter::missing(), RowWriter::text(error_label(e)), RowWriter::missing()});
        }
    }
    return failed ? kExitEval : kExitOk;
}

inline int cmd_integ(const RunConfig& cfg, std::ostream& out, std::ostream& err)
{
    const Format format = format_arg(cfg);
    const LimitOptions opts = limit_options(cfg);
    if (cfg.order.empty() || cfg.from.empty() || cfg.to.empty())
        throw UsageError("--order, --from and --to are required");
    const Rational beta = parse_order(cfg.order);
    if (beta < Rational(0) || beta > Rational(1))
        throw UsageError("integral order must lie in [0, 1]");
    const double a = parse_number(cfg.from, "--from");
    const double b = parse_number(cfg.to, "--to");
    const SignalTable src = function_source(cfg);
    Window w;
    if (auto given = window_arg(cfg)) {
        w = *given;
    } else {
        const double lo = std::min(a, b), hi = std::max(a, b);
        w = {lo - TimeScale::default_delta0(lo), hi + TimeScale::default_delta0(hi)};
    }
    std::optional<double> base;
    if (!cfg.base.empty())
        base = parse_number(cfg.base, "--base");

    RowWriter rows(out, format, {"from", "to", "beta", "value"});
    try {
        const double value = cauchy_frac_integral(src.fn, src.scale, a, b, beta, w, base, opts);
        rows.row({RowWriter::num(a), RowWriter::num(b), RowWriter::text(beta.to_string()), RowWriter::num(value)});
        return kExitOk;
    } catch (const Error& e) {
        err << e.what() << "\n";
        rows.row({RowWriter::num(a), RowWriter::num(b), RowWriter::text(beta.to_string()), RowWriter::missing()});
        return kExitEval;
    }
}

inline int cmd_chain(const RunConfig& cfg, std::ostream& out, std::ostream& err)
{
    const Format format = format_arg(cfg);
    const LimitOptions opts = limit_options(cfg);
    if (cfg.scale.empty() || cfg.f.empty() || cfg.g.empty() || cfg.order.empty() || cfg.at.empty())
        throw UsageError("--scale, --f, --g, --order and --at are required");
    const TimeScale scale = parse_scale_arg(cfg.scale);
    const Expr f = parse_expr_arg(cfg.f, "--f");
    const Expr g = parse_expr_arg(cfg.g, "--g");
    const Rational order = parse_order(cfg.order);
    if (!(order > Rational(0) && order < Rational(1)))
        throw UsageError("chain rule order must lie in (0, 1)");
    const double t = parse_number(cfg.at, "--at");

    RowWriter rows(out, format, {"t", "alpha", "c"});
    try {
        const double c = chain_rule_witness(f, g, scale, t, FractionalOrder(order), opts);
        rows.row({RowWriter::num(t), RowWriter::text(order.to_string()), RowWriter::num(c)});
        return kExitOk;
    } catch (const Error& e) {
        err << e.what() << "\n";
        rows.row({RowWriter::num(t), RowWriter::text(order.to_string()), RowWriter::missing()});
        return kExitEval;
    }
}

inline int cmd_laws(const RunConfig& cfg, std::ostream& out, std::ostream& err)
{
    const Format format = format_arg(cfg);
    if (cfg.cases <= 0)
        throw UsageError("--cases must be positive");
    LawSuiteOptions opts;
    opts.seed = cfg.seed;
    opts.cases = cfg.cases;
    opts.limit = limit_options(cfg);
    opts.inject_fault = cfg.inject_fault;
    const auto reports = run_randomized_suite(opts);
    if (format == Format::Json) {
        for (const auto& r : reports)
            out << r.to_json() << "\n";
    } else {
        RowWriter rows(out, format,
                       {"law", "regime", "threshold", "cases_run", "max_residual", "max_error_estimate",
                        "case_errors", "passed", "worst_case"});
        for (const auto& r : reports)
            rows.row({RowWriter::text(r.law_id), RowWriter::text(std::string(to_string(r.regime))),
                      RowWriter::num(r.threshold), RowWriter::num(r.cases_run), RowWriter::num(r.max_residual),
                      RowWriter::num(r.max_error_estimate), RowWriter::num(r.case_errors),
                      RowWriter::flag(r.passed), RowWriter::text(r.worst_case)});
    }
    for (const auto& r : reports)
        if (!r.passed)
            err << "FAILED " << r.law_id << " (" << to_string(r.regime) << "): max residual "
                << shortest_repr(r.max_residual) << " > " << shortest_repr(r.threshold) << " at " << r.worst_case
                << "\n";
    return all_passed(reports) ? kExitOk : kExitLawFailed;
}

inline std::string point_label(const PointClass& c)
{
    if (c.isolated())
        return "isolated";
    if (c.right_scattered)
        return "right_scattered";
    if (c.left_scattered)
        return "left_scattered";
    return "dense";
}

inline int cmd_info(const RunConfig& cfg, std::ostream& out, std::ostream& err)
{
    const Format format = format_arg(cfg);
    if (cfg.scale.empty())
        throw UsageError("--scale is required");
    const TimeScale scale = parse_scale_arg(cfg.scale);
    if (cfg.at.empty()) {
        RowWriter rows(out, format, {"scale", "min", "max"});
        const auto lo = scale.min();
        const auto hi = scale.max();
        rows.row({RowWriter::text(scale.describe()), lo ? RowWriter::num(*lo) : RowWriter::missing(),
                  hi ? RowWriter::num(*hi) : RowWriter::missing()});
        return kExitOk;
    }
    const double t = parse_number(cfg.at, "--at");
    RowWriter rows(out, format,
                   {"t", "sigma", "rho", "mu", "class", "right_scattered", "left_scattered", "is_min", "is_max",
                    "in_kappa"});
    try {
        const PointClass c = scale.classify(t);
        rows.row({RowWriter::num(t), RowWriter::num(scale.sigma(t)), RowWriter::num(scale.rho(t)),
                  RowWriter::num(scale.graininess(t)), RowWriter::text(point_label(c)),
                  RowWriter::flag(c.right_scattered), RowWriter::flag(c.left_scattered), RowWriter::flag(c.is_min),
                  RowWriter::flag(c.is_max), RowWriter::flag(scale.in_kappa(t))});
        return kExitOk;
    } catch (const Error& e) {
        err << e.what() << "\n";
        return kExitEval;
    }
}

} // namespace detail

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    RunConfig cfg;
    CLI::App app{"Fractional derivatives and integrals on time scales", "chronofrac"};
    app.require_subcommand(1);

    auto add_format = [&](CLI::App* sub) {
        sub->add_option("--format", cfg.format, "Output format: json or csv")->default_str("json");
    };
    auto add_limits = [&](CLI::App* sub) {
        sub->add_option("--tol", cfg.tol, "Limit tolerance (overrides CHRONOFRAC_TOL)");
        sub->add_option("--max-samples", cfg.max_samples, "Approach points per side");
        sub->add_option("--delta0", cfg.delta0, "Initial approach offset");
    };
    auto add_source = [&](CLI::App* sub) {
        sub->add_option("--scale", cfg.scale, "Time scale, e.g. Z, hZ:1/2, R[0,1], cantor:3, union:{[0,1],{2}}");
        sub->add_option("--fn", cfg.fn, "Function of t, e.g. \"t^2\"");
        sub->add_option("--csv", cfg.csv, "CSV file of t,value rows (defines the scale)");
    };

    auto* deriv = app.add_subcommand("deriv", "Fractional derivative of order beta >= 0");
    add_source(deriv);
    deriv->add_option("--order", cfg.order, "Order as p/q or a decimal");
    deriv->add_option("--at", cfg.at, "Evaluation point");
    deriv->add_option("--grid", cfg.grid, "Evaluate at every scattered point and n points per dense segment");
    deriv->add_option("--window", cfg.window, "Grid window: lo hi")->expected(2);
    add_limits(deriv);
    add_format(deriv);

    auto* integ = app.add_subcommand("integ", "Cauchy fractional integral of order beta in [0, 1]");
    add_source(integ);
    integ->add_option("--order", cfg.order, "Order as p/q or a decimal");
    integ->add_option("--from", cfg.from, "Lower limit a");
    integ->add_option("--to", cfg.to, "Upper limit b");
    integ->add_option("--window", cfg.window, "Antiderivative window: lo hi")->expected(2);
    integ->add_option("--base", cfg.base, "Antiderivative base point");
    add_limits(integ);
    add_format(integ);

    auto* chain = app.add_subcommand("chain", "Chain-rule witness c for (f o g)^(alpha)");
    chain->add_option("--scale", cfg.scale, "Time scale");
    chain->add_option("--f", cfg.f, "Outer function f");
    chain->add_option("--g", cfg.g, "Inner function g");
    chain->add_option("--order", cfg.order, "Order alpha in (0, 1)");
    chain->add_option("--at", cfg.at, "Point t");
    add_limits(chain);
    add_format(chain);

    auto* laws = app.add_subcommand("laws", "Randomized residual checks of the calculus identities");
    laws->add_option("--seed", cfg.seed, "Random seed")->default_val(1);
    laws->add_option("--cases", cfg.cases, "Cases per law")->default_val(200);
    laws->add_flag("--inject-fault", cfg.inject_fault)->group("");
    add_limits(laws);
    add_format(laws);

    auto* info = app.add_subcommand("info", "Jump operators and point class");
    info->add_option("--scale", cfg.scale, "Time scale");
    info->add_option("--at", cfg.at, "Point t");
    add_format(info);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n" << app.help();
        return kExitUsage;
    }

    try {
        if (deriv->parsed())
            return detail::cmd_deriv(cfg, out, err);
        if (integ->parsed())
            return detail::cmd_integ(cfg, out, err);
        if (chain->parsed())
            return detail::cmd_chain(cfg, out, err);
        if (laws->parsed())
            return detail::cmd_laws(cfg, out, err);
        return detail::cmd_info(cfg, out, err);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const Error& e) {
        err << e.what() << "\n";
        return kExitEval;
    }
}

} // namespace chronofrac::cli
