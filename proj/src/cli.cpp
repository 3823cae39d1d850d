#include "leraykit/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "leraykit/bwcert.hpp"
#include "leraykit/emcert.hpp"
#include "leraykit/errors.hpp"
#include "leraykit/specialfn.hpp"
#include "leraykit/symbol.hpp"

namespace leraykit::cli {

using nlohmann::json;

namespace {

class IoError : public Error {
public:
    using Error::Error;
};

json number(double v)
{
    if (!std::isfinite(v)) {
        return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return std::strtod(buf, nullptr);
}

json number(const Real& v)
{
    const double d = v.convert_to<double>();
    if (std::isfinite(d)) {
        return number(d);
    }
    return format_real(v, 15);
}

std::string cell_text(const json& c)
{
    if (c.is_string()) {
        std::string s = c.get<std::string>();
        if (s.find_first_of(",\"\n") != std::string::npos) {
            std::string q = "\"";
            for (char ch : s) {
                q += ch;
                if (ch == '"') {
                    q += '"';
                }
            }
            return q + "\"";
        }
        return s;
    }
    if (c.is_number_float()) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.15g", c.get<double>());
        return buf;
    }
    return c.dump();
}

// "2/3" as an exact fraction, otherwise a decimal literal.
Real parse_real(const std::string& text, const std::string& what)
{
    try {
        if (text.find('/') != std::string::npos) {
            return to_real(exact::BigRational::parse(text));
        }
        char* end = nullptr;
        std::strtod(text.c_str(), &end);
        if (text.empty() || *end != '\0') {
            throw DomainError("");
        }
        return Real(text);
    } catch (const std::exception&) {
        throw DomainError(what + ": cannot parse '" + text + "' as a number");
    }
}

std::pair<int, int> parse_k_range(const std::string& text)
{
    auto to_int = [&](const std::string& s) {
        char* end = nullptr;
        const long v = std::strtol(s.c_str(), &end, 10);
        if (s.empty() || *end != '\0' || v < 0 || v > 1000000) {
            throw DomainError("--k: expected a non-negative integer or a range a..b, got '" + text + "'");
        }
        return static_cast<int>(v);
    };
    const auto dots = text.find("..");
    if (dots == std::string::npos) {
        const int k = to_int(text);
        return {k, k};
    }
    const int a = to_int(text.substr(0, dots));
    const int b = to_int(text.substr(dots + 2));
    if (b < a) {
        throw DomainError("--k: empty range '" + text + "'");
    }
    return {a, b};
}

symbol::MeasureTag resolve_measure(const std::optional<std::string>& d, const std::optional<std::string>& measure)
{
    if (d.has_value() == measure.has_value()) {
        throw DomainError("give exactly one of --d and --measure");
    }
    if (d) {
        return symbol::MeasureTag::generic(parse_real(*d, "--d"));
    }
    return symbol::MeasureTag::parse(*measure);
}

std::vector<double> grid_points(const Grid& g)
{
    std::vector<double> out;
    for (int i = 0; i < g.count; ++i) {
        const double t = static_cast<double>(i) / (g.count - 1);
        out.push_back(g.log ? g.min * std::pow(g.max / g.min, t) : g.min + (g.max - g.min) * t);
    }
    out.back() = g.max;
    return out;
}

std::string file_tag(std::string text)
{
    std::string out;
    for (char c : text) {
        if (c == '/') {
            out += "over";
        } else if (std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '-') {
            out += c;
        } else {
            out += '_';
        }
    }
    return out;
}

void write_file(const std::string& path, const std::string& content)
{
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw IoError("cannot open '" + path + "' for writing");
    }
    f << content;
    if (!f) {
        throw IoError("write to '" + path + "' failed");
    }
}

// Writes to --output when given, otherwise to `out`.
void emit(const RunConfig& cfg, const std::vector<Table>& tables, const std::vector<Certificate>& certs,
          std::ostream& out)
{
    std::string text;
    if (cfg.format == OutputFormat::json) {
        text = report_bundle(cfg, certs, tables).dump(2) + "\n";
    } else {
        for (std::size_t i = 0; i < tables.size(); ++i) {
            if (i > 0) {
                text += "\n";
            }
            text += to_csv(tables[i]);
        }
    }
    if (cfg.output.empty()) {
        out << text;
    } else {
        write_file(cfg.output, text);
    }
}

struct Options {
    RunConfig cfg;
    std::string format = "csv";
    std::string scale = "log";
    // symbol / norm / scan
    std::string gamma = "";
    std::optional<std::string> d;
    std::optional<std::string> measure;
    std::string k = "0";
    // figures
    std::string figure;
    std::string out_dir;
    std::vector<std::string> values;
    // certify
    std::string suite = "all";
    // phi
    std::string r;
    std::string q;
};

Table symbol_table(const Options& o)
{
    const Real gamma = parse_real(o.gamma, "--gamma");
    const symbol::MeasureTag tag = resolve_measure(o.d, o.measure);
    const Real d = tag.exponent(gamma);
    const auto [k0, k1] = parse_k_range(o.k);
    const bool bounded = symbol::boundedness_interval(gamma, 0).contains(d);
    Table t{"symbol", {"k", "J", "sqrtJ", "bounded", "error_radius"}, {}};
    for (int k = k0; k <= k1; ++k) {
        const symbol::SymbolQuery query{gamma, d, k};
        const BoundedFloat j = symbol::symbol_value(query, o.cfg.tolerance);
        const BoundedFloat s = symbol::sub_norm(query, o.cfg.tolerance);
        t.rows.push_back({k, number(j.value()), number(s.value()), bounded, number(j.radius())});
    }
    return t;
}

Table norm_table(const Options& o)
{
    const Real gamma = parse_real(o.gamma, "--gamma");
    const symbol::MeasureTag tag = resolve_measure(o.d, o.measure);
    const symbol::NormResult n = symbol::leray_norm(gamma, tag, o.cfg.tolerance, o.cfg.k_max);
    Table t{"norm", {"gamma", "measure", "d", "norm", "error_radius", "method", "argmax_k", "converged"}, {}};
    t.rows.push_back({number(gamma), tag.name(), number(n.d), number(n.value.value()), number(n.value.radius()), n.method,
                      n.argmax_k, n.converged});
    return t;
}

Table scan_table(const Options& o)
{
    const Real gamma = parse_real(o.gamma, "--gamma");
    const symbol::MeasureTag tag = resolve_measure(o.d, o.measure);
    const Real d = tag.exponent(gamma);
    const symbol::ScanResult s = symbol::monotonicity_scan(gamma, d, o.cfg.k_max, o.cfg.tolerance);
    Table t{"scan", {"gamma", "d", "k_max", "monotonicity", "witness_k"}, {}};
    t.rows.push_back({number(gamma), number(d), o.cfg.k_max, symbol::to_string(s.kind), s.witness_k});
    return t;
}

Table phi_table(const Options& o)
{
    const Real r = parse_real(o.r, "--r");
    const Real q = parse_real(o.q, "--q");
    const BoundedFloat v = special::phi(r, q, o.cfg.tolerance);
    Table t{"phi", {"r", "q", "Phi", "error_radius", "sandwich_lower", "sandwich_upper"}, {}};
    json lo = "";
    json hi = "";
    if (r > q - 1 && r > 0) {
        const auto s = special::phi_sandwich(r, q);
        lo = number(s.lower);
        hi = number(s.upper);
    }
    t.rows.push_back({number(r), number(q), number(v.value()), number(v.radius()), lo, hi});
    return t;
}

Table figures(const Options& o)
{
    if (o.out_dir.empty()) {
        throw DomainError("figures: --out is required");
    }
    std::error_code ec;
    std::filesystem::create_directories(o.out_dir, ec);
    if (ec) {
        throw IoError("cannot create '" + o.out_dir + "': " + ec.message());
    }
    Table listing{"figures", {"figure", "parameter", "value", "path", "rows"}, {}};
    const bool j_sweep = o.figure == "j-sweep";
    std::vector<std::string> values = o.values;
    if (values.empty()) {
        values = j_sweep ? std::vector<std::string>{"1", "2", "2.5", "3", "4"}
                         : std::vector<std::string>{"0", "1/4", "1/2", "2/3", "1"};
    }
    for (const std::string& text : values) {
        Table t;
        std::string path;
        if (j_sweep) {
            const Real gamma = parse_real(o.gamma.empty() ? "5" : o.gamma, "--gamma");
            const Real d = parse_real(text, "--values");
            t = {"j-sweep", {"k", "J", "error_radius"}, {}};
            for (int k = 0; k <= o.cfg.k_max; ++k) {
                const BoundedFloat j = symbol::symbol_value({gamma, d, k}, o.cfg.tolerance);
                t.rows.push_back({k, number(j.value()), number(j.radius())});
            }
            path = (std::filesystem::path(o.out_dir) / ("j-sweep_d_" + file_tag(text) + ".csv")).string();
        } else {
            const Real q = parse_real(text, "--values");
            Grid g = o.cfg.grid;
            if (!o.cfg.grid_min_set) {
                g.min = std::max(q.convert_to<double>(), 0.0) + 0.01;
            }
            if (!(g.min < g.max)) {
                throw DomainError("phi-sweep: grid min must be below grid max");
            }
            t = {"phi-sweep", {"r", "Phi", "error_radius"}, {}};
            for (double r : grid_points(g)) {
                const BoundedFloat v = special::phi(Real(r), q, o.cfg.tolerance);
                t.rows.push_back({number(r), number(v.value()), number(v.radius())});
            }
            path = (std::filesystem::path(o.out_dir) / ("phi-sweep_q_" + file_tag(text) + ".csv")).string();
        }
        write_file(path, to_csv(t));
        listing.rows.push_back({o.figure, j_sweep ? "d" : "q", text, path, t.rows.size()});
    }
    return listing;
}

int certify(const Options& o, std::ostream& out, std::ostream& err)
{
    std::vector<Certificate> certs;
    if (o.suite == "bw" || o.suite == "all") {
        for (auto& c : bw::run_suite(o.cfg.tolerance)) {
            certs.push_back(std::move(c));
        }
    }
    if (o.suite == "em" || o.suite == "all") {
        for (auto& c : em::run_suite(o.cfg.tolerance)) {
            certs.push_back(std::move(c));
        }
    }
    Table summary{"certificates", {"claim_id", "method", "verdict"}, {}};
    for (const auto& c : certs) {
        summary.rows.push_back({c.claim_id, to_string(c.method), c.verdict});
    }
    if (!o.cfg.output.empty()) {
        write_file(o.cfg.output, report_bundle(o.cfg, certs, {summary}).dump(2) + "\n");
        RunConfig to_stdout = o.cfg;
        to_stdout.output.clear();
        emit(to_stdout, {summary}, certs, out);
    } else {
        emit(o.cfg, {summary}, certs, out);
    }
    if (const Certificate* bad = first_failure(certs)) {
        err << "certificate failed: " << bad->claim_id << "\n";
        return 1;
    }
    return 0;
}

}  // namespace

void RunConfig::validate() const
{
    if (!(tolerance > 0)) {
        throw DomainError("tolerance must be positive");
    }
    if (k_max < 0) {
        throw DomainError("k-max must be non-negative");
    }
    if (grid.count < 2) {
        throw DomainError("grid count must be at least 2");
    }
    if (grid_min_set && !(grid.min < grid.max)) {
        throw DomainError("grid min must be below grid max");
    }
    if (grid.log && grid_min_set && !(grid.min > 0)) {
        throw DomainError("log grid needs a positive minimum");
    }
}

std::string to_csv(const Table& t)
{
    std::string s;
    for (std::size_t i = 0; i < t.columns.size(); ++i) {
        s += (i ? "," : "") + cell_text(t.columns[i]);
    }
    s += "\n";
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            s += (i ? "," : "") + cell_text(row[i]);
        }
        s += "\n";
    }
    return s;
}

void to_json(json& j, const Table& t)
{
    j = {{"name", t.name}, {"columns", t.columns}, {"rows", t.rows}};
}

void to_json(json& j, const RunConfig& c)
{
    j = {{"tolerance", c.tolerance},
         {"k_max", c.k_max},
         {"grid", {{"min", c.grid_min_set ? json(c.grid.min) : json("auto")},
                   {"max", c.grid.max},
                   {"count", c.grid.count},
                   {"scale", c.grid.log ? "log" : "linear"}}},
         {"format", c.format == OutputFormat::json ? "json" : "csv"},
         {"output", c.output},
         {"precision_bits", working_precision_bits()}};
}

json report_bundle(const RunConfig& config, const std::vector<Certificate>& certificates, const std::vector<Table>& tables)
{
    json certs = json::array();
    for (const auto& c : certificates) {
        json j;
        leraykit::to_json(j, c);
        certs.push_back(j);
    }
    json tabs = json::array();
    for (const auto& t : tables) {
        json j;
        to_json(j, t);
        tabs.push_back(j);
    }
    json cfg;
    to_json(cfg, config);
    return {{"version", LERAYKIT_VERSION}, {"config", cfg}, {"certificates", certs}, {"tables", tabs}};
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    Options o;
    CLI::App app{"Leray transform symbols, norms and certificate suites", "leraykit"};
    app.set_config("--config", "", "key = value file; flags on the command line override it");
    app.fallthrough();
    app.require_subcommand(1);
    app.add_option("--tol", o.cfg.tolerance, "absolute error tolerance")->capture_default_str();
    app.add_option("--k-max", o.cfg.k_max, "largest mode index for scans and sweeps")->capture_default_str();
    app.add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    app.add_option("--output", o.cfg.output, "write the result here instead of stdout");
    auto* gmin = app.add_option("--grid-min", o.cfg.grid.min, "grid start (phi-sweep default: max(q,0)+0.01)");
    app.add_option("--grid-max", o.cfg.grid.max, "grid end")->capture_default_str();
    app.add_option("--grid-count", o.cfg.grid.count, "number of grid points")->capture_default_str();
    app.add_option("--grid-scale", o.scale, "log or linear")->check(CLI::IsMember({"log", "linear"}))->capture_default_str();

    const std::vector<std::string> measures{"pairing", "preferred", "dual-preferred", "dual_preferred", "lebesgue"};
    auto add_measure = [&](CLI::App* sub) {
        sub->add_option("--gamma", o.gamma, "exponent gamma > 1")->required();
        sub->add_option("--d", o.d, "measure exponent d");
        sub->add_option("--measure", o.measure, "named measure")->check(CLI::IsMember(measures));
    };

    auto* sym = app.add_subcommand("symbol", "J(d, gamma, k) over a k range");
    add_measure(sym);
    sym->add_option("--k", o.k, "k or a..b")->capture_default_str();

    auto* norm = app.add_subcommand("norm", "L^2 norm of the Leray transform");
    add_measure(norm);

    auto* scan = app.add_subcommand("scan", "monotonicity of k -> J(d, gamma, k)");
    add_measure(scan);

    auto* fig = app.add_subcommand("figures", "data behind the J and Phi plots");
    fig->add_option("figure", o.figure, "j-sweep or phi-sweep")->required()->check(CLI::IsMember({"j-sweep", "phi-sweep"}));
    fig->add_option("--out", o.out_dir, "output directory")->required();
    fig->add_option("--gamma", o.gamma, "gamma for j-sweep (default 5)");
    fig->add_option("--values", o.values, "d values (j-sweep) or q values (phi-sweep)");

    auto* cert = app.add_subcommand("certify", "run certificate suites");
    cert->add_option("suite", o.suite, "bw, em or all")->check(CLI::IsMember({"bw", "em", "all"}))->capture_default_str();

    auto* phi = app.add_subcommand("phi", "Phi(r, q) with error radius and rational bounds");
    phi->add_option("--r", o.r, "r")->required();
    phi->add_option("--q", o.q, "q")->required();

    auto* version = app.add_subcommand("version", "print the version");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(std::move(reversed));
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        init_precision_from_env();
        o.cfg.format = o.format == "json" ? OutputFormat::json : OutputFormat::csv;
        o.cfg.grid.log = o.scale == "log";
        o.cfg.grid_min_set = gmin->count() > 0;
        o.cfg.validate();

        if (version->parsed()) {
            if (o.cfg.format == OutputFormat::json) {
                emit(o.cfg, {}, {}, out);
            } else {
                out << "leraykit " << LERAYKIT_VERSION << "\n";
            }
            return 0;
        }
        if (cert->parsed()) {
            return certify(o, out, err);
        }
        Table t;
        if (sym->parsed()) {
            t = symbol_table(o);
        } else if (norm->parsed()) {
            t = norm_table(o);
        } else if (scan->parsed()) {
            t = scan_table(o);
        } else if (phi->parsed()) {
            t = phi_table(o);
        } else if (fig->parsed()) {
            t = figures(o);
        }
        emit(o.cfg, {t}, {}, out);
        return 0;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace leraykit::cli
