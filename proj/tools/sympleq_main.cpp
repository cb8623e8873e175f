// sympleq: invariants and symplectic equivalence of scalar linear
// differential operators at a point and at desk scale.

#include <atomic>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "sympleq/json_io.hpp"
#include "sympleq/match.hpp"
#include "sympleq/model.hpp"
#include "sympleq/quantize.hpp"
#include "sympleq/trace_invariants.hpp"
#include "sympleq/transvectant.hpp"
#include "sympleq/wagner.hpp"

namespace {

using nlohmann::ordered_json;
using namespace sympleq;

// Exit codes (also in README): 0 success / Matched / ModelsCoincide,
// 2 proven distinct, 3 inconclusive, 4 not constant type, 5 non-regular
// symbol, 6 chart not adjusted, 64 usage, 65 data error, 70 internal error.
constexpr int kOk = 0;
constexpr int kDistinct = 2;
constexpr int kInconclusive = 3;
constexpr int kNotConstantType = 4;
constexpr int kNonRegular = 5;
constexpr int kNotAdjusted = 6;
constexpr int kUsage = 64;
constexpr int kDataError = 65;
constexpr int kInternal = 70;

struct CommonOpts {
    double tol = 1e-6;
    std::uint64_t seed = 1;
    std::string grid;
    std::string signature_config;
    std::string output;
    std::string format = "json";
};

struct InputRecord {
    std::string path;
    std::string hash;
    std::string text;
};

InputRecord load_input(const std::string& path) {
    InputRecord rec;
    rec.path = path;
    rec.text = io::read_file(path);
    rec.hash = io::content_hash(rec.text);
    return rec;
}

int threads_from_env() {
    const char* v = std::getenv("SYMPLEQ_THREADS");
    if (!v) return 1;
    int n = std::atoi(v);
    return n > 0 ? n : 1;
}

SignatureConfig load_signature_config(const CommonOpts& opts,
                                      std::vector<InputRecord>& inputs) {
    SignatureConfig cfg;
    if (opts.signature_config.empty()) return cfg;
    InputRecord rec = load_input(opts.signature_config);
    ordered_json j;
    try {
        j = ordered_json::parse(rec.text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError(opts.signature_config + ": " + e.what());
    }
    if (j.contains("kind")) {
        std::string k = j["kind"].get<std::string>();
        if (k == "symplectic")
            cfg.kind = InvariantKind::Symplectic;
        else if (k == "metric")
            cfg.kind = InvariantKind::Metric;
        else
            throw ValidationError(opts.signature_config + ": kind must be 'symplectic' or 'metric'");
    }
    if (j.contains("k_cap")) cfg.k_cap = j["k_cap"].get<unsigned>();
    if (j.contains("include_orbit_dim")) cfg.include_orbit_dim = j["include_orbit_dim"].get<bool>();
    inputs.push_back(std::move(rec));
    return cfg;
}

GridSpec parse_grid(const std::string& spec) {
    GridSpec g;
    if (spec.empty()) throw ValidationError("missing --grid specification");
    std::size_t pos = 0;
    while (pos <= spec.size()) {
        std::size_t end = spec.find(',', pos);
        std::string axis = spec.substr(pos, end == std::string::npos ? end : end - pos);
        std::size_t c1 = axis.find(':'), c2 = axis.rfind(':');
        if (c1 == std::string::npos || c2 == c1)
            throw ValidationError("grid axis '" + axis + "' must be lo:hi:count");
        GridSpec::Axis ax;
        ax.lo = rat_parse(axis.substr(0, c1));
        ax.hi = rat_parse(axis.substr(c1 + 1, c2 - c1 - 1));
        ax.count = static_cast<unsigned>(std::stoul(axis.substr(c2 + 1)));
        if (ax.count == 0) throw ValidationError("grid axis '" + axis + "' has zero points");
        g.axes.push_back(ax);
        if (end == std::string::npos) break;
        pos = end + 1;
    }
    return g;
}

ordered_json config_json(const std::string& command, const CommonOpts& opts) {
    ordered_json c;
    c["command"] = command;
    c["seed"] = opts.seed;
    c["tol"] = io::format_double(opts.tol);
    if (!opts.grid.empty()) c["grid"] = opts.grid;
    if (!opts.signature_config.empty()) c["signature_config"] = opts.signature_config;
    c["format"] = opts.format;
    c["threads"] = threads_from_env();
    return c;
}

ordered_json inputs_json(const std::vector<InputRecord>& inputs) {
    ordered_json a = ordered_json::array();
    for (const auto& rec : inputs) {
        ordered_json e;
        e["path"] = rec.path;
        e["hash"] = rec.hash;
        a.push_back(e);
    }
    return a;
}

std::string render_table(const ordered_json& result, const std::string& prefix = "") {
    std::string out;
    for (const auto& [key, value] : result.items()) {
        std::string name = prefix.empty() ? key : prefix + "." + key;
        if (value.is_object()) {
            out += render_table(value, name);
        } else if (value.is_array() && !value.empty() && value.front().is_primitive()) {
            out += name + ":";
            for (const auto& v : value)
                out += " " + (v.is_string() ? v.get<std::string>() : v.dump());
            out += "\n";
        } else if (value.is_array()) {
            out += name + ": [" + std::to_string(value.size()) + " entries]\n";
        } else {
            out += name + ": " + (value.is_string() ? value.get<std::string>() : value.dump()) + "\n";
        }
    }
    return out;
}

int emit_report(const std::string& command, const CommonOpts& opts,
                const std::vector<InputRecord>& inputs, const ordered_json& result, int code) {
    ordered_json report;
    report["config"] = config_json(command, opts);
    report["inputs"] = inputs_json(inputs);
    report["result"] = result;
    report["exit_code"] = code;
    std::string text =
        opts.format == "table" ? render_table(report["result"]) : report.dump(2) + "\n";
    if (opts.output.empty())
        std::cout << text;
    else
        io::write_file(opts.output, text);
    return code;
}

ordered_json signature_json(const std::vector<SignatureEntry<Rat>>& sig) {
    ordered_json labels = ordered_json::array(), values = ordered_json::array();
    for (const auto& e : sig) {
        labels.push_back(e.label.str());
        values.push_back(rat_str(e.value));
    }
    ordered_json j;
    j["labels"] = labels;
    j["values"] = values;
    return j;
}

std::vector<InvariantLabel> parse_label_list(const std::string& csv) {
    // Labels are comma separated; family parameters also use commas, so split
    // on commas that precede a family prefix.
    std::vector<InvariantLabel> out;
    std::vector<std::string> parts;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= csv.size(); ++i) {
        if (i == csv.size() || (csv[i] == ',' && i + 1 < csv.size() &&
                                (std::isalpha(static_cast<unsigned char>(csv[i + 1]))))) {
            parts.push_back(csv.substr(start, i - start));
            start = i + 1;
        }
    }
    for (const auto& p : parts)
        if (!p.empty()) out.push_back(InvariantLabel::parse(p));
    return out;
}

int cmd_transvect(const CommonOpts& opts, const std::string& pfile, const std::string& qfile,
                  int order, const std::string& kind) {
    std::vector<InputRecord> inputs = {load_input(pfile), load_input(qfile)};
    HomogeneousPoly P = io::parse_homogeneous_poly(inputs[0].text, pfile);
    HomogeneousPoly Q = io::parse_homogeneous_poly(inputs[1].text, qfile);
    HomogeneousPoly R(P.dim(), 0);
    if (kind == "symplectic")
        R = symplectic_transvectant(P, Q, order);
    else if (kind == "metric")
        R = metric_transvectant(P, Q, order);
    else if (kind == "poisson")
        R = poisson_bracket(P, Q);
    else
        throw ValidationError("unknown transvectant kind '" + kind + "'");
    ordered_json result;
    result["kind"] = kind;
    result["order"] = order;
    result["value"] = ordered_json::parse(io::dump_homogeneous_poly(R));
    return emit_report("transvect", opts, inputs, result, kOk);
}

int cmd_invariants(const CommonOpts& opts, const std::string& pfile, const std::string& labels_csv) {
    std::vector<InputRecord> inputs = {load_input(pfile)};
    SignatureConfig cfg = load_signature_config(opts, inputs);
    HomogeneousPoly P = io::parse_homogeneous_poly(inputs[0].text, pfile);
    std::vector<SignatureEntry<Rat>> sig;
    if (!labels_csv.empty()) {
        sig = trace_invariants(P, parse_label_list(labels_csv));
    } else {
        std::vector<InvariantLabel> labels = default_labels(P.dim(), P.degree(), cfg);
        if (labels.empty()) throw LabelError("empty invariant label set for degree-0 symbol");
        sig = trace_invariants(P, labels);
    }
    return emit_report("invariants", opts, inputs, signature_json(sig), kOk);
}

int cmd_signature(const CommonOpts& opts, const std::string& pfile) {
    std::vector<InputRecord> inputs = {load_input(pfile)};
    SignatureConfig cfg = load_signature_config(opts, inputs);
    HomogeneousPoly P = io::parse_homogeneous_poly(inputs[0].text, pfile);
    return emit_report("signature", opts, inputs, signature_json(invariant_signature(P, cfg)), kOk);
}

int cmd_orbit_dim(const CommonOpts& opts, const std::string& pfile) {
    std::vector<InputRecord> inputs = {load_input(pfile)};
    HomogeneousPoly P = io::parse_homogeneous_poly(inputs[0].text, pfile);
    ordered_json result;
    result["orbit_dim"] = sp_orbit_dimension(P);
    std::size_t n = P.dim() / 2;
    result["sp_dim"] = n * (2 * n + 1);
    result["symbol_space_dim"] = monomial_basis(P.dim(), P.degree()).size();
    return emit_report("orbit-dim", opts, inputs, result, kOk);
}

int cmd_match(const CommonOpts& opts, const std::string& pfile, const std::string& qfile,
              int restarts, int max_iters) {
    std::vector<InputRecord> inputs = {load_input(pfile), load_input(qfile)};
    HomogeneousPoly P = io::parse_homogeneous_poly(inputs[0].text, pfile);
    HomogeneousPoly Q = io::parse_homogeneous_poly(inputs[1].text, qfile);
    MatchConfig cfg;
    cfg.restarts = restarts;
    cfg.max_iters = max_iters;
    cfg.tolerance = opts.tol;
    cfg.seed = opts.seed;
    MatchResult r = orbit_match(P, Q, cfg);
    ordered_json result;
    int code = kInternal;
    switch (r.verdict) {
        case MatchResult::Verdict::Matched: {
            result["verdict"] = "Matched";
            ordered_json g = ordered_json::array();
            for (const auto& row : r.g) {
                ordered_json jr = ordered_json::array();
                for (double v : row) jr.push_back(io::format_double(v));
                g.push_back(jr);
            }
            result["g"] = g;
            result["residual"] = io::format_double(r.residual);
            result["symplectic_defect"] = io::format_double(r.symplectic_defect);
            result["winning_restart"] = r.winning_restart;
            code = kOk;
            break;
        }
        case MatchResult::Verdict::SignatureMismatch: {
            result["verdict"] = "SignatureMismatch";
            result["label"] = r.witness.label.str();
            result["value_a"] = io::format_double(r.witness.value_a);
            result["value_b"] = io::format_double(r.witness.value_b);
            code = kDistinct;
            break;
        }
        case MatchResult::Verdict::NoMatchFound: {
            result["verdict"] = "NoMatchFound";
            result["best_residual"] = io::format_double(r.residual);
            code = kInconclusive;
            break;
        }
    }
    return emit_report("match", opts, inputs, result, code);
}

int cmd_wagner(const CommonOpts& opts, const std::string& sfile, bool symbolic) {
    std::vector<InputRecord> inputs = {load_input(sfile)};
    SymTensorField sigma = io::parse_symbol_field(inputs[0].text, sfile);
    ordered_json result;
    if (symbolic || opts.grid.empty()) {
        Connection conn = wagner_connection_symbolic(sigma);
        result["mode"] = "symbolic";
        result["connection"] = ordered_json::parse(io::dump_connection(conn));
        result["preserves_symbol"] = preserves_symbol(conn, sigma);
        result["curvature_is_zero"] = tensor_is_zero(curvature(conn));
        result["torsion_is_zero"] = tensor_is_zero(torsion(conn));
        return emit_report("wagner", opts, inputs, result, kOk);
    }
    GridSpec grid = parse_grid(opts.grid);
    result["mode"] = "grid";
    std::vector<std::vector<Rat>> points = grid.points();
    // Pointwise solves are independent; output keeps input order regardless
    // of the thread count.
    std::vector<std::vector<Mat<Rat>>> solved(points.size());
    std::vector<std::exception_ptr> errors(points.size());
    int nthreads = std::min<int>(threads_from_env(), static_cast<int>(points.size()));
    if (nthreads <= 1) {
        for (std::size_t i = 0; i < points.size(); ++i) solved[i] = wagner_gamma_at(sigma, points[i]);
    } else {
        std::vector<std::thread> pool;
        std::atomic<std::size_t> next{0};
        for (int t = 0; t < nthreads; ++t)
            pool.emplace_back([&]() {
                for (std::size_t i = next.fetch_add(1); i < points.size(); i = next.fetch_add(1)) {
                    try {
                        solved[i] = wagner_gamma_at(sigma, points[i]);
                    } catch (...) {
                        errors[i] = std::current_exception();
                    }
                }
            });
        for (auto& th : pool) th.join();
        for (const auto& e : errors)
            if (e) std::rethrow_exception(e);
    }
    ordered_json pts = ordered_json::array();
    for (std::size_t i = 0; i < points.size(); ++i) {
        ordered_json e;
        ordered_json xp = ordered_json::array();
        for (const auto& v : points[i]) xp.push_back(rat_str(v));
        e["x"] = xp;
        ordered_json g = ordered_json::array();
        for (const auto& gi : solved[i]) {
            ordered_json m = ordered_json::array();
            for (const auto& row : gi) {
                ordered_json jr = ordered_json::array();
                for (const auto& v : row) jr.push_back(rat_str(v));
                m.push_back(jr);
            }
            g.push_back(m);
        }
        e["gamma"] = g;
        pts.push_back(e);
    }
    result["points"] = pts;
    return emit_report("wagner", opts, inputs, result, kOk);
}

int cmd_split(const CommonOpts& opts, const std::string& afile, const std::string& connfile,
              bool use_wagner) {
    std::vector<InputRecord> inputs = {load_input(afile)};
    DiffOperator A = io::parse_operator(inputs[0].text, afile);
    Connection conn = Connection::flat(A.dim());
    std::string mode = "flat";
    if (!connfile.empty()) {
        inputs.push_back(load_input(connfile));
        conn = io::parse_connection(inputs.back().text, connfile);
        mode = "file";
    } else if (use_wagner) {
        conn = wagner_connection_symbolic(A.principal_symbol());
        mode = "wagner";
    }
    std::vector<SymTensorField> sigmas = total_symbol(A, conn);
    ordered_json result;
    result["connection_mode"] = mode;
    ordered_json parts = ordered_json::array();
    for (const auto& s : sigmas) parts.push_back(ordered_json::parse(io::dump_symbol_field(s)));
    result["total_symbol"] = parts;
    DiffOperator back = quantize_sum(sigmas, conn);
    result["reconstruction_exact"] = (back == A);
    return emit_report("split", opts, inputs, result, kOk);
}

int cmd_model(const CommonOpts& opts, const std::string& afile, const std::string& chart_csv,
              bool identity_chart) {
    std::vector<InputRecord> inputs = {load_input(afile)};
    DiffOperator A = io::parse_operator(inputs[0].text, afile);
    std::vector<InvariantField> I;
    if (identity_chart) {
        for (std::size_t i = 0; i < A.dim(); ++i)
            I.push_back({InvariantLabel::coord(static_cast<unsigned>(i) + 1),
                         Polynomial::variable(A.dim(), i)});
    } else {
        if (chart_csv.empty()) throw ValidationError("model needs --chart labels or --identity-chart");
        for (const InvariantLabel& lab : parse_label_list(chart_csv))
            I.push_back(symbol_invariant_field(A, lab));
    }
    GridSpec grid = parse_grid(opts.grid);
    ModelSurface S = model_surface(A, I, grid.points());
    ordered_json result = ordered_json::parse(io::dump_model_surface(S));
    return emit_report("model", opts, inputs, result, kOk);
}

int cmd_model_compare(const CommonOpts& opts, const std::string& afile, const std::string& bfile) {
    std::vector<InputRecord> inputs = {load_input(afile), load_input(bfile)};
    ModelSurface SA = io::parse_model_surface(inputs[0].text, afile);
    ModelSurface SB = io::parse_model_surface(inputs[1].text, bfile);
    EquivalenceVerdict v = model_compare(SA, SB, opts.tol);
    ordered_json result;
    int code = kInternal;
    switch (v.status) {
        case EquivalenceVerdict::Status::ModelsCoincide: {
            result["verdict"] = "ModelsCoincide";
            result["max_model_deviation"] = io::format_double(v.max_model_deviation);
            result["omega_residual"] = io::format_double(v.omega_residual);
            ordered_json psi = ordered_json::array();
            for (const auto& [xa, xb] : v.psi_samples) {
                ordered_json e;
                ordered_json a = ordered_json::array(), b = ordered_json::array();
                for (double x : xa) a.push_back(io::format_double(x));
                for (double x : xb) b.push_back(io::format_double(x));
                e["from"] = a;
                e["to"] = b;
                psi.push_back(e);
            }
            result["psi_samples"] = psi;
            code = kOk;
            break;
        }
        case EquivalenceVerdict::Status::ModelsDistinct: {
            result["verdict"] = "ModelsDistinct";
            ordered_json y = ordered_json::array();
            for (double w : v.witness_y) y.push_back(io::format_double(w));
            result["witness_y"] = y;
            result["witness_alpha"] =
                v.witness_alpha >= 0 ? SA.alpha_order[v.witness_alpha].str() : "?";
            result["deviation"] = io::format_double(v.deviation);
            code = kDistinct;
            break;
        }
        case EquivalenceVerdict::Status::Inconclusive: {
            result["verdict"] = "Inconclusive";
            result["reason"] = v.reason;
            if (v.omega_residual > 0) result["omega_residual"] = io::format_double(v.omega_residual);
            code = kInconclusive;
            break;
        }
    }
    return emit_report("model-compare", opts, inputs, result, code);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"invariants and symplectic equivalence of differential operators"};
    app.require_subcommand(1);

    CommonOpts opts;
    app.add_option("--tol", opts.tol, "numeric tolerance");
    app.add_option("--seed", opts.seed, "seed for randomized search");
    app.add_option("--grid", opts.grid, "grid spec lo:hi:count[,lo:hi:count...] (rational bounds)");
    app.add_option("--signature-config", opts.signature_config, "signature config JSON file");
    app.add_option("--output", opts.output, "write the report to this file");
    app.add_option("--format", opts.format, "output format: json or table")
        ->check(CLI::IsMember({"json", "table"}));

    std::string pfile, qfile, kind = "symplectic", labels_csv, chart_csv, connfile;
    int order = 1, restarts = 20, max_iters = 150;
    bool symbolic = false, use_wagner = false, identity_chart = false;

    auto* transvect = app.add_subcommand("transvect", "transvectant of two symbols");
    transvect->add_option("P", pfile)->required();
    transvect->add_option("Q", qfile)->required();
    transvect->add_option("--order", order, "transvectant order r");
    transvect->add_option("--kind", kind, "symplectic | metric | poisson");

    auto* invariants = app.add_subcommand("invariants", "trace invariants of a symbol");
    invariants->add_option("P", pfile)->required();
    invariants->add_option("--labels", labels_csv, "explicit label list, e.g. J:2,2,J:3,2");

    auto* signature = app.add_subcommand("signature", "canonical invariant signature of a symbol");
    signature->add_option("P", pfile)->required();

    auto* orbitdim = app.add_subcommand("orbit-dim", "dimension of the infinitesimal sp-orbit");
    orbitdim->add_option("P", pfile)->required();

    auto* match = app.add_subcommand("match", "decide or refute symplectic equivalence of two symbols");
    match->add_option("P", pfile)->required();
    match->add_option("Q", qfile)->required();
    match->add_option("--restarts", restarts);
    match->add_option("--max-iters", max_iters);

    auto* wagner = app.add_subcommand("wagner", "Wagner connection of a symbol field");
    wagner->add_option("SIGMA", pfile)->required();
    wagner->add_flag("--symbolic", symbolic, "force symbolic mode (default without --grid)");

    auto* split = app.add_subcommand("split", "total symbol of an operator");
    split->add_option("A", pfile)->required();
    split->add_option("--connection", connfile, "connection JSON file");
    split->add_flag("--wagner", use_wagner, "use the Wagner connection of the principal symbol");

    auto* model = app.add_subcommand("model", "sampled model surface of an operator");
    model->add_option("A", pfile)->required();
    model->add_option("--chart", chart_csv, "chart invariant labels, e.g. J:2,2,J:3,2");
    model->add_flag("--identity-chart", identity_chart, "use base coordinates as the chart");

    auto* modelcmp = app.add_subcommand("model-compare", "compare two sampled model surfaces");
    modelcmp->add_option("SA", pfile)->required();
    modelcmp->add_option("SB", qfile)->required();

    // Global options remain usable after the subcommand name.
    for (CLI::App* sc : app.get_subcommands([](const CLI::App*) { return true; }))
        sc->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return kUsage;
    }

    try {
        if (transvect->parsed()) return cmd_transvect(opts, pfile, qfile, order, kind);
        if (invariants->parsed()) return cmd_invariants(opts, pfile, labels_csv);
        if (signature->parsed()) return cmd_signature(opts, pfile);
        if (orbitdim->parsed()) return cmd_orbit_dim(opts, pfile);
        if (match->parsed()) return cmd_match(opts, pfile, qfile, restarts, max_iters);
        if (wagner->parsed()) return cmd_wagner(opts, pfile, symbolic);
        if (split->parsed()) return cmd_split(opts, pfile, connfile, use_wagner);
        if (model->parsed()) return cmd_model(opts, pfile, chart_csv, identity_chart);
        if (modelcmp->parsed()) return cmd_model_compare(opts, pfile, qfile);
        std::cerr << "unknown command\n";
        return kUsage;
    } catch (const NotConstantType& e) {
        std::cerr << "not constant type: " << e.what() << "\n";
        return kNotConstantType;
    } catch (const NonRegular& e) {
        std::cerr << "non-regular symbol: " << e.what() << "\n";
        return kNonRegular;
    } catch (const NotAdjusted& e) {
        std::cerr << "chart not adjusted: " << e.what() << "\n";
        return kNotAdjusted;
    } catch (const WagnerInconclusive& e) {
        std::cerr << "inconclusive: " << e.what() << "\n";
        return kInconclusive;
    } catch (const ValidationError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kDataError;
    } catch (const LabelError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kDataError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kDataError;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kInternal;
    }
}
