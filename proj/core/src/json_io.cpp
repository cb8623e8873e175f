#include "sympleq/json_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace sympleq::io {

using nlohmann::ordered_json;

namespace {

ordered_json parse_text(const std::string& text, const std::string& source) {
    try {
        return ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError(source + ": " + e.what());
    }
}

const ordered_json& need(const ordered_json& j, const std::string& key, const std::string& where) {
    auto it = j.find(key);
    if (it == j.end()) throw ValidationError(where + ": missing field '" + key + "'");
    return *it;
}

unsigned need_uint(const ordered_json& j, const std::string& key, const std::string& where) {
    const ordered_json& v = need(j, key, where);
    if (!v.is_number_unsigned()) throw ValidationError(where + ": field '" + key + "' must be a nonnegative integer");
    return v.get<unsigned>();
}

MultiIndex parse_exponents(const ordered_json& v, std::size_t dim, const std::string& where) {
    if (!v.is_array() || v.size() != dim)
        throw ValidationError(where + ": exponent list must have " + std::to_string(dim) + " entries");
    std::vector<unsigned> e;
    for (const auto& x : v) {
        if (!x.is_number_unsigned()) throw ValidationError(where + ": exponents must be nonnegative integers");
        e.push_back(x.get<unsigned>());
    }
    return MultiIndex(e);
}

Rat parse_rat_field(const ordered_json& v, const std::string& where) {
    if (v.is_number_integer()) return Rat(static_cast<long>(v.get<long long>()));
    if (!v.is_string()) throw ValidationError(where + ": coefficient must be a rational string \"p/q\"");
    try {
        return rat_parse(v.get<std::string>());
    } catch (const ValidationError& e) {
        throw ValidationError(where + ": " + e.what());
    }
}

Polynomial parse_base_poly(const ordered_json& j, std::size_t dim, const std::string& where) {
    if (j.is_string() || j.is_number_integer())
        return Polynomial::constant(parse_rat_field(j, where), dim);
    if (!j.is_object()) throw ValidationError(where + ": expected a base polynomial object");
    if (j.contains("dim")) {
        unsigned d = need_uint(j, "dim", where);
        if (d != dim)
            throw ValidationError(where + ": base polynomial dimension " + std::to_string(d) +
                                  " does not match ambient dimension " + std::to_string(dim));
    }
    Polynomial p(dim);
    const ordered_json& terms = need(j, "terms", where);
    if (!terms.is_array()) throw ValidationError(where + ": 'terms' must be an array");
    for (std::size_t t = 0; t < terms.size(); ++t) {
        std::string tw = where + ".terms[" + std::to_string(t) + "]";
        const ordered_json& term = terms[t];
        MultiIndex m = parse_exponents(need(term, "exp", tw), dim, tw);
        p.add_term(m, parse_rat_field(need(term, "coef", tw), tw));
    }
    return p;
}

ordered_json dump_rat(const Rat& r) { return rat_str(r); }

ordered_json dump_base_poly_json(const Polynomial& p) {
    ordered_json j;
    j["dim"] = p.dim();
    ordered_json terms = ordered_json::array();
    for (const auto& [m, c] : p.terms()) {
        ordered_json t;
        t["exp"] = m.entries();
        t["coef"] = dump_rat(c);
        terms.push_back(t);
    }
    j["terms"] = terms;
    return j;
}

ordered_json dump_homog_json(const HomogeneousPoly& p) {
    ordered_json j;
    j["dim"] = p.dim();
    j["degree"] = p.degree();
    ordered_json terms = ordered_json::array();
    for (const auto& [m, c] : p.terms()) {
        ordered_json t;
        t["exp"] = m.entries();
        t["coef"] = dump_rat(c);
        terms.push_back(t);
    }
    j["terms"] = terms;
    return j;
}

ordered_json dump_field_json(const SymTensorField& f) {
    ordered_json j;
    j["dim"] = f.dim();
    j["degree"] = f.degree();
    ordered_json terms = ordered_json::array();
    for (const auto& [m, c] : f.terms()) {
        ordered_json t;
        t["exp"] = m.entries();
        t["coef"] = dump_base_poly_json(c.promoted(f.dim()));
        terms.push_back(t);
    }
    j["terms"] = terms;
    return j;
}

std::string pretty(const ordered_json& j) { return j.dump(2) + "\n"; }

}  // namespace

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

HomogeneousPoly parse_homogeneous_poly(const std::string& text, const std::string& source) {
    ordered_json j = parse_text(text, source);
    unsigned dim = need_uint(j, "dim", source);
    unsigned degree = need_uint(j, "degree", source);
    if (dim == 0) throw ValidationError(source + ": dimension must be positive");
    HomogeneousPoly p(dim, degree);
    const ordered_json& terms = need(j, "terms", source);
    if (!terms.is_array()) throw ValidationError(source + ": 'terms' must be an array");
    for (std::size_t t = 0; t < terms.size(); ++t) {
        std::string tw = source + ".terms[" + std::to_string(t) + "]";
        const ordered_json& term = terms[t];
        MultiIndex m = parse_exponents(need(term, "exp", tw), dim, tw);
        if (m.degree() != degree)
            throw ValidationError(tw + ": term " + m.str() + " has degree " +
                                  std::to_string(m.degree()) + ", expected " + std::to_string(degree));
        p.add_term(m, parse_rat_field(need(term, "coef", tw), tw));
    }
    return p;
}

SymTensorField parse_symbol_field(const std::string& text, const std::string& source) {
    ordered_json j = parse_text(text, source);
    unsigned dim = need_uint(j, "dim", source);
    unsigned degree = need_uint(j, "degree", source);
    if (dim == 0) throw ValidationError(source + ": dimension must be positive");
    SymTensorField f(dim, degree);
    const ordered_json& terms = need(j, "terms", source);
    if (!terms.is_array()) throw ValidationError(source + ": 'terms' must be an array");
    for (std::size_t t = 0; t < terms.size(); ++t) {
        std::string tw = source + ".terms[" + std::to_string(t) + "]";
        const ordered_json& term = terms[t];
        MultiIndex m = parse_exponents(need(term, "exp", tw), dim, tw);
        if (m.degree() != degree)
            throw ValidationError(tw + ": term " + m.str() + " has fiber degree " +
                                  std::to_string(m.degree()) + ", expected " + std::to_string(degree));
        f.add_term(m, parse_base_poly(need(term, "coef", tw), dim, tw));
    }
    return f;
}

DiffOperator parse_operator(const std::string& text, const std::string& source) {
    ordered_json j = parse_text(text, source);
    unsigned dim = need_uint(j, "dim", source);
    unsigned order = need_uint(j, "order", source);
    if (dim == 0) throw ValidationError(source + ": dimension must be positive");
    DiffOperator a(dim, order);
    const ordered_json& coeffs = need(j, "coeffs", source);
    if (!coeffs.is_array()) throw ValidationError(source + ": 'coeffs' must be an array");
    for (std::size_t t = 0; t < coeffs.size(); ++t) {
        std::string tw = source + ".coeffs[" + std::to_string(t) + "]";
        const ordered_json& term = coeffs[t];
        MultiIndex alpha = parse_exponents(need(term, "alpha", tw), dim, tw);
        if (alpha.degree() > order)
            throw ValidationError(tw + ": derivative index " + alpha.str() + " of order " +
                                  std::to_string(alpha.degree()) + " exceeds declared order " +
                                  std::to_string(order));
        a.add_coeff(alpha, parse_base_poly(need(term, "coef", tw), dim, tw));
    }
    return a;
}

Connection parse_connection(const std::string& text, const std::string& source) {
    ordered_json j = parse_text(text, source);
    unsigned dim = need_uint(j, "dim", source);
    if (dim == 0) throw ValidationError(source + ": dimension must be positive");
    Connection c(dim);
    const ordered_json& g = need(j, "gamma", source);
    if (!g.is_array() || g.size() != dim)
        throw ValidationError(source + ": 'gamma' must be an array of length dim");
    for (std::size_t i = 0; i < dim; ++i) {
        if (!g[i].is_array() || g[i].size() != dim)
            throw ValidationError(source + ": gamma[" + std::to_string(i) + "] must have dim rows");
        for (std::size_t k = 0; k < dim; ++k) {
            if (!g[i][k].is_array() || g[i][k].size() != dim)
                throw ValidationError(source + ": gamma[" + std::to_string(i) + "][" +
                                      std::to_string(k) + "] must have dim entries");
            for (std::size_t jj = 0; jj < dim; ++jj) {
                std::string tw = source + ".gamma[" + std::to_string(i) + "][" + std::to_string(k) +
                                 "][" + std::to_string(jj) + "]";
                c.set_gamma(i, k, jj, parse_base_poly(g[i][k][jj], dim, tw));
            }
        }
    }
    return c;
}

ModelSurface parse_model_surface(const std::string& text, const std::string& source) {
    ordered_json j = parse_text(text, source);
    // Accept both a bare surface and a full CLI report wrapping one.
    if (!j.contains("n") && j.contains("result") && j["result"].is_object() &&
        j["result"].contains("n"))
        j = j["result"];
    ModelSurface s;
    s.n = need_uint(j, "n", source);
    s.order = need_uint(j, "order", source);
    const ordered_json& labels = need(j, "chart_labels", source);
    for (const auto& l : labels) s.chart_labels.push_back(l.get<std::string>());
    const ordered_json& alphas = need(j, "alphas", source);
    for (std::size_t i = 0; i < alphas.size(); ++i)
        s.alpha_order.push_back(
            parse_exponents(alphas[i], s.n, source + ".alphas[" + std::to_string(i) + "]"));
    const ordered_json& samples = need(j, "samples", source);
    for (std::size_t i = 0; i < samples.size(); ++i) {
        std::string tw = source + ".samples[" + std::to_string(i) + "]";
        const ordered_json& smp = samples[i];
        ModelSample m;
        for (const auto& v : need(smp, "x", tw)) m.x.push_back(parse_rat_field(v, tw));
        for (const auto& v : need(smp, "y", tw)) m.y.push_back(parse_rat_field(v, tw));
        for (const auto& v : need(smp, "Y", tw)) m.Y.push_back(parse_rat_field(v, tw));
        if (m.x.size() != s.n || m.y.size() != s.n || m.Y.size() != s.alpha_order.size())
            throw ValidationError(tw + ": sample arity mismatch");
        s.samples.push_back(std::move(m));
    }
    if (j.contains("fields")) {
        const ordered_json& f = j["fields"];
        for (std::size_t i = 0; i < need(f, "chart", source).size(); ++i)
            s.chart_fields.push_back(
                parse_base_poly(f["chart"][i], s.n, source + ".fields.chart[" + std::to_string(i) + "]"));
        for (std::size_t i = 0; i < need(f, "coeffs", source).size(); ++i)
            s.alpha_fields.push_back(
                parse_base_poly(f["coeffs"][i], s.n, source + ".fields.coeffs[" + std::to_string(i) + "]"));
        if (s.chart_fields.size() != s.n || s.alpha_fields.size() != s.alpha_order.size())
            throw ValidationError(source + ": embedded field arity mismatch");
        s.has_fields = true;
    }
    return s;
}

std::string dump_homogeneous_poly(const HomogeneousPoly& p) { return pretty(dump_homog_json(p)); }

std::string dump_polynomial(const Polynomial& p) { return pretty(dump_base_poly_json(p)); }

std::string dump_symbol_field(const SymTensorField& f) { return pretty(dump_field_json(f)); }

std::string dump_operator(const DiffOperator& a) {
    ordered_json j;
    j["dim"] = a.dim();
    j["order"] = a.order();
    ordered_json coeffs = ordered_json::array();
    for (const auto& [alpha, c] : a.coeffs()) {
        ordered_json t;
        t["alpha"] = alpha.entries();
        t["coef"] = dump_base_poly_json(c);
        coeffs.push_back(t);
    }
    j["coeffs"] = coeffs;
    return pretty(j);
}

std::string dump_connection(const Connection& c) {
    ordered_json j;
    j["dim"] = c.dim();
    ordered_json g = ordered_json::array();
    for (std::size_t i = 0; i < c.dim(); ++i) {
        ordered_json gi = ordered_json::array();
        for (std::size_t k = 0; k < c.dim(); ++k) {
            ordered_json gk = ordered_json::array();
            for (std::size_t jj = 0; jj < c.dim(); ++jj)
                gk.push_back(dump_base_poly_json(c.gamma(i)[k][jj].promoted(c.dim())));
            gi.push_back(gk);
        }
        g.push_back(gi);
    }
    j["gamma"] = g;
    return pretty(j);
}

std::string dump_model_surface(const ModelSurface& s) {
    ordered_json j;
    j["n"] = s.n;
    j["order"] = s.order;
    j["chart_labels"] = s.chart_labels;
    ordered_json alphas = ordered_json::array();
    for (const auto& a : s.alpha_order) alphas.push_back(a.entries());
    j["alphas"] = alphas;
    ordered_json samples = ordered_json::array();
    for (const auto& m : s.samples) {
        ordered_json smp;
        ordered_json x = ordered_json::array(), y = ordered_json::array(), Y = ordered_json::array();
        for (const auto& v : m.x) x.push_back(dump_rat(v));
        for (const auto& v : m.y) y.push_back(dump_rat(v));
        for (const auto& v : m.Y) Y.push_back(dump_rat(v));
        smp["x"] = x;
        smp["y"] = y;
        smp["Y"] = Y;
        samples.push_back(smp);
    }
    j["samples"] = samples;
    if (s.has_fields) {
        ordered_json f;
        ordered_json chart = ordered_json::array(), coeffs = ordered_json::array();
        for (const auto& p : s.chart_fields) chart.push_back(dump_base_poly_json(p.promoted(s.n)));
        for (const auto& p : s.alpha_fields) coeffs.push_back(dump_base_poly_json(p.promoted(s.n)));
        f["chart"] = chart;
        f["coeffs"] = coeffs;
        j["fields"] = f;
    }
    return pretty(j);
}

std::string dump_signature(const std::vector<SignatureEntry<Rat>>& sig) {
    ordered_json j;
    ordered_json labels = ordered_json::array(), values = ordered_json::array();
    for (const auto& e : sig) {
        labels.push_back(e.label.str());
        values.push_back(dump_rat(e.value));
    }
    j["labels"] = labels;
    j["values"] = values;
    return pretty(j);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open input file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot open output file '" + path + "'");
    out << content;
}

std::string content_hash(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace sympleq::io
