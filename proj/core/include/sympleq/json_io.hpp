#pragma once

#include <string>
#include <vector>

#include "sympleq/connection.hpp"
#include "sympleq/diff_operator.hpp"
#include "sympleq/fiber_poly.hpp"
#include "sympleq/model.hpp"
#include "sympleq/trace_invariants.hpp"

namespace sympleq::io {

// JSON schemas (rationals are decimal strings "p/q", floats are decimal
// strings with 17 significant digits):
//   homogeneous polynomial  {"dim": d, "degree": k,
//                            "terms": [{"exp": [e1..ed], "coef": "p/q"}]}
//   base polynomial         {"dim": d, "terms": [{"exp": [...], "coef": "p/q"}]}
//   symbol field            {"dim": d, "degree": k,
//                            "terms": [{"exp": [...], "coef": <base poly | "p/q">}]}
//   operator                {"dim": d, "order": k,
//                            "coeffs": [{"alpha": [...], "coef": <base poly | "p/q">}]}
//   connection              {"dim": d, "gamma": [[[<base poly>]]]}  indexed [i][k][j]
//   model surface           {"n", "order", "chart_labels", "alphas", "samples",
//                            "fields": {"chart": [...], "coeffs": [...]}}
// Parse errors throw ValidationError naming the offending field.

std::string format_double(double v);  // %.17g

HomogeneousPoly parse_homogeneous_poly(const std::string& text, const std::string& source);
SymTensorField parse_symbol_field(const std::string& text, const std::string& source);
DiffOperator parse_operator(const std::string& text, const std::string& source);
Connection parse_connection(const std::string& text, const std::string& source);
ModelSurface parse_model_surface(const std::string& text, const std::string& source);

std::string dump_homogeneous_poly(const HomogeneousPoly& p);
std::string dump_polynomial(const Polynomial& p);
std::string dump_symbol_field(const SymTensorField& f);
std::string dump_operator(const DiffOperator& a);
std::string dump_connection(const Connection& c);
std::string dump_model_surface(const ModelSurface& s);
std::string dump_signature(const std::vector<SignatureEntry<Rat>>& sig);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

// FNV-1a 64-bit content hash, lowercase hex.
std::string content_hash(const std::string& bytes);

}  // namespace sympleq::io
