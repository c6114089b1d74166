#pragma once

// Polynomial and corpus file formats.
//
// Text: one term per line, `coeff e_1 ... e_n`. Optional header lines
// `n <count>` and `id <name>`; `#` starts a comment. In a corpus file,
// polynomials are separated by a line holding `---`.
//
// JSON: {"id": "...", "n": 2, "terms": [{"coeff": 1.5, "exponents": [1, 0]}]}
// and, for a corpus, either an array of those or {"polynomials": [...]}.

#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "ptfprg/harness.hpp"
#include "ptfprg/polynomial.hpp"

namespace ptfprg {

Polynomial parse_polynomial_text(std::string_view text);
std::string format_polynomial_text(const Polynomial& p);

nlohmann::json polynomial_to_json(const Polynomial& p);
Polynomial polynomial_from_json(const nlohmann::json& j);

/// Detects JSON by a leading '{' or '['.
std::vector<PTF> parse_corpus(std::string_view text);
std::string format_corpus_text(const std::vector<PTF>& corpus);
nlohmann::json corpus_to_json(const std::vector<PTF>& corpus);

std::vector<PTF> load_corpus(const std::string& path);

}  // namespace ptfprg
