#include "ptfprg/poly_io.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>

#include "ptfprg/error.hpp"

namespace ptfprg {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string> split_fields(std::string_view line) {
  std::vector<std::string> out;
  std::istringstream in{std::string(line)};
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

double parse_double(const std::string& s, std::size_t line_no) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  fail(ErrorKind::parse, "line " + std::to_string(line_no) + ": '" + s + "' is not a number");
}

unsigned long parse_uint(const std::string& s, std::size_t line_no) {
  unsigned long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    fail(ErrorKind::parse, "line " + std::to_string(line_no) + ": '" + s +
                               "' is not a non-negative integer");
  }
  return v;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct TextBlock {
  std::optional<std::string> id;
  std::optional<std::size_t> n;
  std::vector<std::pair<std::size_t, std::vector<std::string>>> term_lines;
};

Polynomial block_to_polynomial(const TextBlock& b) {
  std::optional<std::size_t> n = b.n;
  if (!n) {
    if (b.term_lines.empty()) fail(ErrorKind::parse, "empty polynomial needs an `n` header");
    n = b.term_lines.front().second.size() - 1;
  }
  Polynomial p(*n);
  for (const auto& [line_no, fields] : b.term_lines) {
    if (fields.size() != *n + 1) {
      fail(ErrorKind::parse, "line " + std::to_string(line_no) + ": expected " +
                                 std::to_string(*n + 1) + " fields, got " +
                                 std::to_string(fields.size()));
    }
    Exponents e(*n);
    for (std::size_t i = 0; i < *n; ++i) {
      const unsigned long v = parse_uint(fields[i + 1], line_no);
      if (v > 0xFFFF) fail(ErrorKind::parse, "line " + std::to_string(line_no) + ": exponent too large");
      e[i] = static_cast<std::uint16_t>(v);
    }
    p.add_term(e, parse_double(fields[0], line_no));
  }
  return p;
}

std::vector<TextBlock> parse_blocks(std::string_view text) {
  std::vector<TextBlock> blocks(1);
  std::size_t line_no = 0;
  while (!text.empty()) {
    const std::size_t eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line == "---") {
      blocks.emplace_back();
      continue;
    }
    auto fields = split_fields(line);
    if (fields[0] == "n") {
      if (fields.size() != 2) fail(ErrorKind::parse, "line " + std::to_string(line_no) + ": `n <count>`");
      blocks.back().n = parse_uint(fields[1], line_no);
    } else if (fields[0] == "id") {
      if (fields.size() != 2) fail(ErrorKind::parse, "line " + std::to_string(line_no) + ": `id <name>`");
      blocks.back().id = fields[1];
    } else {
      blocks.back().term_lines.emplace_back(line_no, std::move(fields));
    }
  }
  std::erase_if(blocks, [](const TextBlock& b) { return !b.n && !b.id && b.term_lines.empty(); });
  return blocks;
}

bool looks_like_json(std::string_view text) {
  text = trim(text);
  return !text.empty() && (text.front() == '{' || text.front() == '[');
}

}  // namespace

Polynomial parse_polynomial_text(std::string_view text) {
  if (looks_like_json(text)) {
    try {
      return polynomial_from_json(nlohmann::json::parse(text));
    } catch (const nlohmann::json::exception& e) {
      fail(ErrorKind::parse, std::string("polynomial JSON: ") + e.what());
    }
  }
  const auto blocks = parse_blocks(text);
  if (blocks.size() != 1) fail(ErrorKind::parse, "expected exactly one polynomial");
  return block_to_polynomial(blocks.front());
}

std::string format_polynomial_text(const Polynomial& p) {
  std::string out = "n " + std::to_string(p.n()) + "\n";
  for (const auto& [e, c] : p.terms()) {
    out += format_double(c);
    for (auto v : e) out += " " + std::to_string(v);
    out += "\n";
  }
  return out;
}

nlohmann::json polynomial_to_json(const Polynomial& p) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& [e, c] : p.terms()) terms.push_back({{"coeff", c}, {"exponents", e}});
  return {{"n", p.n()}, {"terms", std::move(terms)}};
}

Polynomial polynomial_from_json(const nlohmann::json& j) {
  try {
    const auto n = j.at("n").get<std::size_t>();
    Polynomial p(n);
    for (const auto& t : j.at("terms")) {
      const auto e = t.at("exponents").get<Exponents>();
      if (e.size() != n) fail(ErrorKind::parse, "JSON term has the wrong number of exponents");
      p.add_term(e, t.at("coeff").get<double>());
    }
    return p;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::parse, std::string("polynomial JSON: ") + e.what());
  }
}

std::vector<PTF> parse_corpus(std::string_view text) {
  std::vector<PTF> out;
  if (looks_like_json(text)) {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      fail(ErrorKind::parse, std::string("corpus JSON: ") + e.what());
    }
    const nlohmann::json& items = j.is_array() ? j : j.contains("polynomials") ? j["polynomials"] : j;
    if (items.is_object()) {
      out.push_back({items.value("id", std::string("p0")), polynomial_from_json(items)});
      return out;
    }
    for (std::size_t i = 0; i < items.size(); ++i) {
      out.push_back({items[i].value("id", "p" + std::to_string(i)), polynomial_from_json(items[i])});
    }
    return out;
  }
  const auto blocks = parse_blocks(text);
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    out.push_back({blocks[i].id.value_or("p" + std::to_string(i)), block_to_polynomial(blocks[i])});
  }
  return out;
}

std::string format_corpus_text(const std::vector<PTF>& corpus) {
  std::string out;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    if (i > 0) out += "---\n";
    out += "id " + corpus[i].id + "\n";
    out += format_polynomial_text(corpus[i].p);
  }
  return out;
}

nlohmann::json corpus_to_json(const std::vector<PTF>& corpus) {
  nlohmann::json items = nlohmann::json::array();
  for (const auto& f : corpus) {
    auto j = polynomial_to_json(f.p);
    j["id"] = f.id;
    items.push_back(std::move(j));
  }
  return {{"polynomials", std::move(items)}};
}

std::vector<PTF> load_corpus(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::io, "cannot open corpus file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_corpus(buf.str());
}

}  // namespace ptfprg
