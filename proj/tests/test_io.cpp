#include <cmath>
#include <string>

#include "doctest.h"
#include "ptfprg/config.hpp"
#include "ptfprg/error.hpp"
#include "ptfprg/lab.hpp"
#include "ptfprg/poly_io.hpp"
#include "ptfprg/report.hpp"

using namespace ptfprg;

namespace {

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::io;
}

}  // namespace

TEST_CASE("polynomial text format") {
  const Polynomial p = parse_polynomial_text(
      "# x0^2 x1 - 2 x1 + 0.5\n"
      "n 2\n"
      "3 2 1\n"
      "-2 0 1   # linear part\n"
      "0.5 0 0\n");
  CHECK(p == Polynomial::from_terms(2, {{{2, 1}, 3.0}, {{0, 1}, -2.0}, {{0, 0}, 0.5}}));
  CHECK(parse_polynomial_text("1.5 1 0 2\n").n() == 3);
  CHECK(parse_polynomial_text("n 3\n").is_zero());

  CHECK(kind_of([] { parse_polynomial_text("n 2\n1 1\n"); }) == ErrorKind::parse);
  CHECK(kind_of([] { parse_polynomial_text("abc 1 0\n"); }) == ErrorKind::parse);
  CHECK(kind_of([] { parse_polynomial_text("1 -1 0\n"); }) == ErrorKind::parse);
  CHECK(kind_of([] { parse_polynomial_text(""); }) == ErrorKind::parse);
}

TEST_CASE("polynomial formats round-trip exactly") {
  const Polynomial p = normalized(random_poly(3, 3, 17, Basis::hermite));
  CHECK(parse_polynomial_text(format_polynomial_text(p)) == p);
  CHECK(polynomial_from_json(nlohmann::json::parse(polynomial_to_json(p).dump())) == p);
  CHECK(parse_polynomial_text(polynomial_to_json(p).dump()) == p);
}

TEST_CASE("corpus formats") {
  const auto corpus = mixed_corpus(3, 3, 5, 2);
  const auto text = parse_corpus(format_corpus_text(corpus));
  REQUIRE(text.size() == corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    CHECK(text[i].id == corpus[i].id);
    CHECK(text[i].p == corpus[i].p);
  }
  const auto js = parse_corpus(corpus_to_json(corpus).dump());
  REQUIRE(js.size() == corpus.size());
  CHECK(js[4].p == corpus[4].p);

  const auto anon = parse_corpus("1 1 0\n---\n1 1 1\n");
  REQUIRE(anon.size() == 2);
  CHECK(anon[0].id == "p0");
  CHECK(anon[1].p.degree() == 2);
  CHECK(kind_of([] { load_corpus("/nonexistent/corpus.txt"); }) == ErrorKind::io);
}

TEST_CASE("run config parsing and precedence") {
  RunConfig cfg = RunConfig::parse("# desk\nn = 4\neps=0.2\nthetas = 0.05, 0.1 ,0.3\nseed = 0xBEEF\n");
  CHECK(cfg.get_uint("n", 0) == 4);
  CHECK(cfg.get_double("eps", 0) == 0.2);
  CHECK(cfg.get_doubles("thetas", {}) == std::vector<double>{0.05, 0.1, 0.3});
  CHECK(cfg.master_seed() == 0xBEEF);
  CHECK(cfg.get_double("missing", 1.5) == 1.5);

  RunConfig flags;
  flags.set("n", "8");
  cfg.merge(flags);
  cfg.set_assignment("eps=0.25");
  CHECK(cfg.get_uint("n", 0) == 8);
  CHECK(cfg.get_double("eps", 0) == 0.25);
  CHECK(cfg.to_json()["n"] == "8");

  CHECK(RunConfig().master_seed() == kDefaultMasterSeed);
  CHECK(parse_seed("5eed") == 0x5EED);
  CHECK(format_seed(0x5EED) == "0x5eed");
  CHECK(kind_of([] { RunConfig::parse("novalue\n"); }) == ErrorKind::configuration);
  CHECK(kind_of([&] { cfg.get_uint("eps", 0); }) == ErrorKind::configuration);
  CHECK(kind_of([] { RunConfig().set_assignment("=3"); }) == ErrorKind::configuration);
  CHECK(kind_of([] { parse_seed("xyz"); }) == ErrorKind::configuration);
  CHECK(RunConfig::parse("flag = yes").get_bool("flag", false));
}

TEST_CASE("report header") {
  RunConfig cfg;
  cfg.set("n", "2");
  PlanOverrides o;
  o.N = 4;
  o.M = 16;
  const PRGParams p = plan_params(2, 1, 0.5, 4.0, o);
  const auto h = report_header("plan", cfg, 0x5EED, &p);
  CHECK(h["schema_version"] == kReportSchemaVersion);
  CHECK(h["seed"] == "0x5eed");
  CHECK(h["config"]["n"] == "2");
  CHECK(h["params"]["N"] == 4);
  CHECK(h["provenance"]["N"] == "override");
  const auto l = layout_json(seed_length(p), true);
  CHECK(l["total_bits"] == 2 * 4 * 128 * 64);
  CHECK(l["segments"].size() == 8);
}

TEST_CASE("lab registry") {
  CHECK(lab_check_names().size() == 10);
  CHECK(kind_of([] { run_lab_check("nope", RunConfig()); }) == ErrorKind::configuration);

  RunConfig cfg;
  cfg.set("d", "2");
  cfg.set("theta", "0.3");
  const LabResult r = run_lab_check("annihilation", cfg);
  CHECK(r.pass);
  CHECK(r.estimate <= 1e-9);
  const auto j = lab_result_json(r);
  CHECK(j["verdict"] == "pass");
  CHECK(j["threshold"] == 1e-9);
  const std::string csv = lab_result_csv(r);
  CHECK(csv.rfind("d,theta,max_residual", 0) == 0);

  RunConfig small;
  small.set("count", "5");
  const LabResult s = run_lab_check("semigroup", small);
  CHECK(s.pass);
  CHECK(lab_result_csv(s).empty());
}
