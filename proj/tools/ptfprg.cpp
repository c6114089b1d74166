// ptfprg: plan parameters, generate pseudorandom Gaussian streams, measure
// fooling error of PTF corpora and run lab checks.
//
// Exit codes: 0 success, 1 a verdict failed, 2 usage or parameter error,
// 3 I/O error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "ptfprg/bits.hpp"
#include "ptfprg/config.hpp"
#include "ptfprg/error.hpp"
#include "ptfprg/harness.hpp"
#include "ptfprg/lab.hpp"
#include "ptfprg/poly_io.hpp"
#include "ptfprg/prg.hpp"
#include "ptfprg/report.hpp"

namespace {

using nlohmann::json;
using nlohmann::ordered_json;
using namespace ptfprg;

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

constexpr std::uint64_t kMaxListedSegmentsN = 1024;

// Options shared by every subcommand: a config file, --set overrides and
// named flags that land in the same key space.
struct ConfigOptions {
  std::string config_path;
  std::vector<std::string> assignments;
  std::map<std::string, std::string> flags;
  std::map<std::string, CLI::Option*> flag_options;

  void add_to(CLI::App* app, const std::vector<std::pair<std::string, std::string>>& keys) {
    app->add_option("--config", config_path, "flat key=value config file");
    app->add_option("--set", assignments, "override KEY=VAL (repeatable)");
    for (const auto& [key, help] : keys) flag_options[key] = app->add_option("--" + key, flags[key], help);
  }

  RunConfig effective() const {
    RunConfig cfg;
    if (!config_path.empty()) cfg = RunConfig::load(config_path);
    RunConfig flag_cfg;
    for (const auto& [key, opt] : flag_options) {
      if (opt->count() > 0) flag_cfg.set(key, flags.at(key));
    }
    cfg.merge(flag_cfg);
    for (const auto& a : assignments) cfg.set_assignment(a);
    return cfg;
  }
};

const std::vector<std::pair<std::string, std::string>> kParamKeys = {
    {"n", "dimension"},
    {"d", "degree bound"},
    {"eps", "target fooling error in (0,1)"},
    {"c", "seed-length exponent slack in (0,4]"},
    {"N", "override: number of blocks"},
    {"k", "override: independence parameter"},
    {"M", "override: grid precision bits"},
    {"w", "override: field width (4, 8, 16, 32, 64)"},
    {"B", "override: block-count base"},
    {"c0", "override: discretization constant"},
    {"seed", "master seed (hex)"},
};

double require_double(const RunConfig& cfg, const std::string& key) {
  const auto v = cfg.find_double(key);
  if (!v) fail(ErrorKind::configuration, "missing required parameter '" + key + "'");
  return *v;
}

std::uint64_t require_uint(const RunConfig& cfg, const std::string& key) {
  const auto v = cfg.find_uint(key);
  if (!v) fail(ErrorKind::configuration, "missing required parameter '" + key + "'");
  return *v;
}

unsigned narrow(std::uint64_t v, const char* key) {
  if (v > 0xFFFFFFFFu) fail(ErrorKind::configuration, std::string(key) + " is out of range");
  return static_cast<unsigned>(v);
}

PRGParams params_from_config(const RunConfig& cfg, bool allow_infeasible) {
  PlanOverrides o;
  o.N = cfg.find_uint("N");
  if (const auto k = cfg.find_uint("k")) o.k = narrow(*k, "k");
  if (const auto m = cfg.find_uint("M")) o.M = narrow(*m, "M");
  if (const auto w = cfg.find_uint("w")) o.w = narrow(*w, "w");
  o.B = cfg.find_double("B");
  o.c0 = cfg.find_double("c0");
  o.allow_infeasible_precision =
      allow_infeasible || cfg.get_bool("allow_infeasible_precision", false);
  return plan_params(require_uint(cfg, "n"), narrow(require_uint(cfg, "d"), "d"),
                     require_double(cfg, "eps"), require_double(cfg, "c"), o);
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::io, "cannot open '" + path + "' for writing");
  out << text;
  if (!out) fail(ErrorKind::io, "write to '" + path + "' failed");
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::io, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void emit(const ordered_json& doc, const std::string& out_path) {
  const std::string text = doc.dump(2) + "\n";
  std::cout << text;
  if (!out_path.empty()) write_text(out_path, text);
}

int cmd_plan(const RunConfig& cfg, const std::string& out_path) {
  const PRGParams params = params_from_config(cfg, true);
  const SeedLayout layout = seed_length(params);
  ordered_json doc;
  doc["header"] = report_header("plan", cfg, cfg.master_seed(), &params);
  doc["seed_layout"] = layout_json(layout, params.N <= kMaxListedSegmentsN);
  emit(doc, out_path);
  return kExitOk;
}

std::string strip_hex(std::string s) {
  std::erase_if(s, [](unsigned char ch) { return std::isspace(ch); });
  return s;
}

int cmd_gen(const RunConfig& cfg, const std::string& out_path, const std::string& seed_hex,
            const std::string& seed_file) {
  if (out_path.empty()) fail(ErrorKind::configuration, "gen needs --out");
  const PRGParams params = params_from_config(cfg, false);
  const SeedLayout layout = seed_length(params);
  const std::uint64_t count = cfg.get_uint("count", 1);
  if (count < 1) fail(ErrorKind::configuration, "count must be >= 1");
  const std::uint64_t master = cfg.master_seed();

  ordered_json doc;
  doc["header"] = report_header("gen", cfg, master, &params);
  doc["count"] = count;
  doc["n"] = params.n;
  doc["total_seed_bits"] = layout.total_bits;
  doc["seed_layout"] = layout_json(layout, false);
  doc["format"] = "float64 little-endian, draw-major, count*n values";
  doc["data"] = out_path;

  std::ofstream out(out_path, std::ios::binary);
  if (!out) fail(ErrorKind::io, "cannot open '" + out_path + "' for writing");
  auto write_values = [&](std::span<const double> values) {
    static_assert(std::endian::native == std::endian::little, "output format is little-endian");
    out.write(reinterpret_cast<const char*>(values.data()),
              static_cast<std::streamsize>(values.size_bytes()));
    if (!out) fail(ErrorKind::io, "write to '" + out_path + "' failed");
  };

  if (!seed_hex.empty() || !seed_file.empty()) {
    if (count != 1) fail(ErrorKind::configuration, "an explicit seed produces exactly one draw");
    const std::string hex = strip_hex(seed_hex.empty() ? read_text(seed_file) : seed_hex);
    const BitString seed = BitString::from_hex(hex, layout.total_bits);
    doc["seed_source"] = seed_hex.empty() ? "seed-file" : "seed-hex";
    write_values(prg_generate(params, seed));
  } else {
    doc["seed_source"] = "stream";
    StreamGenerator stream(params, master);
    constexpr std::uint64_t kChunk = 4096;
    std::vector<double> buf;
    for (std::uint64_t t = 0; t < count; t += kChunk) {
      const std::uint64_t m = std::min(kChunk, count - t);
      buf.resize(m * params.n);
      stream.draws_into(t, m, buf);
      write_values(buf);
    }
  }
  out.close();
  if (!out) fail(ErrorKind::io, "closing '" + out_path + "' failed");
  write_text(out_path + ".json", doc.dump(2) + "\n");
  std::cout << doc.dump(2) << "\n";
  return kExitOk;
}

int cmd_fool(const RunConfig& cfg, const std::string& corpus_path, const std::string& out_path) {
  if (corpus_path.empty()) fail(ErrorKind::configuration, "fool needs --corpus");
  const PRGParams params = params_from_config(cfg, false);
  const auto corpus = load_corpus(corpus_path);
  FoolingConfig fc;
  fc.draws_prg = cfg.get_uint("draws_prg", fc.draws_prg);
  fc.draws_gauss = cfg.get_uint("draws_gauss", fc.draws_gauss);
  fc.threshold = cfg.get_double("threshold", fc.threshold);
  fc.master_seed = cfg.master_seed();
  fc.mc_only_when_needed = cfg.get_bool("mc_only_when_needed", fc.mc_only_when_needed);
  const auto reports = fooling_test(params, corpus, fc);

  bool all_pass = true;
  double max_gap = 0.0;
  for (const auto& r : reports) {
    all_pass = all_pass && r.pass;
    max_gap = std::max(max_gap, r.gap);
  }
  ordered_json doc;
  doc["header"] = report_header("fool", cfg, fc.master_seed, &params);
  doc["corpus"] = corpus_path;
  doc["draws_prg"] = fc.draws_prg;
  doc["draws_gauss"] = fc.draws_gauss;
  doc["reports"] = json(reports);
  doc["summary"] = {{"polynomials", reports.size()},
                    {"max_gap", max_gap},
                    {"verdict", all_pass ? "pass" : "fail"}};
  emit(doc, out_path);
  return all_pass ? kExitOk : kExitCheckFailed;
}

int cmd_lab(const RunConfig& cfg, std::vector<std::string> checks, const std::string& out_path,
            const std::string& csv_dir) {
  if (checks.empty()) fail(ErrorKind::configuration, "lab needs --check NAME (or --check all)");
  if (checks.size() == 1 && checks.front() == "all") checks = lab_check_names();
  if (!csv_dir.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(csv_dir, ec);
    if (ec) fail(ErrorKind::io, "cannot create '" + csv_dir + "': " + ec.message());
  }
  json results = json::array();
  bool all_pass = true;
  for (const auto& name : checks) {
    const LabResult r = run_lab_check(name, cfg);
    all_pass = all_pass && r.pass;
    results.push_back(lab_result_json(r));
    if (!csv_dir.empty()) {
      const std::string csv = lab_result_csv(r);
      if (!csv.empty()) write_text(csv_dir + "/" + r.name + ".csv", csv);
    }
  }
  ordered_json doc;
  doc["header"] = report_header("lab", cfg, cfg.master_seed());
  doc["results"] = results;
  doc["summary"] = {{"checks", checks.size()}, {"verdict", all_pass ? "pass" : "fail"}};
  emit(doc, out_path);
  return all_pass ? kExitOk : kExitCheckFailed;
}

int cmd_corpus(const RunConfig& cfg, const std::string& kind, const std::string& out_path,
               const std::string& format) {
  const std::uint64_t seed = cfg.master_seed();
  const std::size_t count = cfg.get_uint("count", 10);
  std::vector<PTF> corpus;
  if (kind == "linear") {
    corpus = linear_corpus(require_uint(cfg, "n"), count, seed);
  } else if (kind == "random") {
    corpus = random_corpus(require_uint(cfg, "n"), narrow(require_uint(cfg, "d"), "d"), count, seed);
  } else if (kind == "mixed") {
    corpus = mixed_corpus(require_uint(cfg, "n"), narrow(require_uint(cfg, "d"), "d"), count, seed);
  } else {
    fail(ErrorKind::configuration, "corpus kind must be linear, random or mixed");
  }
  const std::string text = format == "json" ? corpus_to_json(corpus).dump(2) + "\n"
                                            : format_corpus_text(corpus);
  if (out_path.empty()) {
    std::cout << text;
  } else {
    write_text(out_path, text);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pseudorandom generator for Gaussian polynomial threshold functions"};
  app.require_subcommand(1);

  ConfigOptions plan_opts, gen_opts, fool_opts, lab_opts, corpus_opts;
  std::string out_path;
  std::string seed_hex, seed_file, corpus_path, csv_dir, corpus_kind = "mixed", corpus_format = "text";
  std::vector<std::string> checks;

  auto* plan = app.add_subcommand("plan", "print planned parameters and seed layout as JSON");
  plan_opts.add_to(plan, kParamKeys);
  plan->add_option("--out", out_path, "also write the JSON here");

  auto* gen = app.add_subcommand("gen", "write count draws as little-endian doubles");
  auto gen_keys = kParamKeys;
  gen_keys.emplace_back("count", "number of draws");
  gen_keys.emplace_back("allow_infeasible_precision", "accept M below the precision bound");
  gen_opts.add_to(gen, gen_keys);
  gen->add_option("--out", out_path, "binary output file; header goes to <out>.json")->required();
  auto* hex_opt = gen->add_option("--seed-hex", seed_hex, "explicit generator seed (hex, 2Nkw bits)");
  gen->add_option("--seed-file", seed_file, "file holding an explicit hex seed")->excludes(hex_opt);

  auto* fool = app.add_subcommand("fool", "estimate fooling error of a PTF corpus");
  auto fool_keys = kParamKeys;
  fool_keys.emplace_back("draws_prg", "generator draws per polynomial");
  fool_keys.emplace_back("draws_gauss", "Gaussian Monte Carlo samples");
  fool_keys.emplace_back("threshold", "allowed gap before the 3-sigma allowance");
  fool_keys.emplace_back("allow_infeasible_precision", "accept M below the precision bound");
  fool_opts.add_to(fool, fool_keys);
  fool->add_option("--corpus", corpus_path, "corpus file (text or JSON)")->required();
  fool->add_option("--out", out_path, "also write the JSON here");

  auto* lab = app.add_subcommand("lab", "run lab checks");
  lab_opts.add_to(lab, {{"seed", "master seed (hex)"},
                        {"d", "degree (list for annihilation)"},
                        {"n", "dimension"},
                        {"theta", "noise angle (list for annihilation)"},
                        {"samples", "Monte Carlo samples"},
                        {"count", "corpus size"}});
  lab->add_option("--check", checks, "check name, repeatable, or 'all'")->required();
  lab->add_option("--out", out_path, "also write the JSON here");
  lab->add_option("--csv-dir", csv_dir, "write <check>.csv tables into this directory");

  auto* corpus = app.add_subcommand("corpus", "write a generated polynomial corpus");
  corpus_opts.add_to(corpus, {{"seed", "master seed (hex)"},
                              {"n", "dimension (max for mixed)"},
                              {"d", "degree (max for mixed)"},
                              {"count", "number of polynomials"}});
  corpus->add_option("--kind", corpus_kind, "linear, random or mixed");
  corpus->add_option("--format", corpus_format, "text or json")->check(CLI::IsMember({"text", "json"}));
  corpus->add_option("--out", out_path, "output file (stdout when absent)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*plan) return cmd_plan(plan_opts.effective(), out_path);
    if (*gen) return cmd_gen(gen_opts.effective(), out_path, seed_hex, seed_file);
    if (*fool) return cmd_fool(fool_opts.effective(), corpus_path, out_path);
    if (*lab) return cmd_lab(lab_opts.effective(), checks, out_path, csv_dir);
    if (*corpus) return cmd_corpus(corpus_opts.effective(), corpus_kind, out_path, corpus_format);
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
    return e.kind() == ErrorKind::io ? kExitIo : kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
