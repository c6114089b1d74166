#include "ptfprg/prg.hpp"

#include <cmath>
#include <limits>

#include "ptfprg/error.hpp"
#include "ptfprg/gauss_block.hpp"
#include "ptfprg/random.hpp"

namespace ptfprg {

namespace {

constexpr double kMaxBlocks = 4.0e18;

// log2 of the precision target eps^(3d) (d n N)^(-3d).
double log2_precision_target(const PRGParams& p) {
  const double dnN = static_cast<double>(p.d) * static_cast<double>(p.n) * static_cast<double>(p.N);
  return 3.0 * p.d * (std::log2(p.eps) - std::log2(dnN));
}

bool meets_bound(const PRGParams& p) {
  return std::log2(p.c0) - 0.5 * p.M < log2_precision_target(p);
}

}  // namespace

void validate(const PRGParams& p) {
  auto bad = [](const std::string& what) { fail(ErrorKind::parameter, what); };
  if (p.n < 1) bad("n must be >= 1");
  if (p.d < 1) bad("d must be >= 1");
  if (!(p.eps > 0.0 && p.eps < 1.0)) bad("eps must lie in (0, 1)");
  if (!(p.c > 0.0 && p.c <= 4.0)) bad("c must lie in (0, 4]");
  if (p.N < 1) bad("N must be >= 1");
  if (p.k < 1) bad("k must be >= 1");
  FieldSpec::standard(p.w);
  if (p.M < 1 || p.M > p.w) bad("M must lie in [1, w]");
  if (p.w < 64 && p.n - 1 > ((std::uint64_t{1} << p.w) - 1)) bad("n exceeds the field size 2^w");
  if (!(p.c0 > 0.0)) bad("c0 must be > 0");
  if (!(p.B > 0.0)) bad("B must be > 0");
}

PRGParams plan_params(std::size_t n, unsigned d, double eps, double c,
                      const PlanOverrides& overrides) {
  PRGParams p;
  p.n = n;
  p.d = d;
  p.eps = eps;
  p.c = c;
  if (n < 1) fail(ErrorKind::parameter, "n must be >= 1");
  if (d < 1) fail(ErrorKind::parameter, "d must be >= 1");
  if (!(eps > 0.0 && eps < 1.0)) fail(ErrorKind::parameter, "eps must lie in (0, 1)");
  if (!(c > 0.0 && c <= 4.0)) fail(ErrorKind::parameter, "c must lie in (0, 4]");
  for (const char* name : {"n", "d", "eps", "c"}) p.provenance[name] = "input";

  auto take = [&](const char* name, auto& field, const auto& value, const char* fallback) {
    if (value) {
      field = *value;
      p.provenance[name] = "override";
    } else {
      p.provenance[name] = fallback;
    }
  };

  take("B", p.B, overrides.B, "default");
  take("c0", p.c0, overrides.c0, "default");
  take("w", p.w, overrides.w, "default");
  if (!(p.B > 0.0)) fail(ErrorKind::parameter, "B must be > 0");
  if (!(p.c0 > 0.0)) fail(ErrorKind::parameter, "c0 must be > 0");
  FieldSpec::standard(p.w);

  if (overrides.N) {
    take("N", p.N, overrides.N, "planner");
  } else {
    const double blocks = std::ceil(std::pow(p.B, d) * std::pow(eps, -4.0 - c));
    if (!(blocks <= kMaxBlocks)) {
      fail(ErrorKind::parameter, "planned block count N overflows; override N");
    }
    p.N = static_cast<std::uint64_t>(blocks);
    p.provenance["N"] = "planner";
  }
  if (overrides.k) {
    take("k", p.k, overrides.k, "planner");
  } else {
    p.k = static_cast<unsigned>(std::ceil(512.0 * d / c));
    p.provenance["k"] = "planner";
  }

  if (overrides.M) {
    take("M", p.M, overrides.M, "planner");
  } else {
    // c0 2^(-M/2) < target  <=>  M > 2 (log2 c0 - log2 target)
    const double floor_bits = 2.0 * (std::log2(p.c0) - log2_precision_target(p));
    double m = 8.0 * (std::floor(floor_bits / 8.0) + 1.0);
    if (m < 8.0) m = 8.0;
    if (m > p.w) {
      if (!overrides.allow_infeasible_precision) {
        fail(ErrorKind::infeasible_precision,
             "planner needs M = " + std::to_string(static_cast<long long>(m)) +
                 " bits but w = " + std::to_string(p.w) +
                 "; override M or allow infeasible precision");
      }
      p.precision_capped = true;
      m = p.w;
    }
    p.M = static_cast<unsigned>(m);
    p.provenance["M"] = "planner";
  }

  p.theta = std::asin(1.0 / std::sqrt(static_cast<double>(p.N)));
  p.provenance["theta"] = "derived";
  validate(p);
  p.precision_meets_bound = meets_bound(p);
  return p;
}

SeedSegment SeedLayout::segment(std::uint64_t block, SeedSide side) const {
  const std::uint64_t half = per_block_bits / 2;
  return {block, side, block * per_block_bits + (side == SeedSide::v ? half : 0), half};
}

std::vector<SeedSegment> SeedLayout::segments() const {
  std::vector<SeedSegment> out;
  out.reserve(2 * blocks);
  for (std::uint64_t i = 0; i < blocks; ++i) {
    out.push_back(segment(i, SeedSide::u));
    out.push_back(segment(i, SeedSide::v));
  }
  return out;
}

SeedLayout seed_length(const PRGParams& params) {
  SeedLayout layout;
  layout.blocks = params.N;
  layout.k = params.k;
  layout.w = params.w;
  layout.per_block_bits = 2ULL * params.k * params.w;
  layout.total_bits = params.N * layout.per_block_bits;
  return layout;
}

Generator::Generator(PRGParams params)
    : params_(std::move(params)), layout_(seed_length(params_)) {
  validate(params_);
  scratch_.resize(2 * params_.n);
  block_.resize(params_.n);
}

void Generator::generate_into(const BitString& seed, std::span<double> out) {
  if (seed.size() != layout_.total_bits) {
    fail(ErrorKind::input_size, "seed must be exactly 2*N*k*w = " +
                                    std::to_string(layout_.total_bits) + " bits (got " +
                                    std::to_string(seed.size()) + ")");
  }
  if (out.size() != params_.n) fail(ErrorKind::input_size, "output must have n entries");
  std::fill(out.begin(), out.end(), 0.0);
  const FieldSpec spec = FieldSpec::standard(params_.w);
  const std::size_t k = params_.k;
  for (std::uint64_t i = 0; i < params_.N; ++i) {
    const SeedSegment u_seg = layout_.segment(i, SeedSide::u);
    const SeedSegment v_seg = layout_.segment(i, SeedSide::v);
    if (params_.w == 64) {
      const std::span<const std::uint64_t> words(seed.words());
      sample_block64(words.subspan(u_seg.offset / 64, k), words.subspan(v_seg.offset / 64, k),
                     params_.M, scratch_, block_);
    } else {
      GaussianBlock block(KWiseFamily::from_bits(spec, params_.k, seed, u_seg.offset),
                          KWiseFamily::from_bits(spec, params_.k, seed, v_seg.offset), params_.n,
                          params_.M);
      block.sample_all(block_);
    }
    for (std::size_t j = 0; j < params_.n; ++j) out[j] += block_[j];
  }
  const double scale = 1.0 / std::sqrt(static_cast<double>(params_.N));
  for (double& x : out) x *= scale;
}

std::vector<double> Generator::generate(const BitString& seed) {
  std::vector<double> out(params_.n);
  generate_into(seed, out);
  return out;
}

std::vector<double> prg_generate(const PRGParams& params, const BitString& seed) {
  Generator gen(params);
  return gen.generate(seed);
}

void derive_seed_into(const SeedLayout& layout, std::uint64_t master_seed, std::uint64_t t,
                      BitString& out) {
  if (out.size() != layout.total_bits) out = BitString(layout.total_bits);
  const std::uint64_t key = substream_key(master_seed, t);
  auto& words = out.mutable_words();
  for (std::size_t i = 0; i < words.size(); ++i) words[i] = SplitMix64::word_at(key, i);
  out.normalize();
}

BitString derive_seed(const SeedLayout& layout, std::uint64_t master_seed, std::uint64_t t) {
  BitString out(layout.total_bits);
  derive_seed_into(layout, master_seed, t, out);
  return out;
}

StreamGenerator::StreamGenerator(PRGParams params, std::uint64_t master_seed)
    : gen_(std::move(params)), master_(master_seed), seed_(gen_.layout().total_bits) {}

void StreamGenerator::draw_into(std::uint64_t t, std::span<double> out) {
  derive_seed_into(gen_.layout(), master_, t, seed_);
  gen_.generate_into(seed_, out);
}

std::vector<double> StreamGenerator::draw(std::uint64_t t) {
  std::vector<double> out(gen_.params().n);
  draw_into(t, out);
  return out;
}

void StreamGenerator::draws_into(std::uint64_t first, std::uint64_t count, std::span<double> out) {
  const std::size_t n = gen_.params().n;
  if (out.size() != count * n) fail(ErrorKind::input_size, "output must hold count*n values");
  for (std::uint64_t t = 0; t < count; ++t) draw_into(first + t, out.subspan(t * n, n));
}

std::vector<std::vector<double>> prg_stream(const PRGParams& params, std::uint64_t master_seed,
                                            std::uint64_t count) {
  if (count < 1) fail(ErrorKind::parameter, "stream count must be >= 1");
  StreamGenerator stream(params, master_seed);
  std::vector<std::vector<double>> out;
  out.reserve(count);
  for (std::uint64_t t = 0; t < count; ++t) out.push_back(stream.draw(t));
  return out;
}

}  // namespace ptfprg
