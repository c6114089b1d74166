#pragma once

// Parameter planning and the block-average generator
//   X = (1/sqrt(N)) * sum_i Z_i,
// where each Z_i is a GaussianBlock driven by its own slice of the seed.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ptfprg/bits.hpp"
#include "ptfprg/gf_kwise.hpp"

namespace ptfprg {

struct PRGParams {
  std::size_t n = 1;
  unsigned d = 1;
  double eps = 0.5;
  double c = 4.0;
  std::uint64_t N = 1;
  unsigned k = 1;
  unsigned M = 32;
  unsigned w = 64;
  double theta = 0.0;
  double B = 2.0;
  double c0 = 8.0;
  /// True when c0 * 2^(-M/2) < eps^(3d) * (d n N)^(-3d) for the final M.
  bool precision_meets_bound = false;
  /// True when the planner wanted more than w bits and clamped M to w.
  bool precision_capped = false;
  /// Field name -> "input", "planner", "default" or "override".
  std::map<std::string, std::string> provenance;
};

struct PlanOverrides {
  std::optional<std::uint64_t> N;
  std::optional<unsigned> k;
  std::optional<unsigned> M;
  std::optional<unsigned> w;
  std::optional<double> B;
  std::optional<double> c0;
  /// Accept a capped M instead of failing with an infeasible-precision error.
  bool allow_infeasible_precision = false;
};

/// Planner: N = ceil(B^d eps^(-4-c)), k = ceil(512 d / c), M = smallest
/// multiple of 8 with c0 2^(-M/2) < eps^(3d) (d n N)^(-3d), capped at w.
PRGParams plan_params(std::size_t n, unsigned d, double eps, double c,
                      const PlanOverrides& overrides = {});

/// Throws a parameter error if the bundle violates its invariants.
void validate(const PRGParams& params);

enum class SeedSide { u, v };

struct SeedSegment {
  std::uint64_t block = 0;
  SeedSide side = SeedSide::u;
  std::uint64_t offset = 0;
  std::uint64_t length = 0;
};

/// Block i owns bits [i*2kw, (i+1)*2kw): first its u-family coefficients,
/// then its v-family coefficients.
struct SeedLayout {
  std::uint64_t blocks = 0;
  unsigned k = 0;
  unsigned w = 0;
  std::uint64_t per_block_bits = 0;
  std::uint64_t total_bits = 0;

  SeedSegment segment(std::uint64_t block, SeedSide side) const;
  std::vector<SeedSegment> segments() const;
};

SeedLayout seed_length(const PRGParams& params);

/// Reusable generator for one parameter bundle.
class Generator {
 public:
  explicit Generator(PRGParams params);

  const PRGParams& params() const noexcept { return params_; }
  const SeedLayout& layout() const noexcept { return layout_; }

  /// Writes X into `out` (size n). The seed must hold exactly total_bits.
  void generate_into(const BitString& seed, std::span<double> out);
  std::vector<double> generate(const BitString& seed);

 private:
  PRGParams params_;
  SeedLayout layout_;
  std::vector<FieldElement> scratch_;
  std::vector<double> block_;
};

std::vector<double> prg_generate(const PRGParams& params, const BitString& seed);

/// Seed for draw t of a stream: word i is SplitMix64 word i started from
/// substream_key(master_seed, t); bits fill words least significant first.
BitString derive_seed(const SeedLayout& layout, std::uint64_t master_seed, std::uint64_t t);
void derive_seed_into(const SeedLayout& layout, std::uint64_t master_seed, std::uint64_t t,
                      BitString& out);

/// Draws of the generator over derived seeds. Draw t depends only on
/// (params, master_seed, t), so any index range can be computed apart.
class StreamGenerator {
 public:
  StreamGenerator(PRGParams params, std::uint64_t master_seed);

  const PRGParams& params() const noexcept { return gen_.params(); }
  std::uint64_t master_seed() const noexcept { return master_; }

  void draw_into(std::uint64_t t, std::span<double> out);
  std::vector<double> draw(std::uint64_t t);

  /// Draws [first, first+count) flattened draw-major into `out`
  /// (size count*n).
  void draws_into(std::uint64_t first, std::uint64_t count, std::span<double> out);

 private:
  Generator gen_;
  std::uint64_t master_;
  BitString seed_;
};

std::vector<std::vector<double>> prg_stream(const PRGParams& params, std::uint64_t master_seed,
                                            std::uint64_t count);

}  // namespace ptfprg
