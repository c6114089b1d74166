#include <cmath>
#include <vector>

#include "doctest.h"
#include "ptfprg/error.hpp"
#include "ptfprg/gauss_block.hpp"
#include "ptfprg/prg.hpp"
#include "ptfprg/random.hpp"
#include "ptfprg/stats.hpp"

using namespace ptfprg;

namespace {

PRGParams desk(std::size_t n, std::uint64_t N, unsigned k, unsigned M = 32, unsigned w = 64) {
  PlanOverrides o;
  o.N = N;
  o.k = k;
  o.M = M;
  o.w = w;
  return plan_params(n, 1, 0.5, 4.0, o);
}

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::io;
}

}  // namespace

TEST_CASE("planner worked examples") {
  const PRGParams p = plan_params(4, 2, 0.2, 4.0, {.allow_infeasible_precision = true});
  CHECK(p.k == 256);
  CHECK(p.N == 1'562'500);  // 2^2 * 0.2^-8
  CHECK(p.M == 64);
  CHECK(p.precision_capped);
  CHECK_FALSE(p.precision_meets_bound);
  CHECK(p.provenance.at("k") == "planner");
  CHECK(p.provenance.at("B") == "default");
  CHECK(p.theta == doctest::Approx(std::asin(1.0 / std::sqrt(1'562'500.0))));

  CHECK(plan_params(4, 1, 0.5, 4.0, {.allow_infeasible_precision = true}).k == 128);
  CHECK(plan_params(4, 3, 0.5, 2.0, {.allow_infeasible_precision = true}).k == 768);
}

TEST_CASE("planner precision search and its failure mode") {
  // eps^3 (d n N)^-3 = 0.729 with N = 1: 8 * 2^-4 = 0.5 < 0.729, 8 * 2^-3.5 is not.
  PlanOverrides o;
  o.N = 1;
  const PRGParams p = plan_params(1, 1, 0.9, 4.0, o);
  CHECK(p.M == 8);
  CHECK(p.precision_meets_bound);
  CHECK_FALSE(p.precision_capped);

  CHECK(kind_of([] { plan_params(4, 2, 0.2, 4.0); }) == ErrorKind::infeasible_precision);
  PlanOverrides m;
  m.M = 32;
  const PRGParams q = plan_params(4, 2, 0.2, 4.0, m);
  CHECK(q.M == 32);
  CHECK(q.provenance.at("M") == "override");
  CHECK_FALSE(q.precision_meets_bound);
}

TEST_CASE("planner scaling: halving eps multiplies N by 2^(4+c)") {
  for (double c : {1.0, 2.0, 4.0}) {
    for (unsigned d : {1u, 2u, 3u}) {
      const auto a = plan_params(3, d, 0.5, c, {.allow_infeasible_precision = true});
      const auto b = plan_params(3, d, 0.25, c, {.allow_infeasible_precision = true});
      CHECK(b.N == a.N * (std::uint64_t{1} << static_cast<unsigned>(4 + c)));
    }
  }
}

TEST_CASE("planner rejects invalid inputs") {
  CHECK(kind_of([] { plan_params(4, 2, 1.5, 4.0); }) == ErrorKind::parameter);
  CHECK(kind_of([] { plan_params(4, 2, 0.0, 4.0); }) == ErrorKind::parameter);
  CHECK(kind_of([] { plan_params(0, 2, 0.2, 4.0); }) == ErrorKind::parameter);
  CHECK(kind_of([] { plan_params(4, 0, 0.2, 4.0); }) == ErrorKind::parameter);
  CHECK(kind_of([] { plan_params(4, 2, 0.2, 5.0); }) == ErrorKind::parameter);
  CHECK(kind_of([] { desk(300, 4, 2, 8, 8); }) == ErrorKind::parameter);
}

TEST_CASE("seed layout partitions 2Nkw bits") {
  const PRGParams p = desk(4, 5, 3, 16, 16);
  const SeedLayout l = seed_length(p);
  CHECK(l.total_bits == 2ULL * 5 * 3 * 16);
  CHECK(l.per_block_bits == 96);
  const auto segs = l.segments();
  REQUIRE(segs.size() == 10);
  std::uint64_t next = 0;
  for (std::size_t i = 0; i < segs.size(); ++i) {
    CHECK(segs[i].offset == next);
    CHECK(segs[i].length == 48);
    CHECK(segs[i].block == i / 2);
    CHECK(segs[i].side == (i % 2 == 0 ? SeedSide::u : SeedSide::v));
    next += segs[i].length;
  }
  CHECK(next == l.total_bits);
}

TEST_CASE("generator output equals the sum of independently built blocks") {
  for (unsigned w : {8u, 64u}) {
    CAPTURE(w);
    const PRGParams p = desk(5, 3, 4, 8, w);
    const SeedLayout l = seed_length(p);
    const BitString seed = derive_seed(l, 77, 0);
    const auto x = prg_generate(p, seed);
    const FieldSpec f = FieldSpec::standard(w);
    std::vector<double> expect(5, 0.0);
    for (std::uint64_t i = 0; i < p.N; ++i) {
      const GaussianBlock b(KWiseFamily::from_bits(f, p.k, seed, l.segment(i, SeedSide::u).offset),
                            KWiseFamily::from_bits(f, p.k, seed, l.segment(i, SeedSide::v).offset), 5,
                            p.M);
      for (std::size_t j = 0; j < 5; ++j) expect[j] += b.sample(j);
    }
    for (std::size_t j = 0; j < 5; ++j) CHECK(x[j] == doctest::Approx(expect[j] / std::sqrt(3.0)).epsilon(1e-14));
  }
}

TEST_CASE("two identical blocks give sqrt(2) times one block") {
  const PRGParams one = desk(6, 1, 8);
  const PRGParams two = desk(6, 2, 8);
  const BitString s1 = derive_seed(seed_length(one), 3, 0);
  BitString s2(seed_length(two).total_bits);
  for (std::size_t b = 0; b < s1.size(); ++b) {
    s2.set_bit(b, s1.bit(b));
    s2.set_bit(b + s1.size(), s1.bit(b));
  }
  const auto x1 = prg_generate(one, s1);
  const auto x2 = prg_generate(two, s2);
  for (std::size_t j = 0; j < 6; ++j) CHECK(x2[j] == doctest::Approx(std::sqrt(2.0) * x1[j]).epsilon(1e-14));
}

TEST_CASE("generator rejects wrong seed lengths") {
  const PRGParams p = desk(2, 2, 2);
  CHECK(kind_of([&] { prg_generate(p, BitString(100)); }) == ErrorKind::input_size);
}

TEST_CASE("stream seeds follow the counter layout") {
  const PRGParams p = desk(3, 2, 4);
  const SeedLayout l = seed_length(p);
  const BitString s = derive_seed(l, 0x5EED, 7);
  const std::uint64_t key = substream_key(0x5EED, 7);
  SplitMix64 ref(key);
  for (std::size_t i = 0; i < s.words().size(); ++i) CHECK(s.words()[i] == ref());
}

TEST_CASE("stream draws are deterministic and addressable") {
  const PRGParams p = desk(3, 4, 8);
  StreamGenerator a(p, 11), b(p, 11), c(p, 12);
  std::vector<double> block(3 * 5);
  a.draws_into(10, 5, block);
  for (std::uint64_t t = 0; t < 5; ++t) {
    const auto x = b.draw(10 + t);
    const auto y = prg_generate(p, derive_seed(seed_length(p), 11, 10 + t));
    for (std::size_t j = 0; j < 3; ++j) {
      CHECK(block[t * 3 + j] == x[j]);
      CHECK(x[j] == y[j]);
    }
  }
  CHECK(c.draw(10) != b.draw(10));
  const auto s = prg_stream(p, 11, 3);
  CHECK(s.size() == 3);
  CHECK(s[2] == b.draw(2));
  CHECK(kind_of([&] { prg_stream(p, 11, 0); }) == ErrorKind::parameter);
}

TEST_CASE("stream draws look standard normal") {
  const PRGParams p = desk(2, 16, 16);
  StreamGenerator g(p, 0x5EED);
  Moments m0, m1, m00, m11, m01, pos;
  for (std::uint64_t t = 0; t < 20'000; ++t) {
    const auto x = g.draw(t);
    m0.add(x[0]);
    m1.add(x[1]);
    m00.add(x[0] * x[0]);
    m11.add(x[1] * x[1]);
    m01.add(x[0] * x[1]);
    pos.add(x[0] > 0 ? 1.0 : 0.0);
  }
  CHECK(std::abs(m0.mean()) < 4 * m0.stderr_of_mean());
  CHECK(std::abs(m1.mean()) < 4 * m1.stderr_of_mean());
  CHECK(std::abs(m00.mean() - 1) < 4 * m00.stderr_of_mean());
  CHECK(std::abs(m11.mean() - 1) < 4 * m11.stderr_of_mean());
  CHECK(std::abs(m01.mean()) < 4 * m01.stderr_of_mean());
  CHECK(std::abs(pos.mean() - 0.5) < 4 * pos.stderr_of_mean());
}
