#include <vector>

#include "doctest.h"
#include "ptfprg/bits.hpp"
#include "ptfprg/error.hpp"
#include "ptfprg/random.hpp"
#include "ptfprg/stats.hpp"

using namespace ptfprg;

TEST_CASE("SplitMix64 reference outputs") {
  // Published reference sequence for seed 1234567.
  SplitMix64 g(1234567);
  CHECK(g() == 6457827717110365317ULL);
  CHECK(g() == 3203168211198807973ULL);
  CHECK(g() == 9817491932198370423ULL);
  CHECK(SplitMix64::word_at(1234567, 2) == 9817491932198370423ULL);
}

TEST_CASE("substream keys") {
  CHECK(substream_key(5, 0) == mix64(5 ^ mix64(kGoldenGamma)));
  CHECK(substream_key(5, 1) != substream_key(5, 2));
  CHECK(substream_key(5, 1) != substream_key(6, 1));
}

TEST_CASE("unit_open_closed stays in (0, 1]") {
  CHECK(unit_open_closed(0) == std::ldexp(1.0, -53));
  CHECK(unit_open_closed(~0ULL) == 1.0);
}

TEST_CASE("normal source moments") {
  NormalSource s(42);
  Moments m1, m2;
  for (int i = 0; i < 200'000; ++i) {
    const double x = s();
    m1.add(x);
    m2.add(x * x);
  }
  CHECK(std::abs(m1.mean()) < 4.0 * m1.stderr_of_mean());
  CHECK(std::abs(m2.mean() - 1.0) < 4.0 * m2.stderr_of_mean());
}

TEST_CASE("bit string access") {
  BitString b(70);
  CHECK(b.words().size() == 2);
  b.set_bit(0, true);
  b.set_bit(69, true);
  CHECK(b.bit(0));
  CHECK(b.bit(69));
  CHECK_FALSE(b.bit(1));
  b.deposit(60, 8, 0xA5);
  CHECK(b.extract(60, 8) == 0xA5);
  CHECK(b.extract(0, 1) == 1);
  CHECK_THROWS_AS(b.bit(70), Error);
  CHECK_THROWS_AS(b.extract(65, 8), Error);
}

TEST_CASE("hex seed format: byte i holds bits 8i..8i+7, LSB first") {
  const BitString b = BitString::from_hex("0180", 16);
  CHECK(b.bit(0));
  CHECK_FALSE(b.bit(1));
  CHECK(b.bit(15));
  CHECK(b.extract(0, 16) == 0x8001);
  CHECK(b.to_hex() == "0180");
  CHECK(BitString::from_hex("0x0180", 16) == b);
  CHECK(BitString::from_hex("ABcd", 16).to_hex() == "abcd");

  auto kind = [](auto f) {
    try {
      f();
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::io;
  };
  CHECK(kind([] { BitString::from_hex("01", 16); }) == ErrorKind::input_size);
  CHECK(kind([] { BitString::from_hex("01zz", 16); }) == ErrorKind::parse);
}

TEST_CASE("chunked reduction is independent of the thread count") {
  auto run = [] {
    return chunked_reduce<Moments>(10'000, 64, [](std::uint64_t chunk, std::uint64_t b, std::uint64_t e) {
      NormalSource s(substream_key(9, chunk));
      Moments m;
      for (auto i = b; i < e; ++i) m.add(s());
      return m;
    });
  };
  set_worker_threads(1);
  const Moments a = run();
  set_worker_threads(4);
  const Moments b = run();
  set_worker_threads(0);
  CHECK(a.mean() == b.mean());
  CHECK(a.variance() == b.variance());
  CHECK(a.count() == 10'000);
}

TEST_CASE("moments merge equals sequential accumulation") {
  Moments all, left, right;
  for (int i = 0; i < 100; ++i) {
    const double x = i * 0.37 - 5.0;
    all.add(x);
    (i < 40 ? left : right).add(x);
  }
  left.merge(right);
  CHECK(left.mean() == doctest::Approx(all.mean()).epsilon(1e-14));
  CHECK(left.variance() == doctest::Approx(all.variance()).epsilon(1e-14));
}
