#include "qlab/broadcast.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "qlab/errors.hpp"

namespace qlab::broadcast {
namespace {

BroadcastSource make_source(std::uint64_t seed, double bitrate = 1e6) {
    return {seed_from_u64(seed), bitrate, Nanos{0.0}};
}

TEST(BitAt, Deterministic) {
    const auto s = make_source(1);
    for (std::int64_t i : {0LL, 1LL, 511LL, 512LL, 123456789LL}) EXPECT_EQ(s.bit_at(i), s.bit_at(i));
    EXPECT_THROW(s.bit_at(-1), DomainError);
}

TEST(BitAt, BulkMatchesPointwise) {
    const auto s = make_source(2);
    const auto bulk = s.bits(500, 1100);
    for (std::size_t i = 0; i < bulk.size(); ++i) ASSERT_EQ(bulk[i], s.bit_at(500 + static_cast<std::int64_t>(i)));
}

TEST(BitAt, UnbiasedOverMillionBits) {
    const auto s = make_source(3);
    const auto bits = s.bits(0, 1'000'000);
    std::size_t ones = 0;
    for (auto b : bits) ones += b;
    EXPECT_NEAR(ones / 1e6, 0.5, 0.002);
}

TEST(BitAt, DifferentSeedsDecorrelate) {
    const auto a = make_source(4).bits(0, 10000);
    const auto b = make_source(5).bits(0, 10000);
    EXPECT_NEAR(static_cast<double>(hamming_distance(a, b)), 5000.0, 300.0);
}

TEST(Seed, HexRoundTrip) {
    const auto s = seed_from_u64(99);
    EXPECT_EQ(seed_from_hex(seed_to_hex(s)), s);
    EXPECT_THROW(seed_from_hex("abcd"), DomainError);
}

TEST(ReceptionIndex, EquidistantPartiesAgree) {
    const auto s = make_source(6);
    const Receiver alice{1000.0, {}, "alice"};
    const Receiver bob{1000.0, {}, "bob"};
    EXPECT_EQ(reception_index(s, alice, Nanos{5e6}), reception_index(s, bob, Nanos{5e6}));
}

TEST(ReceptionIndex, FartherReceiverLags) {
    const auto s = make_source(7, 1e6);
    const Receiver alice{0.0, {}, "alice"};
    const Receiver bob{299'792.458, {}, "bob"};  // exactly 1 ms farther
    const Nanos t{5'000'500.0};
    EXPECT_EQ(reception_index(s, alice, t) - reception_index(s, bob, t), 1000);
}

TEST(ReceptionIndex, BeforeFirstArrival) {
    const auto s = make_source(8);
    const Receiver bob{299'792.458, {}, "bob"};
    EXPECT_THROW(reception_index(s, bob, Nanos{10.0}), DomainError);
}

TEST(ReceptionIndex, MidBitLocalTimeInverts) {
    const auto s = make_source(9, 3.3e6);
    const Receiver r{12345.6, Clock{Nanos{-777.0}}, "r"};
    for (std::int64_t i : {40000LL, 40001LL, 987654LL}) {
        EXPECT_EQ(reception_index(s, r, local_time_for_index(s, r, i)), i);
    }
}

TEST(ExtractKey, CompensatedStartsAgree) {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        Rng rng(seed);
        const auto s = make_source(seed, 1e6 * (1 + static_cast<double>(rng.below(10))));
        const Receiver alice{rng.uniform01() * 4e7, Clock{Nanos{(rng.uniform01() - 0.5) * 1e5}}, "alice"};
        const Receiver bob{rng.uniform01() * 4e7, Clock{Nanos{(rng.uniform01() - 0.5) * 1e5}}, "bob"};
        const Nanos t = local_time_for_index(s, alice, 1'000'000 + static_cast<std::int64_t>(rng.below(1000)));
        const Nanos t1 = compensated_start(alice, bob, t, bob.clock.offset - alice.clock.offset);
        ASSERT_EQ(extract_key(s, alice, {t, 128}), extract_key(s, bob, {t1, 128}));
    }
}

TEST(ExtractKey, UncompensatedStartDiffers) {
    const auto s = make_source(10);
    const Receiver alice{0.0, {}, "alice"};
    const Receiver bob{3e6, {}, "bob"};
    const Nanos t = local_time_for_index(s, alice, 200000);
    EXPECT_NE(extract_key(s, alice, {t, 128}), extract_key(s, bob, {t, 128}));
}

TEST(ExtractKey, OneBitShiftChangesKey) {
    const auto s = make_source(11);
    const Receiver alice{0.0, {}, "alice"};
    for (std::int64_t i = 1000; i < 1100; ++i) {
        ASSERT_NE(extract_key(s, alice, {local_time_for_index(s, alice, i), 128}),
                  extract_key(s, alice, {local_time_for_index(s, alice, i + 1), 128}));
    }
}

TEST(ExtractKey, EmptyWindow) {
    const auto s = make_source(12);
    EXPECT_THROW(extract_key(s, Receiver{0.0, {}, "a"}, {Nanos{1e6}, 0}), DomainError);
}

TEST(EveStore, SizeBoundAndOrdering) {
    Rng rng(13);
    for (double f : {0.0, 0.1, 0.5, 0.99, 1.0}) {
        const auto v = eve_store(100, 1000, f, StorageStrategy::Uniform, rng);
        EXPECT_LE(static_cast<double>(v.stored_indices.size()), f * 1000 + 1);
        EXPECT_TRUE(std::is_sorted(v.stored_indices.begin(), v.stored_indices.end()));
        for (auto i : v.stored_indices) ASSERT_TRUE(i >= 100 && i < 1100);
    }
    EXPECT_THROW(eve_store(0, 10, 1.5, StorageStrategy::Uniform, rng), DomainError);
}

TEST(EveRecover, Extremes) {
    const auto s = make_source(14);
    const Receiver alice{0.0, {}, "alice"};
    Rng rng(1);
    const KeyWindow w{local_time_for_index(s, alice, 5000), 128};
    const auto all = eve_recover(eve_store(4096, 2048, 1.0, StorageStrategy::Uniform, rng), s, alice, w);
    EXPECT_EQ(all.known_bits, 128u);
    EXPECT_DOUBLE_EQ(all.guess_success_probability, 1.0);
    const auto none = eve_recover(eve_store(4096, 2048, 0.0, StorageStrategy::Uniform, rng), s, alice, w);
    EXPECT_EQ(none.known_bits, 0u);
    EXPECT_DOUBLE_EQ(none.guess_success_probability, std::ldexp(1.0, -128));
}

TEST(EveRecover, PrefixStrategy) {
    const auto s = make_source(15);
    const Receiver alice{0.0, {}, "alice"};
    Rng rng(1);
    const auto view = eve_store(0, 1024, 0.5, StorageStrategy::Prefix, rng);
    EXPECT_EQ(eve_recover(view, s, alice, {local_time_for_index(s, alice, 100), 128}).known_bits, 128u);
    EXPECT_EQ(eve_recover(view, s, alice, {local_time_for_index(s, alice, 600), 128}).known_bits, 0u);
}

TEST(EveRecover, HalfStorageMeanKnownBits) {
    const auto s = make_source(16);
    const Receiver alice{0.0, {}, "alice"};
    Rng rng(17);
    double total = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        const auto view = eve_store(0, 1024, 0.5, StorageStrategy::Uniform, rng);
        const auto start = static_cast<std::int64_t>(rng.below(1024 - 128));
        total += static_cast<double>(eve_recover(view, s, alice, {local_time_for_index(s, alice, start), 128}).known_bits);
    }
    EXPECT_NEAR(total / 1000.0, 64.0, 3.4);
}

TEST(EveRecover, FullRecoveryRateBounded) {
    const auto s = make_source(18);
    const Receiver alice{0.0, {}, "alice"};
    Rng rng(19);
    const double f = 0.5;
    const int trials = 10000;
    int full = 0;
    for (int trial = 0; trial < trials; ++trial) {
        const auto view = eve_store(0, 1024, f, StorageStrategy::Uniform, rng);
        const auto start = static_cast<std::int64_t>(rng.below(1024 - 8));
        full += eve_recover(view, s, alice, {local_time_for_index(s, alice, start), 8}).known_bits == 8;
    }
    const double target = std::pow(f, 8);
    const double sigma = std::sqrt(target * (1 - target) / trials);
    EXPECT_LE(full / double(trials), target + 3 * sigma);
}

}  // namespace
}  // namespace qlab::broadcast
