#pragma once

// Satellite random-bit broadcast, delay/offset-aware receivers, and the
// bounded-storage eavesdropper.
//
// The physical noise source is replaced by a keyed stream cipher: bit i of
// the broadcast is bit i of the ChaCha20 keystream under the 256-bit seed.

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "qlab/bits.hpp"
#include "qlab/clocksync.hpp"
#include "qlab/rng.hpp"

namespace qlab::broadcast {

using clocksync::Clock;
using clocksync::Nanos;

inline constexpr double kSpeedOfLight = 299'792'458.0;  // m/s, exact

using Seed256 = std::array<std::uint8_t, 32>;

Seed256 seed_from_hex(std::string_view hex);
/// Expands a 64-bit seed to 256 bits with the lab's seed mixer.
Seed256 seed_from_u64(std::uint64_t seed);
std::string seed_to_hex(const Seed256& seed);

struct BroadcastSource {
    Seed256 seed{};
    double bitrate{1e6};  // bits per second
    Nanos epoch{0.0};     // global time of bit 0

    /// Stream bit `index`. Pure function of (seed, index).
    int bit_at(std::int64_t index) const;
    /// Bits [start, start + count).
    Bits bits(std::int64_t start, std::size_t count) const;
    /// Global time at which bit `index` starts being emitted.
    Nanos emission_time(std::int64_t index) const;
    Nanos bit_period() const { return Nanos{1e9 / bitrate}; }
};

struct Receiver {
    double distance_m{0.0};
    Clock clock{};
    std::string label;

    Nanos propagation_delay() const { return Nanos{distance_m / kSpeedOfLight * 1e9}; }
};

struct KeyWindow {
    Nanos start_local_time{0.0};  // on the extracting party's own clock
    std::size_t length{0};        // bits
};

/// Stream index arriving at `receiver` when its clock reads `local_time`:
/// floor((local - offset - delay - epoch) * bitrate). Throws DomainError for
/// instants before the first bit arrives.
std::int64_t reception_index(const BroadcastSource& source, const Receiver& receiver,
                             Nanos local_time);

/// Local time at which `index` is mid-way through arriving at `receiver`.
Nanos local_time_for_index(const BroadcastSource& source, const Receiver& receiver,
                           std::int64_t index);

/// Local start time `peer` must use to count from the same stream index as
/// `announcer` starting at `announced`, given a (possibly estimated) clock
/// offset peer - announcer.
Nanos compensated_start(const Receiver& announcer, const Receiver& peer, Nanos announced,
                        Nanos estimated_offset);

Bits extract_key(const BroadcastSource& source, const Receiver& receiver, const KeyWindow& window);

enum class StorageStrategy { Uniform, Prefix };

/// What a bounded-storage eavesdropper kept from a stretch of the broadcast.
struct StoredView {
    double stored_fraction{0.0};
    std::int64_t span_begin{0};
    std::size_t span_length{0};
    std::vector<std::int64_t> stored_indices;  // sorted, within the span
};

/// Eve keeps floor(fraction * span_length) indices of [span_begin,
/// span_begin + span_length): a uniformly random subset, or the prefix.
StoredView eve_store(std::int64_t span_begin, std::size_t span_length, double fraction,
                     StorageStrategy strategy, Rng& rng);

struct EveRecovery {
    std::size_t known_bits{0};
    double guess_success_probability{0.0};
};

/// Window bits Eve holds, and her chance of guessing the rest uniformly.
EveRecovery eve_recover(const StoredView& view, const BroadcastSource& source,
                        const Receiver& receiver, const KeyWindow& window);

}  // namespace qlab::broadcast
