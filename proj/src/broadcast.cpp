#include "qlab/broadcast.hpp"

#include <sodium.h>

#include <algorithm>
#include <cmath>

#include "qlab/errors.hpp"

namespace qlab::broadcast {

namespace {

constexpr std::size_t kBlockBytes = 64;
constexpr std::size_t kBlockBits = kBlockBytes * 8;

void ensure_sodium() {
    static const int ready = sodium_init();
    if (ready < 0) throw InternalError("libsodium failed to initialise");
}

void keystream_blocks(const Seed256& seed, std::uint64_t first_block, std::size_t n_blocks,
                      std::uint8_t* out) {
    ensure_sodium();
    static constexpr std::array<std::uint8_t, crypto_stream_chacha20_NONCEBYTES> kNonce{};
    std::fill(out, out + n_blocks * kBlockBytes, std::uint8_t{0});
    crypto_stream_chacha20_xor_ic(out, out, n_blocks * kBlockBytes, kNonce.data(), first_block,
                                  seed.data());
}

}  // namespace

Seed256 seed_from_hex(std::string_view hex) {
    const auto bytes = hex_to_bytes(hex);
    if (bytes.size() != 32) throw DomainError("broadcast seed must be 64 hex digits");
    Seed256 s{};
    std::copy(bytes.begin(), bytes.end(), s.begin());
    return s;
}

Seed256 seed_from_u64(std::uint64_t seed) {
    Seed256 s{};
    for (std::size_t w = 0; w < 4; ++w) {
        const std::uint64_t word = derive_seed(seed, w);
        for (std::size_t b = 0; b < 8; ++b) s[w * 8 + b] = static_cast<std::uint8_t>(word >> (8 * b));
    }
    return s;
}

std::string seed_to_hex(const Seed256& seed) {
    return bytes_to_hex(std::vector<std::uint8_t>(seed.begin(), seed.end()));
}

int BroadcastSource::bit_at(std::int64_t index) const {
    if (index < 0) throw DomainError("negative broadcast index");
    std::array<std::uint8_t, kBlockBytes> block{};
    const auto u = static_cast<std::uint64_t>(index);
    keystream_blocks(seed, u / kBlockBits, 1, block.data());
    const std::size_t within = u % kBlockBits;
    return (block[within / 8] >> (within % 8)) & 1;
}

Bits BroadcastSource::bits(std::int64_t start, std::size_t count) const {
    if (start < 0) throw DomainError("negative broadcast index");
    Bits out(count);
    if (count == 0) return out;
    const auto first = static_cast<std::uint64_t>(start);
    const std::uint64_t first_block = first / kBlockBits;
    const std::uint64_t last_block = (first + count - 1) / kBlockBits;
    std::vector<std::uint8_t> stream((last_block - first_block + 1) * kBlockBytes);
    keystream_blocks(seed, first_block, last_block - first_block + 1, stream.data());
    const std::size_t offset = first % kBlockBits;
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t pos = offset + i;
        out[i] = static_cast<std::uint8_t>((stream[pos / 8] >> (pos % 8)) & 1U);
    }
    return out;
}

Nanos BroadcastSource::emission_time(std::int64_t index) const {
    return epoch + Nanos{static_cast<double>(index) * 1e9 / bitrate};
}

std::int64_t reception_index(const BroadcastSource& source, const Receiver& receiver,
                             Nanos local_time) {
    const Nanos since_epoch =
        local_time - receiver.clock.offset - receiver.propagation_delay() - source.epoch;
    const double index = std::floor(since_epoch.count() * source.bitrate / 1e9);
    if (index < 0.0) {
        throw DomainError(receiver.label + ": local time precedes arrival of the first bit");
    }
    return static_cast<std::int64_t>(index);
}

Nanos local_time_for_index(const BroadcastSource& source, const Receiver& receiver,
                           std::int64_t index) {
    if (index < 0) throw DomainError("negative broadcast index");
    const Nanos arrival = source.emission_time(index) + source.bit_period() / 2.0 +
                          receiver.propagation_delay();
    return receiver.clock.local(arrival);
}

Nanos compensated_start(const Receiver& announcer, const Receiver& peer, Nanos announced,
                        Nanos estimated_offset) {
    return announced + estimated_offset + (peer.propagation_delay() - announcer.propagation_delay());
}

Bits extract_key(const BroadcastSource& source, const Receiver& receiver, const KeyWindow& window) {
    if (window.length == 0) throw DomainError("key window must hold at least one bit");
    return source.bits(reception_index(source, receiver, window.start_local_time), window.length);
}

StoredView eve_store(std::int64_t span_begin, std::size_t span_length, double fraction,
                     StorageStrategy strategy, Rng& rng) {
    if (!(fraction >= 0.0 && fraction <= 1.0)) throw DomainError("stored fraction must be in [0,1]");
    StoredView view{fraction, span_begin, span_length, {}};
    const auto keep = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(span_length)));
    view.stored_indices.reserve(keep);
    if (strategy == StorageStrategy::Prefix) {
        for (std::size_t i = 0; i < keep; ++i) view.stored_indices.push_back(span_begin + static_cast<std::int64_t>(i));
        return view;
    }
    // Selection sampling: exactly `keep` of `span_length`, emitted in order.
    std::size_t needed = keep;
    for (std::size_t i = 0; i < span_length && needed > 0; ++i) {
        if (rng.below(span_length - i) < needed) {
            view.stored_indices.push_back(span_begin + static_cast<std::int64_t>(i));
            --needed;
        }
    }
    return view;
}

EveRecovery eve_recover(const StoredView& view, const BroadcastSource& source,
                        const Receiver& receiver, const KeyWindow& window) {
    const std::int64_t first = reception_index(source, receiver, window.start_local_time);
    const std::int64_t last = first + static_cast<std::int64_t>(window.length);
    const auto lo = std::lower_bound(view.stored_indices.begin(), view.stored_indices.end(), first);
    const auto hi = std::lower_bound(lo, view.stored_indices.end(), last);
    const auto known = static_cast<std::size_t>(hi - lo);
    return {known, std::ldexp(1.0, -static_cast<int>(window.length - known))};
}

}  // namespace qlab::broadcast
