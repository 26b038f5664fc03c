#pragma once

// Ordered log of protocol messages. Messages on the public channel form the
// eavesdropper's view; broadcast and quantum records document the other
// channels without carrying secret values.
//
// Serialized form, one record per line, tab-separated:
//   step  sender  receiver  channel  payload-hex  time-ns
// with time printed to three decimals. Protocol notes (retries, failures,
// key vanishing) follow as lines starting with "#".

#include <cstdint>
#include <string>
#include <vector>

#include "qlab/clocksync.hpp"

namespace qlab {

enum class Channel { Public, Broadcast, Quantum };

const char* to_string(Channel c) noexcept;

struct Message {
    std::string step;
    std::string sender;
    std::string receiver;  // "*" for broadcast-to-all
    Channel channel{Channel::Public};
    std::string payload_hex;
    clocksync::Nanos time{0.0};
};

class Transcript {
public:
    void send(std::string step, std::string sender, std::string receiver, Channel channel,
              std::string payload_hex, clocksync::Nanos time);
    void note(std::string text);

    const std::vector<Message>& messages() const noexcept { return messages_; }
    const std::vector<std::string>& notes() const noexcept { return notes_; }

    /// Public-channel messages only.
    std::vector<Message> eve_view() const;
    /// True if any public payload equals `payload_hex`.
    bool eve_sees(const std::string& payload_hex) const;
    /// Payload of the first public message with this step label.
    const Message* find_public(const std::string& step) const;

    std::string serialize() const;

private:
    std::vector<Message> messages_;
    std::vector<std::string> notes_;
};

std::string format_nanos(clocksync::Nanos t);

}  // namespace qlab
