#include "qlab/transcript.hpp"

#include <cstdio>

namespace qlab {

const char* to_string(Channel c) noexcept {
    switch (c) {
        case Channel::Public: return "public";
        case Channel::Broadcast: return "broadcast";
        case Channel::Quantum: return "quantum";
    }
    return "?";
}

std::string format_nanos(clocksync::Nanos t) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f", t.count());
    return buf;
}

void Transcript::send(std::string step, std::string sender, std::string receiver,
                      Channel channel, std::string payload_hex, clocksync::Nanos time) {
    messages_.push_back(
        {std::move(step), std::move(sender), std::move(receiver), channel, std::move(payload_hex), time});
}

void Transcript::note(std::string text) { notes_.push_back(std::move(text)); }

std::vector<Message> Transcript::eve_view() const {
    std::vector<Message> out;
    for (const auto& m : messages_) {
        if (m.channel == Channel::Public) out.push_back(m);
    }
    return out;
}

bool Transcript::eve_sees(const std::string& payload_hex) const {
    for (const auto& m : messages_) {
        if (m.channel == Channel::Public && m.payload_hex == payload_hex) return true;
    }
    return false;
}

const Message* Transcript::find_public(const std::string& step) const {
    for (const auto& m : messages_) {
        if (m.channel == Channel::Public && m.step == step) return &m;
    }
    return nullptr;
}

std::string Transcript::serialize() const {
    std::string out;
    for (const auto& m : messages_) {
        out += m.step + '\t' + m.sender + '\t' + m.receiver + '\t' + to_string(m.channel) + '\t' +
               (m.payload_hex.empty() ? "-" : m.payload_hex) + '\t' + format_nanos(m.time) + '\n';
    }
    for (const auto& n : notes_) out += "# " + n + '\n';
    return out;
}

}  // namespace qlab
