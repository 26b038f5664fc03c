// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>

#include "qlab/arith.hpp"
#include "qlab/broadcast.hpp"
#include "qlab/clocksync.hpp"
#include "qlab/coinflip.hpp"
#include "qlab/ecurve.hpp"
#include "qlab/keyexchange.hpp"
#include "qlab/qwalk.hpp"
#include "qlab/rng.hpp"
#include "qlab/scenario.hpp"
#include "qlab/teleport.hpp"

using namespace qlab;
using clocksync::Nanos;

namespace {

struct Outcome {
    bool pass{false};
    std::string detail;
};

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Outcome teleport_fidelity() {
    const auto t0 = std::chrono::steady_clock::now();
    Rng rng(1001);
    double min_f = 1.0;
    for (int i = 0; i < 1000; ++i) {
        const double theta = std::acos(1.0 - 2.0 * rng.uniform01());
        const double phi = 2.0 * std::numbers::pi * rng.uniform01();
        const auto input = qstate::StateVector::from_amplitudes(
            {std::cos(theta / 2), std::polar(std::sin(theta / 2), phi)});
        min_f = std::min(min_f, teleport::teleport_state(input, rng).transcript.fidelity);
    }
    std::array<int, 4> counts{};
    const auto plus = qstate::StateVector::from_amplitudes({1 / std::sqrt(2.0), 1 / std::sqrt(2.0)});
    for (int i = 0; i < 10000; ++i) ++counts[static_cast<std::size_t>(teleport::teleport_state(plus, rng).transcript.outcome.index())];
    bool freq_ok = true;
    std::string freqs;
    for (int c : counts) {
        const double f = c / 10000.0;
        freq_ok &= std::abs(f - 0.25) <= 0.02;
        freqs += fmt("%.4f ", f);
    }
    const double secs = seconds_since(t0);
    return {min_f >= 1 - 1e-9 && freq_ok && secs < 10,
            "min fidelity " + fmt("%.15f", min_f) + ", Bell frequencies " + freqs + "(0.25 +- 0.02), " +
                fmt("%.2f s", secs) + " (< 10 s)"};
}

Outcome dh_correctness() {
    std::size_t cases = 0, agree = 0;
    const kex::DhParams small{23, 5};
    for (std::uint64_t a = 1; a <= 22; ++a) {
        for (std::uint64_t b = 1; b <= 22; ++b) {
            auto r = kex::dh_classic(small, {a}, {b});
            ++cases;
            agree += r.alice_key.take() == r.bob_key.take();
        }
    }
    Rng rng(2002);
    for (int i = 0; i < 1000; ++i) {
        const auto bits = static_cast<unsigned>(48 + rng.below(17));
        const auto p = arith::random_prime(bits, rng);
        const kex::DhParams params{p, 2 + rng.below(p - 3)};
        auto r = kex::dh_classic(params, kex::PartySecret::random(p, rng), kex::PartySecret::random(p, rng));
        ++cases;
        agree += r.alice_key.take() == r.bob_key.take();
    }
    auto ex = kex::dh_classic(small, {6}, {15});
    const auto example = ex.alice_key.take();
    return {agree == cases && example == 2,
            std::to_string(agree) + "/" + std::to_string(cases) + " agree; (g=5, a=6, b=15, p=23) -> " +
                std::to_string(example) + " (expected 2)"};
}

Outcome pqdh_end_to_end() {
    const broadcast::BroadcastSource source{broadcast::seed_from_u64(3003), 1e6, Nanos{0.0}};
    const broadcast::Receiver alice{35'786'000.0, clocksync::Clock{Nanos{1250.0}}, "alice"};
    const broadcast::Receiver bob{36'500'000.0, clocksync::Clock{Nanos{-48'000.5}}, "bob"};
    const std::uint64_t p = 1'000'003;
    Rng rng(3003);
    int agreed = 0, hidden = 0;
    for (int i = 0; i < 100; ++i) {
        const broadcast::KeyWindow w{Nanos{4e8 + i * 1e6}, arith::bit_width_mod(p)};
        auto r = kex::pq_dh(source, alice, bob, w, p, kex::PartySecret::random(p, rng),
                            kex::PartySecret::random(p, rng), {}, rng);
        agreed += r.agreed && r.alice_key.take() == r.bob_key.take();
        bool leak = false;
        for (const auto& m : r.transcript.eve_view()) leak |= m.step == "g" || m.step == "g1" || m.step == "n";
        for (auto v : {r.alice_private.g, r.alice_private.g1, r.alice_private.n}) {
            leak |= r.transcript.eve_sees(u64_to_hex(v));
        }
        hidden += !leak;
    }
    const bool flip_ok = kex::flip_bit(11, 2) == 15;
    return {agreed == 100 && hidden == 100 && flip_ok,
            std::to_string(agreed) + "/100 agree, " + std::to_string(hidden) +
                "/100 eve views free of g, g1, n; flip_bit(11, 2) = " + std::to_string(kex::flip_bit(11, 2))};
}

Outcome parity_densities() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto d6 = ec::density_scan({0, -2}, 100000, 1);
    const auto d3 = ec::density_scan({-3, 1}, 100000, 1);
    const auto d1 = ec::density_scan({-1, 0}, 100000, 1);
    const double secs = seconds_since(t0);
    std::string odd;
    for (auto p : d1.odd_primes) odd += std::to_string(p) + " ";
    const bool ok = std::abs(d6.even_fraction - 2.0 / 3) <= 0.02 && std::abs(d3.even_fraction - 1.0 / 3) <= 0.02 &&
                    d1.even_fraction >= 0.99 && secs < 120;
    return {ok, "d=6 " + fmt("%.4f", d6.even_fraction) + " (2/3 +- 0.02), d=3 " + fmt("%.4f", d3.even_fraction) +
                    " (1/3 +- 0.02), d=1 " + fmt("%.4f", d1.even_fraction) + " (>= 0.99, odd at " + odd +
                    "), " + fmt("%.1f s", secs) + " (< 120 s)"};
}

Outcome png_distribution() {
    const auto out = ec::png_elliptic(5005, 10000);
    std::size_t zeros = 0;
    for (auto b : out.bits) zeros += b == 0;
    const double f = static_cast<double>(zeros) / 10000.0;
    return {std::abs(f - 2.0 / 3) <= 0.03, "zero fraction " + fmt("%.4f", f) + " (2/3 +- 0.03) on curve a=" +
                                               std::to_string(out.curve.a) + " b=" + std::to_string(out.curve.b)};
}

Outcome coin_flipping() {
    Rng rng(6006);
    std::size_t trials = 0, decided = 0, heads = 0, honest_ok = 0;
    std::vector<coinflip::CoinFlipSession> kept;
    for (int i = 0; i < 10000; ++i) {
        auto out = coinflip::run_session(1024, 3, 64, rng);
        honest_ok += out.verification.ok;
        for (const auto& t : out.session.rounds) {
            if (t.bad_prime) continue;
            ++trials;
            if (t.verdict == coinflip::Verdict::Retry) continue;
            ++decided;
            heads += t.verdict == coinflip::Verdict::Heads;
        }
        if (kept.size() < 100) kept.push_back(std::move(out.session));
    }
    // Half the tampered sessions swap in another qualifying curve, half flip a reported parity.
    std::size_t rejected = 0;
    Rng tamper(6007);
    for (std::size_t i = 0; i < kept.size(); ++i) {
        auto s = kept[i];
        ec::Curve announced = s.curve;
        if (i % 2 == 0) {
            while (announced.a == s.curve.a && announced.b == s.curve.b) {
                announced = coinflip::alice_setup(1024, 3, tamper).curve;
            }
        } else {
            s.rounds.back().parity_p ^= 1;
            s.rounds.back().verdict = coinflip::verdict_for(s.rounds.back().parity_p, s.rounds.back().parity_p_prime);
        }
        rejected += !coinflip::bob_verify(s, announced).ok;
    }
    const double rate = static_cast<double>(decided) / static_cast<double>(trials);
    const double h = static_cast<double>(heads) / static_cast<double>(decided);
    return {std::abs(rate - 4.0 / 9) <= 0.02 && std::abs(h - 0.5) <= 0.02 && honest_ok == 10000 && rejected == 100,
            "decision rate " + fmt("%.4f", rate) + " (4/9 +- 0.02), heads " + fmt("%.4f", h) +
                " (0.5 +- 0.02), honest verified " + std::to_string(honest_ok) + "/10000, tampered rejected " +
                std::to_string(rejected) + "/100"};
}

Outcome walk_search() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto rows = qwalk::scaling_sweep({16, 64, 256, 1024});
    const double secs = seconds_since(t0);
    double first = 0.0, lowest = 1e9;
    bool near_global = true;
    std::string table;
    for (const auto& r : rows) {
        const double scaled = r.p_star * std::log2(static_cast<double>(r.n));
        if (r.n == 16) first = scaled;
        lowest = std::min(lowest, scaled);
        near_global &= r.p_star >= 0.9 * r.p_global;
        table += "N=" + std::to_string(r.n) + " T*=" + std::to_string(r.t_star) + " p*log2N=" + fmt("%.3f", scaled) +
                 " p*/p_global=" + fmt("%.3f", r.p_star / r.p_global) + "; ";
    }
    return {lowest > 0 && lowest >= 0.5 * first && near_global && secs < 300,
            table + "min p*log2N " + fmt("%.3f", lowest) + " (>= half of N=16 value), " + fmt("%.2f s", secs) +
                " (< 300 s)"};
}

Outcome bounded_storage_eve() {
    const broadcast::BroadcastSource source{broadcast::seed_from_u64(8008), 1e6, Nanos{0.0}};
    const broadcast::Receiver alice{0.0, {}, "alice"};
    Rng rng(8008);
    const int n = 100000;
    const std::size_t span = 1024;
    bool ok = true;
    std::string detail;
    for (double f : {0.25, 0.5}) {
        int full = 0;
        for (int i = 0; i < n; ++i) {
            const auto view = broadcast::eve_store(0, span, f, broadcast::StorageStrategy::Uniform, rng);
            const auto start = static_cast<std::int64_t>(rng.below(span - 8 + 1));
            const broadcast::KeyWindow w{broadcast::local_time_for_index(source, alice, start), 8};
            full += broadcast::eve_recover(view, source, alice, w).known_bits == 8;
        }
        const double target = std::pow(f, 8);
        const double sigma = std::sqrt(target * (1 - target) / n);
        const double rate = full / static_cast<double>(n);
        ok &= std::abs(rate - target) <= 3 * sigma;

        double known = 0.0;
        for (int i = 0; i < n; ++i) {
            const auto view = broadcast::eve_store(0, span, f, broadcast::StorageStrategy::Uniform, rng);
            const auto start = static_cast<std::int64_t>(rng.below(span - 128 + 1));
            const broadcast::KeyWindow w{broadcast::local_time_for_index(source, alice, start), 128};
            known += static_cast<double>(broadcast::eve_recover(view, source, alice, w).known_bits);
        }
        const double mean = known / n;
        const double mean_sigma = std::sqrt(128 * f * (1 - f) / n);
        ok &= std::abs(mean - 128 * f) <= 3 * mean_sigma;
        detail += "f=" + fmt("%.2f", f) + ": full recovery " + fmt("%.6f", rate) + " vs " + fmt("%.6f", target) +
                  " +- " + fmt("%.6f", 3 * sigma) + ", mean known " + fmt("%.3f", mean) + " vs " +
                  fmt("%.1f", 128 * f) + " +- " + fmt("%.3f", 3 * mean_sigma) + "; ";
    }
    return {ok, detail};
}

Outcome clock_sync() {
    const Nanos t_max{1.6384e6};
    Rng rng(9009);
    int within = 0;
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double delta = (rng.uniform01() - 0.5) * t_max.count() / 2.0;
        auto trial = rng.fork(static_cast<std::uint64_t>(i));
        const auto r = clocksync::tqh_sync(Nanos{delta}, 14, t_max, 100, trial);
        const double err = std::abs(r.delta_estimate.count() - delta);
        within += err <= 100.0;
        worst = std::max(worst, err);
    }
    return {within >= 990, std::to_string(within) + "/1000 within 100 ns (>= 990), worst " + fmt("%.1f ns", worst)};
}

Outcome reproducibility() {
    const std::vector<std::pair<std::string, config::KeyValues>> runs{
        {"teleport-demo", {{"trials", "200"}}},
        {"clocksync", {{"trials", "50"}, {"delta_ns", "random"}}},
        {"dh", {{"trials", "20"}}},
        {"pqdh", {{"sessions", "10"}}},
        {"private", {{"sessions", "10"}}},
        {"coinflip", {{"sessions", "50"}}},
        {"density", {{"a", "0"}, {"b", "-2"}, {"x", "20000"}}},
        {"prng", {{"bits", "2000"}}},
        {"prng-density", {{"a", "-3"}, {"b", "1"}, {"x", "10000"}, {"bits", "500"}}},
        {"qwalk-search", {{"runs", "100"}, {"n", "64"}, {"t", "10"}}},
        {"qwalk-sweep", {{"sizes", "16,64,256"}}},
        {"eve-bounded-storage", {{"trials", "2000"}}},
        {"eve-qwalk", {{"depth", "6"}, {"trials", "50"}}},
    };
    std::size_t identical = 0;
    std::string differing;
    for (auto [name, kv] : runs) {
        kv["master_seed"] = "10010";
        const auto a = scenario::run(name, kv).text;
        const auto b = scenario::run(name, kv).text;
        kv["workers"] = "4";
        const auto c = scenario::run(name, kv).text;
        if (a == b && a == c) {
            ++identical;
        } else {
            differing += name + " ";
        }
    }
    return {identical == runs.size() && runs.size() == scenario::scenarios().size(),
            std::to_string(identical) + "/" + std::to_string(runs.size()) +
                " scenarios byte-identical across two runs and 1 vs 4 workers" +
                (differing.empty() ? "" : "; differing: " + differing)};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"1 teleportation fidelity", teleport_fidelity},
        {"2 diffie-hellman correctness", dh_correctness},
        {"3 broadcast/teleport DH end to end", pqdh_end_to_end},
        {"4 parity densities", parity_densities},
        {"5 elliptic PRNG distribution", png_distribution},
        {"6 coin flipping", coin_flipping},
        {"7 quantum walk search", walk_search},
        {"8 bounded-storage eavesdropper", bounded_storage_eve},
        {"9 clock sync", clock_sync},
        {"10 reproducibility", reproducibility},
    };
    int failures = 0;
    for (const auto& [name, fn] : criteria) {
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failures += !o.pass;
        std::printf("%s criterion %s: %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
