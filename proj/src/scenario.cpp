#include "qlab/scenario.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <thread>

#include "qlab/bits.hpp"
#include "qlab/broadcast.hpp"
#include "qlab/clocksync.hpp"
#include "qlab/coinflip.hpp"
#include "qlab/ecurve.hpp"
#include "qlab/errors.hpp"
#include "qlab/keyexchange.hpp"
#include "qlab/qwalk.hpp"
#include "qlab/rng.hpp"
#include "qlab/teleport.hpp"

namespace qlab::scenario {

using clocksync::Nanos;
using config::Param;
using config::Settings;

namespace {

std::string num(double v, int digits = 6) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

// Report under construction: parameters, per-trial sections, statistics and
// verdicts, in that order.
class Report {
public:
    Report(const std::string& name, const Settings& s) { text_ = "scenario " + name + "\n[parameters]\n" + s.echo(); }

    void section(const std::string& title) { text_ += "[" + title + "]\n"; }
    void line(const std::string& l) { text_ += l + "\n"; }
    void raw(const std::string& block) { text_ += block; }
    void stat(const std::string& key, const std::string& value) { stats_ += key + " = " + value + "\n"; }

    // Gating verdicts decide the exit code; checks are informational.
    void verdict(const std::string& name, bool pass, const std::string& detail) {
        verdicts_ += std::string(pass ? "PASS " : "FAIL ") + name + ": " + detail + "\n";
        failed_ |= !pass;
    }
    void check(const std::string& name, bool pass, const std::string& detail) {
        verdicts_ += std::string(pass ? "CHECK-OK " : "CHECK-OUTSIDE ") + name + ": " + detail + "\n";
    }

    RunReport finish() {
        RunReport r;
        r.text = text_ + "[statistics]\n" + stats_ + "[verdicts]\n" + verdicts_;
        r.exit_code = failed_ ? kExitProtocolFailure : kExitOk;
        return r;
    }

private:
    std::string text_;
    std::string stats_;
    std::string verdicts_;
    bool failed_{false};
};

template <class R>
std::vector<R> run_trials(std::size_t n, std::size_t workers, std::uint64_t master,
                          const std::function<R(std::size_t, Rng&)>& body) {
    std::vector<R> out(n);
    workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(n, 1));
    std::vector<std::exception_ptr> errors(workers);
    {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                try {
                    for (std::size_t i = w; i < n; i += workers) {
                        Rng rng(derive_seed(master, i));
                        out[i] = body(i, rng);
                    }
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return out;
}

std::size_t workers_of(const Settings& s) {
    const auto w = s.u64("workers");
    if (w == 0 || w > 256) throw ConfigError("'workers' must lie in [1, 256]");
    return static_cast<std::size_t>(w);
}

std::string key_line(const std::string& who, const std::string& hex) {
    return "key " + who + " = " + hex + " (vanished)";
}

// --- geometry shared by the broadcast protocols ---

const std::vector<Param> kGeometry{
    {"bitrate", "1e6", "broadcast bits per second"},
    {"broadcast_seed", "1", "integer, or 64 hex digits used as the stream key"},
    {"alice_distance_m", "35786000", "satellite to Alice"},
    {"alice_offset_ns", "1250", "Alice's clock minus global time"},
    {"bob_distance_m", "36500000", "satellite to Bob"},
    {"bob_offset_ns", "-48000.5", "Bob's clock minus global time"},
    {"start_ns", "5e8", "announced start on Alice's clock for session 0"},
    {"session_spacing_ns", "1e6", "start shift between sessions"},
    {"sync_bits", "14", "clock sync levels"},
    {"sync_t_max_ns", "1638400", "clock sync coarse period"},
    {"sync_shots", "100", "shots per sync level"},
};

std::vector<Param> with_geometry(std::vector<Param> extra) {
    extra.insert(extra.begin(), kGeometry.begin(), kGeometry.end());
    return extra;
}

struct Geometry {
    broadcast::BroadcastSource source;
    broadcast::Receiver alice;
    broadcast::Receiver bob;
    Nanos start;
    Nanos spacing;
    kex::SyncSettings sync;
};

Geometry geometry(const Settings& s) {
    Geometry g;
    const auto& seed = s.text("broadcast_seed");
    g.source.seed = seed.size() == 64 ? broadcast::seed_from_hex(seed)
                                      : broadcast::seed_from_u64(config::to_u64(seed, "broadcast_seed"));
    g.source.bitrate = s.real("bitrate");
    if (!(g.source.bitrate > 0)) throw ConfigError("'bitrate' must be positive");
    g.alice = {s.real("alice_distance_m"), clocksync::Clock{Nanos{s.real("alice_offset_ns")}}, "alice"};
    g.bob = {s.real("bob_distance_m"), clocksync::Clock{Nanos{s.real("bob_offset_ns")}}, "bob"};
    g.start = Nanos{s.real("start_ns")};
    g.spacing = Nanos{s.real("session_spacing_ns")};
    g.sync = {s.u64("sync_bits"), Nanos{s.real("sync_t_max_ns")}, s.u64("sync_shots")};
    return g;
}

// --- scenarios ---

RunReport teleport_demo(const Settings& s) {
    Report rep("teleport-demo", s);
    const auto trials = s.u64("trials");
    struct Row {
        teleport::BellOutcome outcome;
        double fidelity{0.0};
    };
    const auto rows = run_trials<Row>(trials, workers_of(s), s.u64("master_seed"), [](std::size_t, Rng& rng) {
        // Haar-random input state.
        const double theta = std::acos(1.0 - 2.0 * rng.uniform01());
        const double phi = 2.0 * std::numbers::pi * rng.uniform01();
        const auto input = qstate::StateVector::from_amplitudes(
            {std::cos(theta / 2), std::polar(std::sin(theta / 2), phi)});
        const auto r = teleport::teleport_state(input, rng);
        return Row{r.transcript.outcome, r.transcript.fidelity};
    });
    rep.section("trials");
    std::array<std::size_t, 4> counts{};
    double min_f = 1.0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        rep.line(std::to_string(i) + "\tbell=" + std::to_string(r.outcome.bit_z) + std::to_string(r.outcome.bit_x) +
                 "\tfidelity=" + num(r.fidelity, 12));
        ++counts[static_cast<std::size_t>(r.outcome.index())];
        min_f = std::min(min_f, r.fidelity);
    }
    const char* labels[] = {"00", "01", "10", "11"};
    for (std::size_t k = 0; k < 4; ++k) {
        rep.stat(std::string("outcome_") + labels[k] + "_fraction",
                 num(trials ? static_cast<double>(counts[k]) / static_cast<double>(trials) : 0.0));
    }
    rep.stat("min_fidelity", num(min_f, 12));
    rep.verdict("fidelity", min_f >= 1.0 - 1e-9, "min fidelity >= 1 - 1e-9");
    return rep.finish();
}

RunReport clocksync_run(const Settings& s) {
    Report rep("clocksync", s);
    const auto trials = s.u64("trials");
    const auto n_bits = s.u64("n_bits");
    const Nanos t_max{s.real("t_max_ns")};
    const auto shots = s.u64("shots");
    const bool random_delta = s.text("delta_ns") == "random";
    const double fixed_delta = random_delta ? 0.0 : s.real("delta_ns");
    const double tolerance = s.real("tolerance_ns");
    struct Row {
        double delta{0.0};
        clocksync::SyncResult result;
    };
    const auto rows = run_trials<Row>(trials, workers_of(s), s.u64("master_seed"), [&](std::size_t, Rng& rng) {
        const double delta = random_delta ? (rng.uniform01() - 0.5) * t_max.count() / 2.0 : fixed_delta;
        return Row{delta, clocksync::tqh_sync(Nanos{delta}, n_bits, t_max, shots, rng)};
    });
    rep.section("trials");
    std::size_t within = 0;
    double worst = 0.0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const double err = rows[i].result.delta_estimate.count() - rows[i].delta;
        within += std::abs(err) <= tolerance;
        worst = std::max(worst, std::abs(err));
        rep.line(std::to_string(i) + "\tdelta_ns=" + num(rows[i].delta, 3) +
                 "\testimate_ns=" + num(rows[i].result.delta_estimate.count(), 3) + "\terror_ns=" + num(err, 3) +
                 "\tqubits=" + std::to_string(rows[i].result.qubits_used));
    }
    const double frac = trials ? static_cast<double>(within) / static_cast<double>(trials) : 0.0;
    rep.stat("resolution_ns", num(clocksync::resolution(t_max, n_bits).count(), 3));
    rep.stat("within_tolerance_fraction", num(frac));
    rep.stat("max_abs_error_ns", num(worst, 3));
    rep.verdict("sync", frac >= s.real("min_fraction"),
                "fraction within " + num(tolerance, 1) + " ns >= " + s.text("min_fraction"));
    return rep.finish();
}

RunReport dh_run(const Settings& s) {
    Report rep("dh", s);
    const kex::DhParams params{s.u64("p"), s.u64("g")};
    params.validate();
    const auto trials = s.u64("trials");
    auto secret = [&](const std::string& key, Rng& rng) {
        if (s.text(key) == "random") return kex::PartySecret::random(params.p, rng);
        const auto e = s.u64(key);
        if (e < 1 || e > params.p - 1) throw ConfigError("'" + key + "' must lie in [1, p-1]");
        return kex::PartySecret{e};
    };
    struct Row {
        std::string transcript;
        std::uint64_t ka{0}, kb{0};
    };
    const auto rows = run_trials<Row>(trials, workers_of(s), s.u64("master_seed"), [&](std::size_t, Rng& rng) {
        const auto a = secret("a", rng);
        const auto b = secret("b", rng);
        auto r = kex::dh_classic(params, a, b);
        Row row{r.transcript.serialize(), r.alice_key.take(), r.bob_key.take()};
        return row;
    });
    std::size_t agreed = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        rep.section("session " + std::to_string(i));
        rep.raw(rows[i].transcript);
        rep.line(key_line("alice", u64_to_hex(rows[i].ka)));
        rep.line(key_line("bob", u64_to_hex(rows[i].kb)));
        agreed += rows[i].ka == rows[i].kb;
    }
    rep.stat("sessions", std::to_string(trials));
    rep.stat("agreed", std::to_string(agreed));
    rep.verdict("agreement", agreed == trials, "every session derived equal keys");
    return rep.finish();
}

RunReport pqdh_run(const Settings& s) {
    Report rep("pqdh", s);
    const auto g = geometry(s);
    const auto p = s.u64("p");
    if (!arith::is_prime(p) || p < 5) throw ConfigError("'p' must be a prime >= 5");
    const auto width = arith::bit_width_mod(p);
    const auto sessions = s.u64("sessions");
    struct Row {
        std::string transcript;
        std::uint64_t ka{0}, kb{0};
        bool agreed{false};
        std::size_t retries{0};
        double residual{0.0};
    };
    const auto rows = run_trials<Row>(sessions, workers_of(s), s.u64("master_seed"), [&](std::size_t i, Rng& rng) {
        const auto a = kex::PartySecret::random(p, rng);
        const auto b = kex::PartySecret::random(p, rng);
        const broadcast::KeyWindow w{g.start + g.spacing * static_cast<double>(i), width};
        auto r = kex::pq_dh(g.source, g.alice, g.bob, w, p, a, b, g.sync, rng);
        return Row{r.transcript.serialize(), r.alice_key.take(), r.bob_key.take(), r.agreed, r.retries,
                   r.sync_residual.count()};
    });
    std::size_t agreed = 0, retries = 0;
    double worst = 0.0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        rep.section("session " + std::to_string(i));
        rep.raw(rows[i].transcript);
        rep.line(key_line("alice", u64_to_hex(rows[i].ka)));
        rep.line(key_line("bob", u64_to_hex(rows[i].kb)));
        agreed += rows[i].agreed;
        retries += rows[i].retries;
        worst = std::max(worst, std::abs(rows[i].residual));
    }
    rep.stat("sessions", std::to_string(sessions));
    rep.stat("agreed", std::to_string(agreed));
    rep.stat("retries", std::to_string(retries));
    rep.stat("max_sync_residual_ns", num(worst, 3));
    rep.verdict("agreement", agreed == sessions, "every session derived equal keys");
    return rep.finish();
}

RunReport private_run(const Settings& s) {
    Report rep("private", s);
    const auto g = geometry(s);
    const kex::SlotSchedule schedule{Nanos{0.0}, s.u64("slot_bits"), s.u64("slot_count")};
    const auto key_length = s.u64("key_length");
    const auto sessions = s.u64("sessions");
    struct Row {
        std::string transcript;
        Bits ka, kb;
        bool agreed{false};
    };
    const auto rows = run_trials<Row>(sessions, workers_of(s), s.u64("master_seed"), [&](std::size_t i, Rng& rng) {
        auto sched = schedule;
        sched.origin = g.start + g.spacing * static_cast<double>(i);
        auto r = kex::private_exchange(g.source, g.alice, g.bob, sched, key_length, g.sync, rng);
        return Row{r.transcript.serialize(), r.alice_key.take(), r.bob_key.take(), r.agreed};
    });
    std::size_t agreed = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        rep.section("session " + std::to_string(i));
        rep.raw(rows[i].transcript);
        rep.line(key_line("alice", bits_to_hex(rows[i].ka)));
        rep.line(key_line("bob", bits_to_hex(rows[i].kb)));
        agreed += rows[i].agreed;
    }
    rep.stat("sessions", std::to_string(sessions));
    rep.stat("agreed", std::to_string(agreed));
    rep.verdict("agreement", agreed == sessions, "every session derived equal keys");
    return rep.finish();
}

RunReport coinflip_run(const Settings& s) {
    Report rep("coinflip", s);
    const auto B = static_cast<std::int64_t>(s.u64("b"));
    const auto k = static_cast<unsigned>(s.u64("k"));
    const auto sessions = s.u64("sessions");
    const auto max_rounds = s.u64("max_rounds");
    const auto factor = s.u64("challenge_factor");
    const bool show = s.u64("transcripts") != 0;
    struct Row {
        std::string transcript;
        coinflip::Verdict verdict{coinflip::Verdict::Undecided};
        std::vector<coinflip::Trial> rounds;
        bool verified{false};
        std::string reason;
    };
    const auto rows = run_trials<Row>(sessions, workers_of(s), s.u64("master_seed"), [&](std::size_t, Rng& rng) {
        auto out = coinflip::run_session(B, k, max_rounds, rng, factor);
        return Row{out.transcript.serialize(), out.verdict, out.session.rounds, out.verification.ok,
                   out.verification.reason};
    });
    std::size_t trials = 0, bad = 0, decided = 0, heads = 0, tails = 0, undecided = 0, verified = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        if (show) {
            rep.section("session " + std::to_string(i));
            rep.raw(r.transcript);
        }
        for (const auto& t : r.rounds) {
            if (t.bad_prime) {
                ++bad;
                continue;
            }
            ++trials;
            decided += t.verdict != coinflip::Verdict::Retry;
        }
        heads += r.verdict == coinflip::Verdict::Heads;
        tails += r.verdict == coinflip::Verdict::Tails;
        undecided += r.verdict == coinflip::Verdict::Undecided;
        verified += r.verified;
    }
    const double rate = trials ? static_cast<double>(decided) / static_cast<double>(trials) : 0.0;
    const double heads_frac = heads + tails ? static_cast<double>(heads) / static_cast<double>(heads + tails) : 0.0;
    rep.stat("m", std::to_string(coinflip::commitment_length(B, k)));
    rep.stat("sessions", std::to_string(sessions));
    rep.stat("heads", std::to_string(heads));
    rep.stat("tails", std::to_string(tails));
    rep.stat("undecided", std::to_string(undecided));
    rep.stat("trials_good_primes", std::to_string(trials));
    rep.stat("trials_bad_prime", std::to_string(bad));
    rep.stat("decision_rate", num(rate));
    rep.stat("heads_fraction", num(heads_frac));
    rep.check("decision_rate", std::abs(rate - 4.0 / 9.0) <= 0.02, "within 4/9 +- 0.02");
    rep.check("heads_fraction", std::abs(heads_frac - 0.5) <= 0.02, "within 0.5 +- 0.02");
    rep.verdict("verify", verified == sessions, std::to_string(verified) + " of " + std::to_string(sessions) +
                                                    " sessions verified");
    return rep.finish();
}

ec::Curve curve_of(const Settings& s) {
    return {s.i64("a"), s.i64("b")};
}

void density_section(Report& rep, const Settings& s) {
    const auto curve = curve_of(s);
    const auto x = s.u64("x");
    const auto d = ec::cubic_degree(curve.a, curve.b);
    const auto r = ec::density_scan(curve, x, static_cast<unsigned>(workers_of(s)));
    rep.section("density");
    rep.line("curve = y^2 = x^3 + " + std::to_string(curve.a) + "x + " + std::to_string(curve.b));
    rep.line("splitting_degree = " + std::to_string(d.d));
    rep.line("bound = " + std::to_string(r.bound));
    rep.line("primes_scanned = " + std::to_string(r.primes_scanned));
    rep.line("even_count = " + std::to_string(r.even_count));
    rep.line("even_fraction = " + num(r.even_fraction));
    std::string bad;
    for (auto p : r.excluded_bad_primes) bad += (bad.empty() ? "" : ",") + std::to_string(p);
    rep.line("excluded_bad_primes = " + bad);
    rep.line("odd_count = " + std::to_string(r.odd_count));
    std::string odd;
    for (auto p : r.odd_primes) odd += (odd.empty() ? "" : ",") + std::to_string(p);
    rep.line("odd_primes = " + odd);
    rep.stat("even_fraction", num(r.even_fraction));
}

void prng_section(Report& rep, const Settings& s) {
    const auto out = ec::png_elliptic(s.u64("seed"), s.u64("bits"));
    std::size_t zeros = 0;
    for (auto b : out.bits) zeros += b == 0;
    const double frac = out.bits.empty() ? 0.0 : static_cast<double>(zeros) / static_cast<double>(out.bits.size());
    rep.section("prng");
    rep.line("curve = y^2 = x^3 + " + std::to_string(out.curve.a) + "x + " + std::to_string(out.curve.b));
    rep.line("curves_tried = " + std::to_string(out.curves_tried));
    rep.line("bits_hex = " + bits_to_hex(out.bits));
    rep.stat("zero_fraction", num(frac));
    rep.check("zero_fraction", std::abs(frac - 2.0 / 3.0) <= 0.03, "within 2/3 +- 0.03");
}

RunReport density_run(const Settings& s) {
    Report rep("density", s);
    density_section(rep, s);
    return rep.finish();
}

RunReport prng_run(const Settings& s) {
    Report rep("prng", s);
    prng_section(rep, s);
    return rep.finish();
}

RunReport prng_density_run(const Settings& s) {
    Report rep("prng-density", s);
    density_section(rep, s);
    prng_section(rep, s);
    return rep.finish();
}

qwalk::Graph graph_of(const Settings& s) {
    const auto& kind = s.text("graph");
    if (kind == "torus") return qwalk::Graph::torus(s.u64("n"));
    if (kind == "cycle") return qwalk::Graph::cycle(s.u64("n"));
    if (kind == "tree") return qwalk::Graph::binary_tree(s.u64("depth"));
    throw ConfigError("'graph' must be torus, cycle or tree");
}

RunReport qwalk_search_run(const Settings& s) {
    Report rep("qwalk-search", s);
    auto g = graph_of(s);
    for (auto v : s.u64_list("marked")) {
        if (v >= g.size()) throw ConfigError("marked vertex " + std::to_string(v) + " is outside the graph");
        g.mark(v);
    }
    const auto T = s.u64("t");
    const auto runs = s.u64("runs");
    const auto rows = run_trials<qwalk::SearchResult>(runs, workers_of(s), s.u64("master_seed"),
                                                      [&](std::size_t, Rng& rng) { return qwalk::search(g, T, rng); });
    rep.section("runs");
    std::size_t hits = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        rep.line(std::to_string(i) + "\tvertex=" + std::to_string(rows[i].measured_vertex) +
                 "\tsuccess=" + (rows[i].success ? "1" : "0"));
        hits += rows[i].success;
    }
    Rng probe(s.u64("master_seed"));
    const double exact = qwalk::search(g, T, probe).exact_success_probability;
    rep.stat("vertices", std::to_string(g.size()));
    rep.stat("degree", std::to_string(g.degree()));
    rep.stat("exact_success_probability", num(exact, 12));
    rep.stat("sampled_success_rate", num(runs ? static_cast<double>(hits) / static_cast<double>(runs) : 0.0));
    return rep.finish();
}

RunReport qwalk_sweep_run(const Settings& s) {
    Report rep("qwalk-sweep", s);
    std::vector<std::size_t> sizes;
    for (auto n : s.u64_list("sizes")) sizes.push_back(n);
    const auto rows = qwalk::scaling_sweep(sizes, workers_of(s));
    rep.section("sweep");
    rep.line("N\tT_bound\tT_star\tp_star\tp_star_log2N\tT_global\tp_global");
    for (const auto& r : rows) {
        rep.line(std::to_string(r.n) + "\t" + std::to_string(r.t_bound) + "\t" + std::to_string(r.t_star) + "\t" +
                 num(r.p_star, 12) + "\t" + num(r.p_star * std::log2(static_cast<double>(r.n)), 6) + "\t" +
                 std::to_string(r.t_global) + "\t" + num(r.p_global, 12));
    }
    return rep.finish();
}

RunReport eve_storage_run(const Settings& s) {
    Report rep("eve-bounded-storage", s);
    const auto L = s.u64("key_length");
    const double f = s.real("fraction");
    const auto span = s.u64("span");
    const auto trials = s.u64("trials");
    const auto& strategy_name = s.text("strategy");
    broadcast::StorageStrategy strategy;
    if (strategy_name == "uniform") {
        strategy = broadcast::StorageStrategy::Uniform;
    } else if (strategy_name == "prefix") {
        strategy = broadcast::StorageStrategy::Prefix;
    } else {
        throw ConfigError("'strategy' must be uniform or prefix");
    }
    if (L == 0 || L > span) throw ConfigError("'key_length' must lie in [1, span]");
    broadcast::BroadcastSource source;
    source.seed = broadcast::seed_from_u64(s.u64("master_seed"));
    const broadcast::Receiver alice{0.0, {}, "alice"};
    struct Row {
        std::size_t known{0};
    };
    const auto rows = run_trials<Row>(trials, workers_of(s), s.u64("master_seed"), [&](std::size_t, Rng& rng) {
        // Eve commits to her storage before the window is chosen.
        const auto view = broadcast::eve_store(0, span, f, strategy, rng);
        const auto start = static_cast<std::int64_t>(rng.below(span - L + 1));
        const broadcast::KeyWindow w{broadcast::local_time_for_index(source, alice, start), L};
        return Row{broadcast::eve_recover(view, source, alice, w).known_bits};
    });
    std::size_t full = 0;
    double known = 0.0;
    for (const auto& r : rows) {
        full += r.known == L;
        known += static_cast<double>(r.known);
    }
    const double n = static_cast<double>(std::max<std::uint64_t>(trials, 1));
    const double rate = static_cast<double>(full) / n;
    const double target = std::pow(f, static_cast<double>(L));
    const double sigma = std::sqrt(target * (1 - target) / n);
    const double mean = known / n;
    const double mean_target = static_cast<double>(L) * f;
    // Known bits per trial are hypergeometric; its variance bounds the binomial one.
    const double mean_sigma = std::sqrt(static_cast<double>(L) * f * (1 - f) / n);
    rep.stat("full_recovery_rate", num(rate, 8));
    rep.stat("full_recovery_expected", num(target, 8));
    rep.stat("full_recovery_sigma", num(sigma, 8));
    rep.stat("mean_known_bits", num(mean, 4));
    rep.stat("mean_known_expected", num(mean_target, 4));
    rep.check("full_recovery", std::abs(rate - target) <= 3 * sigma + 1e-12, "within f^L +- 3 sigma");
    rep.check("mean_known_bits", std::abs(mean - mean_target) <= 3 * mean_sigma + 1e-12, "within L f +- 3 sigma");
    return rep.finish();
}

RunReport eve_qwalk_run(const Settings& s) {
    Report rep("eve-qwalk", s);
    Rng rng(derive_seed(s.u64("master_seed"), 0));
    const auto r = qwalk::eve_qwalk(s.u64("depth"), s.u64("trials"), rng);
    rep.stat("keyspace", std::to_string(r.keyspace));
    rep.stat("t_star", std::to_string(r.t_star));
    rep.stat("p_star", num(r.p_star, 12));
    rep.stat("gap_to_certainty", num(1.0 - r.p_star, 12));
    rep.stat("trials", std::to_string(r.trials));
    rep.stat("successes", std::to_string(r.successes));
    return rep.finish();
}

using Runner = RunReport (*)(const Settings&);

struct Entry {
    ScenarioInfo info;
    Runner runner;
};

const std::vector<Entry>& entries() {
    static const std::vector<Entry> list{
        {{"teleport-demo", "teleport Haar-random qubits and report fidelity and Bell statistics",
          {{"trials", "1000", "states to teleport"}}},
         teleport_demo},
        {{"clocksync", "estimate a clock offset with ticking qubits",
          {{"delta_ns", "12345.678", "true offset, or 'random' for uniform in +-t_max/4"},
           {"n_bits", "14", "levels"},
           {"t_max_ns", "1638400", "coarse period"},
           {"shots", "100", "shots per level"},
           {"trials", "1", "independent runs"},
           {"tolerance_ns", "100", "acceptable |error|"},
           {"min_fraction", "0.99", "required fraction within tolerance"}}},
         clocksync_run},
        {{"dh", "classic Diffie-Hellman",
          {{"p", "23", "prime modulus"},
           {"g", "5", "base"},
           {"a", "random", "Alice's exponent or 'random'"},
           {"b", "random", "Bob's exponent or 'random'"},
           {"trials", "1", "sessions"}}},
         dh_run},
        {{"pqdh", "Diffie-Hellman over a broadcast base with a teleported bit flip",
          with_geometry({{"p", "1000003", "prime modulus"}, {"sessions", "1", "sessions"}})},
         pqdh_run},
        {{"private", "key window chosen by a teleported slot",
          with_geometry({{"key_length", "128", "key bits"},
                         {"slot_bits", "1024", "stream bits between slots"},
                         {"slot_count", "256", "number of slots"},
                         {"sessions", "1", "sessions"}})},
         private_run},
        {{"coinflip", "coin flipping by telephone with elliptic-curve parities",
          {{"b", "1024", "discriminant window base B"},
           {"k", "3", "exponent in m = floor((log2 B)^k)"},
           {"sessions", "10", "sessions"},
           {"max_rounds", "64", "challenge rounds per session"},
           {"challenge_factor", "10", "challenge primes drawn from (m, factor*m]"},
           {"transcripts", "1", "print per-session transcripts (0 or 1)"}}},
         coinflip_run},
        {{"density", "fraction of primes with even c_E(p)",
          {{"a", std::nullopt, "curve coefficient a"}, {"b", std::nullopt, "curve coefficient b"},
           {"x", "100000", "prime bound"}}},
         density_run},
        {{"prng", "elliptic-curve parity bit generator",
          {{"seed", "1", "generator seed"}, {"bits", "10000", "output bits"}}},
         prng_run},
        {{"prng-density", "density scan and parity generator together",
          {{"a", std::nullopt, "curve coefficient a"},
           {"b", std::nullopt, "curve coefficient b"},
           {"x", "100000", "prime bound"},
           {"seed", "1", "generator seed"},
           {"bits", "10000", "output bits"}}},
         prng_density_run},
        {{"qwalk-search", "marked-vertex search with a coined walk",
          {{"graph", "torus", "torus, cycle or tree"},
           {"n", "16", "vertices (torus, cycle)"},
           {"depth", "3", "tree depth"},
           {"t", "4", "walk steps"},
           {"marked", "0", "comma-separated marked vertices"},
           {"runs", "1", "sampled measurements"}}},
         qwalk_search_run},
        {{"qwalk-sweep", "T* and p* over torus sizes", {{"sizes", "16,64,256", "comma-separated N"}}},
         qwalk_sweep_run},
        {{"eve-bounded-storage", "eavesdropper storing a fraction of the broadcast",
          {{"key_length", "8", "window bits"},
           {"fraction", "0.25", "stored fraction"},
           {"span", "1024", "broadcast bits Eve observes"},
           {"trials", "10000", "trials"},
           {"strategy", "uniform", "uniform or prefix"}}},
         eve_storage_run},
        {{"eve-qwalk", "eavesdropper searching the key space with a walk",
          {{"depth", "8", "key bits (even)"}, {"trials", "400", "attempts"}}},
         eve_qwalk_run},
    };
    return list;
}

}  // namespace

const std::vector<ScenarioInfo>& scenarios() {
    static const std::vector<ScenarioInfo> infos = [] {
        std::vector<ScenarioInfo> out;
        for (const auto& e : entries()) out.push_back(e.info);
        return out;
    }();
    return infos;
}

const ScenarioInfo& find(const std::string& name) {
    for (const auto& e : entries()) {
        if (e.info.name == name) return e.info;
    }
    throw ConfigError("unknown scenario '" + name + "'");
}

RunReport run(const std::string& name, const config::KeyValues& values) {
    for (const auto& e : entries()) {
        if (e.info.name != name) continue;
        const Settings settings(e.info.params, values);
        try {
            return e.runner(settings);
        } catch (const DomainError& err) {
            throw ConfigError(std::string("invalid setting: ") + err.what());
        }
    }
    throw ConfigError("unknown scenario '" + name + "'");
}

}  // namespace qlab::scenario
