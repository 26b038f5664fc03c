#include "qlab/qwalk.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "qlab/errors.hpp"
#include "qlab/teleport.hpp"
#include "session.hpp"

namespace qlab::qwalk {

const char* to_string(GraphKind kind) noexcept {
    switch (kind) {
        case GraphKind::Cycle: return "cycle";
        case GraphKind::Torus: return "torus";
        case GraphKind::BinaryTree: return "binary_tree";
    }
    return "?";
}

Graph::Graph(GraphKind kind, std::size_t n, std::size_t degree)
    : kind_(kind), n_(n), degree_(degree), neighbor_(n * degree), reverse_(n * degree), marked_(n, 0) {}

void Graph::link(std::size_t v, std::size_t c, std::size_t w, std::size_t back) {
    neighbor_[v * degree_ + c] = w;
    reverse_[v * degree_ + c] = back;
}

Graph Graph::cycle(std::size_t n) {
    if (n < 3) throw DomainError("cycle needs at least 3 vertices");
    Graph g(GraphKind::Cycle, n, 2);
    for (std::size_t v = 0; v < n; ++v) {
        g.link(v, 0, (v + 1) % n, 1);
        g.link(v, 1, (v + n - 1) % n, 0);
    }
    return g;
}

Graph Graph::torus(std::size_t n) {
    const auto side = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(n))));
    if (side < 2 || side * side != n) throw DomainError("torus size must be a perfect square of side >= 2");
    Graph g(GraphKind::Torus, n, 4);
    g.side_ = side;
    for (std::size_t r = 0; r < side; ++r) {
        for (std::size_t c = 0; c < side; ++c) {
            const std::size_t v = r * side + c;
            g.link(v, 0, r * side + (c + 1) % side, 1);
            g.link(v, 1, r * side + (c + side - 1) % side, 0);
            g.link(v, 2, ((r + 1) % side) * side + c, 3);
            g.link(v, 3, ((r + side - 1) % side) * side + c, 2);
        }
    }
    return g;
}

Graph Graph::binary_tree(std::size_t depth) {
    if (depth < 1 || depth > 20) throw DomainError("tree depth must lie in [1, 20]");
    const std::size_t n = (std::size_t{1} << (depth + 1)) - 1;
    Graph g(GraphKind::BinaryTree, n, 3);
    for (std::size_t v = 0; v < n; ++v) {
        if (v == 0) {
            g.link(v, 0, v, 0);
        } else {
            g.link(v, 0, (v - 1) / 2, v % 2 == 1 ? 1 : 2);
        }
        for (std::size_t side = 1; side <= 2; ++side) {
            const std::size_t child = 2 * v + side;
            if (child < n) {
                g.link(v, side, child, 0);
            } else {
                g.link(v, side, v, side);
            }
        }
    }
    return g;
}

void Graph::mark(std::size_t v) { marked_.at(v) = 1; }

void Graph::clear_marks() { std::fill(marked_.begin(), marked_.end(), 0); }

std::vector<std::size_t> Graph::marked_vertices() const {
    std::vector<std::size_t> out;
    for (std::size_t v = 0; v < n_; ++v) {
        if (marked_[v]) out.push_back(v);
    }
    return out;
}

WalkState::WalkState(std::size_t degree, std::size_t n, std::vector<Amplitude> amplitudes)
    : degree_(degree), n_(n), amps_(std::move(amplitudes)) {
    if (amps_.size() != degree_ * n_) throw DomainError("amplitude count must be degree * N");
}

WalkState WalkState::localized(const Graph& graph, std::size_t vertex, std::size_t coin) {
    if (vertex >= graph.size() || coin >= graph.degree()) throw DomainError("no such coin or vertex");
    std::vector<Amplitude> a(graph.size() * graph.degree());
    a[vertex * graph.degree() + coin] = 1.0;
    return {graph.degree(), graph.size(), std::move(a)};
}

double WalkState::norm_squared() const noexcept {
    double s = 0.0;
    for (const auto& a : amps_) s += std::norm(a);
    return s;
}

std::vector<double> WalkState::position_distribution() const {
    std::vector<double> p(n_, 0.0);
    for (std::size_t v = 0; v < n_; ++v) {
        for (std::size_t c = 0; c < degree_; ++c) p[v] += std::norm(amps_[v * degree_ + c]);
    }
    return p;
}

WalkState uniform_superposition(const Graph& graph) {
    const double a = 1.0 / std::sqrt(static_cast<double>(graph.size() * graph.degree()));
    return {graph.degree(), graph.size(), std::vector<Amplitude>(graph.size() * graph.degree(), a)};
}

namespace {

void check_dims(const WalkState& s, const Graph& g) {
    if (s.degree() != g.degree() || s.vertices() != g.size()) {
        throw DomainError("walk state does not match the graph");
    }
}

void apply_coin(std::vector<Amplitude>& a, const Graph& g) {
    const std::size_t d = g.degree();
    const double scale = 2.0 / static_cast<double>(d);
    for (std::size_t v = 0; v < g.size(); ++v) {
        Amplitude* block = a.data() + v * d;
        if (g.marked(v)) {
            for (std::size_t c = 0; c < d; ++c) block[c] = -block[c];
            continue;
        }
        Amplitude sum = 0.0;
        for (std::size_t c = 0; c < d; ++c) sum += block[c];
        sum *= scale;
        for (std::size_t c = 0; c < d; ++c) block[c] = sum - block[c];
    }
}

// Flip-flop shift; it is its own inverse.
std::vector<Amplitude> apply_shift(const std::vector<Amplitude>& a, const Graph& g) {
    const std::size_t d = g.degree();
    std::vector<Amplitude> out(a.size());
    for (std::size_t v = 0; v < g.size(); ++v) {
        for (std::size_t c = 0; c < d; ++c) {
            out[g.neighbor(v, c) * d + g.reverse_coin(v, c)] = a[v * d + c];
        }
    }
    return out;
}

double marked_probability(const WalkState& s, const Graph& g) {
    double p = 0.0;
    for (auto v : g.marked_vertices()) {
        for (std::size_t c = 0; c < g.degree(); ++c) p += std::norm(s.at(c, v));
    }
    return p;
}

}  // namespace

WalkState step(const WalkState& state, const Graph& graph) {
    check_dims(state, graph);
    auto a = state.amps_;
    apply_coin(a, graph);
    return {state.degree_, state.n_, apply_shift(a, graph)};
}

WalkState step_inverse(const WalkState& state, const Graph& graph) {
    check_dims(state, graph);
    auto a = apply_shift(state.amps_, graph);
    apply_coin(a, graph);
    return {state.degree_, state.n_, std::move(a)};
}

SearchResult search(const Graph& graph, std::size_t T, Rng& rng) {
    if (graph.marked_vertices().empty()) throw DomainError("search needs at least one marked vertex");
    auto s = uniform_superposition(graph);
    for (std::size_t t = 0; t < T; ++t) s = step(s, graph);
    SearchResult r;
    r.steps_T = T;
    r.exact_success_probability = std::clamp(marked_probability(s, graph), 0.0, 1.0);
    const auto dist = s.position_distribution();
    const double u = rng.uniform01() * s.norm_squared();
    double acc = 0.0;
    r.measured_vertex = dist.size() - 1;
    for (std::size_t v = 0; v < dist.size(); ++v) {
        acc += dist[v];
        if (u < acc) {
            r.measured_vertex = v;
            break;
        }
    }
    r.success = graph.marked(r.measured_vertex);
    return r;
}

std::vector<double> success_curve(const Graph& graph, std::size_t t_max) {
    if (graph.marked_vertices().empty()) throw DomainError("search needs at least one marked vertex");
    std::vector<double> out;
    out.reserve(t_max + 1);
    auto s = uniform_superposition(graph);
    out.push_back(marked_probability(s, graph));
    for (std::size_t t = 1; t <= t_max; ++t) {
        s = step(s, graph);
        out.push_back(marked_probability(s, graph));
    }
    return out;
}

std::size_t step_bound(std::size_t n) {
    const double x = static_cast<double>(n);
    return static_cast<std::size_t>(std::floor(4.0 * std::sqrt(x * std::log2(x))));
}

namespace {

SweepRow sweep_one(std::size_t n) {
    auto g = Graph::torus(n);
    g.mark(0);
    SweepRow row;
    row.n = n;
    row.t_bound = step_bound(n);
    const auto curve = success_curve(g, std::max(n, row.t_bound));
    for (std::size_t t = 0; t < curve.size(); ++t) {
        if (t <= row.t_bound && curve[t] > row.p_star) {
            row.p_star = curve[t];
            row.t_star = t;
        }
        if (t <= n && curve[t] > row.p_global) {
            row.p_global = curve[t];
            row.t_global = t;
        }
    }
    return row;
}

}  // namespace

std::vector<SweepRow> scaling_sweep(const std::vector<std::size_t>& sizes, std::size_t workers) {
    std::vector<SweepRow> rows(sizes.size());
    workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(sizes.size(), 1));
    {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (std::size_t i = w; i < sizes.size(); i += workers) rows[i] = sweep_one(sizes[i]);
            });
        }
    }
    return rows;
}

Bits tree_walk_key(std::span<const std::uint8_t> stream, std::uint64_t operator_seed, std::size_t depth) {
    if (depth == 0) throw DomainError("tree depth must be at least 1");
    if (stream.size() < depth) throw DomainError("broadcast stream exhausted before reaching a leaf");
    Bits path;
    path.reserve(depth);
    for (std::size_t i = 0; i < depth; ++i) {
        const std::uint8_t seed_bit = i < 64 ? static_cast<std::uint8_t>((operator_seed >> i) & 1) : 0;
        path.push_back(static_cast<std::uint8_t>((stream[i] & 1) ^ seed_bit));
    }
    return path;
}

AgreementResult qwalk_agreement(const broadcast::BroadcastSource& source, const broadcast::Receiver& alice,
                                const broadcast::Receiver& bob, clocksync::Nanos start, std::size_t depth,
                                const kex::SyncSettings& sync, Rng& rng, std::int64_t bob_skew_bits) {
    if (depth < 1 || depth > 63) throw DomainError("walk depth must lie in [1, 63]");
    AgreementResult out;
    Transcript& t = out.transcript;
    session::SessionClock clock{alice.clock.global(start) - clocksync::Nanos{1e6}};

    // Common clock.
    const auto synced = session::synchronise(alice, bob, sync, t, clock, rng);
    out.sync_residual = synced.residual;

    const std::int64_t index = broadcast::reception_index(source, alice, start);
    const clocksync::Nanos aligned = broadcast::local_time_for_index(source, alice, index);
    t.send("start", alice.label, bob.label, Channel::Public, session::time_payload(aligned), clock.tick());

    // The operator travels by teleportation.
    auto tele_rng = rng.fork(2);
    out.operator_seed = tele_rng.below(std::uint64_t{1} << depth);
    const auto sent = teleport::teleport_index_traced(out.operator_seed, depth, tele_rng);
    t.send("operator", alice.label, bob.label, Channel::Quantum, session::bell_payload(sent.outcomes),
           clock.tick());
    t.send("window", "satellite", "*", Channel::Broadcast, u64_to_hex(depth), clock.tick());

    // Both walk the tree over the same stream window.
    const clocksync::Nanos bob_start =
        broadcast::compensated_start(alice, bob, aligned, synced.estimate) +
        source.bit_period() * static_cast<double>(bob_skew_bits);
    const Bits stream_a = broadcast::extract_key(source, alice, {aligned, depth});
    const Bits stream_b = broadcast::extract_key(source, bob, {bob_start, depth});
    Bits key_a = tree_walk_key(stream_a, out.operator_seed, depth);
    Bits key_b = tree_walk_key(stream_b, sent.value, depth);

    // Compare and retire the keys.
    out.agreed = key_a == key_b;
    if (!out.agreed) t.note("key-mismatch");
    t.note("keys vanish after use");
    out.alice_key = kex::BitKey{std::move(key_a)};
    out.bob_key = kex::BitKey{std::move(key_b)};
    return out;
}

EveWalkReport eve_qwalk(std::size_t depth, std::size_t trials, Rng& rng) {
    if (depth < 2 || depth > 16 || depth % 2 != 0) throw DomainError("eve walk depth must be even in [2, 16]");
    EveWalkReport r;
    r.keyspace = std::size_t{1} << depth;
    r.trials = trials;
    // The torus is vertex transitive, so T* does not depend on which key is marked.
    const auto row = scaling_sweep({r.keyspace}).front();
    r.t_star = row.t_star;
    r.p_star = row.p_star;
    auto g = Graph::torus(r.keyspace);
    for (std::size_t i = 0; i < trials; ++i) {
        const std::size_t key = rng.below(r.keyspace);
        g.clear_marks();
        g.mark(key);
        r.successes += search(g, r.t_star, rng).success;
    }
    return r;
}

}  // namespace qlab::qwalk
