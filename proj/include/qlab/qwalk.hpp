#pragma once

// Coined discrete quantum walk search over cycles, tori and binary trees,
// plus the tree-walk key derivation and the walk-based agreement protocol.
//
// State layout: amplitude of (coin c, vertex v) lives at v * degree + c.
// One step applies the Grover coin at unmarked vertices and -I at marked
// ones, then the flip-flop shift (c, v) -> (reverse(v, c), neighbor(v, c)).

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "qlab/bits.hpp"
#include "qlab/broadcast.hpp"
#include "qlab/keyexchange.hpp"
#include "qlab/rng.hpp"
#include "qlab/transcript.hpp"

namespace qlab::qwalk {

using Amplitude = std::complex<double>;

enum class GraphKind { Cycle, Torus, BinaryTree };

const char* to_string(GraphKind kind) noexcept;

class Graph {
public:
    /// Ring of n >= 3 vertices; coin 0 steps to v+1, coin 1 to v-1.
    static Graph cycle(std::size_t n);
    /// side x side wrap-around grid, n = side^2 with side >= 2; coins
    /// right, left, down, up.
    static Graph torus(std::size_t n);
    /// Complete binary tree of the given depth, heap numbered from the root.
    /// Coins parent, left, right; missing edges (root parent, leaf children)
    /// are self-loops so every vertex has degree 3.
    static Graph binary_tree(std::size_t depth);

    GraphKind kind() const noexcept { return kind_; }
    std::size_t size() const noexcept { return n_; }
    std::size_t degree() const noexcept { return degree_; }
    std::size_t side() const noexcept { return side_; }

    std::size_t neighbor(std::size_t v, std::size_t c) const { return neighbor_[v * degree_ + c]; }
    /// Coin at neighbor(v, c) whose edge leads back to v.
    std::size_t reverse_coin(std::size_t v, std::size_t c) const { return reverse_[v * degree_ + c]; }

    void mark(std::size_t v);
    void clear_marks();
    bool marked(std::size_t v) const { return marked_.at(v) != 0; }
    std::vector<std::size_t> marked_vertices() const;

private:
    Graph(GraphKind kind, std::size_t n, std::size_t degree);
    void link(std::size_t v, std::size_t c, std::size_t w, std::size_t back);

    GraphKind kind_;
    std::size_t n_;
    std::size_t degree_;
    std::size_t side_{0};
    std::vector<std::size_t> neighbor_;
    std::vector<std::size_t> reverse_;
    std::vector<std::uint8_t> marked_;
};

class WalkState {
public:
    WalkState(std::size_t degree, std::size_t n, std::vector<Amplitude> amplitudes);

    /// All amplitude on (coin, vertex).
    static WalkState localized(const Graph& graph, std::size_t vertex, std::size_t coin);

    std::size_t degree() const noexcept { return degree_; }
    std::size_t vertices() const noexcept { return n_; }
    std::span<const Amplitude> amplitudes() const noexcept { return amps_; }
    Amplitude at(std::size_t coin, std::size_t vertex) const { return amps_.at(vertex * degree_ + coin); }

    double norm_squared() const noexcept;
    /// Probability of each vertex when the position register is measured.
    std::vector<double> position_distribution() const;

private:
    friend WalkState step(const WalkState&, const Graph&);
    friend WalkState step_inverse(const WalkState&, const Graph&);

    std::size_t degree_;
    std::size_t n_;
    std::vector<Amplitude> amps_;
};

/// Every (coin, vertex) amplitude equal to 1/sqrt(degree * N).
WalkState uniform_superposition(const Graph& graph);

/// One application of the marked walk. Throws DomainError on a dimension
/// mismatch.
WalkState step(const WalkState& state, const Graph& graph);
WalkState step_inverse(const WalkState& state, const Graph& graph);

struct SearchResult {
    std::size_t measured_vertex{0};
    bool success{false};
    std::size_t steps_T{0};
    double exact_success_probability{0.0};
};

/// T steps from the uniform state, then a sampled position measurement.
/// Throws DomainError when nothing is marked.
SearchResult search(const Graph& graph, std::size_t T, Rng& rng);

/// Exact probability of measuring a marked vertex after T = 0..t_max steps.
std::vector<double> success_curve(const Graph& graph, std::size_t t_max);

struct SweepRow {
    std::size_t n{0};
    std::size_t t_bound{0};  // floor(4 sqrt(N log2 N))
    std::size_t t_star{0};   // argmax over T <= t_bound
    double p_star{0.0};
    std::size_t t_global{0};  // argmax over T <= N
    double p_global{0.0};
};

/// floor(4 sqrt(N log2 N)).
std::size_t step_bound(std::size_t n);

/// Torus sweep with vertex 0 marked, one row per size, in input order.
std::vector<SweepRow> scaling_sweep(const std::vector<std::size_t>& sizes, std::size_t workers = 1);

/// Root-to-leaf path of a depth-first descent: the branch at level i is
/// stream[i] XOR bit i of operator_seed. Throws DomainError when the stream
/// is shorter than depth or depth is 0.
Bits tree_walk_key(std::span<const std::uint8_t> stream, std::uint64_t operator_seed, std::size_t depth);

struct AgreementResult {
    kex::BitKey alice_key;
    kex::BitKey bob_key;
    Transcript transcript;
    bool agreed{false};
    std::uint64_t operator_seed{0};  // private to the two parties
    clocksync::Nanos sync_residual{0.0};
};

/// Sync, public start time, teleported operator seed of `depth` bits, then
/// both parties tree-walk the same broadcast window. bob_skew_bits shifts
/// Bob's window to model a misaligned read.
AgreementResult qwalk_agreement(const broadcast::BroadcastSource& source, const broadcast::Receiver& alice,
                                const broadcast::Receiver& bob, clocksync::Nanos start, std::size_t depth,
                                const kex::SyncSettings& sync, Rng& rng, std::int64_t bob_skew_bits = 0);

struct EveWalkReport {
    std::size_t keyspace{0};  // 2^depth, searched as a torus
    std::size_t t_star{0};
    double p_star{0.0};
    std::size_t trials{0};
    std::size_t successes{0};
};

/// Eve searches the key space laid out on a sqrt(N) x sqrt(N) torus with the
/// true key marked, running T* steps per attempt. depth must be even.
EveWalkReport eve_qwalk(std::size_t depth, std::size_t trials, Rng& rng);

}  // namespace qlab::qwalk
