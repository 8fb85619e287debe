#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace netcp {

using VertexId = std::uint32_t;
using TimeStep = std::int64_t;

/// Unordered vertex pair stored with u < v.
struct Edge {
    VertexId u = 0;
    VertexId v = 0;

    friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// One undirected simple graph at an integer time step. Immutable.
class GraphSnapshot {
public:
    GraphSnapshot() = default;

    /// Normalizes endpoint order, sorts and removes duplicate pairs.
    /// Throws InvalidArgument on self-loops or endpoints >= n.
    GraphSnapshot(TimeStep time, std::size_t n, std::vector<Edge> edges);

    TimeStep time() const noexcept { return time_; }
    std::size_t vertex_count() const noexcept { return n_; }
    std::size_t edge_count() const noexcept { return edges_.size(); }
    std::span<const Edge> edges() const noexcept { return edges_; }
    bool has_edge(VertexId a, VertexId b) const;

    /// Same edges, different time label.
    GraphSnapshot with_time(TimeStep time) const;

    friend bool operator==(const GraphSnapshot&, const GraphSnapshot&) = default;

private:
    TimeStep time_ = 0;
    std::size_t n_ = 0;
    std::vector<Edge> edges_;
};

enum class GapPolicy {
    empty, ///< missing time steps become empty snapshots
    skip,  ///< missing time steps are left out
};

/// Ordered snapshots over one shared vertex space, with external labels.
class NetworkSequence {
public:
    NetworkSequence() = default;

    /// Throws InvalidArgument unless times strictly increase and every
    /// snapshot has labels.size() vertices.
    NetworkSequence(std::vector<GraphSnapshot> snapshots, std::vector<std::string> labels);

    std::size_t size() const noexcept { return snapshots_.size(); }
    bool empty() const noexcept { return snapshots_.empty(); }
    std::size_t vertex_count() const noexcept { return labels_.size(); }
    const GraphSnapshot& operator[](std::size_t i) const { return snapshots_[i]; }
    std::span<const GraphSnapshot> snapshots() const noexcept { return snapshots_; }
    const std::vector<std::string>& labels() const noexcept { return labels_; }

    /// Index of the snapshot with the given time, or size() if absent.
    std::size_t index_of(TimeStep t) const;

    friend bool operator==(const NetworkSequence&, const NetworkSequence&) = default;

private:
    std::vector<GraphSnapshot> snapshots_;
    std::vector<std::string> labels_;
};

/// The w consecutive snapshots ending at tau.
class GraphWindow {
public:
    GraphWindow(TimeStep tau, std::vector<GraphSnapshot> snapshots);

    TimeStep tau() const noexcept { return tau_; }
    std::size_t length() const noexcept { return snapshots_.size(); }
    std::size_t vertex_count() const noexcept { return snapshots_.front().vertex_count(); }
    std::span<const GraphSnapshot> snapshots() const noexcept { return snapshots_; }
    const GraphSnapshot& operator[](std::size_t i) const { return snapshots_[i]; }

private:
    TimeStep tau_;
    std::vector<GraphSnapshot> snapshots_;
};

/// Reads `t<TAB>u<TAB>v` lines. Lines starting with '#' are comments, except
/// the `#@vertex<TAB>label` and `#@time<TAB>t` pragmas written by
/// write_edge_list, which pre-register a vertex or a (possibly empty) time step.
NetworkSequence parse_edge_list(std::istream& in, GapPolicy gaps = GapPolicy::empty);
NetworkSequence parse_edge_list_file(const std::string& path, GapPolicy gaps = GapPolicy::empty);

/// Writes a sequence in the format read by parse_edge_list; the output
/// round-trips exactly, including isolated vertices and empty snapshots.
void write_edge_list(const NetworkSequence& seq, std::ostream& out);

struct TimedEvent {
    double timestamp = 0.0; ///< seconds
    std::string u;
    std::string v;
};

/// Bins timestamped interactions into snapshots of width bin_width seconds,
/// starting at the earliest timestamp. Empty bins become empty snapshots.
NetworkSequence aggregate_events(std::span<const TimedEvent> events, double bin_width);

/// Reads `timestamp<TAB>u<TAB>v` lines (real-valued seconds, '#' comments).
std::vector<TimedEvent> parse_timed_events(std::istream& in);

/// Window of w snapshots ending at time tau. Throws InvalidArgument if w < 2,
/// tau is not a snapshot time, or fewer than w snapshots end at tau.
GraphWindow window_at(const NetworkSequence& seq, TimeStep tau, std::size_t w);

/// Same as window_at but addressed by the index of the last snapshot.
GraphWindow window_ending_at_index(const NetworkSequence& seq, std::size_t last, std::size_t w);

} // namespace netcp
