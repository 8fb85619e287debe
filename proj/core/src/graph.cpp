#include "netcp/graph.hpp"

#include "netcp/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <string_view>
#include <unordered_map>

namespace netcp {

GraphSnapshot::GraphSnapshot(TimeStep time, std::size_t n, std::vector<Edge> edges)
    : time_(time), n_(n), edges_(std::move(edges)) {
    for (auto& e : edges_) {
        if (e.u == e.v) {
            throw InvalidArgument("self-loop on vertex " + std::to_string(e.u));
        }
        if (e.u >= n_ || e.v >= n_) {
            throw InvalidArgument("edge endpoint out of range for " + std::to_string(n_) + " vertices");
        }
        if (e.u > e.v) {
            std::swap(e.u, e.v);
        }
    }
    std::sort(edges_.begin(), edges_.end());
    edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
}

bool GraphSnapshot::has_edge(VertexId a, VertexId b) const {
    if (a > b) {
        std::swap(a, b);
    }
    return std::binary_search(edges_.begin(), edges_.end(), Edge{a, b});
}

GraphSnapshot GraphSnapshot::with_time(TimeStep time) const {
    GraphSnapshot copy = *this;
    copy.time_ = time;
    return copy;
}

NetworkSequence::NetworkSequence(std::vector<GraphSnapshot> snapshots, std::vector<std::string> labels)
    : snapshots_(std::move(snapshots)), labels_(std::move(labels)) {
    for (std::size_t i = 0; i < snapshots_.size(); ++i) {
        if (snapshots_[i].vertex_count() != labels_.size()) {
            throw InvalidArgument("snapshot vertex count does not match label count");
        }
        if (i > 0 && snapshots_[i].time() <= snapshots_[i - 1].time()) {
            throw InvalidArgument("snapshot times must strictly increase");
        }
    }
}

std::size_t NetworkSequence::index_of(TimeStep t) const {
    auto it = std::lower_bound(snapshots_.begin(), snapshots_.end(), t,
                               [](const GraphSnapshot& g, TimeStep x) { return g.time() < x; });
    if (it == snapshots_.end() || it->time() != t) {
        return size();
    }
    return static_cast<std::size_t>(it - snapshots_.begin());
}

GraphWindow::GraphWindow(TimeStep tau, std::vector<GraphSnapshot> snapshots)
    : tau_(tau), snapshots_(std::move(snapshots)) {
    if (snapshots_.size() < 2) {
        throw InvalidArgument("a window needs at least 2 snapshots");
    }
    for (const auto& g : snapshots_) {
        if (g.vertex_count() != snapshots_.front().vertex_count()) {
            throw InvalidArgument("window snapshots disagree on vertex count");
        }
    }
}

namespace {

class LabelIndex {
public:
    VertexId intern(const std::string& label) {
        auto [it, inserted] = ids_.try_emplace(label, static_cast<VertexId>(labels_.size()));
        if (inserted) {
            labels_.push_back(label);
        }
        return it->second;
    }
    std::vector<std::string> take() { return std::move(labels_); }
    std::size_t size() const { return labels_.size(); }

private:
    std::unordered_map<std::string, VertexId> ids_;
    std::vector<std::string> labels_;
};

std::vector<std::string_view> split_tabs(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        auto pos = line.find('\t', start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

bool parse_int(std::string_view s, TimeStep& out) {
    if (s.empty()) {
        return false;
    }
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size();
}

NetworkSequence build_sequence(std::map<TimeStep, std::vector<Edge>> by_time, std::vector<std::string> labels,
                               GapPolicy gaps) {
    const std::size_t n = labels.size();
    std::vector<GraphSnapshot> snapshots;
    if (gaps == GapPolicy::empty && !by_time.empty()) {
        const TimeStep first = by_time.begin()->first;
        const TimeStep last = by_time.rbegin()->first;
        for (TimeStep t = first; t <= last; ++t) {
            auto it = by_time.find(t);
            snapshots.emplace_back(t, n, it == by_time.end() ? std::vector<Edge>{} : std::move(it->second));
        }
    } else {
        for (auto& [t, edges] : by_time) {
            snapshots.emplace_back(t, n, std::move(edges));
        }
    }
    return NetworkSequence(std::move(snapshots), std::move(labels));
}

} // namespace

NetworkSequence parse_edge_list(std::istream& in, GapPolicy gaps) {
    LabelIndex index;
    std::map<TimeStep, std::vector<Edge>> by_time;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view view(line);
        if (!view.empty() && view.back() == '\r') {
            view.remove_suffix(1);
        }
        if (view.empty()) {
            continue;
        }
        if (view.front() == '#') {
            auto fields = split_tabs(view);
            if (fields.size() == 2 && fields[0] == "#@vertex") {
                index.intern(std::string(fields[1]));
            } else if (fields.size() == 2 && fields[0] == "#@time") {
                TimeStep t = 0;
                if (!parse_int(fields[1], t)) {
                    throw ParseError("time pragma needs an integer time", line_no);
                }
                by_time.try_emplace(t);
            }
            continue;
        }
        auto fields = split_tabs(view);
        if (fields.size() != 3) {
            throw ParseError("expected 3 tab-separated fields, got " + std::to_string(fields.size()), line_no);
        }
        TimeStep t = 0;
        if (!parse_int(fields[0], t)) {
            throw ParseError("time '" + std::string(fields[0]) + "' is not an integer", line_no);
        }
        const VertexId u = index.intern(std::string(fields[1]));
        const VertexId v = index.intern(std::string(fields[2]));
        auto& edges = by_time[t];
        if (u != v) {
            edges.push_back(Edge{std::min(u, v), std::max(u, v)});
        }
    }
    if (by_time.empty()) {
        throw ParseError("edge list contains no data", 0);
    }
    return build_sequence(std::move(by_time), index.take(), gaps);
}

NetworkSequence parse_edge_list_file(const std::string& path, GapPolicy gaps) {
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open " + path);
    }
    return parse_edge_list(in, gaps);
}

void write_edge_list(const NetworkSequence& seq, std::ostream& out) {
    const auto& labels = seq.labels();
    out << "# t\tu\tv\n";
    for (const auto& label : labels) {
        out << "#@vertex\t" << label << '\n';
    }
    for (const auto& g : seq.snapshots()) {
        out << "#@time\t" << g.time() << '\n';
        for (const auto& e : g.edges()) {
            out << g.time() << '\t' << labels[e.u] << '\t' << labels[e.v] << '\n';
        }
    }
}

NetworkSequence aggregate_events(std::span<const TimedEvent> events, double bin_width) {
    if (!(bin_width > 0.0) || !std::isfinite(bin_width)) {
        throw InvalidArgument("bin width must be positive");
    }
    if (events.empty()) {
        throw InvalidArgument("no events to aggregate");
    }
    std::vector<const TimedEvent*> ordered;
    ordered.reserve(events.size());
    for (const auto& e : events) {
        if (!std::isfinite(e.timestamp)) {
            throw InvalidArgument("event timestamp is not finite");
        }
        ordered.push_back(&e);
    }
    std::stable_sort(ordered.begin(), ordered.end(),
                     [](const TimedEvent* a, const TimedEvent* b) { return a->timestamp < b->timestamp; });

    const double t0 = ordered.front()->timestamp;
    LabelIndex index;
    std::map<TimeStep, std::vector<Edge>> by_time;
    for (const auto* e : ordered) {
        const auto bin = static_cast<TimeStep>(std::floor((e->timestamp - t0) / bin_width));
        const VertexId u = index.intern(e->u);
        const VertexId v = index.intern(e->v);
        auto& edges = by_time[bin];
        if (u != v) {
            edges.push_back(Edge{std::min(u, v), std::max(u, v)});
        }
    }
    return build_sequence(std::move(by_time), index.take(), GapPolicy::empty);
}

std::vector<TimedEvent> parse_timed_events(std::istream& in) {
    std::vector<TimedEvent> events;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view view(line);
        if (!view.empty() && view.back() == '\r') {
            view.remove_suffix(1);
        }
        if (view.empty() || view.front() == '#') {
            continue;
        }
        auto fields = split_tabs(view);
        if (fields.size() != 3) {
            throw ParseError("expected 3 tab-separated fields, got " + std::to_string(fields.size()), line_no);
        }
        double ts = 0.0;
        auto [ptr, ec] = std::from_chars(fields[0].data(), fields[0].data() + fields[0].size(), ts);
        if (ec != std::errc() || ptr != fields[0].data() + fields[0].size()) {
            throw ParseError("timestamp '" + std::string(fields[0]) + "' is not a number", line_no);
        }
        events.push_back(TimedEvent{ts, std::string(fields[1]), std::string(fields[2])});
    }
    if (events.empty()) {
        throw ParseError("event list contains no data", 0);
    }
    return events;
}

GraphWindow window_ending_at_index(const NetworkSequence& seq, std::size_t last, std::size_t w) {
    if (w < 2) {
        throw InvalidArgument("window length must be at least 2");
    }
    if (last >= seq.size() || last + 1 < w) {
        throw InvalidArgument("not enough history for a window of " + std::to_string(w) + " snapshots");
    }
    std::vector<GraphSnapshot> snaps(seq.snapshots().begin() + static_cast<std::ptrdiff_t>(last + 1 - w),
                                     seq.snapshots().begin() + static_cast<std::ptrdiff_t>(last + 1));
    return GraphWindow(seq[last].time(), std::move(snaps));
}

GraphWindow window_at(const NetworkSequence& seq, TimeStep tau, std::size_t w) {
    const std::size_t last = seq.index_of(tau);
    if (last == seq.size()) {
        throw InvalidArgument("no snapshot at time " + std::to_string(tau));
    }
    return window_ending_at_index(seq, last, w);
}

} // namespace netcp
