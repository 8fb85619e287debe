#include "netcp/io.hpp"

#include "netcp/error.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace netcp {

using nlohmann::json;

json detection_report(const std::string& method, std::span<const Detection> detections) {
    json list = json::array();
    for (const auto& d : detections) {
        list.push_back(json{{"t_d", d.t_d},
                            {"t_hat_c", d.t_hat_c.value()},
                            {"g_tau", d.g_tau},
                            {"p_value", d.p_value},
                            {"window_start", d.window_start},
                            {"method", d.method}});
    }
    return json{{"method", method}, {"detections", std::move(list)}};
}

std::vector<Detection> parse_detection_report(const json& doc) {
    std::vector<Detection> out;
    try {
        for (const auto& d : doc.at("detections")) {
            const double t_hat = d.at("t_hat_c").get<double>();
            if (t_hat + 0.5 != std::round(t_hat + 0.5)) {
                throw ParseError("t_hat_c must be a half step", 0);
            }
            out.push_back(Detection{d.at("t_d").get<TimeStep>(),
                                    HalfStep{static_cast<TimeStep>(std::llround(t_hat + 0.5))},
                                    d.at("g_tau").get<double>(), d.at("p_value").get<double>(),
                                    d.at("window_start").get<TimeStep>(), d.value("method", std::string())});
        }
    } catch (const json::exception& e) {
        throw ParseError(std::string("malformed detection report: ") + e.what(), 0);
    }
    return out;
}

void write_trace_csv(std::span<const TraceRow> trace, std::ostream& out) {
    out << "tau,g_tau,p_value\n";
    const auto old = out.precision(17);
    for (const auto& row : trace) {
        out << row.tau << ',' << row.g_tau << ',' << row.p_value << '\n';
    }
    out.precision(old);
}

json tree_document(const TreeDocument& doc) {
    const auto& tree = doc.model.tree();
    const auto& labels = doc.labels;
    if (labels.size() != tree.leaf_count()) {
        throw InvalidArgument("need one label per leaf");
    }
    if (doc.window_edges.size() != tree.internal_count()) {
        throw InvalidArgument("need one edge total per internal node");
    }
    std::vector<std::string> smallest(tree.leaf_count() + tree.internal_count());
    std::function<const std::string&(Dendrogram::NodeId)> min_label = [&](Dendrogram::NodeId id) -> const std::string& {
        if (tree.is_leaf(id)) {
            return labels[id];
        }
        auto& best = smallest[id];
        if (best.empty()) {
            for (auto leaf : tree.leaves(id)) {
                if (best.empty() || labels[leaf] < best) {
                    best = labels[leaf];
                }
            }
        }
        return best;
    };
    std::function<json(Dendrogram::NodeId)> node = [&](Dendrogram::NodeId id) -> json {
        if (tree.is_leaf(id)) {
            return json{{"label", labels[id]}};
        }
        std::vector<Dendrogram::NodeId> kids(tree.children(id).begin(), tree.children(id).end());
        std::sort(kids.begin(), kids.end(), [&](auto a, auto b) { return min_label(a) < min_label(b); });
        json children = json::array();
        for (auto c : kids) {
            children.push_back(node(c));
        }
        const auto k = tree.ordinal(id);
        const auto& p = doc.model.params()[k];
        return json{{"alpha", p.alpha},
                    {"beta", p.beta},
                    {"children", std::move(children)},
                    {"edges", doc.window_edges[k]},
                    {"pairs", tree.possible_pairs(k)}};
    };
    return json{{"format", "netcp-ghrg-tree"},
                {"labels", labels},
                {"snapshots", doc.snapshots},
                {"root", node(tree.root())}};
}

TreeDocument parse_tree_document(const json& doc) {
    try {
        TreeDocument out;
        out.labels = doc.at("labels").get<std::vector<std::string>>();
        out.snapshots = doc.at("snapshots").get<std::size_t>();
        const std::size_t n = out.labels.size();
        std::unordered_map<std::string, Dendrogram::NodeId> ids;
        for (std::size_t v = 0; v < n; ++v) {
            if (!ids.emplace(out.labels[v], static_cast<Dendrogram::NodeId>(v)).second) {
                throw ParseError("duplicate vertex label '" + out.labels[v] + "'", 0);
            }
        }
        std::vector<std::vector<Dendrogram::NodeId>> children;
        std::vector<BetaParams> params;
        std::vector<std::int64_t> edges;
        std::vector<std::int64_t> declared_pairs;
        std::function<Dendrogram::NodeId(const json&)> visit = [&](const json& node) -> Dendrogram::NodeId {
            if (node.contains("label")) {
                auto it = ids.find(node.at("label").get<std::string>());
                if (it == ids.end()) {
                    throw ParseError("leaf label not in the label list", 0);
                }
                return it->second;
            }
            const std::size_t k = children.size();
            children.emplace_back();
            params.push_back(BetaParams{node.at("alpha").get<double>(), node.at("beta").get<double>()});
            edges.push_back(node.at("edges").get<std::int64_t>());
            declared_pairs.push_back(node.at("pairs").get<std::int64_t>());
            std::vector<Dendrogram::NodeId> kids;
            for (const auto& c : node.at("children")) {
                kids.push_back(visit(c));
            }
            children[k] = std::move(kids);
            return static_cast<Dendrogram::NodeId>(n + k);
        };
        const auto& root = doc.at("root");
        if (root.contains("label")) {
            if (n != 1) {
                throw ParseError("a leaf root needs exactly one label", 0);
            }
        } else {
            visit(root);
        }
        Dendrogram tree(n, std::move(children));
        for (std::size_t k = 0; k < tree.internal_count(); ++k) {
            if (tree.possible_pairs(k) != declared_pairs[k]) {
                throw ParseError("declared pair count disagrees with the tree shape", 0);
            }
        }
        out.model = GhrgModel(std::move(tree), std::move(params));
        out.window_edges = std::move(edges);
        return out;
    } catch (const json::exception& e) {
        throw ParseError(std::string("malformed tree document: ") + e.what(), 0);
    }
}

TreeDocument make_tree_document(const GhrgModel& model, const std::vector<std::string>& labels,
                                const GraphWindow& window) {
    PairCounter counter(model.tree());
    std::vector<std::int64_t> totals(model.tree().internal_count(), 0);
    for (const auto& g : window.snapshots()) {
        const auto c = counter.count(g);
        for (std::size_t k = 0; k < totals.size(); ++k) {
            totals[k] += c.edges[k];
        }
    }
    return TreeDocument{model, labels, std::move(totals), window.length()};
}

json ground_truth(const ChangeSpec& spec, const SyntheticSequence& synthetic) {
    auto probs = [](const BlockProbs& p) { return json{{"p_in_a", p.p_in_a}, {"p_in_b", p.p_in_b}, {"p_out", p.p_out}}; };
    return json{{"kind", to_string(spec.kind)},
                {"mu_before", spec.mu_before},
                {"mu_after", spec.mu_after},
                {"t_c", synthetic.t_c},
                {"length", spec.length},
                {"n", spec.n},
                {"density", spec.density},
                {"groups", {spec.groups.first, spec.groups.second}},
                {"seed", spec.seed},
                {"before", probs(synthetic.before)},
                {"after", probs(synthetic.after)}};
}

} // namespace netcp
