#pragma once

#include "netcp/detect.hpp"
#include "netcp/ghrg.hpp"
#include "netcp/synth.hpp"

#include <nlohmann/json.hpp>

#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace netcp {

/// `{"method", "detections": [{t_d, t_hat_c, g_tau, p_value, window_start, method}]}`
nlohmann::json detection_report(const std::string& method, std::span<const Detection> detections);
std::vector<Detection> parse_detection_report(const nlohmann::json& doc);

/// `tau,g_tau,p_value` rows with a header.
void write_trace_csv(std::span<const TraceRow> trace, std::ostream& out);

/// A fitted model plus the data it was fitted on, in serializable form.
struct TreeDocument {
    GhrgModel model;
    std::vector<std::string> labels;
    std::vector<std::int64_t> window_edges; ///< sum over snapshots of E_r, per internal ordinal
    std::size_t snapshots = 0;
};

/// Nested node objects: internal nodes carry children, edges (window total),
/// pairs (N_r), alpha and beta; leaves carry their label. Children are
/// ordered by their smallest leaf label, so equal models give equal documents.
nlohmann::json tree_document(const TreeDocument& doc);
TreeDocument parse_tree_document(const nlohmann::json& doc);

/// Builds a TreeDocument for a model fitted on `window`.
TreeDocument make_tree_document(const GhrgModel& model, const std::vector<std::string>& labels,
                                const GraphWindow& window);

nlohmann::json ground_truth(const ChangeSpec& spec, const SyntheticSequence& synthetic);

} // namespace netcp
