#pragma once

#include "netcp/graph.hpp"
#include "netcp/random.hpp"

#include <cstdint>
#include <string>
#include <utility>

namespace netcp {

enum class ChangeKind { merge, split, form, fragment };

std::string to_string(ChangeKind k);
ChangeKind parse_change_kind(const std::string& name);

/// Two-group block model. Group A holds vertices 0..a-1, group B the rest.
/// mu = p_out / (p_in + p_out) describes the structural index.
struct BlockProbs {
    double p_in_a = 0.0;
    double p_in_b = 0.0;
    double p_out = 0.0;
};

using GroupSizes = std::pair<std::size_t, std::size_t>;

/// Both groups share p_in = (1 - mu) s and p_out = mu s, with s chosen so the
/// expected edge density is `density`. Throws InvalidArgument if a
/// probability would leave [0, 1].
BlockProbs solve_merge_split(double mu, double density, GroupSizes groups);

/// Group A is held at p_fix; group B uses p_in = (1 - mu) s, p_out = mu s with
/// s solving the same density constraint. mu = 1 leaves B without internal edges.
BlockProbs solve_form_fragment(double mu, double density, GroupSizes groups, double p_fix);

struct ChangeSpec {
    ChangeKind kind = ChangeKind::split;
    double mu_before = 0.5;
    double mu_after = 0.05;
    TimeStep t_c = 8;
    std::size_t length = 12;
    std::size_t n = 30;
    double density = 0.2;
    GroupSizes groups{15, 15};
    /// Group A's fixed probability for form/fragment; negative means "use density".
    double p_fix = -1.0;
    std::uint64_t seed = 0;

    /// Checks ranges and the kind's fixed endpoint (merge ends at 0.5, split
    /// starts at 0.5, fragment ends at 1, form starts at 1).
    void validate() const;
    /// Fills the kind's fixed endpoint and sets the other from delta_mu.
    static ChangeSpec for_delta(ChangeKind kind, double delta_mu);
};

BlockProbs block_probs(const ChangeSpec& spec, double mu);

struct SyntheticSequence {
    NetworkSequence sequence;
    TimeStep t_c = 0;
    BlockProbs before;
    BlockProbs after;
};

/// Draws one graph from the block model.
GraphSnapshot sample_block_graph(const BlockProbs& probs, GroupSizes groups, TimeStep time, Rng& rng);

/// Snapshots t < t_c come from the before state, t >= t_c from the after state.
SyntheticSequence generate_sequence(const ChangeSpec& spec);

} // namespace netcp
