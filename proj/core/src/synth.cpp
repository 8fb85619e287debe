#include "netcp/synth.hpp"

#include "netcp/error.hpp"

#include <cmath>

namespace netcp {

std::string to_string(ChangeKind k) {
    switch (k) {
    case ChangeKind::merge:
        return "merge";
    case ChangeKind::split:
        return "split";
    case ChangeKind::form:
        return "form";
    case ChangeKind::fragment:
        return "fragment";
    }
    return "unknown";
}

ChangeKind parse_change_kind(const std::string& name) {
    if (name == "merge") {
        return ChangeKind::merge;
    }
    if (name == "split") {
        return ChangeKind::split;
    }
    if (name == "form") {
        return ChangeKind::form;
    }
    if (name == "fragment") {
        return ChangeKind::fragment;
    }
    throw InvalidArgument("unknown change kind '" + name + "'");
}

namespace {

double choose2(std::size_t k) {
    return 0.5 * static_cast<double>(k) * (static_cast<double>(k) - 1.0);
}

void check_probability(double p, const char* what) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw InvalidArgument(std::string(what) + " = " + std::to_string(p) + " lies outside [0, 1]");
    }
}

void check_inputs(double mu, double density, GroupSizes groups) {
    if (!(mu >= 0.0 && mu <= 1.0)) {
        throw InvalidArgument("mu must lie in [0, 1]");
    }
    if (!(density > 0.0 && density < 1.0)) {
        throw InvalidArgument("density must lie in (0, 1)");
    }
    if (groups.first == 0 || groups.second == 0 || groups.first + groups.second < 2) {
        throw InvalidArgument("both groups need at least one vertex");
    }
}

} // namespace

BlockProbs solve_merge_split(double mu, double density, GroupSizes groups) {
    check_inputs(mu, density, groups);
    const double within = choose2(groups.first) + choose2(groups.second);
    const double between = static_cast<double>(groups.first) * static_cast<double>(groups.second);
    const double denom = within * (1.0 - mu) + between * mu;
    if (!(denom > 0.0)) {
        throw InvalidArgument("no pairs carry probability mass at this mu");
    }
    const double s = density * (within + between) / denom;
    BlockProbs out{(1.0 - mu) * s, (1.0 - mu) * s, mu * s};
    check_probability(out.p_in_a, "p_in");
    check_probability(out.p_out, "p_out");
    return out;
}

BlockProbs solve_form_fragment(double mu, double density, GroupSizes groups, double p_fix) {
    check_inputs(mu, density, groups);
    check_probability(p_fix, "p_fix");
    const double within_a = choose2(groups.first);
    const double within_b = choose2(groups.second);
    const double between = static_cast<double>(groups.first) * static_cast<double>(groups.second);
    const double total = within_a + within_b + between;
    const double denom = within_b * (1.0 - mu) + between * mu;
    const double remaining = density * total - within_a * p_fix;
    if (!(denom > 0.0)) {
        throw InvalidArgument("no pairs carry probability mass at this mu");
    }
    const double s = remaining / denom;
    BlockProbs out{p_fix, (1.0 - mu) * s, mu * s};
    check_probability(out.p_in_b, "p_in_b");
    check_probability(out.p_out, "p_out");
    return out;
}

void ChangeSpec::validate() const {
    if (length < 2 || t_c <= 0 || t_c >= static_cast<TimeStep>(length)) {
        throw InvalidArgument("change time must satisfy 0 < t_c < length");
    }
    if (groups.first + groups.second != n) {
        throw InvalidArgument("group sizes must sum to n");
    }
    for (double mu : {mu_before, mu_after}) {
        if (!(mu >= 0.0 && mu <= 1.0)) {
            throw InvalidArgument("mu must lie in [0, 1]");
        }
    }
    if (!(density > 0.0 && density < 1.0)) {
        throw InvalidArgument("density must lie in (0, 1)");
    }
    const auto fixed = [](double mu, double target) { return std::abs(mu - target) < 1e-12; };
    switch (kind) {
    case ChangeKind::merge:
        if (!fixed(mu_after, 0.5)) {
            throw InvalidArgument("a merge ends at mu = 0.5");
        }
        break;
    case ChangeKind::split:
        if (!fixed(mu_before, 0.5)) {
            throw InvalidArgument("a split starts at mu = 0.5");
        }
        break;
    case ChangeKind::fragment:
        if (!fixed(mu_after, 1.0)) {
            throw InvalidArgument("a fragmentation ends at mu = 1");
        }
        break;
    case ChangeKind::form:
        if (!fixed(mu_before, 1.0)) {
            throw InvalidArgument("a formation starts at mu = 1");
        }
        break;
    }
}

ChangeSpec ChangeSpec::for_delta(ChangeKind kind, double delta_mu) {
    ChangeSpec spec;
    spec.kind = kind;
    switch (kind) {
    case ChangeKind::merge:
        spec.mu_before = 0.5 - delta_mu;
        spec.mu_after = 0.5;
        break;
    case ChangeKind::split:
        spec.mu_before = 0.5;
        spec.mu_after = 0.5 - delta_mu;
        break;
    case ChangeKind::fragment:
        spec.mu_before = 1.0 - delta_mu;
        spec.mu_after = 1.0;
        break;
    case ChangeKind::form:
        spec.mu_before = 1.0;
        spec.mu_after = 1.0 - delta_mu;
        break;
    }
    return spec;
}

BlockProbs block_probs(const ChangeSpec& spec, double mu) {
    if (spec.kind == ChangeKind::merge || spec.kind == ChangeKind::split) {
        return solve_merge_split(mu, spec.density, spec.groups);
    }
    return solve_form_fragment(mu, spec.density, spec.groups, spec.p_fix < 0.0 ? spec.density : spec.p_fix);
}

GraphSnapshot sample_block_graph(const BlockProbs& probs, GroupSizes groups, TimeStep time, Rng& rng) {
    const std::size_t n = groups.first + groups.second;
    std::vector<Edge> edges;
    for (std::size_t u = 0; u < n; ++u) {
        for (std::size_t v = u + 1; v < n; ++v) {
            const bool a_u = u < groups.first;
            const bool a_v = v < groups.first;
            const double p = a_u != a_v ? probs.p_out : (a_u ? probs.p_in_a : probs.p_in_b);
            if (uniform01(rng) < p) {
                edges.push_back(Edge{static_cast<VertexId>(u), static_cast<VertexId>(v)});
            }
        }
    }
    return GraphSnapshot(time, n, std::move(edges));
}

SyntheticSequence generate_sequence(const ChangeSpec& spec) {
    spec.validate();
    const auto before = block_probs(spec, spec.mu_before);
    const auto after = block_probs(spec, spec.mu_after);
    Rng rng(derive_seed(spec.seed, {0x5e9}));
    std::vector<GraphSnapshot> snapshots;
    snapshots.reserve(spec.length);
    for (std::size_t t = 0; t < spec.length; ++t) {
        const auto time = static_cast<TimeStep>(t);
        snapshots.push_back(sample_block_graph(time < spec.t_c ? before : after, spec.groups, time, rng));
    }
    std::vector<std::string> labels;
    labels.reserve(spec.n);
    for (std::size_t v = 0; v < spec.n; ++v) {
        labels.push_back(std::to_string(v));
    }
    return SyntheticSequence{NetworkSequence(std::move(snapshots), std::move(labels)), spec.t_c, before, after};
}

} // namespace netcp
