#include "netcp/evalkit.hpp"

#include "netcp/baselines.hpp"
#include "netcp/error.hpp"
#include "netcp/parallel.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>

namespace netcp {

EventList parse_events_csv(std::istream& in) {
    std::vector<std::pair<TimeStep, std::string>> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty() || line.front() == '#') {
            continue;
        }
        const auto comma = line.find(',');
        const std::string first = line.substr(0, comma);
        const std::string rest = comma == std::string::npos ? std::string() : line.substr(comma + 1);
        if (rows.empty() && first == "t") {
            continue; // header
        }
        TimeStep t = 0;
        auto [ptr, ec] = std::from_chars(first.data(), first.data() + first.size(), t);
        if (first.empty() || ec != std::errc() || ptr != first.data() + first.size()) {
            throw ParseError("event time '" + first + "' is not an integer", line_no);
        }
        rows.emplace_back(t, rest);
    }
    std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    EventList out;
    for (auto& [t, label] : rows) {
        out.times.push_back(t);
        out.labels.push_back(std::move(label));
    }
    return out;
}

PrecisionRecall precision_recall(std::span<const double> estimates, std::span<const TimeStep> events, int s) {
    if (s < 0) {
        throw InvalidArgument("delay must be non-negative");
    }
    const double tolerance = static_cast<double>(s) + 0.5;
    auto near = [&](double x, TimeStep t) { return std::abs(x - static_cast<double>(t)) <= tolerance; };

    PrecisionRecall out;
    out.precision_defined = !estimates.empty();
    out.recall_defined = !events.empty();
    if (estimates.empty() || events.empty()) {
        return out;
    }
    std::size_t hits = 0;
    for (double x : estimates) {
        if (std::any_of(events.begin(), events.end(), [&](TimeStep t) { return near(x, t); })) {
            ++hits;
        }
    }
    out.precision = static_cast<double>(hits) / static_cast<double>(estimates.size());
    std::size_t found = 0;
    for (TimeStep t : events) {
        if (std::any_of(estimates.begin(), estimates.end(), [&](double x) { return near(x, t); })) {
            ++found;
        }
    }
    out.recall = static_cast<double>(found) / static_cast<double>(events.size());
    return out;
}

void write_precision_recall_csv(std::span<const double> estimates, std::span<const TimeStep> events, int max_delay,
                                const std::string& method, std::ostream& out, bool header) {
    if (header) {
        out << "s,precision,recall,method\n";
    }
    for (int s = 0; s <= max_delay; ++s) {
        const auto pr = precision_recall(estimates, events, s);
        out << s << ',' << pr.precision << ',' << pr.recall << ',' << method << '\n';
    }
}

bool RunOutcome::false_positive() const {
    return std::any_of(detections.begin(), detections.end(), [&](const Detection& d) { return d.t_d < t_c; });
}

std::optional<Detection> RunOutcome::first_true_detection() const {
    const auto span = static_cast<TimeStep>(w);
    for (const auto& d : detections) {
        if (t_c <= d.t_d && d.t_d - span + 1 <= t_c) {
            return d;
        }
    }
    return std::nullopt;
}

ErrorRates error_rates(std::span<const RunOutcome> runs) {
    if (runs.empty()) {
        throw InvalidArgument("need at least one run");
    }
    std::size_t fp = 0;
    std::size_t fn = 0;
    for (const auto& r : runs) {
        fp += r.false_positive() ? 1 : 0;
        fn += r.false_negative() ? 1 : 0;
    }
    const auto total = static_cast<double>(runs.size());
    return {static_cast<double>(fp) / total, static_cast<double>(fn) / total};
}

const std::vector<std::string>& all_methods() {
    static const std::vector<std::string> methods{"ghrg", "degree", "geodesic", "clustering"};
    return methods;
}

DetectResult run_method(const NetworkSequence& seq, const std::string& method, const DetectConfig& cfg,
                        const ProgressFn& progress) {
    if (method == "ghrg") {
        return detect_stream_full(seq, cfg, progress);
    }
    return scalar_detect_stream_full(scalar_series(seq, parse_statistic(method)), cfg, progress);
}

std::vector<std::vector<RunOutcome>> simulate_runs(const ChangeSpec& spec, std::size_t runs,
                                                   std::span<const std::string> methods, const DetectConfig& cfg,
                                                   std::uint64_t seed, unsigned workers) {
    for (const auto& m : methods) {
        if (m != "ghrg") {
            parse_statistic(m);
        }
    }
    std::vector<std::vector<RunOutcome>> out(methods.size(), std::vector<RunOutcome>(runs));
    parallel_for(runs, workers, [&](std::size_t r) {
        ChangeSpec run_spec = spec;
        run_spec.seed = derive_seed(seed, {r, 0});
        const auto synthetic = generate_sequence(run_spec);
        for (std::size_t m = 0; m < methods.size(); ++m) {
            DetectConfig run_cfg = cfg;
            run_cfg.workers = 1;
            run_cfg.seed = derive_seed(seed, {r, 1 + m});
            auto result = run_method(synthetic.sequence, methods[m], run_cfg);
            const TimeStep last = result.trace.empty() ? 0 : result.trace.back().tau;
            out[m][r] = RunOutcome{std::move(result.detections), synthetic.t_c, cfg.w, last};
        }
    });
    return out;
}

namespace {

double median(std::vector<double> xs) {
    if (xs.empty()) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    std::sort(xs.begin(), xs.end());
    const std::size_t mid = xs.size() / 2;
    return xs.size() % 2 == 1 ? xs[mid] : 0.5 * (xs[mid - 1] + xs[mid]);
}

} // namespace

SweepRow summarize(ChangeKind kind, double delta_mu, const std::string& method, std::span<const RunOutcome> runs) {
    const auto rates = error_rates(runs);
    std::vector<double> tc_err;
    std::vector<double> td_delay;
    for (const auto& r : runs) {
        if (auto d = r.first_true_detection()) {
            tc_err.push_back(d->t_hat_c.value() - static_cast<double>(r.t_c));
            td_delay.push_back(static_cast<double>(d->t_d - r.t_c));
        }
    }
    return SweepRow{kind, delta_mu, method, rates.fp_rate, rates.fn_rate, median(tc_err), median(td_delay),
                    runs.size(), tc_err.size()};
}

std::vector<SweepRow> run_sweep(const SweepConfig& cfg) {
    if (cfg.runs == 0 || cfg.kinds.empty() || cfg.delta_mu.empty() || cfg.methods.empty()) {
        throw InvalidArgument("sweep needs kinds, a delta-mu grid, methods and at least one run");
    }
    std::vector<SweepRow> rows;
    for (std::size_t k = 0; k < cfg.kinds.size(); ++k) {
        for (std::size_t c = 0; c < cfg.delta_mu.size(); ++c) {
            ChangeSpec spec = ChangeSpec::for_delta(cfg.kinds[k], cfg.delta_mu[c]);
            spec.t_c = cfg.base.t_c;
            spec.length = cfg.base.length;
            spec.n = cfg.base.n;
            spec.density = cfg.base.density;
            spec.groups = cfg.base.groups;
            spec.p_fix = cfg.base.p_fix;
            const auto outcomes = simulate_runs(spec, cfg.runs, cfg.methods, cfg.detect,
                                                derive_seed(cfg.seed, {k, c}), cfg.workers);
            for (std::size_t m = 0; m < cfg.methods.size(); ++m) {
                rows.push_back(summarize(cfg.kinds[k], cfg.delta_mu[c], cfg.methods[m], outcomes[m]));
            }
        }
    }
    return rows;
}

void write_sweep_csv(std::span<const SweepRow> rows, std::ostream& out) {
    out << "kind,delta_mu,method,fp_rate,fn_rate,median_tc_err,median_td_delay\n";
    for (const auto& r : rows) {
        out << to_string(r.kind) << ',' << r.delta_mu << ',' << r.method << ',' << r.fp_rate << ',' << r.fn_rate
            << ',' << r.median_tc_err << ',' << r.median_td_delay << '\n';
    }
}

} // namespace netcp
