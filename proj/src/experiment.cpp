#include "sphere/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <deque>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <random>
#include <sstream>

#include "sphere/errors.hpp"
#include "sphere/io.hpp"
#include "sphere/predict.hpp"

namespace sphere {

// ---------------------------------------------------------------- config

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        parts.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return parts;
}

template <class T>
T parse_number(std::string_view key, std::string_view text) {
    T value{};
    const char* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (text.empty() || ec != std::errc{} || ptr != end) {
        throw UsageError("config key '" + std::string(key) + "': cannot parse '" + std::string(text) + "'");
    }
    return value;
}

bool parse_bool(std::string_view key, std::string_view text) {
    if (text == "true" || text == "1" || text == "yes") return true;
    if (text == "false" || text == "0" || text == "no") return false;
    throw UsageError("config key '" + std::string(key) + "': expected true or false");
}

template <class E, class Registry, class Parse>
std::vector<E> parse_list(std::string_view text, const Registry& all, Parse parse) {
    if (text == "all") return {all.begin(), all.end()};
    std::vector<E> out;
    for (auto item : split(text, ',')) {
        if (item.empty()) continue;
        const E value = parse(item);
        if (std::find(out.begin(), out.end(), value) == out.end()) out.push_back(value);
    }
    if (out.empty()) throw UsageError("empty registry list '" + std::string(text) + "'");
    return out;
}

// er(n, p, seed) or snap_file(path)
DatasetSpec parse_dataset(std::string_view text, const std::filesystem::path& base_dir) {
    const auto open = text.find('(');
    if (open == std::string_view::npos || text.back() != ')') {
        throw UsageError("dataset must be er(n,p,seed) or snap_file(path)");
    }
    const auto kind = trim(text.substr(0, open));
    const auto args = text.substr(open + 1, text.size() - open - 2);
    DatasetSpec spec;
    if (kind == "er") {
        const auto parts = split(args, ',');
        if (parts.size() != 3) throw UsageError("er(n,p,seed) takes three arguments");
        spec.kind = DatasetSpec::Kind::erdos_renyi;
        spec.nodes = parse_number<std::size_t>("dataset", parts[0]);
        spec.probability = parse_number<double>("dataset", parts[1]);
        spec.seed = parse_number<std::uint64_t>("dataset", parts[2]);
        if (spec.nodes < 1 || !(spec.probability >= 0.0 && spec.probability <= 1.0)) {
            throw UsageError("er(n,p,seed) needs n >= 1 and p in [0,1]");
        }
    } else if (kind == "snap_file") {
        spec.kind = DatasetSpec::Kind::snap_file;
        std::filesystem::path p{std::string(trim(args))};
        if (p.empty()) throw UsageError("snap_file() needs a path");
        spec.path = p.is_relative() && !base_dir.empty() ? base_dir / p : p;
    } else {
        throw UsageError("unknown dataset kind '" + std::string(kind) + "'");
    }
    return spec;
}

}  // namespace

std::string DatasetSpec::describe() const {
    if (kind == Kind::snap_file) return "snap_file(" + path.string() + ")";
    return "er(" + std::to_string(nodes) + "," + format_double(probability) + "," + std::to_string(seed) + ")";
}

ExperimentConfig parse_config(std::istream& in, const std::filesystem::path& base_dir) {
    ExperimentConfig c;
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = raw;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw UsageError("config line " + std::to_string(line_no) + ": expected key = value");
        }
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));

        if (key == "dataset") {
            c.dataset = parse_dataset(value, base_dir);
        } else if (key == "fraction") {
            c.fraction = parse_number<double>(key, value);
        } else if (key == "t") {
            c.t = parse_number<int>(key, value);
        } else if (key == "k") {
            c.k = parse_number<std::size_t>(key, value);
        } else if (key == "trials") {
            c.trials = parse_number<std::size_t>(key, value);
        } else if (key == "theta") {
            c.theta = parse_number<double>(key, value);
        } else if (key == "epsilon") {
            c.epsilon = parse_number<double>(key, value);
        } else if (key == "alpha") {
            c.centrality_params.cluster_rank_alpha = parse_number<double>(key, value);
        } else if (key == "d") {
            c.centrality_params.damping = parse_number<double>(key, value);
        } else if (key == "bi_weights") {
            const auto parts = split(value, ',');
            if (parts.size() != 3) throw UsageError("bi_weights takes three comma-separated values");
            c.centrality_params.bi_weights = {parse_number<double>(key, parts[0]),
                                              parse_number<double>(key, parts[1]),
                                              parse_number<double>(key, parts[2])};
        } else if (key == "centrality_theta") {
            c.centrality_params.theta = parse_number<double>(key, value);
        } else if (key == "h_index_order") {
            c.centrality_params.h_index_order = parse_number<int>(key, value);
        } else if (key == "max_iter") {
            c.centrality_params.max_iterations = parse_number<int>(key, value);
        } else if (key == "tolerance") {
            c.centrality_params.tolerance = parse_number<double>(key, value);
        } else if (key == "metrics") {
            c.metrics = parse_list<SimilarityMetric>(value, kSimilarityMetrics, parse_similarity_metric);
        } else if (key == "algorithms") {
            c.algorithms = parse_list<TopKAlgorithm>(value, kTopKAlgorithms, parse_topk_algorithm);
        } else if (key == "centralities") {
            c.centralities = parse_list<CentralityMetric>(value, kCentralityMetrics, parse_centrality_metric);
        } else if (key == "contagion_horizon") {
            if (value == "auto") {
                c.contagion_horizon.reset();
            } else {
                c.contagion_horizon = parse_number<std::size_t>(key, value);
            }
        } else if (key == "simple_horizon_cap") {
            c.simple_horizon_cap = parse_number<std::size_t>(key, value);
        } else if (key == "master_seed") {
            c.master_seed = parse_number<std::uint64_t>(key, value);
        } else if (key == "weighted") {
            c.weighted_prediction = parse_bool(key, value);
        } else if (key == "weighted_centrality") {
            c.weighted_centrality = parse_bool(key, value);
        } else if (key == "mse_divisor") {
            if (value == "samples") {
                c.mse_divisor = MseDivisor::samples;
            } else if (value == "horizon") {
                c.mse_divisor = MseDivisor::horizon;
            } else {
                throw UsageError("mse_divisor must be samples or horizon");
            }
        } else if (key == "lcc_max_nodes") {
            c.lcc_max_nodes = parse_number<std::size_t>(key, value);
        } else {
            throw UsageError("unknown config key '" + std::string(key) + "'");
        }
    }

    if (!(c.fraction > 0.0 && c.fraction <= 1.0)) throw UsageError("fraction must lie in (0,1]");
    if (c.t < 1) throw UsageError("t must be >= 1");
    if (c.k < 1) throw UsageError("k must be >= 1");
    if (c.trials < 1) throw UsageError("trials must be >= 1");
    if (!(c.theta >= 0.0 && c.theta <= 1.0)) throw UsageError("theta must lie in [0,1]");
    if (!(c.epsilon >= 0.0)) throw UsageError("epsilon must be non-negative");
    if (c.simple_horizon_cap < 1) throw UsageError("simple_horizon_cap must be >= 1");
    return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open config " + path.string());
    return parse_config(in, path.parent_path());
}

// ---------------------------------------------------------------- datasets

WeightedGraph bfs_sample_largest_component(const WeightedGraph& g, std::size_t max_nodes) {
    if (g.node_count() == 0) return g;
    const auto label = connected_components(g);
    std::vector<std::size_t> size;
    for (auto l : label) {
        if (l >= size.size()) size.resize(l + 1, 0);
        ++size[l];
    }
    const auto biggest = static_cast<std::size_t>(std::max_element(size.begin(), size.end()) - size.begin());
    NodeId start = 0;
    bool found = false;
    for (NodeId u = 0; u < g.node_count(); ++u) {
        if (label[u] != biggest) continue;
        if (!found || g.degree(u) > g.degree(start)) start = u;
        found = true;
    }
    const std::size_t limit = max_nodes == 0 ? size[biggest] : std::min(max_nodes, size[biggest]);
    std::vector<NodeId> order{start};
    std::vector<char> seen(g.node_count(), 0);
    seen[start] = 1;
    for (std::size_t head = 0; head < order.size() && order.size() < limit; ++head) {
        for (const auto& nb : g.neighbors(order[head])) {
            if (seen[nb.node]) continue;
            seen[nb.node] = 1;
            order.push_back(nb.node);
            if (order.size() == limit) break;
        }
    }
    std::sort(order.begin(), order.end());
    return induced_subgraph(g, std::span<const NodeId>(order));
}

WeightedGraph load_dataset(const ExperimentConfig& config) {
    WeightedGraph g;
    if (config.dataset.kind == DatasetSpec::Kind::erdos_renyi) {
        Rng rng(config.dataset.seed);
        g = erdos_renyi(config.dataset.nodes, config.dataset.probability, rng);
    } else {
        g = load_edge_list(config.dataset.path).graph;
    }
    if (config.lcc_max_nodes > 0) g = bfs_sample_largest_component(g, config.lcc_max_nodes);
    return g;
}

// ---------------------------------------------------------------- experiment

std::string CellResult::centrality_name() const {
    return centrality ? std::string(to_string(*centrality)) : std::string("none");
}

namespace {

constexpr std::size_t model_index(ContagionModel m) { return m == ContagionModel::complex ? 0 : 1; }

// Independent stream per (trial, role, cell); roles keep the original,
// training and predicted selections from sharing draws.
Rng cell_rng(std::uint64_t trial_seed, std::uint64_t role, std::uint64_t a, std::uint64_t b, std::uint64_t c) {
    std::seed_seq seq{static_cast<std::uint32_t>(trial_seed), static_cast<std::uint32_t>(trial_seed >> 32),
                      static_cast<std::uint32_t>(role), static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b),
                      static_cast<std::uint32_t>(c)};
    return Rng(seq);
}

struct Combo {
    TopKAlgorithm algorithm;
    std::optional<CentralityMetric> centrality;
    std::size_t algorithm_index;
    std::size_t centrality_index;  // 0 for "none"
};

std::vector<Combo> combos(const ExperimentConfig& config) {
    std::vector<Combo> out;
    for (std::size_t a = 0; a < config.algorithms.size(); ++a) {
        const auto alg = config.algorithms[a];
        if (!uses_centrality(alg)) {
            out.push_back({alg, std::nullopt, a, 0});
            continue;
        }
        for (std::size_t c = 0; c < config.centralities.size(); ++c) {
            out.push_back({alg, config.centralities[c], a, c + 1});
        }
    }
    return out;
}

// Centrality vectors for one graph, computed on first use. Failures are
// remembered so each cell reports the same message.
class CentralityCache {
public:
    CentralityCache(const WeightedGraph& g, const ExperimentConfig& config) : g_(g), config_(config) {}

    const CentralityVector* get(std::optional<CentralityMetric> metric) {
        if (!metric) return nullptr;
        auto it = entries_.find(*metric);
        if (it == entries_.end()) {
            Entry e;
            try {
                const bool weighted = config_.weighted_centrality && supports_weighted(*metric);
                e.vector = compute_centrality(g_, *metric, weighted, config_.centrality_params);
            } catch (const Error& err) {
                e.error = std::string(to_string(*metric)) + ": " + err.what();
            }
            it = entries_.emplace(*metric, std::move(e)).first;
        }
        if (!it->second.error.empty()) throw DataError(it->second.error);
        return &*it->second.vector;
    }

private:
    struct Entry {
        std::optional<CentralityVector> vector;
        std::string error;
    };
    const WeightedGraph& g_;
    const ExperimentConfig& config_;
    std::map<CentralityMetric, Entry> entries_;
};

struct Selection {
    SeedSet seeds;
    std::string error;
};

Selection select(const WeightedGraph& g, CentralityCache& cache, const Combo& combo, std::size_t k, Rng rng) {
    Selection s;
    try {
        s.seeds = select_seeds(g, combo.algorithm, cache.get(combo.centrality), k, rng);
    } catch (const Error& e) {
        s.error = e.what();
    }
    return s;
}

// Contagion on the original graph is a pure function of the seed set, so
// results are shared by every cell and trial that picks the same seeds.
class TraceCache {
public:
    TraceCache(const WeightedGraph& g, const ExperimentConfig& config) : g_(g), config_(config) {}

    const InfectionTrace& get(ContagionModel model, const std::vector<NodeId>& seeds) {
        std::vector<NodeId> key = seeds;
        std::sort(key.begin(), key.end());
        auto& slot = model == ContagionModel::simple ? simple_ : complex_;
        auto it = slot.find(key);
        if (it == slot.end()) it = slot.emplace(key, compute(model, key)).first;
        return it->second;
    }

private:
    InfectionTrace compute(ContagionModel model, const std::vector<NodeId>& seeds) const {
        if (model == ContagionModel::complex) {
            return complex_contagion(g_, seeds, config_.theta, config_.contagion_horizon);
        }
        if (config_.contagion_horizon) return simple_contagion(g_, seeds, config_.contagion_horizon);
        InfectionTrace trace = simple_contagion(g_, seeds);
        if (trace.horizon() > config_.simple_horizon_cap) trace = pad_to(std::move(trace), config_.simple_horizon_cap);
        return trace;
    }

    const WeightedGraph& g_;
    const ExperimentConfig& config_;
    std::map<std::vector<NodeId>, InfectionTrace> simple_;
    std::map<std::vector<NodeId>, InfectionTrace> complex_;
};

struct TrialTraces {
    std::array<std::vector<double>, 3> series;  // predicted, original, training
};

struct CellAccumulator {
    std::vector<double> accuracy;
    std::vector<double> training_accuracy;
    std::array<std::vector<double>, 2> mse;
    std::array<std::vector<TrialTraces>, 2> traces;
    std::string error;
};

double mean(const std::vector<double>& v) {
    double sum = 0.0;
    for (double x : v) sum += x;
    return sum / static_cast<double>(v.size());
}

// Pads every series to `length` with its last value and averages over trials.
std::vector<double> mean_trace(const std::vector<TrialTraces>& trials, std::size_t which, std::size_t length) {
    std::vector<double> out(length, 0.0);
    for (const auto& tr : trials) {
        const auto& s = tr.series[which];
        for (std::size_t t = 0; t < length; ++t) out[t] += t < s.size() ? s[t] : s.back();
    }
    for (double& x : out) x /= static_cast<double>(trials.size());
    return out;
}

}  // namespace

EvalReport run_experiment(const ExperimentConfig& config) { return run_experiment(config, load_dataset(config)); }

EvalReport run_experiment(const ExperimentConfig& config, const WeightedGraph& original) {
    if (original.node_count() == 0) throw DataError("experiment graph has no nodes");
    const auto cells = combos(config);
    const std::size_t per_metric = cells.size();
    std::vector<CellAccumulator> acc(config.metrics.size() * per_metric);

    CentralityCache original_centrality(original, config);
    TraceCache traces(original, config);

    for (std::size_t trial = 0; trial < config.trials; ++trial) {
        const std::uint64_t trial_seed = config.master_seed ^ static_cast<std::uint64_t>(trial);
        Rng trial_rng(trial_seed);
        const WeightedGraph training = sample_training_graph(original, config.fraction, trial_rng);
        CentralityCache training_centrality(training, config);

        std::vector<Selection> original_sel;
        std::vector<Selection> training_sel;
        for (const auto& combo : cells) {
            original_sel.push_back(select(original, original_centrality, combo, config.k,
                                          cell_rng(trial_seed, 0, combo.algorithm_index, combo.centrality_index, 0)));
            training_sel.push_back(select(training, training_centrality, combo, config.k,
                                          cell_rng(trial_seed, 1, combo.algorithm_index, combo.centrality_index, 0)));
        }

        for (std::size_t mi = 0; mi < config.metrics.size(); ++mi) {
            const auto metric = config.metrics[mi];
            std::optional<PredictedGraph> predicted;
            std::string predict_error;
            try {
                predicted = predict_future_graph(training, metric, config.weighted_prediction, config.epsilon, config.t);
            } catch (const Error& e) {
                predict_error = std::string("prediction: ") + e.what();
            }
            std::optional<CentralityCache> predicted_centrality;
            if (predicted) predicted_centrality.emplace(predicted->graph, config);

            for (std::size_t ci = 0; ci < per_metric; ++ci) {
                auto& cell = acc[mi * per_metric + ci];
                if (!cell.error.empty()) continue;
                const auto& combo = cells[ci];
                if (!predict_error.empty()) {
                    cell.error = predict_error;
                    continue;
                }
                if (!original_sel[ci].error.empty()) {
                    cell.error = "original graph: " + original_sel[ci].error;
                    continue;
                }
                if (!training_sel[ci].error.empty()) {
                    cell.error = "training graph: " + training_sel[ci].error;
                    continue;
                }
                const Selection pred = select(predicted->graph, *predicted_centrality, combo, config.k,
                                              cell_rng(trial_seed, 2, combo.algorithm_index, combo.centrality_index, mi));
                if (!pred.error.empty()) {
                    cell.error = "predicted graph: " + pred.error;
                    continue;
                }
                try {
                    const auto& truth = original_sel[ci].seeds;
                    cell.accuracy.push_back(accuracy(pred.seeds, truth));
                    cell.training_accuracy.push_back(accuracy(training_sel[ci].seeds, truth));
                    for (auto model : kContagionModels) {
                        const auto idx = model_index(model);
                        const InfectionTrace& p = traces.get(model, pred.seeds.nodes);
                        const InfectionTrace& o = traces.get(model, truth.nodes);
                        const InfectionTrace& tr = traces.get(model, training_sel[ci].seeds.nodes);
                        const std::size_t r = std::max(p.horizon(), o.horizon());
                        cell.mse[idx].push_back(mse(pad_to(p, r), pad_to(o, r), config.mse_divisor));
                        cell.traces[idx].push_back({{p.fractions, o.fractions, tr.fractions}});
                    }
                } catch (const Error& e) {
                    cell.error = e.what();
                }
            }
        }
    }

    EvalReport report;
    report.config = config;
    report.node_count = original.node_count();
    report.edge_count = original.edge_count();

    std::array<std::size_t, 2> length{1, 1};
    for (const auto& cell : acc) {
        if (!cell.error.empty()) continue;
        for (std::size_t m = 0; m < 2; ++m) {
            for (const auto& tr : cell.traces[m]) {
                for (const auto& s : tr.series) length[m] = std::max(length[m], s.size());
            }
        }
    }

    for (std::size_t mi = 0; mi < config.metrics.size(); ++mi) {
        for (std::size_t ci = 0; ci < per_metric; ++ci) {
            const auto& a = acc[mi * per_metric + ci];
            CellResult cell;
            cell.metric = config.metrics[mi];
            cell.algorithm = cells[ci].algorithm;
            cell.centrality = cells[ci].centrality;
            cell.error = a.error;
            if (cell.ok()) {
                cell.accuracy = mean(a.accuracy);
                cell.training_accuracy = mean(a.training_accuracy);
                for (std::size_t m = 0; m < 2; ++m) {
                    cell.mse[m] = mean(a.mse[m]);
                    cell.traces[m] = {mean_trace(a.traces[m], 0, length[m]), mean_trace(a.traces[m], 1, length[m]),
                                      mean_trace(a.traces[m], 2, length[m])};
                }
            }
            report.cells.push_back(std::move(cell));
        }
    }
    return report;
}

// ---------------------------------------------------------------- tables

namespace {

// Mean over the ok cells selected by `pick`; nullopt when none qualify.
template <class Pick, class Value>
std::optional<double> cell_mean(const EvalReport& report, Pick pick, Value value) {
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& cell : report.cells) {
        if (!cell.ok() || !pick(cell)) continue;
        sum += value(cell);
        ++n;
    }
    if (n == 0) return std::nullopt;
    return sum / static_cast<double>(n);
}

std::vector<std::string> metric_header(const ExperimentConfig& config, std::string first) {
    std::vector<std::string> header{std::move(first)};
    for (auto m : config.metrics) header.emplace_back(to_string(m));
    header.emplace_back("overall");
    return header;
}

// Rows of per-metric means plus an overall column; rows with any gap are
// dropped so every emitted value is finite. A final overall row averages
// the columns.
template <class RowKey>
Table accuracy_table(const EvalReport& report, std::string first_column, const std::vector<RowKey>& keys,
                     std::string (*label)(const RowKey&), bool (*matches)(const CellResult&, const RowKey&)) {
    Table table;
    table.header = metric_header(report.config, std::move(first_column));
    for (const auto& key : keys) {
        std::vector<double> row;
        bool complete = true;
        for (auto metric : report.config.metrics) {
            const auto v = cell_mean(
                report, [&](const CellResult& c) { return c.metric == metric && matches(c, key); },
                [](const CellResult& c) { return c.accuracy; });
            if (!v) {
                complete = false;
                break;
            }
            row.push_back(*v);
        }
        if (!complete) continue;
        row.push_back(mean(row));
        table.rows.emplace_back(label(key), std::move(row));
    }
    if (!table.rows.empty()) {
        std::vector<double> overall(table.header.size() - 1, 0.0);
        for (const auto& [name, row] : table.rows) {
            for (std::size_t i = 0; i < row.size(); ++i) overall[i] += row[i];
        }
        for (double& x : overall) x /= static_cast<double>(table.rows.size());
        table.rows.emplace_back("overall", std::move(overall));
    }
    return table;
}

std::string algorithm_label(const TopKAlgorithm& a) { return std::string(to_string(a)); }
bool algorithm_matches(const CellResult& c, const TopKAlgorithm& a) { return c.algorithm == a; }

std::string centrality_label(const std::optional<CentralityMetric>& m) {
    return m ? std::string(to_string(*m)) : std::string("none");
}
bool centrality_matches(const CellResult& c, const std::optional<CentralityMetric>& m) { return c.centrality == m; }

}  // namespace

Table mse_table(const EvalReport& report) {
    Table table;
    table.header = {"prediction_metric", "complex", "simple", "overall"};
    for (auto metric : report.config.metrics) {
        const auto pick = [&](const CellResult& c) { return c.metric == metric; };
        const auto complex = cell_mean(report, pick, [](const CellResult& c) { return c.mse[0]; });
        const auto simple = cell_mean(report, pick, [](const CellResult& c) { return c.mse[1]; });
        if (!complex || !simple) continue;
        table.rows.emplace_back(std::string(to_string(metric)),
                                std::vector<double>{*complex, *simple, (*complex + *simple) / 2.0});
    }
    if (!table.rows.empty()) {
        std::vector<double> overall(3, 0.0);
        for (const auto& [name, row] : table.rows) {
            for (std::size_t i = 0; i < 3; ++i) overall[i] += row[i];
        }
        for (double& x : overall) x /= static_cast<double>(table.rows.size());
        table.rows.emplace_back("overall", std::move(overall));
    }
    return table;
}

Table accuracy_by_algorithm_table(const EvalReport& report) {
    return accuracy_table<TopKAlgorithm>(report, "algorithm", report.config.algorithms, algorithm_label,
                                         algorithm_matches);
}

Table accuracy_by_centrality_table(const EvalReport& report) {
    std::vector<std::optional<CentralityMetric>> keys;
    const bool any_plain = std::any_of(report.config.algorithms.begin(), report.config.algorithms.end(),
                                       [](TopKAlgorithm a) { return !uses_centrality(a); });
    const bool any_central = std::any_of(report.config.algorithms.begin(), report.config.algorithms.end(),
                                         [](TopKAlgorithm a) { return uses_centrality(a); });
    if (any_central) keys.assign(report.config.centralities.begin(), report.config.centralities.end());
    if (any_plain) keys.emplace_back(std::nullopt);
    return accuracy_table<std::optional<CentralityMetric>>(report, "centrality", keys, centrality_label,
                                                           centrality_matches);
}

Table trace_table(const EvalReport& report, ContagionModel model, TopKAlgorithm algorithm) {
    const std::size_t m = model_index(model);
    Table table;
    table.header = {"t"};
    std::vector<std::vector<double>> columns;

    // Each column averages the ok cells of the algorithm (over centralities).
    auto average = [&](auto pick, std::size_t which) -> std::optional<std::vector<double>> {
        std::vector<double> sum;
        std::size_t n = 0;
        for (const auto& cell : report.cells) {
            if (!cell.ok() || cell.algorithm != algorithm || !pick(cell)) continue;
            const auto& s = which == 0 ? cell.traces[m].predicted
                            : which == 1 ? cell.traces[m].original
                                         : cell.traces[m].training;
            if (sum.empty()) sum.assign(s.size(), 0.0);
            for (std::size_t t = 0; t < s.size(); ++t) sum[t] += s[t];
            ++n;
        }
        if (n == 0) return std::nullopt;
        for (double& x : sum) x /= static_cast<double>(n);
        return sum;
    };

    for (auto metric : report.config.metrics) {
        if (auto col = average([&](const CellResult& c) { return c.metric == metric; }, 0)) {
            table.header.emplace_back(to_string(metric));
            columns.push_back(std::move(*col));
        }
    }
    if (columns.empty()) return table;
    // Original and training seeds do not depend on the prediction metric;
    // take them from the first metric that produced results.
    const auto first = parse_similarity_metric(table.header[1]);
    const auto same_metric = [&](const CellResult& c) { return c.metric == first; };
    table.header.emplace_back("original");
    columns.push_back(*average(same_metric, 1));
    table.header.emplace_back("training");
    columns.push_back(*average(same_metric, 2));

    for (std::size_t t = 0; t < columns.front().size(); ++t) {
        std::vector<double> row;
        for (const auto& col : columns) row.push_back(col[t]);
        table.rows.emplace_back(std::to_string(t), std::move(row));
    }
    return table;
}

void write_csv(std::ostream& out, const Table& table) {
    for (std::size_t i = 0; i < table.header.size(); ++i) out << (i ? "," : "") << table.header[i];
    out << '\n';
    for (const auto& [label, values] : table.rows) {
        out << label;
        for (double v : values) out << ',' << format_double(v);
        out << '\n';
    }
}

Table read_csv(std::istream& in) {
    Table table;
    std::string line;
    if (!std::getline(in, line)) throw DataError("empty CSV");
    for (auto f : split(line, ',')) table.header.emplace_back(f);
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto fields = split(line, ',');
        if (fields.size() != table.header.size()) {
            throw DataError("CSV line " + std::to_string(line_no) + ": expected " +
                            std::to_string(table.header.size()) + " fields");
        }
        std::vector<double> values;
        for (std::size_t i = 1; i < fields.size(); ++i) values.push_back(parse_double(fields[i]));
        table.rows.emplace_back(std::string(fields[0]), std::move(values));
    }
    return table;
}

std::vector<std::filesystem::path> emit_report(const EvalReport& report, const std::filesystem::path& out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw DataError("cannot create " + out_dir.string() + ": " + ec.message());

    std::vector<std::filesystem::path> written;
    auto write = [&](const std::string& name, auto&& body) {
        const auto path = out_dir / name;
        std::ofstream out(path, std::ios::binary);
        if (!out) throw DataError("cannot write " + path.string());
        body(out);
        if (!out) throw DataError("write failure on " + path.string());
        written.push_back(path);
    };

    write("mse_by_metric.csv", [&](std::ostream& o) { write_csv(o, mse_table(report)); });
    write("accuracy_by_algorithm.csv", [&](std::ostream& o) { write_csv(o, accuracy_by_algorithm_table(report)); });
    write("accuracy_by_centrality.csv", [&](std::ostream& o) { write_csv(o, accuracy_by_centrality_table(report)); });
    for (auto model : kContagionModels) {
        for (auto alg : report.config.algorithms) {
            const Table t = trace_table(report, model, alg);
            if (t.rows.empty()) continue;
            write("trace_" + std::string(to_string(model)) + "_" + std::string(to_string(alg)) + ".csv",
                  [&](std::ostream& o) { write_csv(o, t); });
        }
    }
    write("cells.csv", [&](std::ostream& o) {
        o << "prediction_metric,algorithm,centrality,accuracy,training_accuracy,mse_complex,mse_simple\n";
        for (const auto& c : report.cells) {
            if (!c.ok()) continue;
            o << to_string(c.metric) << ',' << to_string(c.algorithm) << ',' << c.centrality_name() << ','
              << format_double(c.accuracy) << ',' << format_double(c.training_accuracy) << ','
              << format_double(c.mse[0]) << ',' << format_double(c.mse[1]) << '\n';
        }
    });
    write("errors.csv", [&](std::ostream& o) {
        o << "prediction_metric,algorithm,centrality,message\n";
        for (const auto& c : report.cells) {
            if (c.ok()) continue;
            std::string msg = c.error;
            std::replace(msg.begin(), msg.end(), ',', ';');
            std::replace(msg.begin(), msg.end(), '\n', ' ');
            o << to_string(c.metric) << ',' << to_string(c.algorithm) << ',' << c.centrality_name() << ',' << msg
              << '\n';
        }
    });
    write("run.txt", [&](std::ostream& o) {
        const auto& c = report.config;
        o << "dataset = " << c.dataset.describe() << '\n'
          << "nodes = " << report.node_count << '\n'
          << "edges = " << report.edge_count << '\n'
          << "fraction = " << format_double(c.fraction) << '\n'
          << "t = " << c.t << '\n'
          << "k = " << c.k << '\n'
          << "trials = " << c.trials << '\n'
          << "theta = " << format_double(c.theta) << '\n'
          << "master_seed = " << c.master_seed << '\n';
    });
    return written;
}

std::string format_report_dir(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir)) throw UsageError("not a directory: " + dir.string());
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        const auto& p = entry.path();
        if (p.extension() == ".csv" && p.filename() != "errors.csv" && p.filename() != "cells.csv") {
            files.push_back(p);
        }
    }
    if (files.empty()) throw DataError("no report tables in " + dir.string());
    // Summary tables first, then traces, each alphabetically.
    std::sort(files.begin(), files.end(), [](const auto& a, const auto& b) {
        const bool ta = a.filename().string().rfind("trace_", 0) == 0;
        const bool tb = b.filename().string().rfind("trace_", 0) == 0;
        return ta != tb ? tb : a.filename() < b.filename();
    });

    std::ostringstream out;
    for (const auto& path : files) {
        std::ifstream in(path);
        const Table table = read_csv(in);
        std::vector<std::vector<std::string>> cells{table.header};
        for (const auto& [label, values] : table.rows) {
            std::vector<std::string> row{label};
            for (double v : values) {
                char buf[32];
                std::snprintf(buf, sizeof buf, "%.5f", v);
                row.emplace_back(buf);
            }
            cells.push_back(std::move(row));
        }
        std::vector<std::size_t> width(table.header.size(), 0);
        for (const auto& row : cells) {
            for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
        }
        out << path.filename().string() << '\n';
        for (const auto& row : cells) {
            for (std::size_t i = 0; i < row.size(); ++i) {
                if (i == 0) {
                    out << row[i] << std::string(width[i] - row[i].size(), ' ');
                } else {
                    out << "  " << std::string(width[i] - row[i].size(), ' ') << row[i];
                }
            }
            out << '\n';
        }
        out << '\n';
    }
    return out.str();
}

}  // namespace sphere
