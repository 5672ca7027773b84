#include "kmx/bench.hpp"

#include "kmx/error.hpp"
#include "kmx/metrics.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <istream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

namespace kmx::bench {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_between(Clock::time_point a, Clock::time_point b) {
    return std::chrono::duration<double>(b - a).count();
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    for (;;) {
        const auto pos = s.find(sep);
        parts.push_back(s.substr(0, pos));
        if (pos == std::string_view::npos) break;
        s.remove_prefix(pos + 1);
    }
    return parts;
}

template <class T>
T parse_number(std::string_view text, std::string_view what) {
    T value{};
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end || text.empty()) {
        throw ConfigError("invalid " + std::string(what) + ": '" + std::string(text) + "'");
    }
    return value;
}

double parse_real(std::string_view text, std::string_view what) {
    const std::string s(text);
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size()) {
        throw ConfigError("invalid " + std::string(what) + ": '" + s + "'");
    }
    return v;
}

std::string format_value(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

}  // namespace

std::string_view to_string(SketchKind kind) noexcept {
    switch (kind) {
        case SketchKind::countmin: return "countmin";
        case SketchKind::gsketch: return "gsketch";
        case SketchKind::tcm: return "tcm";
        case SketchKind::gmatrix: return "gmatrix";
        case SketchKind::kmatrix: return "kmatrix";
    }
    return "?";
}

SketchKind parse_sketch_kind(std::string_view name) {
    for (SketchKind k : kAllSketches) {
        if (to_string(k) == name) return k;
    }
    throw ConfigError("unknown sketch '" + std::string(name) +
                      "' (expected countmin, gsketch, tcm, gmatrix, kmatrix or all)");
}

std::vector<SketchKind> parse_sketch_list(std::string_view list) {
    if (list == "all") return {std::begin(kAllSketches), std::end(kAllSketches)};
    std::vector<SketchKind> kinds;
    for (std::string_view name : split(list, ',')) {
        const SketchKind k = parse_sketch_kind(name);
        if (std::find(kinds.begin(), kinds.end(), k) == kinds.end()) kinds.push_back(k);
    }
    return kinds;
}

std::uint64_t phase_seed(std::uint64_t master, SeedRole role) noexcept {
    return derive_seed(master, static_cast<std::uint64_t>(role));
}

bool is_wall_clock(std::string_view metric) noexcept {
    return metric == "init_seconds" || metric == "build_seconds" || metric == "edges_per_second";
}

std::string dataset_label(std::string_view dataset) {
    std::string label;
    if (dataset.starts_with("zipf:")) {
        label = dataset;
    } else {
        std::filesystem::path p(dataset);
        if (p.extension() == ".gz") p = p.stem();
        if (p.extension() == ".txt") p = p.stem();
        label = p.filename().string();
    }
    std::replace(label.begin(), label.end(), ',', '_');
    return label;
}

GraphStream load_dataset(const ExperimentConfig& config) {
    if (config.dataset.empty()) throw ConfigError("no dataset given");
    GraphStream stream;
    if (config.dataset.starts_with("zipf:")) {
        const auto parts = split(config.dataset, ':');
        if (parts.size() != 4 && parts.size() != 5) {
            throw ConfigError("synthetic dataset must be zipf:<nodes>:<edges>:<skew>[:<seed>]");
        }
        const auto nodes = parse_number<std::size_t>(parts[1], "zipf node count");
        const auto edges = parse_number<std::size_t>(parts[2], "zipf edge count");
        const double skew = parse_real(parts[3], "zipf skew");
        const auto seed = parts.size() == 5 ? parse_number<std::uint64_t>(parts[4], "zipf seed") : config.seed;
        stream = synth_zipf(nodes, edges, skew, seed);
    } else {
        stream = load_edge_list(config.dataset);
    }
    const double f = config.prefilter_fraction;
    if (f < 0.0 || f > 1.0) throw ConfigError("prefilter fraction must lie in [0, 1]");
    if (f > 0.0 && f < 1.0) stream = prefilter(stream, f, phase_seed(config.seed, SeedRole::prefilter));
    return stream;
}

// -------------------------------------------------------------- EdgeSketch

EdgeSketch EdgeSketch::make(SketchKind kind, std::uint64_t bytes, std::uint32_t depth, std::uint64_t seed,
                            std::span<const Edge> sample, const PlannerOptions& planner) {
    // Distinct families per kind, so TCM and gMatrix do not mirror each other.
    const std::uint64_t s = derive_seed(seed, static_cast<std::uint64_t>(kind));
    switch (kind) {
        case SketchKind::countmin:
            return {kind, CountMinSketch(cm_dims_from_memory(bytes, depth), depth, s)};
        case SketchKind::gsketch:
            return {kind, GSketch::build(sample, bytes, depth, s, planner)};
        case SketchKind::tcm:
            return {kind, MatrixSketch(MatrixKind::tcm, matrix_dims_from_memory(bytes, depth), depth, s)};
        case SketchKind::gmatrix:
            return {kind, MatrixSketch(MatrixKind::gmatrix, matrix_dims_from_memory(bytes, depth), depth, s)};
        case SketchKind::kmatrix:
            return {kind, KMatrix::build(sample, bytes, depth, s, planner)};
    }
    throw ConfigError("unknown sketch kind");
}

void EdgeSketch::update(const Edge& e) {
    std::visit([&](auto& sk) { sk.update(e); }, impl_);
}

std::uint64_t EdgeSketch::query_edge(NodeId src, NodeId dst) const {
    return std::visit([&](const auto& sk) { return sk.query_edge(src, dst); }, impl_);
}

std::uint64_t EdgeSketch::counter_bytes() const noexcept {
    return std::visit([](const auto& sk) { return sk.counter_bytes(); }, impl_);
}

const PartitionPlan* EdgeSketch::plan() const noexcept {
    if (const auto* g = std::get_if<GSketch>(&impl_)) return &g->plan();
    if (const auto* k = std::get_if<KMatrix>(&impl_)) return &k->plan();
    return nullptr;
}

// ------------------------------------------------------------- experiments

namespace {

bool needs_sample(SketchKind kind) { return kind == SketchKind::gsketch || kind == SketchKind::kmatrix; }

void write_plan_block(std::ostream& out, SketchKind kind, std::uint64_t bytes, const PartitionPlan& plan) {
    out << "# " << to_string(kind) << " bytes=" << bytes << " depth=" << plan.depth()
        << " allocated=" << plan.allocated_bytes() << '\n';
    write_plan(out, plan);
}

}  // namespace

std::vector<ResultRow> run_buildtime(const ExperimentConfig& config, const GraphStream& stream,
                                     const RunSinks& sinks) {
    const std::string label = dataset_label(config.dataset);
    const std::uint64_t bytes = config.build_kb * 1024;
    const std::uint64_t hash_seed = phase_seed(config.seed, SeedRole::hash);
    std::vector<ResultRow> rows;
    for (SketchKind kind : config.sketches) {
        const auto t0 = Clock::now();
        std::vector<Edge> sample;
        if (needs_sample(kind)) {
            sample = reservoir_sample(stream.edges(), config.sample_size,
                                      phase_seed(config.seed, SeedRole::partition_sample));
        }
        EdgeSketch sketch = EdgeSketch::make(kind, bytes, config.depth, hash_seed, sample, config.planner);
        const auto t1 = Clock::now();
        for (const Edge& e : stream) sketch.update(e);
        const auto t2 = Clock::now();

        const double init = seconds_between(t0, t1);
        const double streaming = seconds_between(t1, t2);
        const double rate = streaming > 0 ? static_cast<double>(stream.size()) / streaming : 0.0;
        const std::string name(to_string(kind));
        rows.push_back({name, label, bytes, config.depth, config.seed, "init_seconds", init, std::nullopt});
        rows.push_back({name, label, bytes, config.depth, config.seed, "build_seconds", init + streaming,
                        std::nullopt});
        rows.push_back({name, label, bytes, config.depth, config.seed, "edges_per_second", rate, std::nullopt});
        if (sinks.progress != nullptr) {
            *sinks.progress << name << ": init " << init << " s, stream " << streaming << " s, "
                            << static_cast<std::uint64_t>(rate) << " edges/s, " << sketch.counter_bytes()
                            << " counter bytes\n";
        }
        if (sinks.plans != nullptr && sketch.plan() != nullptr) {
            write_plan_block(*sinks.plans, kind, bytes, *sketch.plan());
        }
    }
    return rows;
}

std::vector<ResultRow> run_edge_query_sweep(const ExperimentConfig& config, const GraphStream& stream,
                                            const ExactOracle& oracle, const RunSinks& sinks) {
    if (stream.empty()) throw ConfigError("cannot run queries over an empty stream");
    if (config.queries == 0) throw ConfigError("query count must be >= 1");
    const std::string label = dataset_label(config.dataset);
    const std::uint64_t hash_seed = phase_seed(config.seed, SeedRole::hash);

    const std::vector<Edge> queries =
        reservoir_sample(stream.edges(), config.queries, phase_seed(config.seed, SeedRole::query_sample));
    const bool any_partitioned = std::any_of(config.sketches.begin(), config.sketches.end(), needs_sample);
    std::vector<Edge> sample;
    if (any_partitioned) {
        sample = reservoir_sample(stream.edges(), config.sample_size,
                                  phase_seed(config.seed, SeedRole::partition_sample));
    }
    std::vector<std::uint64_t> truths(queries.size());
    std::transform(queries.begin(), queries.end(), truths.begin(),
                   [&](const Edge& q) { return oracle.edge_freq(q.src, q.dst); });

    struct Cell {
        SketchKind kind;
        std::uint64_t bytes;
        std::vector<ResultRow> rows;
        std::string plan_text;
        std::exception_ptr error;
    };
    std::vector<Cell> cells;
    for (std::uint64_t kb : config.sweep_kb) {
        for (SketchKind kind : config.sketches) cells.push_back({kind, kb * 1024, {}, {}, nullptr});
    }

    std::mutex progress_mutex;
    auto run_cell = [&](Cell& cell) {
        EdgeSketch sketch = EdgeSketch::make(cell.kind, cell.bytes, config.depth, hash_seed, sample, config.planner);
        for (const Edge& e : stream) sketch.update(e);
        std::vector<QueryOutcome> outcomes(queries.size());
        for (std::size_t i = 0; i < queries.size(); ++i) {
            outcomes[i] = {sketch.query_edge(queries[i].src, queries[i].dst), truths[i]};
        }
        const std::string name(to_string(cell.kind));
        const double are = average_relative_error(outcomes);
        const auto neq = static_cast<double>(effective_queries(outcomes, config.g0));
        const double peq = percentage_effective(outcomes, config.g0);
        cell.rows.push_back({name, label, cell.bytes, config.depth, config.seed, "ARE", are, std::nullopt});
        cell.rows.push_back({name, label, cell.bytes, config.depth, config.seed, "NEQ", neq, config.g0});
        cell.rows.push_back({name, label, cell.bytes, config.depth, config.seed, "PEQ", peq, config.g0});
        if (sinks.plans != nullptr && sketch.plan() != nullptr) {
            std::ostringstream text;
            write_plan_block(text, cell.kind, cell.bytes, *sketch.plan());
            cell.plan_text = text.str();
        }
        if (sinks.progress != nullptr) {
            std::lock_guard lock(progress_mutex);
            *sinks.progress << name << " @ " << cell.bytes / 1024 << " KB: ARE " << are << ", NEQ " << neq
                            << ", PEQ " << peq << "%\n";
        }
    };

    const unsigned workers = std::max(1u, std::min<unsigned>(config.threads, static_cast<unsigned>(cells.size())));
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < cells.size(); i = next++) {
            try {
                run_cell(cells[i]);
            } catch (...) {
                cells[i].error = std::current_exception();
            }
        }
    };
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < workers; ++t) pool.emplace_back(worker);
    }

    std::vector<ResultRow> rows;
    for (Cell& cell : cells) {
        if (cell.error) std::rethrow_exception(cell.error);
        rows.insert(rows.end(), cell.rows.begin(), cell.rows.end());
        if (sinks.plans != nullptr) *sinks.plans << cell.plan_text;
    }
    return rows;
}

// --------------------------------------------------------------------- CSV

void emit_csv(std::span<const ResultRow> rows, std::ostream& out) {
    out << "sketch,dataset,bytes,depth,seed,metric,value,g0\n";
    for (const ResultRow& r : rows) {
        out << r.sketch << ',' << r.dataset << ',' << r.bytes << ',' << r.depth << ',' << r.seed << ',' << r.metric
            << ',' << format_value(r.value) << ',';
        if (r.g0) out << *r.g0;
        out << '\n';
    }
    if (!out) throw IoError("failed to write CSV output");
}

std::vector<ResultRow> parse_csv(std::istream& in) {
    std::vector<ResultRow> rows;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (lineno == 1) {
            if (line != "sketch,dataset,bytes,depth,seed,metric,value,g0") throw ParseError(1, "unexpected CSV header");
            continue;
        }
        if (line.empty()) continue;
        const auto f = split(line, ',');
        if (f.size() != 8) throw ParseError(lineno, "expected 8 fields, got " + std::to_string(f.size()));
        try {
            ResultRow r;
            r.sketch = f[0];
            r.dataset = f[1];
            r.bytes = parse_number<std::uint64_t>(f[2], "bytes");
            r.depth = parse_number<std::uint32_t>(f[3], "depth");
            r.seed = parse_number<std::uint64_t>(f[4], "seed");
            r.metric = f[5];
            r.value = parse_real(f[6], "value");
            if (!f[7].empty()) r.g0 = parse_number<std::uint64_t>(f[7], "g0");
            rows.push_back(std::move(r));
        } catch (const ConfigError& e) {
            throw ParseError(lineno, e.what());
        }
    }
    return rows;
}

}  // namespace kmx::bench
