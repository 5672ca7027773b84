#pragma once

#include "kmx/composite.hpp"
#include "kmx/partitioner.hpp"
#include "kmx/sketch.hpp"
#include "kmx/stream.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace kmx::bench {

enum class SketchKind { countmin, gsketch, tcm, gmatrix, kmatrix };

inline constexpr SketchKind kAllSketches[] = {SketchKind::countmin, SketchKind::gsketch, SketchKind::tcm,
                                              SketchKind::gmatrix, SketchKind::kmatrix};

std::string_view to_string(SketchKind kind) noexcept;
/// Throws ConfigError on unknown names.
SketchKind parse_sketch_kind(std::string_view name);
/// Comma-separated names, or "all".
std::vector<SketchKind> parse_sketch_list(std::string_view list);

/// Sub-seeds derived from the master seed, one per experiment phase.
enum class SeedRole : std::uint64_t { hash = 1, partition_sample = 2, query_sample = 3, prefilter = 4 };
std::uint64_t phase_seed(std::uint64_t master, SeedRole role) noexcept;

struct ExperimentConfig {
    std::vector<SketchKind> sketches{std::begin(kAllSketches), std::end(kAllSketches)};
    /// Edge-list path, or "zipf:<nodes>:<edges>:<skew>[:<seed>]".
    std::string dataset;
    std::vector<std::uint64_t> sweep_kb{200, 300, 400, 512};
    std::uint64_t build_kb = 1024;
    std::uint32_t depth = 7;
    std::size_t sample_size = 30'000;
    std::size_t queries = 10'000;
    std::uint64_t seed = 1;
    std::uint64_t g0 = 10;
    PlannerOptions planner{};
    /// Fraction of the dataset kept by reservoir prefiltering; 0 or 1 = off.
    double prefilter_fraction = 0.0;
    /// Worker threads for independent sweep cells.
    unsigned threads = 1;
};

struct ResultRow {
    std::string sketch;
    std::string dataset;
    std::uint64_t bytes = 0;
    std::uint32_t depth = 0;
    std::uint64_t seed = 0;
    std::string metric;
    double value = 0.0;
    std::optional<std::uint64_t> g0;

    friend bool operator==(const ResultRow&, const ResultRow&) = default;
};

/// Metrics measured with the clock, excluded from reproducibility checks.
bool is_wall_clock(std::string_view metric) noexcept;

/// Short dataset label for result rows: file name without .gz/.txt, or the
/// synthetic spec itself.
std::string dataset_label(std::string_view dataset);

/// Parses "zipf:<nodes>:<edges>:<skew>[:<seed>]", loads files otherwise, and
/// applies the prefilter. Throws ConfigError, IoError or ParseError.
GraphStream load_dataset(const ExperimentConfig& config);

/// Any of the five sketches behind one update/query surface.
class EdgeSketch {
public:
    /// Builds `kind` with `bytes` of counters. gSketch and kMatrix plan from
    /// `sample`; the others ignore it.
    static EdgeSketch make(SketchKind kind, std::uint64_t bytes, std::uint32_t depth, std::uint64_t seed,
                           std::span<const Edge> sample, const PlannerOptions& planner = {});

    SketchKind kind() const noexcept { return kind_; }
    void update(const Edge& e);
    std::uint64_t query_edge(NodeId src, NodeId dst) const;
    std::uint64_t counter_bytes() const noexcept;
    /// Partition plan for gSketch / kMatrix.
    const PartitionPlan* plan() const noexcept;

    const std::variant<CountMinSketch, GSketch, MatrixSketch, KMatrix>& impl() const noexcept { return impl_; }

private:
    EdgeSketch(SketchKind kind, std::variant<CountMinSketch, GSketch, MatrixSketch, KMatrix> impl)
        : kind_(kind), impl_(std::move(impl)) {}

    SketchKind kind_;
    std::variant<CountMinSketch, GSketch, MatrixSketch, KMatrix> impl_;
};

/// Optional side outputs of a run.
struct RunSinks {
    std::ostream* progress = nullptr;  // human-readable progress lines
    std::ostream* plans = nullptr;     // partition plans of gSketch/kMatrix cells
};

/// For each configured sketch at build_kb: init_seconds (sampling, planning,
/// allocation), build_seconds (init plus streaming) and edges_per_second
/// (stream length over streaming time).
std::vector<ResultRow> run_buildtime(const ExperimentConfig& config, const GraphStream& stream,
                                     const RunSinks& sinks = {});

/// For each budget in sweep_kb and each configured sketch: build, replay the
/// whole stream, then answer the shared query set (a reservoir sample of the
/// stream) and emit ARE, NEQ and PEQ rows. Truths come from `oracle`, which
/// must be built from `stream`.
std::vector<ResultRow> run_edge_query_sweep(const ExperimentConfig& config, const GraphStream& stream,
                                            const ExactOracle& oracle, const RunSinks& sinks = {});

/// Header `sketch,dataset,bytes,depth,seed,metric,value,g0`, then one line per
/// row; values use 6 significant digits, g0 is empty when not applicable.
void emit_csv(std::span<const ResultRow> rows, std::ostream& out);
/// Inverse of emit_csv. Throws ParseError on malformed lines.
std::vector<ResultRow> parse_csv(std::istream& in);

}  // namespace kmx::bench
