// kmx-bench: build-time and edge-query experiments over graph streams.
//
//   kmx-bench build --dataset cit-HepPh.txt --sketch all
//   kmx-bench sweep --dataset zipf:10000:200000:1.2:7 --out sweep.csv
//   kmx-bench synth --nodes 10000 --edges 200000 --skew 1.2 --out zipf.txt
//   kmx-bench plan  --dataset email-EuAll.txt.gz --memory-kb 512
//
// Exit codes: 0 success, 1 configuration error, 2 I/O error, 3 infeasible
// memory budget.

#include "kmx/bench.hpp"
#include "kmx/error.hpp"
#include "kmx/kernels.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>

namespace {

enum ExitCode { kOk = 0, kConfig = 1, kIo = 2, kInfeasible = 3 };

struct Options {
    std::string sketches = "all";
    std::string dataset;
    std::vector<std::uint64_t> memory_kb;
    std::uint32_t depth = 7;
    std::size_t sample_size = 30'000;
    std::size_t queries = 10'000;
    std::uint64_t seed = 1;
    std::uint64_t g0 = 10;
    double residual_fraction = 0.10;
    std::uint32_t min_width = 4;
    std::uint32_t max_partitions = 64;
    double prefilter_fraction = 0.0;
    unsigned threads = 1;
    std::string out;
    std::string dump_plan;
    bool quiet = false;

    // synth
    std::size_t nodes = 10'000;
    std::size_t edges = 200'000;
    double skew = 1.2;
};

kmx::bench::ExperimentConfig to_config(const Options& o) {
    kmx::bench::ExperimentConfig c;
    c.sketches = kmx::bench::parse_sketch_list(o.sketches);
    c.dataset = o.dataset;
    c.depth = o.depth;
    c.sample_size = o.sample_size;
    c.queries = o.queries;
    c.seed = o.seed;
    c.g0 = o.g0;
    c.planner = {o.min_width, o.max_partitions, o.residual_fraction};
    c.prefilter_fraction = o.prefilter_fraction;
    c.threads = o.threads;
    if (!o.memory_kb.empty()) {
        c.sweep_kb = o.memory_kb;
        c.build_kb = o.memory_kb.front();
    }
    if (c.depth == 0) throw kmx::ConfigError("--depth must be >= 1");
    if (c.sample_size == 0) throw kmx::ConfigError("--sample-size must be >= 1");
    return c;
}

// Opens --out (or stdout when empty).
class Sink {
public:
    explicit Sink(const std::string& path) {
        if (!path.empty()) {
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_) throw kmx::IoError("cannot open " + path + " for writing");
        }
    }
    std::ostream& stream() { return file_ ? *file_ : std::cout; }
    void finish(const std::string& path) {
        stream().flush();
        if (!stream()) throw kmx::IoError("write failure on " + (path.empty() ? "stdout" : path));
    }

private:
    std::unique_ptr<std::ofstream> file_;
};

void load_progress(const Options& o, const kmx::GraphStream& s) {
    if (!o.quiet) std::cerr << "loaded " << s.source() << ": " << s.size() << " edges, " << s.node_count() << " nodes\n";
}

int run_build(const Options& o) {
    auto config = to_config(o);
    if (o.memory_kb.empty()) config.build_kb = 1024;
    const kmx::GraphStream stream = kmx::bench::load_dataset(config);
    load_progress(o, stream);
    Sink out(o.out);
    Sink plans(o.dump_plan.empty() ? std::string{} : o.dump_plan);
    kmx::bench::RunSinks sinks;
    sinks.progress = o.quiet ? nullptr : &std::cerr;
    if (!o.dump_plan.empty()) sinks.plans = &plans.stream();
    const auto rows = kmx::bench::run_buildtime(config, stream, sinks);
    kmx::bench::emit_csv(rows, out.stream());
    out.finish(o.out);
    return kOk;
}

int run_sweep(const Options& o) {
    const auto config = to_config(o);
    const kmx::GraphStream stream = kmx::bench::load_dataset(config);
    load_progress(o, stream);
    const kmx::ExactOracle oracle(stream.edges());
    Sink out(o.out);
    Sink plans(o.dump_plan);
    kmx::bench::RunSinks sinks;
    sinks.progress = o.quiet ? nullptr : &std::cerr;
    if (!o.dump_plan.empty()) sinks.plans = &plans.stream();
    const auto rows = kmx::bench::run_edge_query_sweep(config, stream, oracle, sinks);
    kmx::bench::emit_csv(rows, out.stream());
    out.finish(o.out);
    return kOk;
}

int run_synth(const Options& o) {
    if (o.out.empty()) throw kmx::ConfigError("synth requires --out");
    const auto stream = kmx::synth_zipf(o.nodes, o.edges, o.skew, o.seed);
    kmx::write_edge_list(stream, o.out);
    if (!o.quiet) std::cerr << "wrote " << stream.size() << " edges to " << o.out << '\n';
    return kOk;
}

int run_plan(const Options& o) {
    auto config = to_config(o);
    const std::uint64_t kb = o.memory_kb.empty() ? 512 : o.memory_kb.front();
    const kmx::GraphStream stream = kmx::bench::load_dataset(config);
    load_progress(o, stream);
    const auto sample = kmx::reservoir_sample(
        stream.edges(), config.sample_size, kmx::bench::phase_seed(config.seed, kmx::bench::SeedRole::partition_sample));
    const kmx::Geometry geometry =
        o.sketches == "gsketch" ? kmx::Geometry::countmin : kmx::Geometry::matrix;
    const auto plan = kmx::plan(kmx::estimate_stats(sample), kb * 1024, config.depth, geometry, config.planner);
    const std::string& path = o.dump_plan.empty() ? o.out : o.dump_plan;
    Sink out(path);
    kmx::write_plan(out.stream(), plan);
    out.finish(path);
    if (!o.quiet) {
        std::cerr << plan.partitions().size() << " partitions + residual, " << plan.allocated_bytes() << " of "
                  << plan.total_bytes() << " bytes allocated\n";
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Streaming graph sketch benchmark (CountMin, gSketch, TCM, gMatrix, kMatrix)"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_config("--config", "", "Flat key=value file; command-line flags take precedence");

    Options o;
    app.add_option("--sketch", o.sketches, "Sketch kinds: comma list of countmin,gsketch,tcm,gmatrix,kmatrix or 'all'")
        ->capture_default_str();
    app.add_option("--dataset", o.dataset, "Edge-list file (.gz allowed) or zipf:<nodes>:<edges>:<skew>[:<seed>]");
    app.add_option("--memory-kb", o.memory_kb,
                   "Memory budget(s) in KiB; build uses the first (default 1024), sweep all (default 200,300,400,512)")
        ->delimiter(',');
    app.add_option("--depth", o.depth, "Hash functions per sketch")->capture_default_str();
    app.add_option("--sample-size", o.sample_size, "Partitioning sample size")->capture_default_str();
    app.add_option("--queries", o.queries, "Query edges drawn from the stream")->capture_default_str();
    app.add_option("--seed", o.seed, "Master seed")->capture_default_str();
    app.add_option("--g0", o.g0, "Absolute error threshold for effective queries")->capture_default_str();
    app.add_option("--residual-fraction", o.residual_fraction, "Budget share of the residual sketch")
        ->capture_default_str();
    app.add_option("--min-width", o.min_width, "Smallest partition width the planner creates")->capture_default_str();
    app.add_option("--max-partitions", o.max_partitions, "Upper bound on planned partitions")->capture_default_str();
    app.add_option("--prefilter-fraction", o.prefilter_fraction,
                   "Keep this fraction of the dataset by reservoir sampling (0 = off)")
        ->capture_default_str();
    app.add_option("--threads", o.threads, "Parallel sweep cells")->capture_default_str();
    app.add_option("--out", o.out, "Output file (default stdout)");
    app.add_option("--dump-plan", o.dump_plan, "Write partition plans of gsketch/kmatrix to this file");
    app.add_flag("--quiet", o.quiet, "No progress output on stderr");

    auto* build = app.add_subcommand("build", "Build-time experiment at one memory budget");
    auto* sweep = app.add_subcommand("sweep", "Edge-query accuracy sweep over memory budgets");
    auto* synth = app.add_subcommand("synth", "Write a Zipf synthetic edge list");
    synth->add_option("--nodes", o.nodes, "Node count")->capture_default_str();
    synth->add_option("--edges", o.edges, "Edge count")->capture_default_str();
    synth->add_option("--skew", o.skew, "Zipf exponent")->capture_default_str();
    auto* plan = app.add_subcommand("plan", "Print the partition plan for a dataset sample");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfig;
    }

    try {
        if (!o.quiet) std::cerr << "kernels: " << kmx::kernels::isa_name(kmx::kernels::active_isa()) << '\n';
        if (build->parsed()) return run_build(o);
        if (sweep->parsed()) return run_sweep(o);
        if (synth->parsed()) return run_synth(o);
        if (plan->parsed()) return run_plan(o);
    } catch (const kmx::InfeasibleBudget& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInfeasible;
    } catch (const kmx::ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kConfig;
    } catch (const kmx::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kIo;
    } catch (const kmx::IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kIo;
    }
    return kConfig;
}
