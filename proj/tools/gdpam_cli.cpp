#include "gdpam/gdpam.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

namespace {

constexpr int kExitIo = 1;
constexpr int kExitInvalidParams = 2;
constexpr int kExitParse = 3;
constexpr int kExitBenchFailures = 4;

struct ClusterArgs {
	std::string input;
	std::string output;
	std::string stats;
	double eps = 0.0;
	long long minpts = 0;
	std::string algo = "gdpam";
	unsigned threads = 1;
	bool no_timings = false;
};

struct GenerateArgs {
	gdpam::UrgConfig cfg;
	std::string output;
	std::string labels;
};

struct BenchArgs {
	std::string spec;
	std::string report;
};

template <typename Fn>
void with_output(const std::string& path, Fn&& fn) {
	if (path.empty() || path == "-") {
		fn(std::cout);
		std::cout.flush();
		return;
	}
	std::ofstream out(path, std::ios::binary);
	if (!out) {
		throw gdpam::IoError("cannot open " + path + " for writing");
	}
	fn(out);
	out.flush();
	if (!out) {
		throw gdpam::IoError("failed writing " + path);
	}
}

int run_cluster(const ClusterArgs& args) {
	const auto algo = gdpam::parse_algorithm(args.algo);
	if (!algo) {
		std::cerr << "error: unknown algo '" << args.algo << "'\n";
		return kExitInvalidParams;
	}
	const gdpam::Dataset ds = gdpam::ingest_csv(args.input);
	const gdpam::Params params =
		gdpam::validate_params(args.eps, args.minpts, static_cast<long long>(std::max<std::size_t>(ds.dim(), 1)));
	const gdpam::RunResult result = gdpam::cluster(ds, params, {*algo, args.threads});

	with_output(args.output, [&](std::ostream& os) { gdpam::write_labels(result.labeling, os); });
	if (!args.stats.empty()) {
		with_output(args.stats,
		            [&](std::ostream& os) { os << gdpam::stats_json(result.stats, !args.no_timings).dump(2) << '\n'; });
	}
	return 0;
}

int run_generate(const GenerateArgs& args) {
	const gdpam::UrgData data = gdpam::generate_urg(args.cfg);
	with_output(args.output, [&](std::ostream& os) { gdpam::write_csv(data.points, os); });
	if (!args.labels.empty()) {
		with_output(args.labels, [&](std::ostream& os) {
			for (std::int32_t s : data.source) {
				os << s << '\n';
			}
		});
	}
	return 0;
}

int run_bench(const BenchArgs& args) {
	std::ifstream in(args.spec);
	if (!in) {
		throw gdpam::IoError("cannot open " + args.spec);
	}
	nlohmann::json spec;
	try {
		spec = nlohmann::json::parse(in);
	} catch (const nlohmann::json::exception& e) {
		std::cerr << "error: bench spec: " << e.what() << '\n';
		return kExitParse;
	}
	const auto base = std::filesystem::path(args.spec).parent_path();
	std::size_t failures = 0;
	with_output(args.report, [&](std::ostream& os) { failures = gdpam::run_bench(spec, os, base); });
	if (failures != 0) {
		std::cerr << failures << " bench run(s) failed\n";
		return kExitBenchFailures;
	}
	return 0;
}

} // namespace

int main(int argc, char** argv) {
	CLI::App app{"Grid-based exact DBSCAN with bitmap neighbour queries and union-find merging"};
	app.require_subcommand(1);

	ClusterArgs cluster;
	auto* cmd_cluster = app.add_subcommand("cluster", "Cluster a CSV dataset");
	cmd_cluster->add_option("--input", cluster.input, "Input CSV (one point per line)")->required();
	cmd_cluster->add_option("--eps", cluster.eps, "Neighbourhood radius")->required();
	cmd_cluster->add_option("--minpts", cluster.minpts, "Minimum neighbourhood size (point itself included)")
		->required();
	cmd_cluster->add_option("--algo", cluster.algo, "bruteforce | grid-naive | grid-hgb | gdpam")
		->capture_default_str();
	cmd_cluster->add_option("--output", cluster.output, "Label file (default: stdout)");
	cmd_cluster->add_option("--stats", cluster.stats, "Write run statistics as JSON");
	cmd_cluster->add_option("--threads", cluster.threads, "Threads for labeling and assignment (0 = all cores)")
		->capture_default_str();
	cmd_cluster->add_flag("--no-timings", cluster.no_timings, "Leave wall-clock phase times out of the stats");

	GenerateArgs gen;
	auto* cmd_generate = app.add_subcommand("generate", "Generate a synthetic clustered dataset");
	cmd_generate->add_option("--n", gen.cfg.n, "Number of points")->required();
	cmd_generate->add_option("--c", gen.cfg.c, "Number of clusters")->required();
	cmd_generate->add_option("--d", gen.cfg.d, "Dimension")->required();
	cmd_generate->add_option("--pnoise", gen.cfg.pnoise, "Noise fraction")->capture_default_str();
	cmd_generate->add_option("--seed", gen.cfg.seed, "PRNG seed")->capture_default_str();
	cmd_generate->add_option("--sigma", gen.cfg.sigma, "Spread of points around their walker")
		->capture_default_str();
	cmd_generate->add_option("--output", gen.output, "Output CSV")->required();
	cmd_generate->add_option("--labels", gen.labels, "Optional sidecar with the generating walker per point");

	BenchArgs bench;
	auto* cmd_bench = app.add_subcommand("bench", "Run a batch of clusterings and report counters and timings");
	cmd_bench->add_option("--spec", bench.spec, "Bench spec (JSON)")->required();
	cmd_bench->add_option("--report", bench.report, "Report CSV (default: stdout)");

	CLI11_PARSE(app, argc, argv);

	try {
		if (*cmd_cluster) {
			return run_cluster(cluster);
		}
		if (*cmd_generate) {
			return run_generate(gen);
		}
		if (*cmd_bench) {
			return run_bench(bench);
		}
	} catch (const gdpam::ValidationError& e) {
		std::cerr << "error: " << e.what() << '\n';
		return kExitInvalidParams;
	} catch (const gdpam::ParseError& e) {
		std::cerr << "error: " << e.what() << '\n';
		return kExitParse;
	} catch (const std::invalid_argument& e) {
		std::cerr << "error: " << e.what() << '\n';
		return kExitInvalidParams;
	} catch (const std::exception& e) {
		std::cerr << "error: " << e.what() << '\n';
		return kExitIo;
	}
	return 0;
}
