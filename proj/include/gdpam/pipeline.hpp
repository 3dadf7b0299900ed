#pragma once

#include "gdpam/assignment.hpp"
#include "gdpam/core.hpp"
#include "gdpam/grid.hpp"
#include "gdpam/hgb.hpp"
#include "gdpam/labeling.hpp"
#include "gdpam/merging.hpp"
#include "gdpam/oracle.hpp"

#include <array>
#include <chrono>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace gdpam {

/// grid-naive: linear neighbour scan; grid-hgb: bitmap index without the
/// same-root skip; gdpam: bitmap index and same-root skip.
enum class Algorithm { bruteforce, grid_naive, grid_hgb, gdpam };

inline constexpr std::array<std::string_view, 4> kAlgorithmNames{"bruteforce", "grid-naive", "grid-hgb", "gdpam"};

inline std::string_view to_string(Algorithm a) { return kAlgorithmNames[static_cast<std::size_t>(a)]; }

inline std::optional<Algorithm> parse_algorithm(std::string_view name) {
	for (std::size_t i = 0; i < kAlgorithmNames.size(); ++i) {
		if (kAlgorithmNames[i] == name) {
			return static_cast<Algorithm>(i);
		}
	}
	return std::nullopt;
}

struct PhaseTimes {
	double partition = 0.0;
	double index = 0.0;
	double labeling = 0.0;
	double merging = 0.0;
	double assignment = 0.0;
	double total = 0.0;
};

struct RunStats {
	Algorithm algo = Algorithm::gdpam;
	std::size_t n = 0;
	std::size_t d = 0;
	double eps = 0.0;
	std::size_t minpts = 0;
	std::size_t grid_count = 0;
	std::size_t core_grid_count = 0;
	std::size_t core_point_count = 0;
	std::size_t root_count = 0;
	std::int32_t cluster_count = 0;
	std::size_t noise_count = 0;
	std::size_t border_count = 0;
	MergeCounters merge;
	QueryStats labeling_queries;
	QueryStats merging_queries;
	QueryStats assignment_queries;
	std::uint64_t labeling_distance_evals = 0;
	std::size_t bitmap_bytes = 0;
	PhaseTimes seconds;
};

struct RunResult {
	ClusterLabeling labeling;
	RunStats stats;
};

struct RunOptions {
	Algorithm algo = Algorithm::gdpam;
	unsigned threads = 1;
};

namespace detail {

class Stopwatch {
public:
	double lap() {
		const auto now = std::chrono::steady_clock::now();
		const double s = std::chrono::duration<double>(now - last_).count();
		last_ = now;
		return s;
	}

private:
	std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

} // namespace detail

/// Partition, label, merge, assign.
inline RunResult cluster(const Dataset& ds, const Params& params, const RunOptions& options = {}) {
	validate_params(params.eps, static_cast<long long>(params.minpts), static_cast<long long>(ds.dim()));
	RunResult result;
	RunStats& st = result.stats;
	st.algo = options.algo;
	st.n = ds.size();
	st.d = ds.dim();
	st.eps = params.eps;
	st.minpts = params.minpts;

	detail::Stopwatch total;
	detail::Stopwatch clock;
	if (options.algo == Algorithm::bruteforce) {
		const OracleResult oracle = dbscan_bruteforce(ds, params);
		result.labeling = to_labeling(oracle);
		st.labeling_distance_evals = ds.size() * (ds.size() - (ds.size() > 0 ? 1 : 0)) / 2;
		st.seconds.labeling = clock.lap();
	} else {
		const GridRegistry reg = partition(ds, params);
		st.seconds.partition = clock.lap();

		std::optional<HgbIndex> index;
		if (options.algo != Algorithm::grid_naive) {
			index.emplace(reg);
			st.bitmap_bytes = index->bitmap_bytes();
		}
		const HgbIndex* idx = index ? &*index : nullptr;
		st.seconds.index = clock.lap();

		const CoreLabels labels = label_cores(ds, reg, idx, params, options.threads);
		st.labeling_queries = labels.query_stats;
		st.labeling_distance_evals = labels.distance_evals;
		st.seconds.labeling = clock.lap();

		NeighbourQuery query(reg, idx, params.eps);
		MergeOptions merge_options;
		merge_options.find_skip = options.algo == Algorithm::gdpam;
		const ClusterForest forest = merge_step(ds, reg, query, labels, params.eps, merge_options);
		st.merge = forest.counters();
		st.merging_queries = query.stats();
		st.root_count = forest.root_count();
		st.seconds.merging = clock.lap();

		result.labeling = assign_borders_and_noise(extract_clusters(forest, labels, reg), ds, reg, idx, labels,
		                                           params.eps, options.threads, &st.assignment_queries);
		st.seconds.assignment = clock.lap();

		st.grid_count = reg.size();
		st.core_grid_count = labels.core_count();
	}
	st.seconds.total = total.lap();

	const ClusterLabeling& l = result.labeling;
	st.cluster_count = l.cluster_count;
	st.noise_count = l.noise_count();
	st.border_count = l.border_count();
	st.core_point_count = l.size() - st.noise_count - st.border_count;
	return result;
}

} // namespace gdpam
