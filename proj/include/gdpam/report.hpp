#pragma once

#include "gdpam/csv_io.hpp"
#include "gdpam/pipeline.hpp"
#include "gdpam/urg.hpp"

#include <filesystem>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

namespace gdpam {

/// Stats document with a fixed key order. Wall-clock times are the only
/// non-deterministic part and can be left out.
inline nlohmann::ordered_json stats_json(const RunStats& st, bool with_timings = true) {
	nlohmann::ordered_json j;
	j["algo"] = std::string(to_string(st.algo));
	j["n"] = st.n;
	j["d"] = st.d;
	j["eps"] = st.eps;
	j["minpts"] = st.minpts;
	j["grid_count"] = st.grid_count;
	j["core_grid_count"] = st.core_grid_count;
	j["core_point_count"] = st.core_point_count;
	j["cluster_count"] = st.cluster_count;
	j["noise_count"] = st.noise_count;
	j["border_count"] = st.border_count;
	j["merge"] = {
		{"find_calls", st.merge.find_calls},
		{"merge_checks", st.merge.merge_checks},
		{"skipped_by_same_root", st.merge.skipped_by_same_root},
		{"skipped_by_symmetry", st.merge.skipped_by_symmetry},
		{"unions", st.merge.unions},
		{"pair_distance_evals", st.merge.pair_distance_evals},
		{"root_count", st.root_count},
	};
	auto queries = [](const QueryStats& q) {
		return nlohmann::ordered_json{
			{"queries", q.queries}, {"box_candidates", q.box_candidates}, {"corner_pruned", q.corner_pruned}};
	};
	j["neighbour_queries"] = {
		{"labeling", queries(st.labeling_queries)},
		{"merging", queries(st.merging_queries)},
		{"assignment", queries(st.assignment_queries)},
	};
	j["labeling_distance_evals"] = st.labeling_distance_evals;
	j["bitmap_bytes"] = st.bitmap_bytes;
	if (with_timings) {
		j["phase_seconds"] = {
			{"partition", st.seconds.partition}, {"index", st.seconds.index},
			{"labeling", st.seconds.labeling},   {"merging", st.seconds.merging},
			{"assignment", st.seconds.assignment}, {"total", st.seconds.total},
		};
	}
	return j;
}

inline constexpr const char* kBenchHeader =
	"source,algo,status,n,d,eps,minpts,grid_count,core_grid_count,cluster_count,noise_count,"
	"find_calls,merge_checks,skipped_by_same_root,skipped_by_symmetry,unions,pair_distance_evals,"
	"t_partition,t_index,t_labeling,t_merging,t_assignment,t_total,error";

namespace detail {

inline std::string csv_safe(std::string s) {
	for (char& ch : s) {
		if (ch == ',' || ch == '\n' || ch == '\r') {
			ch = ' ';
		}
	}
	return s;
}

inline UrgConfig urg_from_json(const nlohmann::json& j) {
	UrgConfig cfg;
	cfg.n = j.at("n").get<std::size_t>();
	cfg.c = j.value("c", cfg.c);
	cfg.d = j.at("d").get<std::size_t>();
	cfg.pnoise = j.value("pnoise", cfg.pnoise);
	cfg.seed = j.value("seed", cfg.seed);
	cfg.lo = j.value("lo", cfg.lo);
	cfg.hi = j.value("hi", cfg.hi);
	cfg.sigma = j.value("sigma", cfg.sigma);
	return cfg;
}

} // namespace detail

/// Runs every (dataset, algo) pair of a bench spec and writes one CSV row per run.
/// Spec: {"runs": [{"input": path | "urg": {n, c, d, pnoise, seed, ...},
///                  "eps": E, "minpts": M, "algos": [...], "threads": T}]}
/// A failing run is reported with status "error"; the batch continues.
/// Returns the number of failed runs.
inline std::size_t run_bench(const nlohmann::json& spec, std::ostream& report,
                             const std::filesystem::path& base_dir = {}) {
	report << kBenchHeader << '\n';
	std::size_t failures = 0;
	for (const auto& entry : spec.at("runs")) {
		std::string source;
		std::optional<Dataset> ds;
		std::string load_error;
		try {
			if (entry.contains("input")) {
				std::filesystem::path path = entry.at("input").get<std::string>();
				if (path.is_relative()) {
					path = base_dir / path;
				}
				source = path.string();
				ds = ingest_csv(path.string());
			} else {
				const UrgConfig cfg = detail::urg_from_json(entry.at("urg"));
				source = "urg:n=" + std::to_string(cfg.n) + ":c=" + std::to_string(cfg.c) + ":d=" +
				         std::to_string(cfg.d) + ":seed=" + std::to_string(cfg.seed);
				ds = generate_urg(cfg).points;
			}
		} catch (const std::exception& e) {
			load_error = e.what();
		}

		std::vector<std::string> algos;
		if (entry.contains("algos")) {
			algos = entry.at("algos").get<std::vector<std::string>>();
		} else {
			algos.push_back(entry.value("algo", std::string("gdpam")));
		}
		for (const std::string& name : algos) {
			std::string row = detail::csv_safe(source) + ',' + detail::csv_safe(name) + ',';
			try {
				if (!ds) {
					throw std::runtime_error(load_error);
				}
				const auto algo = parse_algorithm(name);
				if (!algo) {
					throw std::invalid_argument("unknown algo " + name);
				}
				const Params params =
					validate_params(entry.at("eps").get<double>(), entry.at("minpts").get<long long>(),
					                static_cast<long long>(ds->dim()));
				const RunResult r = cluster(*ds, params, {*algo, entry.value("threads", 1U)});
				const RunStats& s = r.stats;
				std::ostringstream cells;
				cells << "ok," << s.n << ',' << s.d << ',' << s.eps << ',' << s.minpts << ',' << s.grid_count << ','
				      << s.core_grid_count << ',' << s.cluster_count << ',' << s.noise_count << ','
				      << s.merge.find_calls << ',' << s.merge.merge_checks << ',' << s.merge.skipped_by_same_root
				      << ',' << s.merge.skipped_by_symmetry << ',' << s.merge.unions << ','
				      << s.merge.pair_distance_evals << ',' << s.seconds.partition << ',' << s.seconds.index << ','
				      << s.seconds.labeling << ',' << s.seconds.merging << ',' << s.seconds.assignment << ','
				      << s.seconds.total << ',';
				row += cells.str();
			} catch (const std::exception& e) {
				++failures;
				row += "error" + std::string(21, ',') + detail::csv_safe(e.what());
			}
			report << row << '\n';
		}
	}
	return failures;
}

} // namespace gdpam
