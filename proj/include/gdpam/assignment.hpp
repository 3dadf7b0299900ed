#pragma once

#include "gdpam/core.hpp"
#include "gdpam/grid.hpp"
#include "gdpam/hgb.hpp"
#include "gdpam/labeling.hpp"
#include "gdpam/merging.hpp"
#include "gdpam/parallel.hpp"

#include <algorithm>
#include <cstdint>
#include <unordered_map>
#include <vector>

namespace gdpam {

inline constexpr std::int32_t kNoise = 0;

/// Final per-point result. Cluster ids are 1..cluster_count; kNoise marks noise.
struct ClusterLabeling {
	std::vector<std::int32_t> label;
	std::vector<char> is_border;
	std::int32_t cluster_count = 0;

	std::size_t size() const noexcept { return label.size(); }
	bool is_noise(PointId p) const { return label[p] == kNoise; }
	bool is_core(PointId p) const { return label[p] != kNoise && is_border[p] == 0; }

	std::size_t noise_count() const { return static_cast<std::size_t>(std::ranges::count(label, kNoise)); }
	std::size_t border_count() const { return static_cast<std::size_t>(std::ranges::count(is_border, 1)); }
};

/// Labels core points by tree. Cluster ids are handed out in order of the
/// lowest core grid id of each tree.
inline ClusterLabeling extract_clusters(const ClusterForest& forest, const CoreLabels& labels,
                                        const GridRegistry& reg) {
	ClusterLabeling out;
	out.label.assign(labels.core_point.size(), kNoise);
	out.is_border.assign(labels.core_point.size(), 0);
	std::unordered_map<GridId, std::int32_t> ids;
	ids.reserve(forest.size());
	for (GridId g : labels.core_grids) {
		auto [it, fresh] = ids.try_emplace(forest.root_of(g), out.cluster_count + 1);
		if (fresh) {
			++out.cluster_count;
		}
		for (PointId p : reg.members(g)) {
			if (labels.is_core_point(p)) {
				out.label[p] = it->second;
			}
		}
	}
	return out;
}

/// Gives each non-core point the cluster of the first core point within eps,
/// scanning cells by ascending grid id and members by ascending point id.
/// Points without such a core point stay noise.
inline ClusterLabeling assign_borders_and_noise(ClusterLabeling partial, const Dataset& ds, const GridRegistry& reg,
                                                const HgbIndex* index, const CoreLabels& labels, double eps,
                                                unsigned threads = 1, QueryStats* stats = nullptr) {
	const double eps2 = eps * eps;
	const unsigned pool = effective_threads(threads, reg.size());
	struct Worker {
		NeighbourQuery query;
		std::vector<GridId> cells;
	};
	std::vector<Worker> workers;
	for (unsigned t = 0; t < pool; ++t) {
		workers.push_back({NeighbourQuery(reg, index, eps), {}});
	}

	parallel_for(pool, reg.size(), [&](unsigned t, std::size_t gi) {
		const auto g = static_cast<GridId>(gi);
		auto members = reg.members(g);
		const bool has_non_core = std::ranges::any_of(members, [&](PointId p) { return !labels.is_core_point(p); });
		if (!has_non_core) {
			return;
		}
		Worker& w = workers[t];
		auto nbrs = w.query.neighbours(g);
		w.cells.assign(nbrs.begin(), nbrs.end());
		w.cells.insert(std::ranges::upper_bound(w.cells, g), g);
		for (PointId p : members) {
			if (labels.is_core_point(p)) {
				continue;
			}
			const auto x = ds.point(p);
			for (GridId c : w.cells) {
				if (!labels.is_core_grid(c)) {
					continue;
				}
				auto hit = std::ranges::find_if(reg.members(c), [&](PointId q) {
					return labels.is_core_point(q) && squared_distance(x, ds.point(q)) <= eps2;
				});
				if (hit != reg.members(c).end()) {
					partial.label[p] = partial.label[*hit];
					partial.is_border[p] = 1;
					break;
				}
			}
		}
	});

	if (stats != nullptr) {
		for (const Worker& w : workers) {
			*stats += w.query.stats();
		}
	}
	return partial;
}

} // namespace gdpam
