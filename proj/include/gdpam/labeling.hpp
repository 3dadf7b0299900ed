#pragma once

#include "gdpam/core.hpp"
#include "gdpam/grid.hpp"
#include "gdpam/hgb.hpp"
#include "gdpam/parallel.hpp"

#include <cstdint>
#include <limits>
#include <vector>

namespace gdpam {

struct CoreLabels {
	std::vector<char> core_point;  // per point id
	std::vector<char> core_grid;   // per grid id
	std::vector<GridId> core_grids; // ascending
	QueryStats query_stats;
	std::uint64_t distance_evals = 0;

	std::size_t core_count() const noexcept { return core_grids.size(); }
	bool is_core_point(PointId p) const { return core_point[p] != 0; }
	bool is_core_grid(GridId g) const { return core_grid[g] != 0; }
};

inline constexpr std::size_t kUncapped = std::numeric_limits<std::size_t>::max();

/// |N_eps(p)| counting p itself, truncated at `cap`. `neighbours` must be the
/// corner-pruned neighbour list of p's cell.
inline std::size_t eps_neighbour_count(const Dataset& ds, const GridRegistry& reg, PointId p,
                                       std::span<const GridId> neighbours, double eps, std::size_t cap,
                                       std::uint64_t* distance_evals = nullptr) {
	const double eps2 = eps * eps;
	// every member of p's own cell is within eps
	std::size_t count = reg.members(reg.cell_of(p)).size();
	std::uint64_t evals = 0;
	const auto x = ds.point(p);
	for (GridId g : neighbours) {
		if (count >= cap) {
			break;
		}
		for (PointId q : reg.members(g)) {
			++evals;
			if (squared_distance(x, ds.point(q)) <= eps2 && ++count >= cap) {
				break;
			}
		}
	}
	if (distance_evals != nullptr) {
		*distance_evals += evals;
	}
	return count;
}

inline std::size_t eps_neighbour_count(const Dataset& ds, const GridRegistry& reg, NeighbourQuery& query, PointId p,
                                       double eps, std::size_t cap = kUncapped) {
	return eps_neighbour_count(ds, reg, p, query.neighbours(reg.cell_of(p)), eps, cap);
}

/// Marks core points and core grids. Cells holding at least minpts points are
/// core wholesale; other points count neighbours until minpts is reached.
/// `index` null selects the naive neighbour scan.
inline CoreLabels label_cores(const Dataset& ds, const GridRegistry& reg, const HgbIndex* index,
                              const Params& params, unsigned threads = 1) {
	CoreLabels labels;
	labels.core_point.assign(ds.size(), 0);
	labels.core_grid.assign(reg.size(), 0);

	struct Worker {
		NeighbourQuery query;
		std::uint64_t evals = 0;
	};
	std::vector<Worker> workers;
	const unsigned pool = effective_threads(threads, reg.size());
	for (unsigned t = 0; t < pool; ++t) {
		workers.push_back({NeighbourQuery(reg, index, params.eps)});
	}

	parallel_for(pool, reg.size(), [&](unsigned t, std::size_t gi) {
		const auto g = static_cast<GridId>(gi);
		auto members = reg.members(g);
		bool any = false;
		if (members.size() >= params.minpts) {
			for (PointId p : members) {
				labels.core_point[p] = 1;
			}
			any = true;
		} else {
			Worker& w = workers[t];
			auto nbrs = w.query.neighbours(g);
			for (PointId p : members) {
				if (eps_neighbour_count(ds, reg, p, nbrs, params.eps, params.minpts, &w.evals) >= params.minpts) {
					labels.core_point[p] = 1;
					any = true;
				}
			}
		}
		labels.core_grid[g] = any ? 1 : 0;
	});

	for (const Worker& w : workers) {
		labels.query_stats += w.query.stats();
		labels.distance_evals += w.evals;
	}
	for (GridId g = 0; g < reg.size(); ++g) {
		if (labels.core_grid[g] != 0) {
			labels.core_grids.push_back(g);
		}
	}
	return labels;
}

} // namespace gdpam
