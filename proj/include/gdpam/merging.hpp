#pragma once

#include "gdpam/core.hpp"
#include "gdpam/grid.hpp"
#include "gdpam/hgb.hpp"
#include "gdpam/labeling.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace gdpam {

struct MergeCounters {
	std::uint64_t find_calls = 0;
	std::uint64_t merge_checks = 0;
	std::uint64_t skipped_by_same_root = 0;
	std::uint64_t skipped_by_symmetry = 0;
	std::uint64_t unions = 0;
	std::uint64_t pair_distance_evals = 0;
};

/// Union-find over the core grids, addressed by grid id.
/// Union by rank with full path compression.
class ClusterForest {
public:
	ClusterForest() = default;

	ClusterForest(std::size_t grid_count, std::span<const GridId> core_grids)
		: slot_(grid_count, kNoGrid), grids_(core_grids.begin(), core_grids.end()) {
		parent_.resize(grids_.size());
		rank_.assign(grids_.size(), 0);
		for (std::uint32_t s = 0; s < grids_.size(); ++s) {
			if (grids_[s] >= grid_count) {
				throw std::out_of_range("ClusterForest: core grid id out of range");
			}
			slot_[grids_[s]] = s;
			parent_[s] = s;
		}
	}

	std::size_t size() const noexcept { return grids_.size(); }
	bool contains(GridId g) const { return g < slot_.size() && slot_[g] != kNoGrid; }

	/// Root grid of g's tree. Compresses the path and counts the call.
	GridId find(GridId g) {
		++counters_.find_calls;
		std::uint32_t s = slot(g);
		std::uint32_t root = s;
		while (parent_[root] != root) {
			root = parent_[root];
		}
		while (parent_[s] != root) {
			const std::uint32_t next = parent_[s];
			parent_[s] = root;
			s = next;
		}
		return grids_[root];
	}

	/// Root lookup without compression or counting.
	GridId root_of(GridId g) const {
		std::uint32_t s = slot(g);
		while (parent_[s] != s) {
			s = parent_[s];
		}
		return grids_[s];
	}

	/// Merges the trees of a and b. On equal rank the root of b goes under the root of a.
	void unite(GridId a, GridId b) {
		const std::uint32_t ra = slot(find(a));
		const std::uint32_t rb = slot(find(b));
		if (ra == rb) {
			return;
		}
		if (rank_[ra] < rank_[rb]) {
			parent_[ra] = rb;
		} else {
			parent_[rb] = ra;
			if (rank_[ra] == rank_[rb]) {
				++rank_[ra];
			}
		}
		++counters_.unions;
	}

	/// Parent grid of g (itself for a root).
	GridId parent(GridId g) const { return grids_[parent_[slot(g)]]; }

	std::size_t root_count() const {
		std::size_t roots = 0;
		for (std::uint32_t s = 0; s < parent_.size(); ++s) {
			roots += parent_[s] == s ? 1 : 0;
		}
		return roots;
	}

	MergeCounters& counters() noexcept { return counters_; }
	const MergeCounters& counters() const noexcept { return counters_; }

private:
	std::uint32_t slot(GridId g) const {
		if (!contains(g)) {
			throw std::logic_error("ClusterForest: grid " + std::to_string(g) + " is not a core grid");
		}
		return slot_[g];
	}

	std::vector<std::uint32_t> slot_;
	std::vector<GridId> grids_;
	std::vector<std::uint32_t> parent_;
	std::vector<std::uint32_t> rank_;
	MergeCounters counters_;
};

/// True iff some core point of a lies within eps of some core point of b.
namespace detail {

/// Squared distance from x to the closed box of cell g, widened by a rounding slack
/// so that every member of g lies inside it.
inline double squared_box_distance(std::span<const double> x, const GridRegistry& reg, GridId g) {
	const auto pos = reg.coord(g);
	const double w = reg.width();
	double sum = 0.0;
	for (std::size_t i = 0; i < x.size(); ++i) {
		const double lo = reg.origin()[i] + static_cast<double>(pos[i]) * w;
		const double hi = lo + w;
		const double slack = 1e-9 * (std::abs(lo) + w);
		const double gap = std::max({0.0, (lo - slack) - x[i], x[i] - (hi + slack)});
		sum += gap * gap;
	}
	return sum;
}

} // namespace detail

/// True iff some core point of a is within eps of some core point of b.
/// Points farther than eps from the other cell's box are skipped without a pair scan.
inline bool merge_check(const Dataset& ds, const GridRegistry& reg, const CoreLabels& labels, GridId a, GridId b,
                        double eps, MergeCounters& counters) {
	++counters.merge_checks;
	const double eps2 = eps * eps;
	thread_local std::vector<PointId> near_a;
	near_a.clear();
	for (PointId q : reg.members(b)) {
		if (labels.is_core_point(q) && detail::squared_box_distance(ds.point(q), reg, a) <= eps2) {
			near_a.push_back(q);
		}
	}
	if (near_a.empty()) {
		return false;
	}
	for (PointId p : reg.members(a)) {
		if (!labels.is_core_point(p)) {
			continue;
		}
		const auto x = ds.point(p);
		if (detail::squared_box_distance(x, reg, b) > eps2) {
			continue;
		}
		for (PointId q : near_a) {
			++counters.pair_distance_evals;
			if (squared_distance(x, ds.point(q)) <= eps2) {
				return true;
			}
		}
	}
	return false;
}

struct MergeOptions {
	/// Skip merge-checks between grids already sharing a root.
	bool find_skip = true;
	/// Optional processing order of the core grids (a permutation of labels.core_grids).
	std::optional<std::vector<GridId>> order;
};

/// Builds the cluster forest. Each unordered pair of neighbouring core grids is
/// considered once, from its lower id; with find_skip, pairs already in one tree
/// are not merge-checked.
inline ClusterForest merge_step(const Dataset& ds, const GridRegistry& reg, NeighbourQuery& query,
                                const CoreLabels& labels, double eps, const MergeOptions& options = {}) {
	ClusterForest forest(reg.size(), labels.core_grids);
	MergeCounters& counters = forest.counters();
	std::span<const GridId> order = options.order ? std::span<const GridId>(*options.order)
	                                              : std::span<const GridId>(labels.core_grids);
	for (GridId g : order) {
		for (GridId other : query.neighbours(g)) {
			if (!labels.is_core_grid(other)) {
				continue;
			}
			if (other < g) {
				++counters.skipped_by_symmetry;
				continue;
			}
			if (options.find_skip && forest.find(g) == forest.find(other)) {
				++counters.skipped_by_same_root;
				continue;
			}
			if (merge_check(ds, reg, labels, g, other, eps, counters)) {
				forest.unite(g, other);
			}
		}
	}
	return forest;
}

} // namespace gdpam
