#pragma once

// Test-only reference routines. Nothing here calls into the grid, index,
// labeling or merging code paths it is used to check.

#include "gdpam/core.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <map>
#include <random>
#include <span>
#include <vector>

namespace gdpam::testing {

/// Distance between the closed boxes [a_i*w, (a_i+1)*w] and [b_i*w, (b_i+1)*w].
inline double box_min_distance(std::span<const std::int64_t> a, std::span<const std::int64_t> b, double width) {
	double sum = 0.0;
	for (std::size_t i = 0; i < a.size(); ++i) {
		const double a_lo = static_cast<double>(a[i]) * width;
		const double a_hi = a_lo + width;
		const double b_lo = static_cast<double>(b[i]) * width;
		const double b_hi = b_lo + width;
		const double gap = std::max({0.0, b_lo - a_hi, a_lo - b_hi});
		sum += gap * gap;
	}
	return std::sqrt(sum);
}

inline std::size_t brute_neighbour_count(const Dataset& ds, PointId p, double eps) {
	std::size_t count = 0;
	for (PointId q = 0; q < ds.size(); ++q) {
		if (distance(ds.point(p), ds.point(q)) <= eps) {
			++count;
		}
	}
	return count;
}

/// Groups of core points: each group is the member list of a cell in the
/// caller's partition. Returns a component id per group, where two groups are
/// linked iff some pair of their core points is within eps; every pair of
/// groups is tested.
inline std::vector<int> merge_graph_components(const Dataset& ds, const std::vector<std::vector<PointId>>& groups,
                                               double eps) {
	const std::size_t k = groups.size();
	std::vector<std::vector<std::size_t>> adj(k);
	for (std::size_t a = 0; a < k; ++a) {
		for (std::size_t b = a + 1; b < k; ++b) {
			bool linked = false;
			for (PointId p : groups[a]) {
				for (PointId q : groups[b]) {
					if (distance(ds.point(p), ds.point(q)) <= eps) {
						linked = true;
						break;
					}
				}
				if (linked) {
					break;
				}
			}
			if (linked) {
				adj[a].push_back(b);
				adj[b].push_back(a);
			}
		}
	}
	std::vector<int> comp(k, -1);
	int next = 0;
	for (std::size_t s = 0; s < k; ++s) {
		if (comp[s] != -1) {
			continue;
		}
		std::deque<std::size_t> queue{s};
		comp[s] = next;
		while (!queue.empty()) {
			const std::size_t v = queue.front();
			queue.pop_front();
			for (std::size_t u : adj[v]) {
				if (comp[u] == -1) {
					comp[u] = next;
					queue.push_back(u);
				}
			}
		}
		++next;
	}
	return comp;
}

/// Same partition up to relabeling.
template <typename A, typename B>
bool same_partition(const std::vector<A>& a, const std::vector<B>& b) {
	if (a.size() != b.size()) {
		return false;
	}
	std::map<A, B> fwd;
	std::map<B, A> bwd;
	for (std::size_t i = 0; i < a.size(); ++i) {
		auto [f, fn] = fwd.try_emplace(a[i], b[i]);
		auto [r, rn] = bwd.try_emplace(b[i], a[i]);
		if (f->second != b[i] || r->second != a[i]) {
			return false;
		}
	}
	return true;
}

/// Gaussian blobs plus a share of uniform points in [0, extent]^d.
inline Dataset random_dataset(std::mt19937_64& rng, std::size_t n, std::size_t d, std::size_t blobs, double spread,
                              double uniform_share, double extent) {
	std::uniform_real_distribution<double> uni(0.0, extent);
	std::normal_distribution<double> gauss(0.0, spread);
	std::bernoulli_distribution pick_uniform(uniform_share);
	std::vector<double> centers(std::max<std::size_t>(blobs, 1) * d);
	for (double& c : centers) {
		c = uni(rng);
	}
	Dataset ds(d);
	std::vector<double> x(d);
	for (std::size_t i = 0; i < n; ++i) {
		if (blobs == 0 || pick_uniform(rng)) {
			for (double& v : x) {
				v = uni(rng);
			}
		} else {
			const std::size_t b = std::uniform_int_distribution<std::size_t>(0, blobs - 1)(rng);
			for (std::size_t k = 0; k < d; ++k) {
				x[k] = centers[b * d + k] + gauss(rng);
			}
		}
		ds.add(x);
	}
	return ds;
}

/// The small 2D layout used across tests (eps = 1, minpts = 4): a chain of
/// seven points with border points at both ends (p1..p7, ids 0..6), an
/// isolated noise point p8 (id 7) and a tight group of five (ids 8..12).
inline Dataset toy_layout() {
	const std::vector<double> xy{
		0.0,  0.0, 0.45, 0.0, 0.9,  0.0, 1.35, 0.0, 1.8,  0.0, 2.25, 0.0, 2.7,  0.0,
		10.0, 10.0,
		5.0,  5.0, 5.3,  5.0, 5.0,  5.3, 5.3,  5.3, 5.15, 5.15,
	};
	return Dataset(2, xy);
}

} // namespace gdpam::testing
