#pragma once

#include "gdpam/assignment.hpp"
#include "gdpam/core.hpp"

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <vector>

namespace gdpam {

/// Reference DBSCAN result. Clusters span core points only; border points
/// carry every cluster they could legitimately join.
struct OracleResult {
	std::vector<char> core;
	std::vector<std::int32_t> cluster;   // per point, kNoise for non-core
	std::vector<PointId> noise;          // ascending
	std::map<PointId, std::vector<std::int32_t>> border_candidates;
	std::int32_t cluster_count = 0;
};

/// O(n^2) DBSCAN: exact neighbour counts, then breadth-first expansion over
/// core-to-core eps links in ascending point id order.
inline OracleResult dbscan_bruteforce(const Dataset& ds, const Params& params) {
	const std::size_t n = ds.size();
	const double eps2 = params.eps * params.eps;
	std::vector<std::vector<PointId>> near(n);
	for (PointId p = 0; p < n; ++p) {
		near[p].push_back(p);
		for (PointId q = p + 1; q < n; ++q) {
			if (squared_distance(ds.point(p), ds.point(q)) <= eps2) {
				near[p].push_back(q);
				near[q].push_back(p);
			}
		}
	}

	OracleResult out;
	out.core.assign(n, 0);
	out.cluster.assign(n, kNoise);
	for (PointId p = 0; p < n; ++p) {
		out.core[p] = near[p].size() >= params.minpts ? 1 : 0;
	}

	std::deque<PointId> frontier;
	for (PointId seed = 0; seed < n; ++seed) {
		if (out.core[seed] == 0 || out.cluster[seed] != kNoise) {
			continue;
		}
		const std::int32_t id = ++out.cluster_count;
		out.cluster[seed] = id;
		frontier.push_back(seed);
		while (!frontier.empty()) {
			const PointId p = frontier.front();
			frontier.pop_front();
			std::vector<PointId> next = near[p];
			std::ranges::sort(next);
			for (PointId q : next) {
				if (out.core[q] != 0 && out.cluster[q] == kNoise) {
					out.cluster[q] = id;
					frontier.push_back(q);
				}
			}
		}
	}

	for (PointId p = 0; p < n; ++p) {
		if (out.core[p] != 0) {
			continue;
		}
		std::vector<std::int32_t> owners;
		for (PointId q : near[p]) {
			if (out.core[q] != 0) {
				owners.push_back(out.cluster[q]);
			}
		}
		std::ranges::sort(owners);
		owners.erase(std::unique(owners.begin(), owners.end()), owners.end());
		if (owners.empty()) {
			out.noise.push_back(p);
		} else {
			out.border_candidates.emplace(p, std::move(owners));
		}
	}
	return out;
}

/// Oracle result as a labeling; each border point takes its lowest candidate cluster.
inline ClusterLabeling to_labeling(const OracleResult& oracle) {
	ClusterLabeling out;
	out.label = oracle.cluster;
	out.is_border.assign(oracle.cluster.size(), 0);
	out.cluster_count = oracle.cluster_count;
	for (const auto& [p, owners] : oracle.border_candidates) {
		out.label[p] = owners.front();
		out.is_border[p] = 1;
	}
	return out;
}

/// Same core set, same core partition up to relabeling, same noise set, and
/// every border label admissible.
inline bool equivalent(const ClusterLabeling& a, const OracleResult& o) {
	const std::size_t n = o.core.size();
	if (a.size() != n) {
		return false;
	}
	std::map<std::int32_t, std::int32_t> to_oracle;
	std::map<std::int32_t, std::int32_t> from_oracle;
	for (PointId p = 0; p < n; ++p) {
		if (a.is_core(p) != (o.core[p] != 0)) {
			return false;
		}
		if (o.core[p] == 0) {
			continue;
		}
		auto [fwd, f_new] = to_oracle.try_emplace(a.label[p], o.cluster[p]);
		auto [bwd, b_new] = from_oracle.try_emplace(o.cluster[p], a.label[p]);
		if (fwd->second != o.cluster[p] || bwd->second != a.label[p]) {
			return false;
		}
	}
	std::size_t noise = 0;
	for (PointId p = 0; p < n; ++p) {
		if (o.core[p] != 0) {
			continue;
		}
		auto candidates = o.border_candidates.find(p);
		if (a.is_noise(p)) {
			if (candidates != o.border_candidates.end()) {
				return false;
			}
			++noise;
			continue;
		}
		auto mapped = to_oracle.find(a.label[p]);
		if (candidates == o.border_candidates.end() || mapped == to_oracle.end() ||
		    !std::ranges::binary_search(candidates->second, mapped->second)) {
			return false;
		}
	}
	return noise == o.noise.size();
}

} // namespace gdpam
