#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace gdpam {

inline unsigned effective_threads(unsigned requested, std::size_t items) {
	if (requested == 0) {
		requested = std::max(1U, std::thread::hardware_concurrency());
	}
	const std::size_t cap = std::max<std::size_t>(1, items);
	return static_cast<unsigned>(std::min<std::size_t>(requested, cap));
}

/// Runs fn(worker, i) for i in [0, count), striding items across `workers` threads.
/// Worker 0 runs on the calling thread.
template <typename Fn>
void parallel_for(unsigned workers, std::size_t count, Fn&& fn) {
	if (workers <= 1) {
		for (std::size_t i = 0; i < count; ++i) {
			fn(0U, i);
		}
		return;
	}
	auto run = [&](unsigned w) {
		for (std::size_t i = w; i < count; i += workers) {
			fn(w, i);
		}
	};
	std::vector<std::jthread> pool;
	pool.reserve(workers - 1);
	for (unsigned w = 1; w < workers; ++w) {
		pool.emplace_back(run, w);
	}
	run(0);
}

} // namespace gdpam
