#pragma once

#include "gdpam/core.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace gdpam {

/// Synthetic clustered data: c drifting walkers plus uniform noise.
struct UrgConfig {
	std::size_t n = 0;
	std::size_t c = 1;
	std::size_t d = 2;
	double pnoise = 0.000005;  // fraction, i.e. 0.0005 %
	std::uint64_t seed = 0;
	double lo = 0.0;
	double hi = 10000.0;
	double sigma = 25.0;        // spread of points around their walker
	double drift_step = 5.0;
	double drift_every = 0.00025;  // walkers move after every ceil(drift_every * n) points
};

struct UrgData {
	Dataset points;
	std::vector<std::int32_t> source;  // generating walker 1..c, 0 for noise
};

inline void validate(const UrgConfig& cfg) {
	if (cfg.c < 1 || cfg.n < cfg.c) {
		throw std::invalid_argument("urg: need n >= c >= 1");
	}
	if (cfg.d < 1) {
		throw ValidationError(ValidationError::Field::dimension, "urg: dimension must be at least 1");
	}
	if (!(cfg.pnoise >= 0.0 && cfg.pnoise < 1.0)) {
		throw std::invalid_argument("urg: pnoise must lie in [0, 1)");
	}
	if (!(cfg.lo < cfg.hi) || !std::isfinite(cfg.lo) || !std::isfinite(cfg.hi)) {
		throw std::invalid_argument("urg: empty coordinate range");
	}
	if (!(cfg.sigma >= 0.0) || !(cfg.drift_step >= 0.0) || !(cfg.drift_every > 0.0)) {
		throw std::invalid_argument("urg: sigma, drift_step and drift_every must be non-negative (drift_every > 0)");
	}
}

inline std::size_t urg_noise_count(const UrgConfig& cfg) {
	return static_cast<std::size_t>(std::floor(cfg.pnoise * static_cast<double>(cfg.n)));
}

/// Cluster points first (round-robin over walkers), noise points last.
/// Output is a pure function of the config.
inline UrgData generate_urg(const UrgConfig& cfg) {
	validate(cfg);
	std::mt19937_64 rng(cfg.seed);
	std::uniform_real_distribution<double> uniform(cfg.lo, cfg.hi);
	std::normal_distribution<double> jitter(0.0, 1.0);
	std::uniform_int_distribution<int> move(0, 2);

	std::vector<double> walkers(cfg.c * cfg.d);
	for (double& v : walkers) {
		v = uniform(rng);
	}

	const std::size_t noise = urg_noise_count(cfg);
	const std::size_t clustered = cfg.n - noise;
	const auto period = static_cast<std::size_t>(std::ceil(cfg.drift_every * static_cast<double>(cfg.n)));

	UrgData out{Dataset(cfg.d), {}};
	out.source.reserve(cfg.n);
	std::vector<double> p(cfg.d);
	for (std::size_t i = 0; i < clustered; ++i) {
		const std::size_t w = i % cfg.c;
		for (std::size_t k = 0; k < cfg.d; ++k) {
			p[k] = std::clamp(walkers[w * cfg.d + k] + cfg.sigma * jitter(rng), cfg.lo, cfg.hi);
		}
		out.points.add(p);
		out.source.push_back(static_cast<std::int32_t>(w + 1));
		if ((i + 1) % period == 0) {
			for (double& v : walkers) {
				const int m = move(rng);
				v += m == 0 ? -cfg.drift_step : (m == 1 ? cfg.drift_step : 0.0);
			}
		}
	}
	for (std::size_t i = 0; i < noise; ++i) {
		for (std::size_t k = 0; k < cfg.d; ++k) {
			p[k] = uniform(rng);
		}
		out.points.add(p);
		out.source.push_back(0);
	}
	return out;
}

} // namespace gdpam
