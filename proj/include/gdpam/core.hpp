#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gdpam {

using PointId = std::uint32_t;
using GridId = std::uint32_t;

inline constexpr GridId kNoGrid = std::numeric_limits<GridId>::max();

/// Raised when clustering parameters or a dataset shape are rejected.
class ValidationError : public std::invalid_argument {
public:
	enum class Field { eps, minpts, dimension, coordinate };

	ValidationError(Field field, const std::string& what)
		: std::invalid_argument(what), field_(field) {}

	Field field() const noexcept { return field_; }

private:
	Field field_;
};

struct Params {
	double eps = 0.0;
	std::size_t minpts = 1;
};

/// Rejects eps <= 0 (and NaN), minpts < 1 and d < 1, each with its own field tag.
inline Params validate_params(double eps, long long minpts, long long d) {
	if (!(eps > 0.0) || !std::isfinite(eps)) {
		throw ValidationError(ValidationError::Field::eps, "eps must be a positive finite number");
	}
	if (minpts < 1) {
		throw ValidationError(ValidationError::Field::minpts, "minpts must be at least 1");
	}
	if (d < 1) {
		throw ValidationError(ValidationError::Field::dimension, "dimension must be at least 1");
	}
	return Params{eps, static_cast<std::size_t>(minpts)};
}

inline double squared_distance(std::span<const double> p, std::span<const double> q) {
	double sum = 0.0;
	for (std::size_t i = 0; i < p.size(); ++i) {
		const double diff = p[i] - q[i];
		sum += diff * diff;
	}
	return sum;
}

/// Euclidean distance. Throws std::invalid_argument on a dimension mismatch.
inline double distance(std::span<const double> p, std::span<const double> q) {
	if (p.size() != q.size()) {
		throw std::invalid_argument("distance: dimension mismatch (" + std::to_string(p.size()) + " vs " +
		                            std::to_string(q.size()) + ")");
	}
	return std::sqrt(squared_distance(p, q));
}

/// Row-major point storage. Point ids are the dense row indices 0..n-1.
class Dataset {
public:
	Dataset() = default;

	explicit Dataset(std::size_t dim) : dim_(dim) {
		if (dim < 1) {
			throw ValidationError(ValidationError::Field::dimension, "dimension must be at least 1");
		}
		lo_.assign(dim, std::numeric_limits<double>::infinity());
		hi_.assign(dim, -std::numeric_limits<double>::infinity());
	}

	Dataset(std::size_t dim, std::vector<double> coords) : Dataset(dim) {
		if (coords.size() % dim != 0) {
			throw std::invalid_argument("coordinate buffer length is not a multiple of the dimension");
		}
		coords_.reserve(coords.size());
		for (std::size_t off = 0; off < coords.size(); off += dim) {
			add(std::span<const double>(coords.data() + off, dim));
		}
	}

	PointId add(std::span<const double> coords) {
		if (coords.size() != dim_) {
			throw ValidationError(ValidationError::Field::dimension,
			                      "point has " + std::to_string(coords.size()) + " coordinates, expected " +
			                          std::to_string(dim_));
		}
		for (std::size_t i = 0; i < dim_; ++i) {
			if (!std::isfinite(coords[i])) {
				throw ValidationError(ValidationError::Field::coordinate, "coordinates must be finite");
			}
		}
		for (std::size_t i = 0; i < dim_; ++i) {
			lo_[i] = std::min(lo_[i], coords[i]);
			hi_[i] = std::max(hi_[i], coords[i]);
		}
		coords_.insert(coords_.end(), coords.begin(), coords.end());
		return static_cast<PointId>(size() - 1);
	}

	std::size_t dim() const noexcept { return dim_; }
	std::size_t size() const noexcept { return dim_ == 0 ? 0 : coords_.size() / dim_; }
	bool empty() const noexcept { return coords_.empty(); }

	std::span<const double> point(PointId id) const {
		return {coords_.data() + static_cast<std::size_t>(id) * dim_, dim_};
	}

	/// Per-dimension bounding box. Undefined (inf/-inf) for an empty dataset.
	std::span<const double> bbox_min() const noexcept { return lo_; }
	std::span<const double> bbox_max() const noexcept { return hi_; }

	std::span<const double> coords() const noexcept { return coords_; }

private:
	std::size_t dim_ = 0;
	std::vector<double> coords_;
	std::vector<double> lo_;
	std::vector<double> hi_;
};

} // namespace gdpam
