#pragma once

#include "gdpam/core.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <utility>
#include <vector>

namespace gdpam {

/// Integer lattice coordinates of a cell.
struct CellCoord {
	std::vector<std::int64_t> pos;

	friend bool operator==(const CellCoord&, const CellCoord&) = default;
	friend auto operator<=>(const CellCoord&, const CellCoord&) = default;
};

/// Side length eps / sqrt(d): any two points of one cell are within eps under L2.
inline double cell_width(double eps, std::size_t d) {
	validate_params(eps, 1, static_cast<long long>(d));
	return eps / std::sqrt(static_cast<double>(d));
}

/// Half-open binning: pos[i] = floor((x[i] - origin[i]) / width).
inline void locate_into(std::span<const double> p, std::span<const double> origin, double width,
                        std::span<std::int64_t> out) {
	// 2^62 keeps neighbour ranges (pos +/- ceil(sqrt d)) far from overflow.
	constexpr double kLimit = 4.6e18;
	for (std::size_t i = 0; i < p.size(); ++i) {
		const double cell = std::floor((p[i] - origin[i]) / width);
		if (!(std::abs(cell) < kLimit)) {
			throw ValidationError(ValidationError::Field::eps, "eps is too small for the extent of the data");
		}
		out[i] = static_cast<std::int64_t>(cell);
	}
}

inline CellCoord locate(std::span<const double> p, std::span<const double> origin, double width) {
	if (origin.size() != p.size()) {
		throw std::invalid_argument("locate: origin dimension does not match point");
	}
	CellCoord c{std::vector<std::int64_t>(p.size())};
	locate_into(p, origin, width, c.pos);
	return c;
}

/// The non-empty cells of a partition. Grid ids are dense 0..N_g-1.
class GridRegistry {
public:
	struct Cell {
		CellCoord coord;
		std::vector<PointId> members;
	};

	GridRegistry() = default;

	/// Builds a registry from explicit cells; ids follow the order given.
	/// Intended for hand-made layouts; partition() is the normal entry point.
	static GridRegistry from_cells(std::size_t dim, double width, std::vector<double> origin,
	                               const std::vector<Cell>& cells) {
		GridRegistry reg;
		reg.dim_ = dim;
		reg.width_ = width;
		reg.origin_ = std::move(origin);
		reg.offsets_.push_back(0);
		std::size_t n = 0;
		for (const Cell& cell : cells) {
			if (cell.coord.pos.size() != dim) {
				throw std::invalid_argument("from_cells: coordinate arity does not match dimension");
			}
			if (cell.members.empty()) {
				throw std::invalid_argument("from_cells: empty cells are not registered");
			}
			reg.coords_.insert(reg.coords_.end(), cell.coord.pos.begin(), cell.coord.pos.end());
			reg.members_.insert(reg.members_.end(), cell.members.begin(), cell.members.end());
			std::sort(reg.members_.end() - static_cast<std::ptrdiff_t>(cell.members.size()), reg.members_.end());
			reg.offsets_.push_back(reg.members_.size());
			for (PointId p : cell.members) {
				n = std::max<std::size_t>(n, static_cast<std::size_t>(p) + 1);
			}
		}
		reg.cell_of_.assign(n, kNoGrid);
		for (GridId g = 0; g < reg.size(); ++g) {
			for (PointId p : reg.members(g)) {
				if (reg.cell_of_[p] != kNoGrid) {
					throw std::invalid_argument("from_cells: point listed in two cells");
				}
				reg.cell_of_[p] = g;
			}
		}
		reg.build_lookup();
		return reg;
	}

	std::size_t dim() const noexcept { return dim_; }
	double width() const noexcept { return width_; }
	std::span<const double> origin() const noexcept { return origin_; }

	/// Number of non-empty grids.
	std::size_t size() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }
	bool empty() const noexcept { return size() == 0; }

	std::span<const std::int64_t> coord(GridId g) const {
		return {coords_.data() + static_cast<std::size_t>(g) * dim_, dim_};
	}

	CellCoord cell_coord(GridId g) const {
		auto c = coord(g);
		return CellCoord{{c.begin(), c.end()}};
	}

	/// Member point ids in ascending order.
	std::span<const PointId> members(GridId g) const {
		return {members_.data() + offsets_[g], offsets_[g + 1] - offsets_[g]};
	}

	GridId cell_of(PointId p) const { return cell_of_[p]; }

	/// Grid id of an occupied cell, or kNoGrid.
	GridId find(std::span<const std::int64_t> pos) const {
		if (pos.size() != dim_) {
			return kNoGrid;
		}
		auto it = heads_.find(hash(pos));
		if (it == heads_.end()) {
			return kNoGrid;
		}
		for (GridId g = it->second; g != kNoGrid; g = chain_[g]) {
			if (std::ranges::equal(coord(g), pos)) {
				return g;
			}
		}
		return kNoGrid;
	}

	friend bool operator==(const GridRegistry& a, const GridRegistry& b) {
		return a.dim_ == b.dim_ && a.width_ == b.width_ && a.origin_ == b.origin_ && a.coords_ == b.coords_ &&
		       a.offsets_ == b.offsets_ && a.members_ == b.members_;
	}

private:
	friend GridRegistry partition(const Dataset& ds, const Params& params);

	static std::uint64_t hash(std::span<const std::int64_t> pos) {
		std::uint64_t h = 0x9e3779b97f4a7c15ULL;
		for (std::int64_t v : pos) {
			std::uint64_t x = static_cast<std::uint64_t>(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
			x ^= x >> 30;
			x *= 0xbf58476d1ce4e5b9ULL;
			x ^= x >> 27;
			x *= 0x94d049bb133111ebULL;
			x ^= x >> 31;
			h ^= x;
		}
		return h;
	}

	void build_lookup() {
		heads_.clear();
		heads_.reserve(size());
		chain_.assign(size(), kNoGrid);
		for (GridId g = 0; g < size(); ++g) {
			auto [it, inserted] = heads_.try_emplace(hash(coord(g)), g);
			if (!inserted) {
				chain_[g] = it->second;
				it->second = g;
			}
		}
	}

	std::size_t dim_ = 0;
	double width_ = 0.0;
	std::vector<double> origin_;
	std::vector<std::int64_t> coords_;
	std::vector<std::size_t> offsets_;
	std::vector<PointId> members_;
	std::vector<GridId> cell_of_;
	std::unordered_map<std::uint64_t, GridId> heads_;
	std::vector<GridId> chain_;
};

/// Bins every point into its eps/sqrt(d) cell, anchored at the bbox minima.
/// Grid ids follow lexicographic order of the cell coordinates.
inline GridRegistry partition(const Dataset& ds, const Params& params) {
	const std::size_t d = ds.dim();
	validate_params(params.eps, static_cast<long long>(params.minpts), static_cast<long long>(d));

	GridRegistry reg;
	reg.dim_ = d;
	reg.width_ = cell_width(params.eps, d);
	reg.offsets_.push_back(0);
	const std::size_t n = ds.size();
	if (n == 0) {
		reg.origin_.assign(d, 0.0);
		return reg;
	}
	reg.origin_.assign(ds.bbox_min().begin(), ds.bbox_min().end());

	std::vector<std::int64_t> lattice(n * d);
	for (PointId p = 0; p < n; ++p) {
		locate_into(ds.point(p), reg.origin_, reg.width_, std::span<std::int64_t>(lattice.data() + p * d, d));
	}
	auto key = [&](PointId p) { return std::span<const std::int64_t>(lattice.data() + p * d, d); };

	std::vector<PointId> order(n);
	std::iota(order.begin(), order.end(), PointId{0});
	std::ranges::stable_sort(order, [&](PointId a, PointId b) {
		return std::ranges::lexicographical_compare(key(a), key(b));
	});

	reg.members_.reserve(n);
	reg.cell_of_.assign(n, kNoGrid);
	for (std::size_t i = 0; i < n; ++i) {
		const PointId p = order[i];
		if (i == 0 || !std::ranges::equal(key(order[i - 1]), key(p))) {
			if (i != 0) {
				reg.offsets_.push_back(reg.members_.size());
			}
			reg.coords_.insert(reg.coords_.end(), key(p).begin(), key(p).end());
		}
		reg.cell_of_[p] = static_cast<GridId>(reg.offsets_.size() - 1);
		reg.members_.push_back(p);
	}
	reg.offsets_.push_back(reg.members_.size());
	reg.build_lookup();
	return reg;
}

} // namespace gdpam
