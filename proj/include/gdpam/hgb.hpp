#pragma once

#include "gdpam/core.hpp"
#include "gdpam/grid.hpp"

#include <algorithm>
#include <bit>
#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace gdpam {

/// Smallest integer r with r*r >= d.
inline std::int64_t ceil_sqrt(std::size_t d) {
	auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(d)));
	while (r * r < static_cast<std::int64_t>(d)) {
		++r;
	}
	while (r > 0 && (r - 1) * (r - 1) >= static_cast<std::int64_t>(d)) {
		--r;
	}
	return r;
}

struct LatticeRange {
	std::int64_t lo;
	std::int64_t hi;

	friend bool operator==(const LatticeRange&, const LatticeRange&) = default;
};

/// Inclusive per-dimension window [pos - ceil(sqrt d), pos + ceil(sqrt d)].
inline LatticeRange neighbour_range(std::int64_t pos, std::size_t d) {
	const std::int64_t reach = ceil_sqrt(d);
	return {pos - reach, pos + reach};
}

/// Worst-case number of cells in the axis-aligned neighbour box: (2*ceil(sqrt d) + 1)^d.
inline boost::multiprecision::cpp_int max_box_size(std::size_t d) {
	if (d < 1) {
		throw ValidationError(ValidationError::Field::dimension, "dimension must be at least 1");
	}
	boost::multiprecision::cpp_int side = 2 * ceil_sqrt(d) + 1;
	return boost::multiprecision::pow(side, static_cast<unsigned>(d));
}

/// Fixed-capacity bit vector over grid ids whose set bits all lie inside a word window.
/// Words outside [first_word, last_word) are stale and must not be read.
class GridBitset {
public:
	GridBitset() = default;
	explicit GridBitset(std::size_t bits) { reset(bits); }

	void reset(std::size_t bits) {
		bits_ = bits;
		words_.assign((bits + 63) / 64, 0);
		first_ = last_ = 0;
	}

	std::size_t capacity() const noexcept { return bits_; }
	std::size_t first_word() const noexcept { return first_; }
	std::size_t last_word() const noexcept { return last_; }

	bool test(GridId g) const {
		const std::size_t w = g / 64;
		return w >= first_ && w < last_ && ((words_[w] >> (g % 64)) & 1U) != 0;
	}

	std::size_t count() const {
		std::size_t c = 0;
		for (std::size_t w = first_; w < last_; ++w) {
			c += static_cast<std::size_t>(std::popcount(words_[w]));
		}
		return c;
	}

	template <typename Fn>
	void for_each(Fn&& fn) const {
		for (std::size_t w = first_; w < last_; ++w) {
			std::uint64_t word = words_[w];
			while (word != 0) {
				const int bit = std::countr_zero(word);
				fn(static_cast<GridId>(w * 64 + static_cast<std::size_t>(bit)));
				word &= word - 1;
			}
		}
	}

	std::vector<GridId> ids() const {
		std::vector<GridId> out;
		for_each([&](GridId g) { out.push_back(g); });
		return out;
	}

private:
	friend class HgbIndex;

	std::size_t bits_ = 0;
	std::vector<std::uint64_t> words_;
	std::size_t first_ = 0;
	std::size_t last_ = 0;
	// query scratch
	std::vector<std::pair<std::size_t, std::size_t>> row_spans_;
	std::vector<std::uint64_t> scratch_;
};

/// HyperGrid Bitmap: one k_i x N_g bit matrix per dimension. Row j of matrix i
/// marks the grids whose i-th lattice position is the j-th smallest occupied
/// position in that dimension.
class HgbIndex {
public:
	HgbIndex() = default;

	explicit HgbIndex(const GridRegistry& reg) : dim_(reg.dim()), grids_(reg.size()) {
		words_ = (grids_ + 63) / 64;
		dims_.resize(dim_);
		std::vector<std::int64_t> values(grids_);
		for (std::size_t i = 0; i < dim_; ++i) {
			Dimension& dm = dims_[i];
			for (GridId g = 0; g < grids_; ++g) {
				values[g] = reg.coord(g)[i];
			}
			dm.positions = values;
			std::ranges::sort(dm.positions);
			dm.positions.erase(std::unique(dm.positions.begin(), dm.positions.end()), dm.positions.end());

			const std::size_t rows = dm.positions.size();
			dm.bits.assign(rows * words_, 0);
			dm.first_word.assign(rows, words_);
			dm.last_word.assign(rows, 0);
			for (GridId g = 0; g < grids_; ++g) {
				const std::size_t row = row_of(i, values[g]);
				const std::size_t w = g / 64;
				dm.bits[row * words_ + w] |= std::uint64_t{1} << (g % 64);
				dm.first_word[row] = std::min(dm.first_word[row], w);
				dm.last_word[row] = std::max(dm.last_word[row], w + 1);
			}
		}
	}

	std::size_t dim() const noexcept { return dim_; }
	std::size_t grid_count() const noexcept { return grids_; }

	/// k_i: distinct occupied positions in dimension i.
	std::size_t rows(std::size_t i) const { return dims_[i].positions.size(); }

	/// Sorted occupied positions of dimension i; row j holds positions(i)[j].
	std::span<const std::int64_t> positions(std::size_t i) const { return dims_[i].positions; }

	/// Row index of a lattice position in dimension i, or rows(i) if unoccupied.
	std::size_t row_of(std::size_t i, std::int64_t position) const {
		const auto& pos = dims_[i].positions;
		auto it = std::ranges::lower_bound(pos, position);
		if (it == pos.end() || *it != position) {
			return pos.size();
		}
		return static_cast<std::size_t>(it - pos.begin());
	}

	bool bit(std::size_t i, std::size_t row, GridId g) const {
		return ((dims_[i].bits[row * words_ + g / 64] >> (g % 64)) & 1U) != 0;
	}

	/// Bytes held by the bit matrices alone.
	std::size_t bitmap_bytes() const {
		std::size_t total = 0;
		for (const Dimension& dm : dims_) {
			total += dm.bits.size() * sizeof(std::uint64_t);
		}
		return total;
	}

	/// Grids whose position lies in neighbour_range in every dimension.
	/// Per dimension: OR the row slices in range; then AND across dimensions.
	/// `out` doubles as the query scratch, so concurrent callers each need their own.
	void query_box(std::span<const std::int64_t> pos, GridBitset& out) const {
		if (out.capacity() != grids_ || out.words_.size() != words_) {
			out.reset(grids_);
		}
		auto& spans = out.row_spans_;
		auto& tmp = out.scratch_;
		out.first_ = out.last_ = 0;
		if (grids_ == 0 || pos.size() != dim_) {
			return;
		}

		// Row spans first: the answer can only live in the intersection of the
		// per-dimension word windows.
		std::size_t win_lo = 0;
		std::size_t win_hi = words_;
		spans.resize(dim_);
		for (std::size_t i = 0; i < dim_; ++i) {
			const auto range = neighbour_range(pos[i], dim_);
			const auto& dm = dims_[i];
			const auto r0 = static_cast<std::size_t>(std::ranges::lower_bound(dm.positions, range.lo) - dm.positions.begin());
			const auto r1 = static_cast<std::size_t>(std::ranges::upper_bound(dm.positions, range.hi) - dm.positions.begin());
			if (r0 == r1) {
				return;
			}
			std::size_t lo = words_;
			std::size_t hi = 0;
			for (std::size_t r = r0; r < r1; ++r) {
				lo = std::min(lo, dm.first_word[r]);
				hi = std::max(hi, dm.last_word[r]);
			}
			win_lo = std::max(win_lo, lo);
			win_hi = std::min(win_hi, hi);
			if (win_lo >= win_hi) {
				return;
			}
			spans[i] = {r0, r1};
		}

		std::uint64_t* acc = out.words_.data();
		for (std::size_t i = 0; i < dim_; ++i) {
			const auto& dm = dims_[i];
			const auto [r0, r1] = spans[i];
			if (i == 0) {
				std::fill(acc + win_lo, acc + win_hi, 0);
				for (std::size_t r = r0; r < r1; ++r) {
					const std::uint64_t* row = dm.bits.data() + r * words_;
					for (std::size_t w = win_lo; w < win_hi; ++w) {
						acc[w] |= row[w];
					}
				}
			} else {
				tmp.assign(win_hi - win_lo, 0);
				for (std::size_t r = r0; r < r1; ++r) {
					const std::uint64_t* row = dm.bits.data() + r * words_ + win_lo;
					for (std::size_t w = 0; w < tmp.size(); ++w) {
						tmp[w] |= row[w];
					}
				}
				for (std::size_t w = win_lo; w < win_hi; ++w) {
					acc[w] &= tmp[w - win_lo];
				}
			}
			// trim zero words at both ends; an all-zero vector ends the query
			while (win_lo < win_hi && acc[win_lo] == 0) {
				++win_lo;
			}
			while (win_hi > win_lo && acc[win_hi - 1] == 0) {
				--win_hi;
			}
			if (win_lo == win_hi) {
				return;
			}
		}
		out.first_ = win_lo;
		out.last_ = win_hi;
	}

	GridBitset query_box(std::span<const std::int64_t> pos) const {
		GridBitset out(grids_);
		query_box(pos, out);
		return out;
	}

	/// Text dump: one "dim i" header per matrix, then "<position> <bits>" per row.
	void dump(std::ostream& os) const {
		for (std::size_t i = 0; i < dim_; ++i) {
			os << "dim " << i << '\n';
			for (std::size_t r = 0; r < rows(i); ++r) {
				os << dims_[i].positions[r] << ' ';
				for (GridId g = 0; g < grids_; ++g) {
					os << (bit(i, r, g) ? '1' : '0');
				}
				os << '\n';
			}
		}
	}

private:
	struct Dimension {
		std::vector<std::int64_t> positions;
		std::vector<std::uint64_t> bits;
		std::vector<std::size_t> first_word;
		std::vector<std::size_t> last_word;
	};

	std::size_t dim_ = 0;
	std::size_t grids_ = 0;
	std::size_t words_ = 0;
	std::vector<Dimension> dims_;
};

inline HgbIndex build_hgb(const GridRegistry& reg) { return HgbIndex(reg); }

/// Linear scan over every non-empty grid with the same per-dimension range test.
inline std::vector<GridId> naive_box(const GridRegistry& reg, std::span<const std::int64_t> pos) {
	std::vector<GridId> out;
	const std::size_t d = reg.dim();
	const std::int64_t reach = ceil_sqrt(d);
	for (GridId g = 0; g < reg.size(); ++g) {
		auto c = reg.coord(g);
		bool inside = true;
		for (std::size_t i = 0; i < d && inside; ++i) {
			inside = c[i] >= pos[i] - reach && c[i] <= pos[i] + reach;
		}
		if (inside) {
			out.push_back(g);
		}
	}
	return out;
}

/// Sum over dimensions of max(0, |delta| - 1)^2: squared gap between two cells in cell widths.
inline std::int64_t cell_gap_units(std::span<const std::int64_t> a, std::span<const std::int64_t> b) {
	std::int64_t sum = 0;
	for (std::size_t i = 0; i < a.size(); ++i) {
		const std::int64_t delta = a[i] > b[i] ? a[i] - b[i] : b[i] - a[i];
		const std::int64_t gap = delta > 0 ? delta - 1 : 0;
		sum += gap * gap;
	}
	return sum;
}

/// Decides which cells of a box query can hold a point within eps of some point of the query cell.
/// Cells are half-open, so points of two cells whose gap is g > 0 are strictly more than g apart:
/// a cell is kept only when its gap to the query cell is strictly below eps.
class CornerFilter {
public:
	CornerFilter(double width, double eps) {
		const double ratio = eps / width;
		// relative slack absorbs rounding in eps / sqrt(d)
		limit_ = ratio * ratio * (1.0 - 1e-9);
	}

	bool keeps(std::span<const std::int64_t> query, std::span<const std::int64_t> other) const {
		const std::int64_t units = cell_gap_units(query, other);
		return static_cast<double>(units) < limit_;
	}

private:
	double limit_ = 0.0;
};

/// Drops the query cell itself and every corner cell that cannot hold a point within eps.
inline std::vector<GridId> corner_prune(const GridRegistry& reg, GridId g, std::span<const GridId> candidates,
                                        double width, double eps) {
	const CornerFilter filter(width, eps);
	std::vector<GridId> out;
	out.reserve(candidates.size());
	auto self = reg.coord(g);
	for (GridId c : candidates) {
		if (c != g && filter.keeps(self, reg.coord(c))) {
			out.push_back(c);
		}
	}
	return out;
}

struct QueryStats {
	std::uint64_t queries = 0;
	std::uint64_t box_candidates = 0;
	std::uint64_t corner_pruned = 0;

	QueryStats& operator+=(const QueryStats& o) {
		queries += o.queries;
		box_candidates += o.box_candidates;
		corner_pruned += o.corner_pruned;
		return *this;
	}
};

/// Neighbour-grid lookup used by every clustering phase. Backed by the HGB
/// when an index is supplied, otherwise by naive_box. One instance per thread.
class NeighbourQuery {
public:
	NeighbourQuery(const GridRegistry& reg, const HgbIndex* index, double eps)
		: reg_(&reg), index_(index), filter_(reg.width(), eps) {}

	/// Corner-pruned neighbours of g in ascending id order, excluding g.
	std::span<const GridId> neighbours(GridId g) {
		out_.clear();
		auto self = reg_->coord(g);
		std::uint64_t boxed = 0;
		auto visit = [&](GridId c) {
			++boxed;
			if (c != g && filter_.keeps(self, reg_->coord(c))) {
				out_.push_back(c);
			}
		};
		if (index_ != nullptr) {
			index_->query_box(self, bits_);
			bits_.for_each(visit);
		} else {
			for (GridId c : naive_box(*reg_, self)) {
				visit(c);
			}
		}
		++stats_.queries;
		stats_.box_candidates += boxed;
		stats_.corner_pruned += boxed - 1 - out_.size();
		return out_;
	}

	const QueryStats& stats() const noexcept { return stats_; }

private:
	const GridRegistry* reg_;
	const HgbIndex* index_;
	CornerFilter filter_;
	GridBitset bits_;
	std::vector<GridId> out_;
	QueryStats stats_;
};

} // namespace gdpam
