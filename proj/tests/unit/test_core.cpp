#include "gdpam/core.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <vector>

using gdpam::distance;
using gdpam::ValidationError;

TEST_CASE("distance of hand-checked pairs", "[core]") {
	const std::vector<double> o{0, 0};
	const std::vector<double> a{3, 4};
	CHECK(distance(o, o) == 0.0);
	CHECK(distance(o, a) == 5.0);

	const std::vector<double> p{1, 2, 3};
	const std::vector<double> q{4, 6, 3};
	CHECK(distance(p, q) == 5.0);
}

TEST_CASE("distance rejects a dimension mismatch", "[core]") {
	const std::vector<double> p{1, 2};
	const std::vector<double> q{1, 2, 3};
	CHECK_THROWS_AS(distance(p, q), std::invalid_argument);
}

TEST_CASE("distance is symmetric and obeys the triangle inequality", "[core][property]") {
	std::mt19937_64 rng(7);
	std::uniform_real_distribution<double> coord(-1e3, 1e3);
	std::uniform_int_distribution<int> dim(1, 12);
	for (int trial = 0; trial < 2000; ++trial) {
		const int d = dim(rng);
		std::vector<double> a(d), b(d), c(d);
		for (int i = 0; i < d; ++i) {
			a[i] = coord(rng);
			b[i] = coord(rng);
			c[i] = coord(rng);
		}
		REQUIRE(distance(a, b) == distance(b, a));
		const double lhs = distance(a, c);
		const double rhs = distance(a, b) + distance(b, c);
		REQUIRE(lhs <= rhs * (1.0 + 1e-9));
		REQUIRE((distance(a, b) == 0.0) == (a == b));
	}
}

TEST_CASE("validate_params accepts legal values", "[core]") {
	const auto p = gdpam::validate_params(60, 20, 3);
	CHECK(p.eps == 60.0);
	CHECK(p.minpts == 20);

	const auto minimal = gdpam::validate_params(1.0, 1, 1);
	CHECK(minimal.eps == 1.0);
	CHECK(minimal.minpts == 1);
}

TEST_CASE("validate_params tags each violation", "[core]") {
	auto field_of = [](double eps, long long minpts, long long d) {
		try {
			gdpam::validate_params(eps, minpts, d);
		} catch (const ValidationError& e) {
			return e.field();
		}
		FAIL("expected a validation error");
		return ValidationError::Field::coordinate;
	};
	CHECK(field_of(0, 5, 2) == ValidationError::Field::eps);
	CHECK(field_of(-1, 5, 2) == ValidationError::Field::eps);
	CHECK(field_of(std::numeric_limits<double>::quiet_NaN(), 5, 2) == ValidationError::Field::eps);
	CHECK(field_of(1, 0, 2) == ValidationError::Field::minpts);
	CHECK(field_of(1, 3, 0) == ValidationError::Field::dimension);
}

TEST_CASE("dataset keeps ids, arity and bounding box", "[core]") {
	gdpam::Dataset ds(2);
	const std::vector<double> a{1, -2};
	const std::vector<double> b{-3, 5};
	CHECK(ds.add(a) == 0);
	CHECK(ds.add(b) == 1);
	CHECK(ds.size() == 2);
	CHECK(ds.bbox_min()[0] == -3);
	CHECK(ds.bbox_min()[1] == -2);
	CHECK(ds.bbox_max()[0] == 1);
	CHECK(ds.bbox_max()[1] == 5);

	const std::vector<double> wrong{1, 2, 3};
	CHECK_THROWS_AS(ds.add(wrong), ValidationError);
	const std::vector<double> bad{1, std::numeric_limits<double>::infinity()};
	CHECK_THROWS_AS(ds.add(bad), ValidationError);

	// duplicates are separate points
	CHECK(ds.add(a) == 2);
}
