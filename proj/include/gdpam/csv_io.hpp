#pragma once

#include "gdpam/assignment.hpp"
#include "gdpam/core.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

namespace gdpam {

class ParseError : public std::runtime_error {
public:
	ParseError(std::size_t line, const std::string& what)
		: std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

	std::size_t line() const noexcept { return line_; }

private:
	std::size_t line_;
};

class IoError : public std::runtime_error {
public:
	using std::runtime_error::runtime_error;
};

namespace detail {

inline std::vector<std::string_view> split_fields(std::string_view line) {
	std::vector<std::string_view> out;
	std::size_t i = 0;
	auto is_sep = [](char ch) { return ch == ',' || ch == ' ' || ch == '\t' || ch == '\r'; };
	while (i < line.size()) {
		while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) {
			++i;
		}
		if (i >= line.size()) {
			break;
		}
		std::size_t j = i;
		while (j < line.size() && !is_sep(line[j])) {
			++j;
		}
		out.push_back(line.substr(i, j - i));
		// swallow trailing blanks and at most one comma
		while (j < line.size() && (line[j] == ' ' || line[j] == '\t' || line[j] == '\r')) {
			++j;
		}
		if (j < line.size() && line[j] == ',') {
			++j;
			if (j >= line.size() || line.find_first_not_of(" \t\r", j) == std::string_view::npos) {
				out.emplace_back();
			}
		}
		i = j;
	}
	return out;
}

inline std::optional<double> parse_number(std::string_view field) {
	if (!field.empty() && field.front() == '+') {
		field.remove_prefix(1);
	}
	double value = 0.0;
	const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
	if (ec != std::errc() || ptr != field.data() + field.size() || field.empty()) {
		return std::nullopt;
	}
	return value;
}

} // namespace detail

/// One point per line; fields separated by commas and/or blanks. A first line
/// with any non-numeric token is a header. Blank lines are ignored. A file that
/// holds only a header yields an empty dataset of the header's arity.
inline Dataset parse_csv(std::istream& in) {
	std::string line;
	std::size_t line_no = 0;
	std::optional<Dataset> ds;
	bool first = true;
	std::vector<double> row;
	while (std::getline(in, line)) {
		++line_no;
		const auto fields = detail::split_fields(line);
		if (fields.empty()) {
			continue;
		}
		row.clear();
		bool numeric = true;
		for (auto f : fields) {
			auto v = detail::parse_number(f);
			if (!v) {
				numeric = false;
				break;
			}
			row.push_back(*v);
		}
		if (first) {
			first = false;
			ds.emplace(fields.size());
			if (!numeric) {
				continue;
			}
		}
		if (!numeric) {
			throw ParseError(line_no, "non-numeric field");
		}
		if (row.size() != ds->dim()) {
			throw ParseError(line_no, "expected " + std::to_string(ds->dim()) + " fields, found " +
			                              std::to_string(row.size()));
		}
		for (double v : row) {
			if (!std::isfinite(v)) {
				throw ParseError(line_no, "non-finite coordinate");
			}
		}
		ds->add(row);
	}
	if (!ds) {
		throw ParseError(line_no, "empty input");
	}
	return std::move(*ds);
}

inline Dataset ingest_csv(const std::string& path) {
	std::ifstream in(path);
	if (!in) {
		throw IoError("cannot open " + path);
	}
	return parse_csv(in);
}

/// Shortest round-trip representation.
inline void append_double(std::string& out, double v) {
	char buf[32];
	const auto res = std::to_chars(buf, buf + sizeof buf, v);
	out.append(buf, res.ptr);
}

inline void write_csv(const Dataset& ds, std::ostream& out) {
	std::string buf;
	for (PointId p = 0; p < ds.size(); ++p) {
		buf.clear();
		auto x = ds.point(p);
		for (std::size_t i = 0; i < x.size(); ++i) {
			if (i != 0) {
				buf.push_back(',');
			}
			append_double(buf, x[i]);
		}
		buf.push_back('\n');
		out << buf;
	}
}

inline const char* flag_name(const ClusterLabeling& l, PointId p) {
	if (l.is_noise(p)) {
		return "noise";
	}
	return l.is_border[p] != 0 ? "border" : "core";
}

/// "pointId,clusterId,flag" per point; noise carries cluster id 0.
inline void write_labels(const ClusterLabeling& l, std::ostream& out) {
	for (PointId p = 0; p < l.size(); ++p) {
		out << p << ',' << l.label[p] << ',' << flag_name(l, p) << '\n';
	}
}

} // namespace gdpam
