#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "bvgraph/bv_calculus.hpp"
#include "bvgraph/mm_space.hpp"

// Line-oriented text formats. '#' starts a comment; blank lines are ignored.
//
// space:     vertices N
//            v <id> <mass> [<x> <y>]      (N lines, ids 0..N-1 in any order)
//            edges M
//            e <a> <b> <length> <tv_weight>
// function:  <id> <value>                 (one line per vertex)
// set:       <id> ...                     (any whitespace-separated ids)
//
// Parse failures throw Error(parse_error) with "source:line: message".
namespace bvgraph {

SpacePtr parse_space(std::istream& in, const std::string& source);
BvFunction parse_function(std::istream& in, const std::string& source, SpacePtr space);
VertexSet parse_vertex_set(std::istream& in, const std::string& source, std::size_t universe);

SpacePtr read_space(const std::filesystem::path& path);
BvFunction read_function(const std::filesystem::path& path, SpacePtr space);
VertexSet read_vertex_set(const std::filesystem::path& path, std::size_t universe);

/// Numbers are written with 17 significant digits, so files re-parse to
/// bit-identical values.
void write_space(std::ostream& out, const MetricMeasureSpace& space);
void write_function(std::ostream& out, const BvFunction& u);
void write_vertex_set(std::ostream& out, const VertexSet& set);

void write_space(const std::filesystem::path& path, const MetricMeasureSpace& space);
void write_function(const std::filesystem::path& path, const BvFunction& u);
void write_vertex_set(const std::filesystem::path& path, const VertexSet& set);

}  // namespace bvgraph
