/*
 *   Copyright 2026 The cnas Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/**
 * @file
 *
 * Orientation of undirected generator output into single-source,
 * single-sink architecture DAGs, plus path and depth statistics.
 *
 * Vertex numbering after orient(): the N generator vertices keep their ids,
 * FB merge vertices follow (one per stage marker), then the synthetic input
 * vertex, then the synthetic output vertex.
 */

#ifndef CNAS_DAGIFY_HPP
#define CNAS_DAGIFY_HPP

#include <string_view>
#include <vector>

#include "cnas/randgraph.hpp"

namespace cnas {

enum class VertexKind { Input, Block, Merge, Output };

std::string_view to_string(VertexKind kind) noexcept;
VertexKind parse_vertex_kind(std::string_view name);

class ArchDag {
public:
	ArchDag() = default;

	/**
	 * Builds and validates a DAG. Throws InvariantViolation unless the graph is
	 * acyclic, @p input is the only source, @p output the only sink, and
	 * kinds[input] / kinds[output] are Input / Output.
	 */
	ArchDag(int n_vertices, std::vector<Edge> edges, int input, int output, std::vector<VertexKind> kinds);

	int n_vertices() const { return static_cast<int>(kinds_.size()); }
	int n_edges() const { return static_cast<int>(edges_.size()); }
	int input_vertex() const { return input_; }
	int output_vertex() const { return output_; }

	/// Ordered (u, v) pairs sorted lexicographically.
	const std::vector<Edge>& edges() const { return edges_; }
	VertexKind kind(int v) const { return kinds_[static_cast<std::size_t>(v)]; }
	const std::vector<VertexKind>& kinds() const { return kinds_; }

	/// Ascending successor / predecessor ids.
	const std::vector<int>& successors(int v) const { return succ_[static_cast<std::size_t>(v)]; }
	const std::vector<int>& predecessors(int v) const { return pred_[static_cast<std::size_t>(v)]; }

	/// Topological order; among ready vertices the smallest id goes first.
	const std::vector<int>& topological_order() const { return topo_; }

	/// Index of edge (u, v) in edges(), or -1.
	int edge_index(int u, int v) const;

	bool is_synthetic(int v) const {
		return v == input_ || v == output_;
	}

	/// Vertices that are neither input nor output.
	int n_compute_vertices() const { return n_vertices() - 2; }

private:
	std::vector<Edge> edges_;
	std::vector<VertexKind> kinds_;
	std::vector<std::vector<int>> succ_;
	std::vector<std::vector<int>> pred_;
	std::vector<int> topo_;
	int input_ = -1;
	int output_ = -1;
};

/**
 * DFS over all components (roots and neighbours in ascending id), each edge
 * oriented from the earlier-discovered endpoint to the later one. FB stage
 * markers become merge vertices joining every sink of a stage to every source
 * of the next. Finally the input feeds every in-degree-0 vertex and every
 * out-degree-0 vertex feeds the output.
 */
ArchDag orient(const UndirectedGraph& g);

/**
 * Wraps an already-directed block graph on vertices [0, n_blocks) with
 * synthetic input/output vertices (ids n_blocks and n_blocks + 1).
 */
ArchDag wrap_blocks(int n_blocks, const std::vector<Edge>& directed_edges);

/** Vertices on the longest input-to-output path. */
int longest_path_length(const ArchDag& d);

/** Longest-path distance (in edges) of every vertex from the input vertex. */
std::vector<int> vertex_depths(const ArchDag& d);

struct DepthWidthHistogram {
	/// width[depth] = number of vertices at that depth.
	std::vector<int> width;

	int total() const;
};

DepthWidthHistogram depth_width_histogram(const ArchDag& d);

}  // namespace cnas

#endif  // CNAS_DAGIFY_HPP
