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

#include "cnas/dagify.hpp"

#include <algorithm>
#include <functional>
#include <queue>
#include <string>
#include <utility>

#include "cnas/error.hpp"

namespace cnas {

namespace {

std::size_t idx(int v) { return static_cast<std::size_t>(v); }

// Adds input/output around vertices [0, n_inner) and builds the DAG.
ArchDag close_with_terminals(int n_inner, std::vector<Edge> edges, std::vector<VertexKind> kinds) {
	const int input = n_inner;
	const int output = n_inner + 1;
	std::vector<int> indeg(idx(n_inner), 0);
	std::vector<int> outdeg(idx(n_inner), 0);
	for (const auto& [u, v] : edges) {
		++outdeg[idx(u)];
		++indeg[idx(v)];
	}
	for (int v = 0; v < n_inner; ++v) {
		if (indeg[idx(v)] == 0) {
			edges.emplace_back(input, v);
		}
		if (outdeg[idx(v)] == 0) {
			edges.emplace_back(v, output);
		}
	}
	if (n_inner == 0) {
		edges.emplace_back(input, output);
	}
	kinds.push_back(VertexKind::Input);
	kinds.push_back(VertexKind::Output);
	return ArchDag(n_inner + 2, std::move(edges), input, output, std::move(kinds));
}

}  // namespace

std::string_view to_string(VertexKind kind) noexcept {
	switch (kind) {
		case VertexKind::Input: return "input";
		case VertexKind::Block: return "block";
		case VertexKind::Merge: return "merge";
		case VertexKind::Output: return "output";
	}
	return "?";
}

VertexKind parse_vertex_kind(std::string_view name) {
	for (auto kind : {VertexKind::Input, VertexKind::Block, VertexKind::Merge, VertexKind::Output}) {
		if (name == to_string(kind)) {
			return kind;
		}
	}
	throw InvalidArgument("unknown vertex kind '" + std::string(name) + "'");
}

ArchDag::ArchDag(int n_vertices, std::vector<Edge> edges, int input, int output, std::vector<VertexKind> kinds)
    : edges_(std::move(edges)), kinds_(std::move(kinds)), input_(input), output_(output) {
	if (n_vertices < 2 || static_cast<int>(kinds_.size()) != n_vertices) {
		throw InvariantViolation("DAG needs at least input and output and one kind per vertex");
	}
	if (input < 0 || input >= n_vertices || output < 0 || output >= n_vertices || input == output) {
		throw InvariantViolation("input/output vertex out of range");
	}
	if (kinds_[idx(input)] != VertexKind::Input || kinds_[idx(output)] != VertexKind::Output) {
		throw InvariantViolation("input/output vertices carry the wrong kind");
	}
	for (int v = 0; v < n_vertices; ++v) {
		const auto k = kinds_[idx(v)];
		if ((k == VertexKind::Input && v != input) || (k == VertexKind::Output && v != output)) {
			throw InvariantViolation("more than one input or output vertex");
		}
	}
	for (const auto& [u, v] : edges_) {
		if (u < 0 || v < 0 || u >= n_vertices || v >= n_vertices) {
			throw InvariantViolation("edge endpoint out of range");
		}
		if (u == v) {
			throw InvariantViolation("self-loop on vertex " + std::to_string(u));
		}
	}
	std::sort(edges_.begin(), edges_.end());
	if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end()) {
		throw InvariantViolation("duplicate directed edge");
	}

	succ_.assign(idx(n_vertices), {});
	pred_.assign(idx(n_vertices), {});
	for (const auto& [u, v] : edges_) {
		succ_[idx(u)].push_back(v);
		pred_[idx(v)].push_back(u);
	}
	for (auto& p : pred_) {
		std::sort(p.begin(), p.end());
	}

	for (int v = 0; v < n_vertices; ++v) {
		if (v != input && pred_[idx(v)].empty()) {
			throw InvariantViolation("vertex " + std::to_string(v) + " has no predecessor");
		}
		if (v != output && succ_[idx(v)].empty()) {
			throw InvariantViolation("vertex " + std::to_string(v) + " has no successor");
		}
	}
	if (!pred_[idx(input)].empty() || !succ_[idx(output)].empty()) {
		throw InvariantViolation("input has a predecessor or output has a successor");
	}

	std::vector<int> indeg(idx(n_vertices));
	std::priority_queue<int, std::vector<int>, std::greater<>> ready;
	for (int v = 0; v < n_vertices; ++v) {
		indeg[idx(v)] = static_cast<int>(pred_[idx(v)].size());
		if (indeg[idx(v)] == 0) {
			ready.push(v);
		}
	}
	topo_.reserve(idx(n_vertices));
	while (!ready.empty()) {
		const int v = ready.top();
		ready.pop();
		topo_.push_back(v);
		for (int w : succ_[idx(v)]) {
			if (--indeg[idx(w)] == 0) {
				ready.push(w);
			}
		}
	}
	if (static_cast<int>(topo_.size()) != n_vertices) {
		throw InvariantViolation("graph contains a cycle");
	}
}

int ArchDag::edge_index(int u, int v) const {
	const auto it = std::lower_bound(edges_.begin(), edges_.end(), Edge{u, v});
	if (it == edges_.end() || *it != Edge{u, v}) {
		return -1;
	}
	return static_cast<int>(it - edges_.begin());
}

ArchDag orient(const UndirectedGraph& g) {
	const int n = g.n_vertices;
	const auto adj = g.adjacency();

	std::vector<int> discovery(idx(n), -1);
	int clock = 0;
	std::vector<std::pair<int, std::size_t>> stack;
	for (int root = 0; root < n; ++root) {
		if (discovery[idx(root)] >= 0) {
			continue;
		}
		discovery[idx(root)] = clock++;
		stack.emplace_back(root, 0);
		while (!stack.empty()) {
			auto& [v, next] = stack.back();
			if (next == adj[idx(v)].size()) {
				stack.pop_back();
				continue;
			}
			const int w = adj[idx(v)][next++];
			if (discovery[idx(w)] < 0) {
				discovery[idx(w)] = clock++;
				stack.emplace_back(w, 0);
			}
		}
	}

	std::vector<Edge> edges;
	edges.reserve(g.edges.size());
	for (const auto& [u, v] : g.edges) {
		edges.push_back(discovery[idx(u)] < discovery[idx(v)] ? Edge{u, v} : Edge{v, u});
	}

	std::vector<VertexKind> kinds(idx(n), VertexKind::Block);
	const int n_merges = static_cast<int>(g.stage_markers.size());
	if (n_merges > 0) {
		std::vector<int> bounds{0};
		for (int marker : g.stage_markers) {
			if (marker <= bounds.back() || marker >= n) {
				throw InvalidArgument("stage markers must be strictly increasing inside (0, n)");
			}
			bounds.push_back(marker);
		}
		bounds.push_back(n);
		std::vector<int> indeg(idx(n), 0);
		std::vector<int> outdeg(idx(n), 0);
		for (const auto& [u, v] : edges) {
			++outdeg[idx(u)];
			++indeg[idx(v)];
		}
		for (int s = 0; s < n_merges; ++s) {
			const int merge = n + s;
			for (int v = bounds[idx(s)]; v < bounds[idx(s + 1)]; ++v) {
				if (outdeg[idx(v)] == 0) {
					edges.emplace_back(v, merge);
				}
			}
			for (int v = bounds[idx(s + 1)]; v < bounds[idx(s + 2)]; ++v) {
				if (indeg[idx(v)] == 0) {
					edges.emplace_back(merge, v);
				}
			}
			kinds.push_back(VertexKind::Merge);
		}
	}
	return close_with_terminals(n + n_merges, std::move(edges), std::move(kinds));
}

ArchDag wrap_blocks(int n_blocks, const std::vector<Edge>& directed_edges) {
	if (n_blocks < 0) {
		throw InvalidArgument("negative block count");
	}
	return close_with_terminals(n_blocks, directed_edges, std::vector<VertexKind>(idx(n_blocks), VertexKind::Block));
}

int longest_path_length(const ArchDag& d) {
	std::vector<int> len(idx(d.n_vertices()), 0);
	for (int v : d.topological_order()) {
		int best = 0;
		for (int p : d.predecessors(v)) {
			best = std::max(best, len[idx(p)]);
		}
		len[idx(v)] = best + 1;
	}
	return len[idx(d.output_vertex())];
}

std::vector<int> vertex_depths(const ArchDag& d) {
	std::vector<int> depth(idx(d.n_vertices()), 0);
	for (int v : d.topological_order()) {
		for (int p : d.predecessors(v)) {
			depth[idx(v)] = std::max(depth[idx(v)], depth[idx(p)] + 1);
		}
	}
	return depth;
}

int DepthWidthHistogram::total() const {
	int sum = 0;
	for (int w : width) {
		sum += w;
	}
	return sum;
}

DepthWidthHistogram depth_width_histogram(const ArchDag& d) {
	const auto depth = vertex_depths(d);
	DepthWidthHistogram h;
	h.width.assign(idx(*std::max_element(depth.begin(), depth.end()) + 1), 0);
	for (int x : depth) {
		++h.width[idx(x)];
	}
	return h;
}

}  // namespace cnas
