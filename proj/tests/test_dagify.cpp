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

#include <doctest.h>

#include "cnas/dagify.hpp"
#include "cnas/error.hpp"
#include "cnas/randgraph.hpp"
#include "support.hpp"

using namespace cnas;

namespace {

UndirectedGraph graph(int n, std::vector<Edge> edges) {
	UndirectedGraph g;
	g.n_vertices = n;
	g.edges = std::move(edges);
	g.normalize();
	return g;
}

}  // namespace

TEST_CASE("path orientation") {
	const auto d = orient(graph(3, {{0, 1}, {1, 2}}));
	CHECK(d.n_vertices() == 5);
	CHECK(d.edge_index(0, 1) >= 0);
	CHECK(d.edge_index(1, 2) >= 0);
	CHECK(d.edge_index(d.input_vertex(), 0) >= 0);
	CHECK(d.edge_index(2, d.output_vertex()) >= 0);
	CHECK(longest_path_length(d) == 5);
}

TEST_CASE("edgeless graph") {
	const auto d = orient(graph(3, {}));
	CHECK(longest_path_length(d) == 3);
	CHECK(d.successors(d.input_vertex()).size() == 3);
	const auto empty = orient(graph(0, {}));
	CHECK(empty.n_vertices() == 2);
	CHECK(longest_path_length(empty) == 2);
}

TEST_CASE("triangle orientation and histogram") {
	const auto d = orient(graph(3, {{0, 1}, {1, 2}, {0, 2}}));
	CHECK(d.edge_index(0, 1) >= 0);
	CHECK(d.edge_index(1, 2) >= 0);
	CHECK(d.edge_index(0, 2) >= 0);
	CHECK(longest_path_length(d) == 5);
	const auto h = depth_width_histogram(d);
	CHECK(h.width == std::vector<int>{1, 1, 1, 1, 1});
	CHECK(h.total() == 5);
}

TEST_CASE("dfs discovery, not id order, decides direction") {
	// DFS from 0 reaches 3 before 2 through 0-3, so edge 2-3 points 3 -> 2.
	const auto d = orient(graph(4, {{0, 3}, {2, 3}, {1, 2}}));
	CHECK(d.edge_index(3, 2) >= 0);
	CHECK(d.edge_index(2, 1) >= 0);
	CHECK(longest_path_length(d) == 6);
}

TEST_CASE("chain and parallel statistics") {
	const auto chain = test::chain_dag(10);
	CHECK(longest_path_length(chain) == 12);
	for (int w : depth_width_histogram(chain).width) CHECK(w == 1);
	const auto par = test::parallel_dag(10);
	CHECK(longest_path_length(par) == 3);
	CHECK(depth_width_histogram(par).width == std::vector<int>{1, 10, 1});
}

TEST_CASE("malformed dags are rejected") {
	using K = VertexKind;
	CHECK_THROWS_AS(ArchDag(3, {{0, 1}, {1, 0}, {1, 2}}, 0, 2, {K::Input, K::Block, K::Output}), InvariantViolation);
	CHECK_THROWS_AS(ArchDag(3, {{0, 1}}, 0, 2, {K::Input, K::Block, K::Output}), InvariantViolation);
	CHECK_THROWS_AS(ArchDag(4, {{0, 1}, {1, 3}, {2, 3}}, 0, 3, {K::Input, K::Block, K::Block, K::Output}),
	                InvariantViolation);
}

TEST_CASE("longest path agrees with enumeration") {
	Rng rng(11);
	for (int t = 0; t < 300; ++t) {
		const int blocks = 1 + static_cast<int>(rng.below(10));
		const auto d = test::random_dag(rng, blocks, rng.uniform());
		CHECK(longest_path_length(d) == test::enumerate_longest_path(d));
	}
}

TEST_CASE("orientation of generated graphs") {
	for (auto kind : {GeneratorKind::ER, GeneratorKind::BA, GeneratorKind::WS, GeneratorKind::DP, GeneratorKind::FB}) {
		for (std::uint64_t s = 0; s < 20; ++s) {
			auto c = GeneratorConfig::defaults(kind, 40);
			c.seed = s;
			const auto g = generate(c);
			const auto d = orient(g);
			CHECK(d.n_vertices() == 40 + static_cast<int>(g.stage_markers.size()) + 2);
			CHECK(d.predecessors(d.input_vertex()).empty());
			CHECK(d.successors(d.output_vertex()).empty());
			CHECK(depth_width_histogram(d).total() == d.n_vertices());
			const auto again = orient(g);
			CHECK(again.edges() == d.edges());
		}
	}
}

TEST_CASE("fb merge vertices sit alone at their depth") {
	for (std::uint64_t s = 0; s < 30; ++s) {
		auto c = GeneratorConfig::defaults(GeneratorKind::FB, 40);
		c.seed = s;
		const auto d = orient(generate(c));
		const auto depth = vertex_depths(d);
		const auto h = depth_width_histogram(d);
		int merges = 0;
		for (int v = 0; v < d.n_vertices(); ++v) {
			if (d.kind(v) != VertexKind::Merge) continue;
			++merges;
			const int dv = depth[static_cast<std::size_t>(v)];
			CHECK(h.width[static_cast<std::size_t>(dv)] == 1);
			CHECK(dv > 0);
			CHECK(dv + 1 < static_cast<int>(h.width.size()));
		}
		CHECK(merges == 2);
	}
}
