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

// Shared builders and brute-force oracles for the test programs.

#ifndef CNAS_TESTS_SUPPORT_HPP
#define CNAS_TESTS_SUPPORT_HPP

#include <algorithm>
#include <cstdint>
#include <functional>
#include <set>
#include <vector>

#include "cnas/archmodel.hpp"
#include "cnas/dagify.hpp"
#include "cnas/hypart.hpp"
#include "cnas/rng.hpp"

namespace cnas::test {

inline ArchDag chain_dag(int blocks) {
	std::vector<Edge> e;
	for (int i = 0; i + 1 < blocks; ++i) e.emplace_back(i, i + 1);
	return wrap_blocks(blocks, e);
}

inline ArchDag parallel_dag(int blocks) { return wrap_blocks(blocks, {}); }

/// Architecture with hand-set per-vertex FLOPs and per-producer output bytes.
inline ArchSpec hand_spec(const ArchDag& dag, const std::vector<std::int64_t>& flops,
                          const std::vector<std::int64_t>& out_bytes) {
	ArchSpec s;
	s.dag = dag;
	const auto n = static_cast<std::size_t>(dag.n_vertices());
	s.blocks.assign(n, BlockSpec{Shape{1, 1}, Shape{1, 1}, false, false, false, {}});
	s.flops = flops;
	s.params.assign(n, 0);
	for (const auto& [u, v] : dag.edges()) s.edge_bytes.push_back(out_bytes[static_cast<std::size_t>(u)]);
	for (auto f : flops) s.total_flops += f;
	return s;
}

/// Random DAG on [0, blocks) with forward edges of probability p, wrapped.
inline ArchDag random_dag(Rng& rng, int blocks, double p) {
	std::vector<Edge> e;
	for (int u = 0; u < blocks; ++u)
		for (int v = u + 1; v < blocks; ++v)
			if (rng.bernoulli(p)) e.emplace_back(u, v);
	return wrap_blocks(blocks, e);
}

/// Longest input-output path in vertices by exhaustive DFS enumeration.
inline int enumerate_longest_path(const ArchDag& d) {
	int best = 0;
	std::function<void(int, int)> walk = [&](int v, int len) {
		if (v == d.output_vertex()) {
			best = std::max(best, len);
			return;
		}
		for (int w : d.successors(v)) walk(w, len + 1);
	};
	walk(d.input_vertex(), 1);
	return best;
}

/// Connectivity-weighted cut recomputed straight from the definition.
inline std::int64_t recount_lambda(const Hypergraph& h, const std::vector<int>& part_of) {
	std::int64_t total = 0;
	for (int e = 0; e < h.n_hyperedges(); ++e) {
		std::set<int> parts;
		for (int v : h.pins(e)) parts.insert(part_of[static_cast<std::size_t>(v)]);
		total += h.cost(e) * (static_cast<std::int64_t>(parts.size()) - 1);
	}
	return total;
}

/// Smallest cut over all balanced 2-way assignments, or -1 if none is balanced.
inline std::int64_t exhaustive_bisection(const Hypergraph& h, double epsilon) {
	const int n = h.n_vertices();
	const std::int64_t cap = max_part_weight(h.total_weight(), 2, epsilon);
	std::int64_t best = -1;
	std::vector<int> part(static_cast<std::size_t>(n));
	for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
		std::int64_t w[2] = {0, 0};
		for (int v = 0; v < n; ++v) {
			part[static_cast<std::size_t>(v)] = (mask >> v) & 1u;
			w[part[static_cast<std::size_t>(v)]] += h.weight(v);
		}
		if (w[0] > cap || w[1] > cap) continue;
		const auto cut = recount_lambda(h, part);
		if (best < 0 || cut < best) best = cut;
	}
	return best;
}

/// Random hypergraph with positive weights and costs.
inline Hypergraph random_hypergraph(Rng& rng, int n, int n_edges) {
	std::vector<std::int64_t> w(static_cast<std::size_t>(n));
	for (auto& x : w) x = 1 + static_cast<std::int64_t>(rng.below(10));
	std::vector<std::vector<int>> edges;
	std::vector<std::int64_t> costs;
	for (int e = 0; e < n_edges; ++e) {
		const int size = 2 + static_cast<int>(rng.below(static_cast<std::uint64_t>(std::min(n, 4) - 1)));
		std::vector<int> pins;
		while (static_cast<int>(pins.size()) < size) {
			const int v = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
			if (std::find(pins.begin(), pins.end(), v) == pins.end()) pins.push_back(v);
		}
		edges.push_back(pins);
		costs.push_back(1 + static_cast<std::int64_t>(rng.below(20)));
	}
	return Hypergraph(std::move(w), std::move(edges), std::move(costs));
}

}  // namespace cnas::test

#endif  // CNAS_TESTS_SUPPORT_HPP
