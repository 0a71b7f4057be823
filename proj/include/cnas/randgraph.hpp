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
 * Seeded random undirected graph generators: Erdos-Renyi (ER),
 * Barabasi-Albert (BA), Watts-Strogatz (WS), the ring distance-probability
 * generator (DP) and a staged WS baseline (FB).
 *
 * Every generator is a pure function of its GeneratorConfig, seed included.
 */

#ifndef CNAS_RANDGRAPH_HPP
#define CNAS_RANDGRAPH_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cnas {

enum class GeneratorKind { ER, BA, WS, DP, FB };

std::string_view to_string(GeneratorKind kind) noexcept;

/** Parses "er", "ba", "ws", "dp" or "fb" (case-insensitive). */
GeneratorKind parse_generator_kind(std::string_view name);

struct GeneratorConfig {
	GeneratorKind kind = GeneratorKind::DP;
	int n = 40;           ///< vertex count N
	double p = 0.5;       ///< edge / rewiring / base probability P
	int m = 5;            ///< BA edges per new vertex M
	int k = 4;            ///< WS ring degree K (even)
	double alpha = 1.0;   ///< DP scale
	double beta = 1.0;    ///< DP distance exponent
	int stages = 3;       ///< FB stage count
	std::uint64_t seed = 0;

	/** Family defaults used by the CLI and the sweeps. */
	static GeneratorConfig defaults(GeneratorKind kind, int n = 40);

	/** Throws InvalidArgument when the parameters do not fit the family. */
	void validate() const;
};

using Edge = std::pair<int, int>;

struct UndirectedGraph {
	int n_vertices = 0;
	/// Unordered pairs stored as (min, max), sorted lexicographically.
	std::vector<Edge> edges;
	/// FB only: first vertex id of every stage after the first.
	std::vector<int> stage_markers;

	/** Sorts, checks ranges, rejects self-loops and duplicates. */
	void normalize();

	std::vector<std::vector<int>> adjacency() const;
};

UndirectedGraph generate_er(const GeneratorConfig& cfg);
UndirectedGraph generate_ba(const GeneratorConfig& cfg);

/**
 * Ring lattice with K/2 neighbours per side, then for i = 1..K/2 a clockwise
 * pass that rewires the edge (u, u+i) to a uniform non-adjacent target with
 * probability P, keeping u fixed. When @p rewired is non-null it receives the
 * number of rewired edges.
 */
UndirectedGraph generate_ws(const GeneratorConfig& cfg, int* rewired = nullptr);

UndirectedGraph generate_dp(const GeneratorConfig& cfg);
UndirectedGraph generate_fb(const GeneratorConfig& cfg);

/** Dispatches on cfg.kind. */
UndirectedGraph generate(const GeneratorConfig& cfg);

/** Hops between u and v on an n-vertex ring; u != v. */
int ring_distance(int n, int u, int v);

/** DP per-pair inclusion probability min(1, alpha * p^(beta * d)). */
double dp_edge_probability(double alpha, double p, double beta, int distance);

/** Contiguous FB stage sizes; the first n % stages stages get one extra vertex. */
std::vector<int> stage_sizes(int n, int stages);

}  // namespace cnas

#endif  // CNAS_RANDGRAPH_HPP
