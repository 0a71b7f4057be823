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

#include "cnas/randgraph.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include "cnas/error.hpp"
#include "cnas/rng.hpp"

namespace cnas {

namespace {

bool is_probability(double p) { return p >= 0.0 && p <= 1.0; }

class AdjacencySets {
public:
	explicit AdjacencySets(int n) : adj_(static_cast<std::size_t>(n)) {}

	bool has(int u, int v) const {
		const auto& a = adj_[static_cast<std::size_t>(u)];
		return std::find(a.begin(), a.end(), v) != a.end();
	}
	void add(int u, int v) {
		adj_[static_cast<std::size_t>(u)].push_back(v);
		adj_[static_cast<std::size_t>(v)].push_back(u);
	}
	void remove(int u, int v) {
		auto drop = [](std::vector<int>& a, int x) { a.erase(std::find(a.begin(), a.end(), x)); };
		drop(adj_[static_cast<std::size_t>(u)], v);
		drop(adj_[static_cast<std::size_t>(v)], u);
	}
	int degree(int u) const { return static_cast<int>(adj_[static_cast<std::size_t>(u)].size()); }

	std::vector<Edge> edges(int offset) const {
		std::vector<Edge> out;
		for (std::size_t u = 0; u < adj_.size(); ++u) {
			for (int v : adj_[u]) {
				if (static_cast<int>(u) < v) {
					out.emplace_back(static_cast<int>(u) + offset, v + offset);
				}
			}
		}
		return out;
	}

private:
	std::vector<std::vector<int>> adj_;
};

// Ring lattice plus clockwise rewiring on vertices [0, n); consumes rng in a
// fixed order so a staged graph can share the stream of a plain one.
std::vector<Edge> watts_strogatz(Rng& rng, int n, int k, double p, int offset, int* rewired) {
	AdjacencySets adj(n);
	const int half = k / 2;
	for (int u = 0; u < n; ++u) {
		for (int i = 1; i <= half; ++i) {
			adj.add(u, (u + i) % n);
		}
	}
	int count = 0;
	for (int i = 1; i <= half; ++i) {
		for (int u = 0; u < n; ++u) {
			const int v = (u + i) % n;
			if (!adj.has(u, v)) {
				continue;
			}
			if (!rng.bernoulli(p)) {
				continue;
			}
			if (adj.degree(u) >= n - 1) {
				continue;
			}
			int w = 0;
			do {
				w = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
			} while (w == u || adj.has(u, w));
			adj.remove(u, v);
			adj.add(u, w);
			++count;
		}
	}
	if (rewired != nullptr) {
		*rewired = count;
	}
	return adj.edges(offset);
}

UndirectedGraph finish(int n, std::vector<Edge> edges, std::vector<int> markers = {}) {
	UndirectedGraph g;
	g.n_vertices = n;
	g.edges = std::move(edges);
	g.stage_markers = std::move(markers);
	g.normalize();
	return g;
}

void require_kind(const GeneratorConfig& cfg, GeneratorKind kind) {
	if (cfg.kind != kind) {
		throw InvalidArgument("generator called with config of kind " + std::string(to_string(cfg.kind)));
	}
	cfg.validate();
}

}  // namespace

std::string_view to_string(GeneratorKind kind) noexcept {
	switch (kind) {
		case GeneratorKind::ER: return "er";
		case GeneratorKind::BA: return "ba";
		case GeneratorKind::WS: return "ws";
		case GeneratorKind::DP: return "dp";
		case GeneratorKind::FB: return "fb";
	}
	return "?";
}

GeneratorKind parse_generator_kind(std::string_view name) {
	std::string lower(name);
	std::transform(lower.begin(), lower.end(), lower.begin(),
	               [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
	for (auto kind : {GeneratorKind::ER, GeneratorKind::BA, GeneratorKind::WS, GeneratorKind::DP,
	                  GeneratorKind::FB}) {
		if (lower == to_string(kind)) {
			return kind;
		}
	}
	throw InvalidArgument("unknown generator '" + std::string(name) + "' (expected er|ba|ws|dp|fb)");
}

GeneratorConfig GeneratorConfig::defaults(GeneratorKind kind, int n) {
	GeneratorConfig cfg;
	cfg.kind = kind;
	cfg.n = n;
	switch (kind) {
		case GeneratorKind::ER:
			cfg.p = 0.2;
			break;
		case GeneratorKind::BA:
			cfg.m = 5;
			break;
		case GeneratorKind::WS:
		case GeneratorKind::FB:
			cfg.k = 4;
			cfg.p = 0.75;
			break;
		case GeneratorKind::DP:
			cfg.p = 0.5;
			cfg.alpha = 1.0;
			cfg.beta = 1.0;
			break;
	}
	return cfg;
}

void GeneratorConfig::validate() const {
	if (n < 1) {
		throw InvalidArgument("n must be at least 1");
	}
	switch (kind) {
		case GeneratorKind::ER:
			if (!is_probability(p)) throw InvalidArgument("ER: p must lie in [0, 1]");
			break;
		case GeneratorKind::BA:
			if (m <= 0 || m >= n) throw InvalidArgument("BA: requires 0 < m < n");
			break;
		case GeneratorKind::WS:
			if (!is_probability(p)) throw InvalidArgument("WS: p must lie in [0, 1]");
			if (k < 0 || k % 2 != 0) throw InvalidArgument("WS: k must be even");
			if (k >= n) throw InvalidArgument("WS: requires k < n");
			break;
		case GeneratorKind::DP:
			if (!is_probability(p)) throw InvalidArgument("DP: p must lie in [0, 1]");
			if (!(alpha >= 0.0) || !(beta >= 0.0)) throw InvalidArgument("DP: alpha and beta must be >= 0");
			break;
		case GeneratorKind::FB: {
			if (!is_probability(p)) throw InvalidArgument("FB: p must lie in [0, 1]");
			if (stages < 1 || stages > n) throw InvalidArgument("FB: stage count must lie in [1, n]");
			if (k < 0 || k % 2 != 0) throw InvalidArgument("FB: k must be even");
			const int smallest = n / stages;
			if (k >= smallest) throw InvalidArgument("FB: requires k < smallest stage size");
			break;
		}
	}
}

void UndirectedGraph::normalize() {
	for (auto& [u, v] : edges) {
		if (u < 0 || v < 0 || u >= n_vertices || v >= n_vertices) {
			throw InvalidArgument("edge endpoint out of range");
		}
		if (u == v) {
			throw InvalidArgument("self-loop on vertex " + std::to_string(u));
		}
		if (u > v) {
			std::swap(u, v);
		}
	}
	std::sort(edges.begin(), edges.end());
	if (std::adjacent_find(edges.begin(), edges.end()) != edges.end()) {
		throw InvalidArgument("duplicate edge");
	}
}

std::vector<std::vector<int>> UndirectedGraph::adjacency() const {
	std::vector<std::vector<int>> adj(static_cast<std::size_t>(n_vertices));
	for (const auto& [u, v] : edges) {
		adj[static_cast<std::size_t>(u)].push_back(v);
		adj[static_cast<std::size_t>(v)].push_back(u);
	}
	for (auto& a : adj) {
		std::sort(a.begin(), a.end());
	}
	return adj;
}

int ring_distance(int n, int u, int v) {
	if (u < 0 || v < 0 || u >= n || v >= n) {
		throw InvalidArgument("ring_distance: vertex out of range");
	}
	if (u == v) {
		throw InvalidArgument("ring_distance: u == v");
	}
	const int diff = std::abs(u - v);
	return std::min(diff, n - diff);
}

double dp_edge_probability(double alpha, double p, double beta, int distance) {
	return std::min(1.0, alpha * std::pow(p, beta * distance));
}

std::vector<int> stage_sizes(int n, int stages) {
	if (stages < 1 || stages > n) {
		throw InvalidArgument("stage count must lie in [1, n]");
	}
	std::vector<int> sizes(static_cast<std::size_t>(stages), n / stages);
	for (int s = 0; s < n % stages; ++s) {
		++sizes[static_cast<std::size_t>(s)];
	}
	return sizes;
}

UndirectedGraph generate_er(const GeneratorConfig& cfg) {
	require_kind(cfg, GeneratorKind::ER);
	Rng rng(derive_seed(cfg.seed, stream::kGraph));
	std::vector<Edge> edges;
	for (int u = 0; u < cfg.n; ++u) {
		for (int v = u + 1; v < cfg.n; ++v) {
			if (rng.bernoulli(cfg.p)) {
				edges.emplace_back(u, v);
			}
		}
	}
	return finish(cfg.n, std::move(edges));
}

UndirectedGraph generate_ba(const GeneratorConfig& cfg) {
	require_kind(cfg, GeneratorKind::BA);
	Rng rng(derive_seed(cfg.seed, stream::kGraph));
	AdjacencySets adj(cfg.n);
	std::vector<int> targets;
	for (int v = cfg.m; v < cfg.n; ++v) {
		// Attachment weights are degree + 1, frozen before v's edges land.
		std::vector<std::uint64_t> weight(static_cast<std::size_t>(v));
		std::uint64_t total = 0;
		for (int u = 0; u < v; ++u) {
			weight[static_cast<std::size_t>(u)] = static_cast<std::uint64_t>(adj.degree(u)) + 1;
			total += weight[static_cast<std::size_t>(u)];
		}
		targets.clear();
		while (static_cast<int>(targets.size()) < cfg.m) {
			std::uint64_t r = rng.below(total);
			int u = 0;
			while (r >= weight[static_cast<std::size_t>(u)]) {
				r -= weight[static_cast<std::size_t>(u)];
				++u;
			}
			if (std::find(targets.begin(), targets.end(), u) == targets.end()) {
				targets.push_back(u);
			}
		}
		for (int u : targets) {
			adj.add(u, v);
		}
	}
	return finish(cfg.n, adj.edges(0));
}

UndirectedGraph generate_ws(const GeneratorConfig& cfg, int* rewired) {
	require_kind(cfg, GeneratorKind::WS);
	Rng rng(derive_seed(cfg.seed, stream::kGraph));
	return finish(cfg.n, watts_strogatz(rng, cfg.n, cfg.k, cfg.p, 0, rewired));
}

UndirectedGraph generate_dp(const GeneratorConfig& cfg) {
	require_kind(cfg, GeneratorKind::DP);
	Rng rng(derive_seed(cfg.seed, stream::kGraph));
	// One probability per ring distance; d ranges over 1..n/2.
	std::vector<double> prob(static_cast<std::size_t>(cfg.n / 2 + 1), 0.0);
	for (int d = 1; d <= cfg.n / 2; ++d) {
		prob[static_cast<std::size_t>(d)] = dp_edge_probability(cfg.alpha, cfg.p, cfg.beta, d);
	}
	std::vector<Edge> edges;
	for (int u = 0; u < cfg.n; ++u) {
		for (int v = u + 1; v < cfg.n; ++v) {
			if (rng.bernoulli(prob[static_cast<std::size_t>(ring_distance(cfg.n, u, v))])) {
				edges.emplace_back(u, v);
			}
		}
	}
	return finish(cfg.n, std::move(edges));
}

UndirectedGraph generate_fb(const GeneratorConfig& cfg) {
	require_kind(cfg, GeneratorKind::FB);
	Rng rng(derive_seed(cfg.seed, stream::kGraph));
	std::vector<Edge> edges;
	std::vector<int> markers;
	int offset = 0;
	for (int size : stage_sizes(cfg.n, cfg.stages)) {
		if (offset > 0) {
			markers.push_back(offset);
		}
		auto stage = watts_strogatz(rng, size, cfg.k, cfg.p, offset, nullptr);
		edges.insert(edges.end(), stage.begin(), stage.end());
		offset += size;
	}
	return finish(cfg.n, std::move(edges), std::move(markers));
}

UndirectedGraph generate(const GeneratorConfig& cfg) {
	switch (cfg.kind) {
		case GeneratorKind::ER: return generate_er(cfg);
		case GeneratorKind::BA: return generate_ba(cfg);
		case GeneratorKind::WS: return generate_ws(cfg);
		case GeneratorKind::DP: return generate_dp(cfg);
		case GeneratorKind::FB: return generate_fb(cfg);
	}
	throw InvalidArgument("unknown generator kind");
}

}  // namespace cnas
