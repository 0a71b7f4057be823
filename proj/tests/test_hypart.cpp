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

#include <algorithm>
#include <numeric>
#include <sstream>

#include "cnas/error.hpp"
#include "cnas/hypart.hpp"
#include "cnas/randgraph.hpp"
#include "support.hpp"

using namespace cnas;

TEST_CASE("hypergraph of a chain") {
	const auto dag = test::chain_dag(3);
	const auto spec = test::hand_spec(dag, {10, 10, 10, 0, 0}, {7, 8, 9, 6, 0});
	const auto h = build_hypergraph(spec);
	CHECK(h.n_hyperedges() == 4);
	CHECK(h.pins(0) == std::vector<int>{0, 1});
	CHECK(h.pins(1) == std::vector<int>{1, 2});
	CHECK(h.cost(0) == 7);
	CHECK(h.weight(3) == 0);
	CHECK(h.weight(4) == 0);
}

TEST_CASE("fan-out is one hyperedge") {
	const auto dag = wrap_blocks(4, {{0, 1}, {0, 2}, {0, 3}});
	const auto spec = test::hand_spec(dag, {1, 1, 1, 1, 0, 0}, {5, 1, 1, 1, 1, 0});
	const auto h = build_hypergraph(spec);
	int with_source = 0;
	for (int e = 0; e < h.n_hyperedges(); ++e) {
		if (h.pins(e).front() == 0) {
			++with_source;
			CHECK(h.pins(e) == std::vector<int>{0, 1, 2, 3});
			CHECK(h.cost(e) == 5);
		}
	}
	CHECK(with_source == 1);
	int producers = 0;
	for (int v = 0; v < dag.n_vertices(); ++v) producers += dag.successors(v).empty() ? 0 : 1;
	CHECK(h.n_hyperedges() == producers);
}

TEST_CASE("lambda substitutions") {
	const Hypergraph h({1, 1, 1}, {{0, 1, 2}}, {5});
	CHECK(total_communication(h, make_partition(h, {0, 0, 0}, 1, 1.0)) == 0);
	CHECK(total_communication(h, make_partition(h, {0, 1, 2}, 3, 3.0)) == 10);
	CHECK(total_communication(h, make_partition(h, {1, 0, 1}, 2, 2.0)) == 5);
}

TEST_CASE("lambda matches the brute-force recount") {
	Rng rng(4);
	for (int t = 0; t < 300; ++t) {
		const int n = 2 + static_cast<int>(rng.below(9));
		const auto h = test::random_hypergraph(rng, n, 1 + static_cast<int>(rng.below(12)));
		const int k = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
		std::vector<int> part(static_cast<std::size_t>(n));
		for (int v = 0; v < n; ++v) {
			part[static_cast<std::size_t>(v)] = v < k ? v : static_cast<int>(rng.below(static_cast<std::uint64_t>(k)));
		}
		CHECK(total_communication(h, make_partition(h, part, k, 2.0)) == test::recount_lambda(h, part));
	}
}

TEST_CASE("lambda is invariant under part relabeling and shrinks on merging") {
	Rng rng(5);
	for (int t = 0; t < 200; ++t) {
		const auto h = test::random_hypergraph(rng, 10, 12);
		std::vector<int> part(10);
		for (auto& p : part) p = static_cast<int>(rng.below(4));
		std::vector<int> perm{2, 0, 3, 1};
		std::vector<int> relabeled(10), merged(10);
		for (std::size_t i = 0; i < part.size(); ++i) {
			relabeled[i] = perm[static_cast<std::size_t>(part[i])];
			merged[i] = part[i] == 3 ? 0 : part[i];
		}
		const auto base = test::recount_lambda(h, part);
		CHECK(test::recount_lambda(h, relabeled) == base);
		CHECK(test::recount_lambda(h, merged) <= base);
	}
}

TEST_CASE("load imbalance") {
	const Hypergraph h({30, 10}, {{0, 1}}, {1});
	CHECK(load_imbalance(make_partition(h, {0, 1}, 2, 1.5)) == doctest::Approx(1.5));
	const Hypergraph eq({10, 10}, {{0, 1}}, {1});
	CHECK(load_imbalance(make_partition(eq, {0, 1}, 2, 1.0)) == 1.0);
	const Hypergraph zero({0, 0}, {{0, 1}}, {1});
	CHECK(load_imbalance(make_partition(zero, {0, 1}, 2, 1.0)) == 1.0);
}

TEST_CASE("disconnected chains separate cleanly") {
	std::vector<Edge> e;
	for (int c = 0; c < 4; ++c)
		for (int i = 0; i < 4; ++i)
			if (i + 1 < 4) e.emplace_back(c * 4 + i, c * 4 + i + 1);
	std::vector<std::vector<int>> pins;
	std::vector<std::int64_t> costs;
	for (const auto& [u, v] : e) {
		pins.push_back({u, v});
		costs.push_back(100);
	}
	const Hypergraph h(std::vector<std::int64_t>(16, 10), pins, costs);
	for (std::uint64_t seed = 0; seed < 10; ++seed) {
		const auto p = partition(h, 4, 1.05, seed);
		CHECK(total_communication(h, p) == 0);
		CHECK(p.balanced);
		for (int c = 0; c < 4; ++c)
			for (int i = 1; i < 4; ++i) CHECK(p.part_of[static_cast<std::size_t>(c * 4 + i)] == p.part_of[static_cast<std::size_t>(c * 4)]);
	}
}

TEST_CASE("chain bisection is contiguous") {
	std::vector<std::vector<int>> pins;
	for (int i = 0; i + 1 < 8; ++i) pins.push_back({i, i + 1});
	const Hypergraph h(std::vector<std::int64_t>(8, 5), pins, std::vector<std::int64_t>(7, 3));
	const auto p = partition(h, 2, 1.01, 1);
	CHECK(total_communication(h, p) == 3);
	CHECK(p.part_weights == std::vector<std::int64_t>{20, 20});
}

TEST_CASE("heuristic versus exhaustive bisection") {
	Rng rng(21);
	int good = 0;
	const int cases = 200;
	for (int t = 0; t < cases; ++t) {
		const int n = 4 + static_cast<int>(rng.below(7));
		const auto h = test::random_hypergraph(rng, n, n + static_cast<int>(rng.below(static_cast<std::uint64_t>(n))));
		const auto p = partition(h, 2, 1.5, static_cast<std::uint64_t>(t));
		const auto best = test::exhaustive_bisection(h, 1.5);
		REQUIRE(best >= 0);
		CHECK(p.balanced);
		const auto got = total_communication(h, p);
		CHECK(got >= best);
		if (static_cast<double>(got) <= 1.2 * static_cast<double>(best)) ++good;
	}
	CHECK(good >= 190);
}

TEST_CASE("partition contract") {
	auto c = GeneratorConfig::defaults(GeneratorKind::ER, 40);
	c.seed = 1;
	const auto spec = elaborate(orient(generate(c)), StagingConfig{}, 1);
	const auto h = build_hypergraph(spec);
	for (int k : {2, 4, 8}) {
		const auto p = partition(h, k, 1.1, 9);
		CHECK(p.part_of.size() == static_cast<std::size_t>(h.n_vertices()));
		for (int x : p.part_of) CHECK((x >= 0 && x < k));
		for (int q = 0; q < k; ++q) CHECK(std::count(p.part_of.begin(), p.part_of.end(), q) > 0);
		CHECK(p.balanced);
		CHECK(load_imbalance(p) <= 1.1 + 1e-12);
		const auto again = partition(h, k, 1.1, 9);
		CHECK(again.part_of == p.part_of);
	}
	CHECK_THROWS_AS(partition(h, h.n_vertices() + 1, 1.1, 0), InvalidArgument);
	CHECK_THROWS_AS(partition(h, 2, 0.9, 0), InvalidArgument);
}

TEST_CASE("infeasible epsilon is flagged") {
	const Hypergraph h({100, 1, 1, 1}, {{0, 1}, {1, 2}, {2, 3}}, {1, 1, 1});
	const auto p = partition(h, 2, 1.05, 0);
	CHECK_FALSE(p.balanced);
	CHECK(p.part_of.size() == 4);
}

TEST_CASE("fm refinement never increases lambda") {
	Rng rng(8);
	for (int t = 0; t < 200; ++t) {
		const auto h = test::random_hypergraph(rng, 12, 16);
		std::vector<int> part(12);
		std::int64_t w[3] = {0, 0, 0};
		for (int v = 0; v < 12; ++v) {
			part[static_cast<std::size_t>(v)] = v % 3;
			w[v % 3] += h.weight(v);
		}
		const auto cap = max_part_weight(h.total_weight(), 3, 1.5);
		if (std::max({w[0], w[1], w[2]}) > cap) continue;
		const auto trace = refine_fm(h, part, 3, cap, 20);
		CHECK(trace.back() == test::recount_lambda(h, part));
		for (std::size_t i = 1; i < trace.size(); ++i) CHECK(trace[i] <= trace[i - 1]);
	}
}

TEST_CASE("hmetis export") {
	const Hypergraph h({3, 4, 5}, {{0, 1}, {1, 2, 0}}, {7, 9});
	std::ostringstream os;
	write_hmetis(os, h);
	CHECK(os.str() == "2 3 11\n7 1 2\n9 2 3 1\n3\n4\n5\n");
}
