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

#include "cnas/archmodel.hpp"
#include "cnas/error.hpp"
#include "cnas/randgraph.hpp"
#include "support.hpp"

using namespace cnas;

TEST_CASE("conv flops arithmetic") {
	CHECK(conv_flops(32, 16, 16) == 147456 + 262144);
	CHECK(conv_flops(1, 1, 1) == 10);
}

TEST_CASE("block params arithmetic") {
	BlockSpec b;
	b.in = b.out = Shape{32, 16};
	b.inputs.push_back({0, Shape{32, 16}, 0, 0});
	CHECK(block_params(b) == 144 + 256 + 32 + 1);
	b.in = b.out = Shape{1, 1};
	b.inputs[0].from = Shape{1, 1};
	CHECK(block_params(b) == 13);
}

TEST_CASE("block flops by hand") {
	// Two inputs: one pooled twice from (32, 8) and projected to 16, one native.
	BlockSpec b;
	b.in = Shape{8, 16};
	b.out = Shape{4, 32};
	b.staged = true;
	b.inputs.push_back({0, Shape{32, 8}, 2, 16});
	b.inputs.push_back({1, Shape{8, 16}, 0, 0});
	const std::int64_t pools = 1024 * 8 + 256 * 8;
	const std::int64_t proj = 64 * 8 * 16;
	const std::int64_t merge = 2 * (2 * 64 * 16);
	const std::int64_t body = 64 * 16 + (64 * 16 * 9 + 64 * 16 * 32) + 64 * 32;
	const std::int64_t stage = 64 * 32;
	CHECK(block_flops(b) == pools + proj + merge + body + stage);
	CHECK(block_params(b) == 2 + 8 * 16 + 9 * 16 + 16 * 32 + 2 * 32);
}

TEST_CASE("block flops grow with output channels") {
	BlockSpec b;
	b.in = Shape{16, 32};
	b.inputs.push_back({0, Shape{16, 32}, 0, 0});
	for (int c = 1; c <= 256; c *= 2) {
		b.out = Shape{16, c};
		BlockSpec wider = b;
		wider.out.channels = 2 * c;
		CHECK(block_flops(wider) > block_flops(b));
	}
}

TEST_CASE("feature bytes") {
	CHECK(feature_bytes(Shape{32, 16}) == 65536);
	CHECK(feature_bytes(Shape{1, 1}) == 4);
	CHECK(feature_bytes(Shape{16, 32}) * 2 == feature_bytes(Shape{32, 16}));
}

TEST_CASE("greedy chain") {
	StagingConfig st;
	st.mode = StagingMode::Greedy;
	st.channel_limit = 128;
	const auto spec = elaborate(test::chain_dag(6), st, 0);
	const std::vector<int> channels{32, 64, 128, 128, 128, 128};
	const std::vector<int> spatial{16, 8, 4, 4, 4, 4};
	for (int v = 0; v < 6; ++v) {
		CHECK(spec.blocks[static_cast<std::size_t>(v)].out.channels == channels[static_cast<std::size_t>(v)]);
		CHECK(spec.blocks[static_cast<std::size_t>(v)].out.spatial == spatial[static_cast<std::size_t>(v)]);
	}
	check_shape_consistency(spec);
}

TEST_CASE("uniform mode keeps the input shape everywhere") {
	StagingConfig st;
	st.mode = StagingMode::Uniform;
	for (auto kind : {GeneratorKind::ER, GeneratorKind::BA, GeneratorKind::FB}) {
		auto c = GeneratorConfig::defaults(kind, 40);
		c.seed = 5;
		const auto spec = elaborate(orient(generate(c)), st, 5);
		CHECK(spec.scaling_block_count() == 0);
		for (const auto& b : spec.blocks) CHECK(b.out == st.input);
	}
}

TEST_CASE("staging eventually suppressed at spatial one") {
	StagingConfig st;
	st.mode = StagingMode::Greedy;
	st.channel_limit = 4096;
	const auto spec = elaborate(test::chain_dag(8), st, 0);
	CHECK(spec.suppressed_stage_count() == 3);
	for (const auto& b : spec.blocks) CHECK(b.out.spatial >= 1);
}

TEST_CASE("edge bytes follow the producer") {
	auto c = GeneratorConfig::defaults(GeneratorKind::DP, 40);
	c.seed = 8;
	const auto spec = elaborate(orient(generate(c)), StagingConfig{}, 8);
	for (const auto& [u, v] : spec.dag.edges()) {
		CHECK(edge_bytes(spec, u, v) == feature_bytes(spec.blocks[static_cast<std::size_t>(u)].out));
	}
	CHECK_THROWS_AS(edge_bytes(spec, spec.dag.output_vertex(), 0), InvalidArgument);
}

TEST_CASE("totals are sums and deterministic") {
	auto c = GeneratorConfig::defaults(GeneratorKind::WS, 40);
	c.seed = 3;
	const auto dag = orient(generate(c));
	const auto a = elaborate(dag, StagingConfig{}, 3);
	const auto b = elaborate(dag, StagingConfig{}, 3);
	std::int64_t params = 0;
	for (auto p : a.params) params += p;
	CHECK(a.total_params == params);
	CHECK(a.params == b.params);
	CHECK(a.flops == b.flops);
}

TEST_CASE("merge vertices are projection only") {
	auto c = GeneratorConfig::defaults(GeneratorKind::FB, 40);
	c.seed = 2;
	const auto spec = elaborate(orient(generate(c)), StagingConfig{}, 2);
	for (int v = 0; v < spec.dag.n_vertices(); ++v) {
		if (spec.dag.kind(v) == VertexKind::Merge) {
			const auto& b = spec.blocks[static_cast<std::size_t>(v)];
			CHECK(b.projection_only);
			CHECK((b.staged || b.stage_suppressed || b.in.channels >= StagingConfig{}.channel_limit));
		}
	}
}

TEST_CASE("staging config validation") {
	StagingConfig st;
	st.prob = 1.5;
	CHECK_THROWS_AS(st.validate(), InvalidArgument);
	st = StagingConfig{};
	st.channel_limit = 0;
	CHECK_THROWS_AS(st.validate(), InvalidArgument);
	CHECK(parse_staging_mode("greedy") == StagingMode::Greedy);
	CHECK_THROWS_AS(parse_staging_mode("sometimes"), InvalidArgument);
}
