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
 * Block semantics and the analytic cost model of an architecture DAG.
 *
 * A block applies, in order: a scaling front-end (2x maxpool steps down to
 * the smallest input resolution, 1x1 projections up to the widest input),
 * sigmoid and a learnable weighted sum over its inputs, ReLU, a 3x3
 * depthwise-separable convolution and batch normalization. A staged block
 * doubles its channels in the pointwise convolution and halves the
 * resolution with a trailing 2x maxpool.
 *
 * FB merge vertices are projection-only: front-end, weighted sum and, when
 * they stage, one 1x1 convolution. They always stage when eligible.
 */

#ifndef CNAS_ARCHMODEL_HPP
#define CNAS_ARCHMODEL_HPP

#include <cstdint>
#include <string_view>
#include <vector>

#include "cnas/dagify.hpp"

namespace cnas {

inline constexpr int kBytesPerElement = 4;

enum class StagingMode { Uniform, Greedy, Probabilistic };

std::string_view to_string(StagingMode mode) noexcept;
StagingMode parse_staging_mode(std::string_view name);

struct Shape {
	int spatial = 0;   ///< height == width
	int channels = 0;

	friend bool operator==(const Shape&, const Shape&) = default;
};

struct StagingConfig {
	StagingMode mode = StagingMode::Probabilistic;
	double prob = 0.5;
	Shape input{32, 16};
	int channel_limit = 512;

	void validate() const;
};

/** One input of a block and what its scaling front-end does to it. */
struct ScaledInput {
	int source = -1;
	Shape from;
	int pools = 0;          ///< 2x maxpool steps
	int proj_channels = 0;  ///< 1x1 projection width, 0 if none
};

struct BlockSpec {
	Shape in;    ///< operating shape after the scaling front-end
	Shape out;
	bool projection_only = false;
	bool staged = false;
	bool stage_suppressed = false;
	std::vector<ScaledInput> inputs;

	int scaled_inputs() const;
	bool has_scaling() const { return scaled_inputs() > 0; }
};

/** Depthwise 3x3 plus pointwise convolution at spatial size s. */
std::int64_t conv_flops(int spatial, int c_in, int c_out);

/** All FLOPs of a block: front-end, elementwise terms, convolution, pools. */
std::int64_t block_flops(const BlockSpec& b);

/** Depthwise + pointwise + batchnorm + projections + weighted-sum scalars. */
std::int64_t block_params(const BlockSpec& b);

/** Bytes of one feature map of the given shape. */
std::int64_t feature_bytes(Shape s);

struct ArchSpec {
	ArchDag dag;
	StagingConfig staging;
	std::uint64_t seed = 0;
	/// Per vertex; input and output vertices carry shapes only.
	std::vector<BlockSpec> blocks;
	std::vector<std::int64_t> flops;
	std::vector<std::int64_t> params;
	/// Parallel to dag.edges().
	std::vector<std::int64_t> edge_bytes;
	std::int64_t total_params = 0;
	std::int64_t total_flops = 0;

	/** Number of vertices that needed a scaling front-end. */
	int scaling_block_count() const;
	int suppressed_stage_count() const;
};

/**
 * Propagates shapes in topological order and applies the staging rule:
 * uniform never stages, greedy stages every block while channels are below
 * the limit, probabilistic stages an eligible block with probability
 * staging.prob using a per-vertex keyed draw. A stage that would take the
 * resolution below 1 is skipped and marked suppressed.
 */
ArchSpec elaborate(const ArchDag& dag, const StagingConfig& staging, std::uint64_t seed);

/** Producer-side bytes of edge u->v; throws InvalidArgument if absent. */
std::int64_t edge_bytes(const ArchSpec& spec, int u, int v);

/** Bytes @p v sends to each consumer (the cost of any of its out-edges); 0 for a sink. */
std::int64_t output_bytes(const ArchSpec& spec, int v);

/**
 * Re-derives every input of every vertex through its front-end and throws
 * InvariantViolation if any disagrees with the block's operating shape, or if
 * a channel count exceeds the limit.
 */
void check_shape_consistency(const ArchSpec& spec);

}  // namespace cnas

#endif  // CNAS_ARCHMODEL_HPP
