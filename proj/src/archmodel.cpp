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

#include "cnas/archmodel.hpp"

#include <algorithm>
#include <string>

#include "cnas/error.hpp"
#include "cnas/rng.hpp"

namespace cnas {

namespace {

std::size_t idx(int v) { return static_cast<std::size_t>(v); }

std::int64_t area(int spatial) { return static_cast<std::int64_t>(spatial) * spatial; }

// Number of 2x pools taking `from` down to `to`, or -1 if unreachable.
int pool_steps(int from, int to) {
	int steps = 0;
	while (from > to) {
		from /= 2;
		++steps;
	}
	return from == to ? steps : -1;
}

}  // namespace

std::string_view to_string(StagingMode mode) noexcept {
	switch (mode) {
		case StagingMode::Uniform: return "uniform";
		case StagingMode::Greedy: return "greedy";
		case StagingMode::Probabilistic: return "probabilistic";
	}
	return "?";
}

StagingMode parse_staging_mode(std::string_view name) {
	for (auto mode : {StagingMode::Uniform, StagingMode::Greedy, StagingMode::Probabilistic}) {
		if (name == to_string(mode)) {
			return mode;
		}
	}
	throw InvalidArgument("unknown staging mode '" + std::string(name) + "' (expected uniform|greedy|probabilistic)");
}

void StagingConfig::validate() const {
	if (input.spatial < 1 || input.channels < 1) {
		throw InvalidArgument("input shape must be positive");
	}
	if (channel_limit < input.channels) {
		throw InvalidArgument("channel limit below input channel count");
	}
	if (!(prob >= 0.0 && prob <= 1.0)) {
		throw InvalidArgument("staging probability must lie in [0, 1]");
	}
}

int BlockSpec::scaled_inputs() const {
	return static_cast<int>(std::count_if(inputs.begin(), inputs.end(), [](const ScaledInput& s) {
		return s.pools > 0 || s.proj_channels > 0;
	}));
}

std::int64_t conv_flops(int spatial, int c_in, int c_out) {
	const std::int64_t a = area(spatial);
	return a * c_in * 9 + a * c_in * c_out;
}

std::int64_t block_flops(const BlockSpec& b) {
	const std::int64_t a = area(b.in.spatial);
	const std::int64_t c_in = b.in.channels;
	const std::int64_t c_out = b.out.channels;
	std::int64_t total = 0;
	for (const auto& s : b.inputs) {
		int spatial = s.from.spatial;
		for (int i = 0; i < s.pools; ++i) {
			total += area(spatial) * s.from.channels;
			spatial /= 2;
		}
		if (s.proj_channels > 0) {
			total += a * s.from.channels * s.proj_channels;
		}
		total += 2 * a * c_in;  // sigmoid + weighted sum
	}
	if (b.projection_only) {
		if (b.staged) {
			total += a * c_in * c_out;
		}
	} else {
		total += a * c_in;  // relu
		total += conv_flops(b.in.spatial, b.in.channels, b.out.channels);
		total += a * c_out;  // batchnorm
	}
	if (b.staged) {
		total += a * c_out;
	}
	return total;
}

std::int64_t block_params(const BlockSpec& b) {
	const std::int64_t c_in = b.in.channels;
	const std::int64_t c_out = b.out.channels;
	std::int64_t total = static_cast<std::int64_t>(b.inputs.size());
	for (const auto& s : b.inputs) {
		if (s.proj_channels > 0) {
			total += static_cast<std::int64_t>(s.from.channels) * s.proj_channels;
		}
	}
	if (b.projection_only) {
		if (b.staged) {
			total += c_in * c_out;
		}
	} else {
		total += 9 * c_in + c_in * c_out + 2 * c_out;
	}
	return total;
}

std::int64_t feature_bytes(Shape s) {
	return area(s.spatial) * s.channels * kBytesPerElement;
}

int ArchSpec::scaling_block_count() const {
	return static_cast<int>(std::count_if(blocks.begin(), blocks.end(), [](const BlockSpec& b) { return b.has_scaling(); }));
}

int ArchSpec::suppressed_stage_count() const {
	return static_cast<int>(std::count_if(blocks.begin(), blocks.end(), [](const BlockSpec& b) { return b.stage_suppressed; }));
}

ArchSpec elaborate(const ArchDag& dag, const StagingConfig& staging, std::uint64_t seed) {
	staging.validate();
	ArchSpec spec;
	spec.dag = dag;
	spec.staging = staging;
	spec.seed = seed;
	const int n = dag.n_vertices();
	spec.blocks.assign(idx(n), {});
	spec.flops.assign(idx(n), 0);
	spec.params.assign(idx(n), 0);

	for (int v : dag.topological_order()) {
		BlockSpec& b = spec.blocks[idx(v)];
		if (v == dag.input_vertex()) {
			b.in = b.out = staging.input;
			continue;
		}
		Shape target{0, 0};
		for (int p : dag.predecessors(v)) {
			const Shape s = spec.blocks[idx(p)].out;
			target.spatial = target.spatial == 0 ? s.spatial : std::min(target.spatial, s.spatial);
			target.channels = std::max(target.channels, s.channels);
		}
		for (int p : dag.predecessors(v)) {
			ScaledInput in;
			in.source = p;
			in.from = spec.blocks[idx(p)].out;
			in.pools = pool_steps(in.from.spatial, target.spatial);
			if (in.pools < 0) {
				throw InvariantViolation("input resolution of vertex " + std::to_string(v) + " is not a 2x pool multiple");
			}
			in.proj_channels = in.from.channels == target.channels ? 0 : target.channels;
			b.inputs.push_back(in);
		}
		b.in = target;
		b.out = target;
		if (v == dag.output_vertex()) {
			continue;
		}
		b.projection_only = dag.kind(v) == VertexKind::Merge;

		const bool eligible = staging.mode != StagingMode::Uniform && target.channels < staging.channel_limit;
		bool wants_stage = false;
		if (eligible) {
			if (staging.mode == StagingMode::Greedy || b.projection_only) {
				wants_stage = true;
			} else {
				wants_stage = keyed_uniform(seed, stream::kStaging, static_cast<std::uint64_t>(v)) < staging.prob;
			}
		}
		if (wants_stage) {
			if (target.spatial / 2 < 1) {
				b.stage_suppressed = true;
			} else {
				b.staged = true;
				b.out = Shape{target.spatial / 2, std::min(2 * target.channels, staging.channel_limit)};
			}
		}
		spec.flops[idx(v)] = block_flops(b);
		spec.params[idx(v)] = block_params(b);
	}

	for (std::size_t i = 0; i < spec.flops.size(); ++i) {
		spec.total_flops += spec.flops[i];
		spec.total_params += spec.params[i];
	}
	spec.edge_bytes.reserve(dag.edges().size());
	for (const auto& [u, v] : dag.edges()) {
		spec.edge_bytes.push_back(feature_bytes(spec.blocks[idx(u)].out));
	}
	return spec;
}

std::int64_t edge_bytes(const ArchSpec& spec, int u, int v) {
	const int e = spec.dag.edge_index(u, v);
	if (e < 0) {
		throw InvalidArgument("no edge " + std::to_string(u) + "->" + std::to_string(v));
	}
	return spec.edge_bytes[idx(e)];
}

std::int64_t output_bytes(const ArchSpec& spec, int v) {
	const auto& succ = spec.dag.successors(v);
	if (succ.empty()) {
		return 0;
	}
	return spec.edge_bytes[idx(spec.dag.edge_index(v, succ.front()))];
}

void check_shape_consistency(const ArchSpec& spec) {
	const auto& dag = spec.dag;
	for (int v = 0; v < dag.n_vertices(); ++v) {
		const BlockSpec& b = spec.blocks[idx(v)];
		if (b.out.channels > spec.staging.channel_limit || b.out.spatial < 1) {
			throw InvariantViolation("vertex " + std::to_string(v) + " leaves the channel/spatial bounds");
		}
		if (v == dag.input_vertex()) {
			continue;
		}
		if (b.inputs.size() != dag.predecessors(v).size()) {
			throw InvariantViolation("vertex " + std::to_string(v) + " input list disagrees with the DAG");
		}
		for (const auto& s : b.inputs) {
			if (s.from != spec.blocks[idx(s.source)].out) {
				throw InvariantViolation("vertex " + std::to_string(v) + " records a stale input shape");
			}
			int spatial = s.from.spatial;
			for (int i = 0; i < s.pools; ++i) {
				spatial /= 2;
			}
			const int channels = s.proj_channels > 0 ? s.proj_channels : s.from.channels;
			if (Shape{spatial, channels} != b.in) {
				throw InvariantViolation("vertex " + std::to_string(v) + " inputs disagree after scaling");
			}
		}
	}
}

}  // namespace cnas
