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
 * Distribution of an architecture onto n units and a discrete-event model of
 * one distributed inference.
 *
 * Pipeline: group_chains() contracts sequential paths, place_greedy() assigns
 * groups to units with the longest-processing-time rule, balance_entropy()
 * grades the resulting loads and simulate() replays the inference.
 */

#ifndef CNAS_DEPLOY_HPP
#define CNAS_DEPLOY_HPP

#include <cstdint>
#include <iosfwd>
#include <string_view>
#include <vector>

#include "cnas/archmodel.hpp"

namespace cnas {

struct GroupEdge {
	int from = -1;
	int to = -1;
	/// Sum of output bytes of the distinct producers in `from` feeding `to`.
	std::int64_t bytes = 0;
};

struct GroupedDag {
	/// Vertices of every group in path order; groups ordered by head position.
	std::vector<std::vector<int>> groups;
	std::vector<int> group_of;
	std::vector<std::int64_t> group_weights;
	std::vector<GroupEdge> group_edges;
	int input_group = -1;
	int output_group = -1;

	int n_groups() const { return static_cast<int>(groups.size()); }
};

/**
 * Repeatedly merges v->w into one group while v has out-degree 1 and w has
 * in-degree 1; input and output stay singletons.
 */
GroupedDag group_chains(const ArchSpec& spec);

/** True when the contracted group graph has no cycle. */
bool group_graph_is_acyclic(const GroupedDag& g);

struct Placement {
	static constexpr int kCommon = -1;

	int n_units = 1;
	/// Unit running the output gather; == n_units for a dedicated extra unit.
	int merge_unit = 0;
	/// kCommon for the input group, which every unit holds.
	std::vector<int> unit_of_group;
	std::vector<int> unit_of_vertex;
	/// FLOPs assigned to each of the n compute units.
	std::vector<std::int64_t> unit_load;

	int total_units() const { return merge_unit == n_units ? n_units + 1 : n_units; }
};

/**
 * Longest-processing-time placement: groups by weight descending (ties by
 * group id) onto the least-loaded unit (ties by lowest index). The input is
 * broadcast; the output gather runs on unit 0, or on an extra unit n when
 * @p dedicated_merge_unit is set.
 */
Placement place_greedy(const GroupedDag& g, int n, bool dedicated_merge_unit = false);

/**
 * Normalized Shannon entropy of the unit loads, -sum f ln f / ln n, in [0, 1].
 * Returns 1 for zero total load; throws InvalidArgument for n < 2.
 */
double balance_entropy(const Placement& p, const GroupedDag& g, int n);

struct CostParams {
	double flops_per_time = 1.0e6;  ///< per unit, FLOPs per millisecond
	double bytes_per_time = 0.0;    ///< per link, bytes per millisecond
	double latency = 0.0;           ///< fixed per-message cost, milliseconds
	bool include_gather = true;     ///< makespan ends at the output gather

	/**
	 * 1 GFLOP/s units, 0.05 ms message latency, and a link bandwidth at which
	 * one 32x32x16 float32 map takes ten times the compute of a plain block
	 * at that shape.
	 */
	static CostParams defaults();
};

struct Transfer {
	int producer = -1;
	int src_unit = -1;
	int dst_unit = -1;
	std::int64_t bytes = 0;
	double start = 0.0;
	double end = 0.0;
};

struct TraceEvent {
	double time = 0.0;
	int unit = -1;
	std::string_view kind;  ///< compute_start, compute_end, send_start, recv_end
	int id = -1;            ///< vertex id (the producer for transfers)
};

struct SimResult {
	double makespan = 0.0;
	std::vector<double> unit_busy;
	std::vector<double> start;
	std::vector<double> finish;
	std::vector<Transfer> transfers;
	std::vector<TraceEvent> trace;  ///< sorted by (time, unit, kind, id)
	double single_unit_makespan = 0.0;
	double speedup = 1.0;
};

/**
 * Replays one inference. Each unit executes its vertices one at a time in
 * (depth, id) order; a vertex starts once its unit is free, every local
 * predecessor has finished and every remote input has arrived. A producer
 * sends its output once per remote consumer unit over the directed link
 * between the two units, FIFO, taking latency + bytes / bandwidth. The input
 * vertex is available everywhere at time 0.
 */
SimResult simulate(const ArchSpec& spec, const Placement& p, const CostParams& cost);

/** Critical-path lower bound: heaviest compute along any input-output path. */
double critical_path_time(const ArchSpec& spec, const CostParams& cost);

}  // namespace cnas

#endif  // CNAS_DEPLOY_HPP
