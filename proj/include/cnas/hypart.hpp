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
 * Vertex-weighted, hyperedge-costed hypergraphs and a multilevel k-way
 * partitioner minimizing the connectivity objective
 *
 *     Lambda = sum over hyperedges e of cost(e) * (parts touched by e - 1)
 *
 * under the balance constraint W_p <= epsilon * W_total / k.
 *
 * The partitioner coarsens with heavy-connectivity matching, builds several
 * seeded initial partitions on the coarsest level (weight-greedy packing and
 * connectivity-greedy growing), and refines with a Fiduccia-Mattheyses style
 * k-way pass at every level. Independent restarts keep the best result.
 */

#ifndef CNAS_HYPART_HPP
#define CNAS_HYPART_HPP

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "cnas/archmodel.hpp"

namespace cnas {

class Hypergraph {
public:
	Hypergraph() = default;

	/**
	 * Pins are deduplicated; a hyperedge with fewer than two distinct pins, a
	 * pin out of range or a negative weight/cost throws InvalidArgument.
	 */
	Hypergraph(std::vector<std::int64_t> vertex_weights, std::vector<std::vector<int>> hyperedges,
	           std::vector<std::int64_t> costs);

	int n_vertices() const { return static_cast<int>(weights_.size()); }
	int n_hyperedges() const { return static_cast<int>(pins_.size()); }
	std::int64_t weight(int v) const { return weights_[static_cast<std::size_t>(v)]; }
	std::int64_t total_weight() const { return total_weight_; }
	const std::vector<std::int64_t>& weights() const { return weights_; }
	const std::vector<int>& pins(int e) const { return pins_[static_cast<std::size_t>(e)]; }
	std::int64_t cost(int e) const { return costs_[static_cast<std::size_t>(e)]; }
	/// Hyperedges containing v, ascending.
	const std::vector<int>& incident(int v) const { return incident_[static_cast<std::size_t>(v)]; }

private:
	std::vector<std::int64_t> weights_;
	std::vector<std::vector<int>> pins_;
	std::vector<std::int64_t> costs_;
	std::vector<std::vector<int>> incident_;
	std::int64_t total_weight_ = 0;
};

/**
 * One hyperedge per vertex with successors, spanning the producer (first pin)
 * and all its consumers, costed with the producer's output bytes. Vertex
 * weights are FLOPs; input and output vertices weigh 0.
 */
Hypergraph build_hypergraph(const ArchSpec& spec);

/** Writes the hMETIS text format (fmt 11: weighted hyperedges and vertices). */
void write_hmetis(std::ostream& os, const Hypergraph& h);

struct Partition {
	int n_parts = 0;
	std::vector<int> part_of;
	std::vector<std::int64_t> part_weights;
	double epsilon = 1.0;
	/// True when every part satisfies W_p <= epsilon * W_avg.
	bool balanced = true;
};

/**
 * Builds a Partition from an explicit assignment. Throws InvalidArgument when
 * the assignment does not cover every vertex of @p h exactly once with ids in
 * [0, n_parts) or leaves a part empty.
 */
Partition make_partition(const Hypergraph& h, std::vector<int> part_of, int n_parts, double epsilon);

/** Largest admissible part weight, floor(epsilon * W_total / k). */
std::int64_t max_part_weight(std::int64_t total_weight, int n_parts, double epsilon);

/** Lambda of @p p on @p h; throws InvalidArgument on a size mismatch. */
std::int64_t total_communication(const Hypergraph& h, const Partition& p);

/** delta_W = max_p W_p / W_avg, or 1 when the total weight is 0. */
double load_imbalance(const Partition& p);

struct PartitionOptions {
	int max_passes = 20;
	int restarts = 3;
	int initial_attempts = 4;
};

/**
 * Multilevel partition of @p h into @p n_parts parts with imbalance bound
 * @p epsilon. Deterministic for a fixed seed. When no balanced partition was
 * found the best-effort result comes back with balanced == false.
 *
 * Throws InvalidArgument if n_parts < 1, n_parts > |V| or epsilon < 1.
 */
Partition partition(const Hypergraph& h, int n_parts, double epsilon, std::uint64_t seed,
                    const PartitionOptions& options = {});

/**
 * k-way FM refinement of an existing assignment in place. Returns Lambda
 * before the first pass followed by Lambda after every pass.
 */
std::vector<std::int64_t> refine_fm(const Hypergraph& h, std::vector<int>& part_of, int n_parts,
                                    std::int64_t max_weight, int max_passes);

}  // namespace cnas

#endif  // CNAS_HYPART_HPP
