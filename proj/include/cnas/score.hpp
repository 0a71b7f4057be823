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
 * Concurrency score of an architecture on n units.
 *
 * For each imbalance bound epsilon of a grid the hypergraph is partitioned
 * once and the partition is summarized by
 *   - delta_W, the load imbalance,
 *   - Lambda' = Lambda / (U_c * n), with U_c the smallest edge transfer of
 *     the architecture,
 *   - eta = longest path / (|V| / n), the serial fraction,
 * and CS = (delta_W^a * Lambda'^b * eta^c)^(1/3). Lower is better; the
 * architecture's score is the minimum over the grid.
 */

#ifndef CNAS_SCORE_HPP
#define CNAS_SCORE_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "cnas/hypart.hpp"

namespace cnas {

struct ScoreWeights {
	double a = 1.0;
	double b = 1.5;
	double c = 1.0;
};

/** {1.05, 1.10, 1.20, 1.35, 1.50} */
std::vector<double> default_epsilon_grid();

/** eta = longest_path_length(d) * n / |V|. Throws InvalidArgument for n < 1. */
double overlap_ratio(const ArchDag& d, int n);

/** Cube root of delta_w^a * lambda_prime^b * eta^c; 0 when lambda_prime is 0. */
double cs_value(double delta_w, double lambda_prime, double eta, const ScoreWeights& w = {});

/** Smallest edge transfer in bytes. */
std::int64_t min_edge_bytes(const ArchSpec& spec);

struct MetricsRecord {
	double epsilon = 1.0;
	double delta_w = 1.0;
	std::int64_t lambda = 0;
	double lambda_prime = 0.0;
	double eta = 0.0;
	double cs = 0.0;
	bool balanced = true;
};

struct MetricsReport {
	int n_units = 0;
	std::vector<double> epsilon_grid;
	std::vector<MetricsRecord> records;
	std::size_t best_index = 0;
	double best_cs = 0.0;
	std::int64_t u_c = 0;
	Partition best_partition;
	/// No grid point produced a balanced partition; records are best-effort.
	bool all_infeasible = false;

	const MetricsRecord& best() const { return records[best_index]; }
};

/**
 * Scores @p spec on @p n units. The partition for grid point epsilon uses a
 * seed derived from (seed, epsilon), so extending the grid leaves existing
 * records unchanged.
 */
MetricsReport concurrency_score(const ArchSpec& spec, int n, std::span<const double> eps_grid,
                                const ScoreWeights& weights, std::uint64_t seed,
                                const PartitionOptions& options = {});

}  // namespace cnas

#endif  // CNAS_SCORE_HPP
