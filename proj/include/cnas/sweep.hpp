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
 * Monte-Carlo sweep: generate, elaborate, score, place and simulate many
 * sampled architectures per generator and unit count.
 *
 * Sample i of every generator uses the seed derive_seed(master, kSample, i),
 * so generators are compared on matched seeds. Samples are spread over a
 * worker pool; results are merged by sample index, so the output does not
 * depend on the number of workers.
 */

#ifndef CNAS_SWEEP_HPP
#define CNAS_SWEEP_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "cnas/archmodel.hpp"
#include "cnas/deploy.hpp"
#include "cnas/randgraph.hpp"
#include "cnas/score.hpp"

namespace cnas {

struct SweepConfig {
	/// One template per generator; the seed field is replaced per sample.
	std::vector<GeneratorConfig> generators;
	std::vector<int> units{4, 6, 8, 10};
	int samples = 1000;
	std::vector<double> epsilon_grid = default_epsilon_grid();
	ScoreWeights weights;
	StagingConfig staging;
	CostParams cost = CostParams::defaults();
	PartitionOptions partition;
	std::uint64_t master_seed = 0;
	int jobs = 1;
	/// Skip partitioning; CS columns are then NaN.
	bool skip_score = false;

	/** All five generators at their defaults for @p n vertices. */
	static SweepConfig defaults(int n = 40);

	void validate() const;
};

struct SweepRow {
	GeneratorKind generator = GeneratorKind::DP;
	int sample = 0;
	std::uint64_t seed = 0;
	int n_units = 0;
	int n_vertices = 0;
	int n_edges = 0;
	std::int64_t total_params = 0;
	std::int64_t total_flops = 0;
	int longest_path = 0;
	double cs = 0.0;
	double delta_w = 0.0;
	std::int64_t lambda = 0;
	double lambda_prime = 0.0;
	double eta = 0.0;
	double makespan = 0.0;
	double speedup = 0.0;
	double entropy = 0.0;  ///< NaN on a single unit
	double latency_norm = 0.0;
};

struct SweepResult {
	SweepConfig config;
	/// Ordered by (generator, sample, unit count) following the config order.
	std::vector<SweepRow> rows;
	/// Generator whose mean makespan normalizes latency_norm.
	GeneratorKind reference = GeneratorKind::FB;
};

/** Seed shared by sample @p i of every generator. */
std::uint64_t sample_seed(std::uint64_t master, int i);

SweepResult run_sweep(const SweepConfig& cfg);

struct SummaryRow {
	GeneratorKind generator = GeneratorKind::DP;
	int n_units = 0;
	std::string metric;
	double mean = 0.0;
	double median = 0.0;
	double q25 = 0.0;
	double q75 = 0.0;
};

std::vector<SummaryRow> summarize(const SweepResult& r);

/** Linear-interpolation quantile of @p values, q in [0, 1]. */
double quantile(std::vector<double> values, double q);

void write_sweep_csv(std::ostream& os, const SweepResult& r);
void write_summary_csv(std::ostream& os, const std::vector<SummaryRow>& rows);

}  // namespace cnas

#endif  // CNAS_SWEEP_HPP
