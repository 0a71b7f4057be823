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

#include "cnas/score.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "cnas/error.hpp"
#include "cnas/rng.hpp"

namespace cnas {

std::vector<double> default_epsilon_grid() { return {1.05, 1.10, 1.20, 1.35, 1.50}; }

double overlap_ratio(const ArchDag& d, int n) {
	if (n < 1) {
		throw InvalidArgument("unit count must be at least 1");
	}
	return static_cast<double>(longest_path_length(d)) * n / static_cast<double>(d.n_vertices());
}

double cs_value(double delta_w, double lambda_prime, double eta, const ScoreWeights& w) {
	if (lambda_prime == 0.0) {
		return 0.0;
	}
	return std::cbrt(std::pow(delta_w, w.a) * std::pow(lambda_prime, w.b) * std::pow(eta, w.c));
}

std::int64_t min_edge_bytes(const ArchSpec& spec) {
	if (spec.edge_bytes.empty()) {
		throw InvalidArgument("architecture has no edges");
	}
	return *std::min_element(spec.edge_bytes.begin(), spec.edge_bytes.end());
}

MetricsReport concurrency_score(const ArchSpec& spec, int n, std::span<const double> eps_grid,
                                const ScoreWeights& weights, std::uint64_t seed,
                                const PartitionOptions& options) {
	if (eps_grid.empty()) {
		throw InvalidArgument("epsilon grid is empty");
	}
	if (spec.dag.n_compute_vertices() == 0) {
		throw InvalidArgument("architecture has no blocks");
	}
	const auto h = build_hypergraph(spec);
	MetricsReport report;
	report.n_units = n;
	report.epsilon_grid.assign(eps_grid.begin(), eps_grid.end());
	report.u_c = min_edge_bytes(spec);
	const double eta = overlap_ratio(spec.dag, n);

	std::vector<Partition> parts;
	for (double eps : eps_grid) {
		auto p = partition(h, n, eps, derive_seed(seed, std::bit_cast<std::uint64_t>(eps)), options);
		MetricsRecord r;
		r.epsilon = eps;
		r.delta_w = load_imbalance(p);
		r.lambda = total_communication(h, p);
		r.lambda_prime = static_cast<double>(r.lambda) / (static_cast<double>(report.u_c) * n);
		r.eta = eta;
		r.cs = cs_value(r.delta_w, r.lambda_prime, r.eta, weights);
		r.balanced = p.balanced;
		report.records.push_back(r);
		parts.push_back(std::move(p));
	}
	report.all_infeasible = std::none_of(report.records.begin(), report.records.end(),
	                                     [](const MetricsRecord& r) { return r.balanced; });
	for (std::size_t i = 1; i < report.records.size(); ++i) {
		if (report.records[i].cs < report.records[report.best_index].cs) {
			report.best_index = i;
		}
	}
	report.best_cs = report.records[report.best_index].cs;
	report.best_partition = std::move(parts[report.best_index]);
	return report;
}

}  // namespace cnas
