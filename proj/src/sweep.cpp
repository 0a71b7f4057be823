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

#include "cnas/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <mutex>
#include <ostream>
#include <thread>

#include "cnas/dagify.hpp"
#include "cnas/error.hpp"
#include "cnas/io.hpp"
#include "cnas/rng.hpp"

namespace cnas {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<SweepRow> run_sample(const SweepConfig& cfg, int i) {
	const std::uint64_t seed = sample_seed(cfg.master_seed, i);
	std::vector<SweepRow> rows;
	for (const auto& tmpl : cfg.generators) {
		GeneratorConfig gc = tmpl;
		gc.seed = seed;
		const auto graph = generate(gc);
		const auto spec = elaborate(orient(graph), cfg.staging, seed);
		const auto grouped = group_chains(spec);
		const int lp = longest_path_length(spec.dag);
		for (int n : cfg.units) {
			SweepRow r;
			r.generator = gc.kind;
			r.sample = i;
			r.seed = seed;
			r.n_units = n;
			r.n_vertices = spec.dag.n_vertices();
			r.n_edges = static_cast<int>(graph.edges.size());
			r.total_params = spec.total_params;
			r.total_flops = spec.total_flops;
			r.longest_path = lp;
			if (cfg.skip_score) {
				r.cs = r.delta_w = r.lambda_prime = kNaN;
				r.eta = overlap_ratio(spec.dag, n);
			} else {
				const auto report = concurrency_score(spec, n, cfg.epsilon_grid, cfg.weights,
				                                      derive_seed(seed, stream::kPartition, static_cast<std::uint64_t>(n)),
				                                      cfg.partition);
				const auto& best = report.best();
				r.cs = best.cs;
				r.delta_w = best.delta_w;
				r.lambda = best.lambda;
				r.lambda_prime = best.lambda_prime;
				r.eta = best.eta;
			}
			const auto placement = place_greedy(grouped, n);
			const auto sim = simulate(spec, placement, cfg.cost);
			r.makespan = sim.makespan;
			r.speedup = sim.speedup;
			r.entropy = n >= 2 ? balance_entropy(placement, grouped, n) : kNaN;
			rows.push_back(r);
		}
	}
	return rows;
}

double mean_of(const std::vector<double>& v) {
	double sum = 0.0;
	for (double x : v) sum += x;
	return v.empty() ? kNaN : sum / static_cast<double>(v.size());
}

}  // namespace

SweepConfig SweepConfig::defaults(int n) {
	SweepConfig c;
	for (auto kind : {GeneratorKind::ER, GeneratorKind::BA, GeneratorKind::WS, GeneratorKind::DP, GeneratorKind::FB}) {
		c.generators.push_back(GeneratorConfig::defaults(kind, n));
	}
	return c;
}

void SweepConfig::validate() const {
	if (generators.empty()) throw InvalidArgument("sweep needs at least one generator");
	if (units.empty()) throw InvalidArgument("sweep needs at least one unit count");
	if (samples < 1) throw InvalidArgument("samples must be at least 1");
	if (jobs < 1) throw InvalidArgument("jobs must be at least 1");
	for (int n : units) {
		if (n < 1) throw InvalidArgument("unit counts must be at least 1");
	}
	for (double e : epsilon_grid) {
		if (!(e >= 1.0)) throw InvalidArgument("epsilon values must be at least 1");
	}
	if (epsilon_grid.empty()) throw InvalidArgument("epsilon grid is empty");
	for (const auto& g : generators) g.validate();
	staging.validate();
}

std::uint64_t sample_seed(std::uint64_t master, int i) {
	return derive_seed(master, stream::kSample, static_cast<std::uint64_t>(i));
}

SweepResult run_sweep(const SweepConfig& cfg) {
	cfg.validate();
	std::vector<std::vector<SweepRow>> per_sample(static_cast<std::size_t>(cfg.samples));
	std::atomic<int> next{0};
	std::exception_ptr failure;
	std::mutex failure_mutex;
	auto worker = [&] {
		for (int i = next++; i < cfg.samples; i = next++) {
			try {
				per_sample[static_cast<std::size_t>(i)] = run_sample(cfg, i);
			} catch (...) {
				std::lock_guard lock(failure_mutex);
				if (!failure) failure = std::current_exception();
				next = cfg.samples;
			}
		}
	};
	const int n_threads = std::min(cfg.jobs, cfg.samples);
	if (n_threads <= 1) {
		worker();
	} else {
		std::vector<std::thread> pool;
		for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
		for (auto& t : pool) t.join();
	}
	if (failure) std::rethrow_exception(failure);

	SweepResult result;
	result.config = cfg;
	result.reference = cfg.generators.front().kind;
	for (const auto& g : cfg.generators) {
		if (g.kind == GeneratorKind::FB) result.reference = GeneratorKind::FB;
	}
	for (std::size_t gi = 0; gi < cfg.generators.size(); ++gi) {
		for (const auto& sample : per_sample) {
			const std::size_t per_gen = cfg.units.size();
			for (std::size_t u = 0; u < per_gen; ++u) {
				result.rows.push_back(sample[gi * per_gen + u]);
			}
		}
	}

	std::map<int, std::vector<double>> ref_makespans;
	for (const auto& r : result.rows) {
		if (r.generator == result.reference) ref_makespans[r.n_units].push_back(r.makespan);
	}
	for (auto& r : result.rows) {
		r.latency_norm = r.makespan / mean_of(ref_makespans[r.n_units]);
	}
	return result;
}

double quantile(std::vector<double> values, double q) {
	values.erase(std::remove_if(values.begin(), values.end(), [](double x) { return std::isnan(x); }), values.end());
	if (values.empty()) return kNaN;
	std::sort(values.begin(), values.end());
	const double pos = q * static_cast<double>(values.size() - 1);
	const auto lo = static_cast<std::size_t>(std::floor(pos));
	const auto hi = std::min(lo + 1, values.size() - 1);
	return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

std::vector<SummaryRow> summarize(const SweepResult& r) {
	using Getter = double (*)(const SweepRow&);
	static const std::vector<std::pair<const char*, Getter>> metrics = {
	    {"cs", [](const SweepRow& x) { return x.cs; }},
	    {"lambda_mb", [](const SweepRow& x) { return static_cast<double>(x.lambda) / 1.0e6; }},
	    {"lambda_prime", [](const SweepRow& x) { return x.lambda_prime; }},
	    {"eta", [](const SweepRow& x) { return x.eta; }},
	    {"delta_w", [](const SweepRow& x) { return x.delta_w; }},
	    {"latency_norm", [](const SweepRow& x) { return x.latency_norm; }},
	    {"speedup", [](const SweepRow& x) { return x.speedup; }},
	    {"total_params", [](const SweepRow& x) { return static_cast<double>(x.total_params); }},
	    {"entropy", [](const SweepRow& x) { return x.entropy; }},
	};
	std::vector<SummaryRow> out;
	for (const auto& g : r.config.generators) {
		for (int n : r.config.units) {
			for (const auto& [name, get] : metrics) {
				std::vector<double> values;
				for (const auto& row : r.rows) {
					if (row.generator == g.kind && row.n_units == n) {
						const double x = get(row);
						if (!std::isnan(x)) values.push_back(x);
					}
				}
				out.push_back({g.kind, n, name, mean_of(values), quantile(values, 0.5), quantile(values, 0.25),
				               quantile(values, 0.75)});
			}
		}
	}
	return out;
}

void write_sweep_csv(std::ostream& os, const SweepResult& r) {
	os << "generator,sample,seed,n_units,n_vertices,n_edges,total_params,total_flops,longest_path,cs,delta_w,"
	      "lambda_bytes,lambda_prime,eta,makespan,speedup,entropy,latency_norm\n";
	for (const auto& x : r.rows) {
		os << to_string(x.generator) << ',' << x.sample << ',' << x.seed << ',' << x.n_units << ',' << x.n_vertices
		   << ',' << x.n_edges << ',' << x.total_params << ',' << x.total_flops << ',' << x.longest_path << ','
		   << format_double(x.cs) << ',' << format_double(x.delta_w) << ',' << x.lambda << ','
		   << format_double(x.lambda_prime) << ',' << format_double(x.eta) << ',' << format_double(x.makespan)
		   << ',' << format_double(x.speedup) << ',' << format_double(x.entropy) << ','
		   << format_double(x.latency_norm) << '\n';
	}
}

void write_summary_csv(std::ostream& os, const std::vector<SummaryRow>& rows) {
	os << "generator,n_units,metric,mean,median,q25,q75\n";
	for (const auto& s : rows) {
		os << to_string(s.generator) << ',' << s.n_units << ',' << s.metric << ',' << format_double(s.mean) << ','
		   << format_double(s.median) << ',' << format_double(s.q25) << ',' << format_double(s.q75) << '\n';
	}
}

}  // namespace cnas
