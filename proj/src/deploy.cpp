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

#include "cnas/deploy.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>
#include <tuple>

#include "cnas/error.hpp"

namespace cnas {

namespace {

std::size_t idx(int v) { return static_cast<std::size_t>(v); }

}  // namespace

GroupedDag group_chains(const ArchSpec& spec) {
	const auto& dag = spec.dag;
	const int n = dag.n_vertices();
	std::vector<int> next(idx(n), -1);
	std::vector<char> has_prev(idx(n), 0);
	for (int v = 0; v < n; ++v) {
		if (dag.is_synthetic(v) || dag.successors(v).size() != 1) continue;
		const int w = dag.successors(v).front();
		if (dag.is_synthetic(w) || dag.predecessors(w).size() != 1) continue;
		next[idx(v)] = w;
		has_prev[idx(w)] = 1;
	}

	GroupedDag g;
	g.group_of.assign(idx(n), -1);
	for (int v : dag.topological_order()) {
		if (has_prev[idx(v)]) continue;
		const int id = g.n_groups();
		std::vector<int> chain;
		std::int64_t weight = 0;
		for (int x = v; x >= 0; x = next[idx(x)]) {
			chain.push_back(x);
			g.group_of[idx(x)] = id;
			weight += spec.flops[idx(x)];
		}
		g.groups.push_back(std::move(chain));
		g.group_weights.push_back(weight);
	}
	g.input_group = g.group_of[idx(dag.input_vertex())];
	g.output_group = g.group_of[idx(dag.output_vertex())];

	std::map<std::pair<int, int>, std::int64_t> bytes;
	for (int u = 0; u < n; ++u) {
		std::vector<int> targets;
		for (int w : dag.successors(u)) {
			const int gw = g.group_of[idx(w)];
			if (gw != g.group_of[idx(u)] && std::find(targets.begin(), targets.end(), gw) == targets.end()) {
				targets.push_back(gw);
			}
		}
		for (int gw : targets) {
			bytes[{g.group_of[idx(u)], gw}] += output_bytes(spec, u);
		}
	}
	for (const auto& [key, b] : bytes) {
		g.group_edges.push_back({key.first, key.second, b});
	}
	return g;
}

bool group_graph_is_acyclic(const GroupedDag& g) {
	const int n = g.n_groups();
	std::vector<int> indeg(idx(n), 0);
	std::vector<std::vector<int>> succ(idx(n));
	for (const auto& e : g.group_edges) {
		succ[idx(e.from)].push_back(e.to);
		++indeg[idx(e.to)];
	}
	std::vector<int> ready;
	for (int v = 0; v < n; ++v) {
		if (indeg[idx(v)] == 0) ready.push_back(v);
	}
	int seen = 0;
	while (!ready.empty()) {
		const int v = ready.back();
		ready.pop_back();
		++seen;
		for (int w : succ[idx(v)]) {
			if (--indeg[idx(w)] == 0) ready.push_back(w);
		}
	}
	return seen == n;
}

Placement place_greedy(const GroupedDag& g, int n, bool dedicated_merge_unit) {
	if (n < 1) {
		throw InvalidArgument("unit count must be at least 1");
	}
	Placement p;
	p.n_units = n;
	p.merge_unit = dedicated_merge_unit ? n : 0;
	p.unit_of_group.assign(idx(g.n_groups()), 0);
	p.unit_load.assign(idx(n), 0);

	std::vector<int> order;
	for (int id = 0; id < g.n_groups(); ++id) {
		if (id != g.input_group && id != g.output_group) order.push_back(id);
	}
	std::stable_sort(order.begin(), order.end(),
	                 [&](int a, int b) { return g.group_weights[idx(a)] > g.group_weights[idx(b)]; });
	for (int id : order) {
		const auto unit = static_cast<int>(std::min_element(p.unit_load.begin(), p.unit_load.end()) -
		                                   p.unit_load.begin());
		p.unit_of_group[idx(id)] = unit;
		p.unit_load[idx(unit)] += g.group_weights[idx(id)];
	}
	p.unit_of_group[idx(g.input_group)] = Placement::kCommon;
	p.unit_of_group[idx(g.output_group)] = p.merge_unit;

	p.unit_of_vertex.assign(g.group_of.size(), 0);
	for (std::size_t v = 0; v < g.group_of.size(); ++v) {
		p.unit_of_vertex[v] = p.unit_of_group[idx(g.group_of[v])];
	}
	return p;
}

double balance_entropy(const Placement& p, const GroupedDag& g, int n) {
	if (n < 2) {
		throw InvalidArgument("balance entropy needs at least two units");
	}
	std::vector<double> load(idx(n), 0.0);
	for (int id = 0; id < g.n_groups(); ++id) {
		const int unit = p.unit_of_group[idx(id)];
		if (unit >= 0 && unit < n) load[idx(unit)] += static_cast<double>(g.group_weights[idx(id)]);
	}
	const double total = std::accumulate(load.begin(), load.end(), 0.0);
	if (total <= 0.0) {
		return 1.0;
	}
	double h = 0.0;
	for (double w : load) {
		if (w > 0.0) {
			const double f = w / total;
			h -= f * std::log(f);
		}
	}
	return h / std::log(static_cast<double>(n));
}

CostParams CostParams::defaults() {
	BlockSpec reference;
	reference.in = reference.out = Shape{32, 16};
	reference.inputs.push_back(ScaledInput{0, Shape{32, 16}, 0, 0});
	CostParams c;
	c.flops_per_time = 1.0e6;
	c.latency = 0.05;
	const double block_time = static_cast<double>(block_flops(reference)) / c.flops_per_time;
	c.bytes_per_time = static_cast<double>(feature_bytes(Shape{32, 16})) / (10.0 * block_time);
	return c;
}

SimResult simulate(const ArchSpec& spec, const Placement& p, const CostParams& cost) {
	const auto& dag = spec.dag;
	const int n = dag.n_vertices();
	if (static_cast<int>(p.unit_of_vertex.size()) != n) {
		throw InvalidArgument("placement does not cover the architecture");
	}
	if (!(cost.flops_per_time > 0.0) || !(cost.bytes_per_time > 0.0) || cost.latency < 0.0) {
		throw InvalidArgument("cost parameters must be positive");
	}
	const int units = p.total_units();
	for (int v = 0; v < n; ++v) {
		const int u = p.unit_of_vertex[idx(v)];
		if (v != dag.input_vertex() && (u < 0 || u >= units)) {
			throw InvalidArgument("vertex " + std::to_string(v) + " is not placed on a unit");
		}
	}

	const auto depth = vertex_depths(dag);
	std::vector<int> order(idx(n));
	std::iota(order.begin(), order.end(), 0);
	std::sort(order.begin(), order.end(),
	          [&](int a, int b) { return std::tie(depth[idx(a)], a) < std::tie(depth[idx(b)], b); });

	SimResult r;
	r.unit_busy.assign(idx(units), 0.0);
	r.start.assign(idx(n), 0.0);
	r.finish.assign(idx(n), 0.0);
	std::vector<double> unit_free(idx(units), 0.0);
	std::vector<double> link_free(idx(units) * idx(units), 0.0);
	// arrival[v * units + d]: when v's output is usable on unit d.
	std::vector<double> arrival(idx(n) * idx(units), -1.0);

	for (int v : order) {
		if (v == dag.input_vertex()) {
			continue;
		}
		const int unit = p.unit_of_vertex[idx(v)];
		double ready = unit_free[idx(unit)];
		for (int q : dag.predecessors(v)) {
			if (q == dag.input_vertex()) continue;
			const double at = p.unit_of_vertex[idx(q)] == unit ? r.finish[idx(q)] : arrival[idx(q) * idx(units) + idx(unit)];
			ready = std::max(ready, at);
		}
		const double duration = static_cast<double>(spec.flops[idx(v)]) / cost.flops_per_time;
		r.start[idx(v)] = ready;
		r.finish[idx(v)] = ready + duration;
		unit_free[idx(unit)] = r.finish[idx(v)];
		r.unit_busy[idx(unit)] += duration;
		r.trace.push_back({ready, unit, "compute_start", v});
		r.trace.push_back({r.finish[idx(v)], unit, "compute_end", v});

		const auto bytes = output_bytes(spec, v);
		for (int w : dag.successors(v)) {
			const int dst = p.unit_of_vertex[idx(w)];
			double& slot = arrival[idx(v) * idx(units) + idx(dst)];
			if (dst == unit || slot >= 0.0) continue;
			double& link = link_free[idx(unit) * idx(units) + idx(dst)];
			const double begin = std::max(r.finish[idx(v)], link);
			const double end = begin + cost.latency + static_cast<double>(bytes) / cost.bytes_per_time;
			link = end;
			slot = end;
			r.transfers.push_back({v, unit, dst, bytes, begin, end});
			r.trace.push_back({begin, unit, "send_start", v});
			r.trace.push_back({end, dst, "recv_end", v});
		}
	}

	if (cost.include_gather) {
		r.makespan = r.finish[idx(dag.output_vertex())];
	} else {
		for (int v = 0; v < n; ++v) {
			if (v != dag.output_vertex()) r.makespan = std::max(r.makespan, r.finish[idx(v)]);
		}
	}
	for (auto f : spec.flops) {
		r.single_unit_makespan += static_cast<double>(f) / cost.flops_per_time;
	}
	r.speedup = r.makespan > 0.0 ? r.single_unit_makespan / r.makespan : 1.0;
	std::sort(r.trace.begin(), r.trace.end(), [](const TraceEvent& a, const TraceEvent& b) {
		return std::tie(a.time, a.unit, a.kind, a.id) < std::tie(b.time, b.unit, b.kind, b.id);
	});
	return r;
}

double critical_path_time(const ArchSpec& spec, const CostParams& cost) {
	const auto& dag = spec.dag;
	std::vector<double> t(idx(dag.n_vertices()), 0.0);
	for (int v : dag.topological_order()) {
		double best = 0.0;
		for (int q : dag.predecessors(v)) best = std::max(best, t[idx(q)]);
		t[idx(v)] = best + static_cast<double>(spec.flops[idx(v)]) / cost.flops_per_time;
	}
	return t[idx(dag.output_vertex())];
}

}  // namespace cnas
