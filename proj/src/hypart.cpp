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

#include "cnas/hypart.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <ostream>
#include <string>
#include <tuple>
#include <utility>

#include "cnas/error.hpp"
#include "cnas/rng.hpp"

namespace cnas {

namespace {

std::size_t idx(int v) { return static_cast<std::size_t>(v); }

std::int64_t overweight(std::int64_t w, std::int64_t max_w) { return w > max_w ? w - max_w : 0; }

/**
 * Incremental state of a k-way assignment: pin counts per (hyperedge, part),
 * part weights and sizes, and the gain of every (vertex, target part) move.
 */
class KwayRefiner {
public:
	KwayRefiner(const Hypergraph& h, int k, std::int64_t max_w)
	    : h_(h), k_(k), max_w_(max_w) {}

	std::vector<std::int64_t> run(std::vector<int>& part, int max_passes) {
		part_ = &part;
		rebuild();
		std::vector<std::int64_t> trace{lambda_};
		for (int pass = 0; pass < max_passes; ++pass) {
			const auto before = std::make_pair(penalty_, lambda_);
			one_pass();
			rebuild();
			trace.push_back(lambda_);
			if (std::make_pair(penalty_, lambda_) >= before) {
				break;
			}
		}
		return trace;
	}

	std::int64_t lambda() const { return lambda_; }
	std::int64_t penalty() const { return penalty_; }

private:
	int& pc(int e, int p) { return pin_count_[idx(e) * idx(k_) + idx(p)]; }
	std::int64_t& gain(int v, int p) { return gain_[idx(v) * idx(k_) + idx(p)]; }

	// Contribution of hyperedge e to moving pin u into part `to`.
	std::int64_t contribution(int e, int u, int to) {
		const int from = (*part_)[idx(u)];
		std::int64_t g = 0;
		if (pc(e, from) == 1) g += h_.cost(e);
		if (pc(e, to) == 0) g -= h_.cost(e);
		return g;
	}

	void rebuild() {
		const auto& part = *part_;
		const int n = h_.n_vertices();
		pin_count_.assign(idx(h_.n_hyperedges()) * idx(k_), 0);
		part_weight_.assign(idx(k_), 0);
		part_size_.assign(idx(k_), 0);
		for (int v = 0; v < n; ++v) {
			part_weight_[idx(part[idx(v)])] += h_.weight(v);
			++part_size_[idx(part[idx(v)])];
		}
		lambda_ = 0;
		for (int e = 0; e < h_.n_hyperedges(); ++e) {
			int touched = 0;
			for (int u : h_.pins(e)) {
				if (pc(e, part[idx(u)])++ == 0) ++touched;
			}
			lambda_ += h_.cost(e) * (touched - 1);
		}
		penalty_ = 0;
		for (auto w : part_weight_) penalty_ += overweight(w, max_w_);
		gain_.assign(idx(n) * idx(k_), 0);
		for (int v = 0; v < n; ++v) {
			for (int e : h_.incident(v)) {
				for (int to = 0; to < k_; ++to) {
					if (to != part[idx(v)]) gain(v, to) += contribution(e, v, to);
				}
			}
		}
		locked_.assign(idx(n), 0);
	}

	void update_pins(int e, int moved, int sign) {
		const auto& part = *part_;
		for (int u : h_.pins(e)) {
			if (u == moved || locked_[idx(u)]) continue;
			for (int to = 0; to < k_; ++to) {
				if (to != part[idx(u)]) gain(u, to) += sign * contribution(e, u, to);
			}
		}
	}

	void apply(int v, int to) {
		auto& part = *part_;
		const int from = part[idx(v)];
		lambda_ -= gain(v, to);
		penalty_ += delta_penalty(v, from, to);
		for (int e : h_.incident(v)) {
			update_pins(e, v, -1);
			--pc(e, from);
			++pc(e, to);
			update_pins(e, v, +1);
		}
		part[idx(v)] = to;
		part_weight_[idx(from)] -= h_.weight(v);
		part_weight_[idx(to)] += h_.weight(v);
		--part_size_[idx(from)];
		++part_size_[idx(to)];
		locked_[idx(v)] = 1;
	}

	std::int64_t delta_penalty(int v, int from, int to) const {
		const std::int64_t w = h_.weight(v);
		const std::int64_t wf = part_weight_[idx(from)];
		const std::int64_t wt = part_weight_[idx(to)];
		return overweight(wf - w, max_w_) - overweight(wf, max_w_) + overweight(wt + w, max_w_) -
		       overweight(wt, max_w_);
	}

	void one_pass() {
		auto& part = *part_;
		const int n = h_.n_vertices();
		struct Move {
			int v, from, to;
		};
		std::vector<Move> moves;
		auto best = std::make_pair(penalty_, lambda_);
		std::size_t best_len = 0;
		const int patience = std::max(64, n / 4);
		for (int step = 0; step < n; ++step) {
			int bv = -1;
			int bto = -1;
			std::tuple<std::int64_t, std::int64_t, std::int64_t> bkey{};
			for (int v = 0; v < n; ++v) {
				if (locked_[idx(v)]) continue;
				const int from = part[idx(v)];
				if (part_size_[idx(from)] <= 1) continue;
				for (int to = 0; to < k_; ++to) {
					if (to == from) continue;
					const std::int64_t dpen = delta_penalty(v, from, to);
					if (dpen > 0) continue;
					// Smaller is better: penalty change, negated gain, target weight.
					const auto key = std::make_tuple(dpen, -gain(v, to), part_weight_[idx(to)]);
					if (bv < 0 || key < bkey) {
						bv = v;
						bto = to;
						bkey = key;
					}
				}
			}
			if (bv < 0) break;
			moves.push_back({bv, part[idx(bv)], bto});
			apply(bv, bto);
			const auto now = std::make_pair(penalty_, lambda_);
			if (now < best) {
				best = now;
				best_len = moves.size();
			} else if (moves.size() - best_len > static_cast<std::size_t>(patience)) {
				break;
			}
		}
		for (std::size_t i = moves.size(); i > best_len; --i) {
			part[idx(moves[i - 1].v)] = moves[i - 1].from;
		}
	}

	const Hypergraph& h_;
	int k_;
	std::int64_t max_w_;
	std::vector<int>* part_ = nullptr;
	std::vector<int> pin_count_;
	std::vector<std::int64_t> part_weight_;
	std::vector<int> part_size_;
	std::vector<std::int64_t> gain_;
	std::vector<char> locked_;
	std::int64_t lambda_ = 0;
	std::int64_t penalty_ = 0;
};

struct Coarsened {
	Hypergraph h;
	std::vector<int> fine_to_coarse;
};

// Heavy-connectivity matching: pair each vertex with the unmatched neighbour
// sharing the most cost per pin, subject to a cluster weight cap.
Coarsened coarsen(const Hypergraph& h, std::int64_t max_cluster_w, Rng& rng) {
	const int n = h.n_vertices();
	std::vector<std::uint64_t> key(idx(n));
	for (auto& x : key) x = rng.next();
	std::vector<int> order(idx(n));
	std::iota(order.begin(), order.end(), 0);
	std::sort(order.begin(), order.end(), [&](int a, int b) { return key[idx(a)] < key[idx(b)]; });

	std::vector<int> mate(idx(n), -1);
	std::vector<double> rating(idx(n), 0.0);
	std::vector<int> touched;
	for (int u : order) {
		if (mate[idx(u)] >= 0) continue;
		touched.clear();
		for (int e : h.incident(u)) {
			const double r = static_cast<double>(h.cost(e)) / static_cast<double>(h.pins(e).size() - 1);
			for (int v : h.pins(e)) {
				if (v == u || mate[idx(v)] >= 0) continue;
				if (rating[idx(v)] == 0.0) touched.push_back(v);
				rating[idx(v)] += r;
			}
		}
		int best = -1;
		for (int v : touched) {
			if (h.weight(u) + h.weight(v) > max_cluster_w) continue;
			// Ratings within a relative 1e-9 tie, so uniform cost scaling
			// cannot flip a choice through rounding.
			const double slack = 1e-9 * std::max(rating[idx(v)], best < 0 ? 0.0 : rating[idx(best)]);
			if (best < 0 || rating[idx(v)] > rating[idx(best)] + slack ||
			    (rating[idx(v)] >= rating[idx(best)] - slack && v < best)) {
				best = v;
			}
		}
		for (int v : touched) rating[idx(v)] = 0.0;
		if (best >= 0) {
			mate[idx(u)] = best;
			mate[idx(best)] = u;
		} else {
			mate[idx(u)] = u;
		}
	}

	Coarsened out;
	out.fine_to_coarse.assign(idx(n), -1);
	int next = 0;
	std::vector<std::int64_t> weights;
	for (int v = 0; v < n; ++v) {
		if (out.fine_to_coarse[idx(v)] >= 0) continue;
		out.fine_to_coarse[idx(v)] = next;
		std::int64_t w = h.weight(v);
		const int m = mate[idx(v)];
		if (m != v && m >= 0) {
			out.fine_to_coarse[idx(m)] = next;
			w += h.weight(m);
		}
		weights.push_back(w);
		++next;
	}
	std::map<std::vector<int>, std::int64_t> merged;
	for (int e = 0; e < h.n_hyperedges(); ++e) {
		std::vector<int> pins;
		for (int v : h.pins(e)) pins.push_back(out.fine_to_coarse[idx(v)]);
		std::sort(pins.begin(), pins.end());
		pins.erase(std::unique(pins.begin(), pins.end()), pins.end());
		if (pins.size() >= 2) merged[std::move(pins)] += h.cost(e);
	}
	std::vector<std::vector<int>> edges;
	std::vector<std::int64_t> costs;
	for (auto& [pins, c] : merged) {
		edges.push_back(pins);
		costs.push_back(c);
	}
	out.h = Hypergraph(std::move(weights), std::move(edges), std::move(costs));
	return out;
}

// Heaviest first onto the lightest part; empty parts are filled first.
std::vector<int> initial_packing(const Hypergraph& h, int k, Rng& rng) {
	const int n = h.n_vertices();
	std::vector<std::uint64_t> key(idx(n));
	for (auto& x : key) x = rng.next();
	std::vector<int> order(idx(n));
	std::iota(order.begin(), order.end(), 0);
	std::sort(order.begin(), order.end(), [&](int a, int b) {
		if (h.weight(a) != h.weight(b)) return h.weight(a) > h.weight(b);
		return key[idx(a)] < key[idx(b)];
	});
	std::vector<int> part(idx(n), 0);
	std::vector<std::int64_t> w(idx(k), 0);
	std::vector<int> size(idx(k), 0);
	for (int v : order) {
		int best = 0;
		for (int p = 1; p < k; ++p) {
			const auto kp = std::make_pair(size[idx(p)] > 0, w[idx(p)]);
			const auto kb = std::make_pair(size[idx(best)] > 0, w[idx(best)]);
			if (kp < kb) best = p;
		}
		part[idx(v)] = best;
		w[idx(best)] += h.weight(v);
		++size[idx(best)];
	}
	return part;
}

// Breadth-first region growing from a random vertex: each vertex joins the
// admissible part it is most connected to.
std::vector<int> initial_growing(const Hypergraph& h, int k, std::int64_t max_w, Rng& rng) {
	const int n = h.n_vertices();
	std::vector<int> order;
	order.reserve(idx(n));
	std::vector<char> seen(idx(n), 0);
	std::vector<std::uint64_t> key(idx(n));
	for (auto& x : key) x = rng.next();
	std::vector<int> roots(idx(n));
	std::iota(roots.begin(), roots.end(), 0);
	std::sort(roots.begin(), roots.end(), [&](int a, int b) { return key[idx(a)] < key[idx(b)]; });
	for (int root : roots) {
		if (seen[idx(root)]) continue;
		seen[idx(root)] = 1;
		std::size_t head = order.size();
		order.push_back(root);
		while (head < order.size()) {
			const int u = order[head++];
			for (int e : h.incident(u)) {
				for (int v : h.pins(e)) {
					if (!seen[idx(v)]) {
						seen[idx(v)] = 1;
						order.push_back(v);
					}
				}
			}
		}
	}

	std::vector<int> part(idx(n), -1);
	std::vector<std::int64_t> w(idx(k), 0);
	std::vector<int> size(idx(k), 0);
	std::vector<std::int64_t> conn(idx(k));
	int empty = k;
	for (std::size_t i = 0; i < order.size(); ++i) {
		const int v = order[i];
		const int remaining = static_cast<int>(order.size() - i);
		std::fill(conn.begin(), conn.end(), 0);
		for (int e : h.incident(v)) {
			for (int u : h.pins(e)) {
				if (u != v && part[idx(u)] >= 0) conn[idx(part[idx(u)])] += h.cost(e);
			}
		}
		int best = -1;
		for (int p = 0; p < k; ++p) {
			if (remaining <= empty && size[idx(p)] > 0) continue;
			if (w[idx(p)] + h.weight(v) > max_w && size[idx(p)] > 0) continue;
			if (best < 0 || conn[idx(p)] > conn[idx(best)] ||
			    (conn[idx(p)] == conn[idx(best)] && w[idx(p)] < w[idx(best)])) {
				best = p;
			}
		}
		if (best < 0) {
			best = static_cast<int>(std::min_element(w.begin(), w.end()) - w.begin());
		}
		if (size[idx(best)] == 0) --empty;
		part[idx(v)] = best;
		w[idx(best)] += h.weight(v);
		++size[idx(best)];
	}
	return part;
}

struct Candidate {
	std::vector<int> part;
	std::int64_t penalty = 0;
	std::int64_t lambda = 0;

	bool better_than(const Candidate& o) const {
		return std::make_pair(penalty, lambda) < std::make_pair(o.penalty, o.lambda);
	}
};

Candidate refine_candidate(const Hypergraph& h, std::vector<int> part, int k, std::int64_t max_w, int passes) {
	KwayRefiner refiner(h, k, max_w);
	refiner.run(part, passes);
	return Candidate{std::move(part), refiner.penalty(), refiner.lambda()};
}

Candidate multilevel(const Hypergraph& h, int k, std::int64_t max_w, std::uint64_t seed,
                     const PartitionOptions& opt) {
	Rng rng(seed);
	std::vector<Hypergraph> levels{h};
	std::vector<std::vector<int>> maps;
	const int limit = std::max(3 * k, 16);
	const std::int64_t heaviest = *std::max_element(h.weights().begin(), h.weights().end());
	const std::int64_t cluster_cap = std::max(heaviest, (h.total_weight() + 3 * k - 1) / (3 * k));
	while (levels.back().n_vertices() > limit) {
		auto c = coarsen(levels.back(), cluster_cap, rng);
		if (c.h.n_vertices() * 10 > levels.back().n_vertices() * 9 || c.h.n_vertices() < k) break;
		maps.push_back(std::move(c.fine_to_coarse));
		levels.push_back(std::move(c.h));
	}

	const Hypergraph& coarsest = levels.back();
	Candidate best;
	bool have = false;
	for (int a = 0; a < opt.initial_attempts; ++a) {
		auto init = (a % 2 == 0) ? initial_growing(coarsest, k, max_w, rng) : initial_packing(coarsest, k, rng);
		auto c = refine_candidate(coarsest, std::move(init), k, max_w, opt.max_passes);
		if (!have || c.better_than(best)) {
			best = std::move(c);
			have = true;
		}
	}

	std::vector<int> part = std::move(best.part);
	for (std::size_t level = maps.size(); level-- > 0;) {
		const auto& map = maps[level];
		std::vector<int> fine(map.size());
		for (std::size_t v = 0; v < map.size(); ++v) fine[v] = part[idx(map[v])];
		part = std::move(fine);
		auto c = refine_candidate(levels[level], std::move(part), k, max_w, opt.max_passes);
		part = std::move(c.part);
		best.penalty = c.penalty;
		best.lambda = c.lambda;
	}
	best.part = std::move(part);
	return best;
}

// Zero-weight vertices (input/output) go to the part with the best gain,
// ties toward the part holding most of their neighbours.
void place_weightless(const Hypergraph& h, std::vector<int>& part, int k) {
	std::vector<int> size(idx(k), 0);
	for (int p : part) ++size[idx(p)];
	std::vector<int> pins_in(idx(k));
	std::vector<int> seen(idx(k));
	for (int v = 0; v < h.n_vertices(); ++v) {
		if (h.weight(v) != 0) continue;
		const int from = part[idx(v)];
		if (size[idx(from)] <= 1) continue;
		std::vector<std::int64_t> gain(idx(k), 0);
		std::fill(pins_in.begin(), pins_in.end(), 0);
		for (int e : h.incident(v)) {
			std::fill(seen.begin(), seen.end(), 0);
			for (int u : h.pins(e)) {
				if (u == v) continue;
				++seen[idx(part[idx(u)])];
				++pins_in[idx(part[idx(u)])];
			}
			for (int to = 0; to < k; ++to) {
				if (to == from) continue;
				if (seen[idx(from)] == 0) gain[idx(to)] += h.cost(e);
				if (seen[idx(to)] == 0) gain[idx(to)] -= h.cost(e);
			}
		}
		int best = from;
		for (int to = 0; to < k; ++to) {
			const auto kt = std::make_pair(gain[idx(to)], pins_in[idx(to)]);
			const auto kb = std::make_pair(gain[idx(best)], pins_in[idx(best)]);
			if (kt > kb) best = to;
		}
		if (best != from) {
			--size[idx(from)];
			++size[idx(best)];
			part[idx(v)] = best;
		}
	}
}

}  // namespace

Hypergraph::Hypergraph(std::vector<std::int64_t> vertex_weights, std::vector<std::vector<int>> hyperedges,
                       std::vector<std::int64_t> costs)
    : weights_(std::move(vertex_weights)), pins_(std::move(hyperedges)), costs_(std::move(costs)) {
	if (pins_.size() != costs_.size()) {
		throw InvalidArgument("hyperedge and cost counts differ");
	}
	const int n = n_vertices();
	for (auto w : weights_) {
		if (w < 0) throw InvalidArgument("negative vertex weight");
		total_weight_ += w;
	}
	incident_.assign(idx(n), {});
	for (std::size_t e = 0; e < pins_.size(); ++e) {
		if (costs_[e] < 0) throw InvalidArgument("negative hyperedge cost");
		auto& pins = pins_[e];
		std::vector<int> unique;
		for (int v : pins) {
			if (v < 0 || v >= n) throw InvalidArgument("hyperedge pin out of range");
			if (std::find(unique.begin(), unique.end(), v) == unique.end()) unique.push_back(v);
		}
		if (unique.size() < 2) throw InvalidArgument("hyperedge with fewer than two pins");
		pins = std::move(unique);
		for (int v : pins) incident_[idx(v)].push_back(static_cast<int>(e));
	}
}

Hypergraph build_hypergraph(const ArchSpec& spec) {
	const auto& dag = spec.dag;
	std::vector<std::int64_t> weights(idx(dag.n_vertices()), 0);
	std::vector<std::vector<int>> edges;
	std::vector<std::int64_t> costs;
	for (int v = 0; v < dag.n_vertices(); ++v) {
		if (!dag.is_synthetic(v)) weights[idx(v)] = spec.flops[idx(v)];
		const auto& succ = dag.successors(v);
		if (succ.empty()) continue;
		std::vector<int> pins{v};
		pins.insert(pins.end(), succ.begin(), succ.end());
		edges.push_back(std::move(pins));
		costs.push_back(output_bytes(spec, v));
	}
	return Hypergraph(std::move(weights), std::move(edges), std::move(costs));
}

void write_hmetis(std::ostream& os, const Hypergraph& h) {
	os << h.n_hyperedges() << ' ' << h.n_vertices() << " 11\n";
	for (int e = 0; e < h.n_hyperedges(); ++e) {
		os << h.cost(e);
		for (int v : h.pins(e)) os << ' ' << v + 1;
		os << '\n';
	}
	for (int v = 0; v < h.n_vertices(); ++v) os << h.weight(v) << '\n';
}

std::int64_t max_part_weight(std::int64_t total_weight, int n_parts, double epsilon) {
	return static_cast<std::int64_t>(
	    std::floor(epsilon * static_cast<double>(total_weight) / static_cast<double>(n_parts) + 1e-9));
}

Partition make_partition(const Hypergraph& h, std::vector<int> part_of, int n_parts, double epsilon) {
	if (n_parts < 1) throw InvalidArgument("partition needs at least one part");
	if (static_cast<int>(part_of.size()) != h.n_vertices()) {
		throw InvalidArgument("assignment size differs from vertex count");
	}
	Partition p;
	p.n_parts = n_parts;
	p.epsilon = epsilon;
	p.part_weights.assign(idx(n_parts), 0);
	std::vector<int> size(idx(n_parts), 0);
	for (int v = 0; v < h.n_vertices(); ++v) {
		const int q = part_of[idx(v)];
		if (q < 0 || q >= n_parts) throw InvalidArgument("assignment references unknown part");
		p.part_weights[idx(q)] += h.weight(v);
		++size[idx(q)];
	}
	if (std::find(size.begin(), size.end(), 0) != size.end()) {
		throw InvalidArgument("partition leaves a part empty");
	}
	const std::int64_t cap = max_part_weight(h.total_weight(), n_parts, epsilon);
	p.balanced = std::all_of(p.part_weights.begin(), p.part_weights.end(), [cap](auto w) { return w <= cap; });
	p.part_of = std::move(part_of);
	return p;
}

std::int64_t total_communication(const Hypergraph& h, const Partition& p) {
	if (static_cast<int>(p.part_of.size()) != h.n_vertices()) {
		throw InvalidArgument("partition does not match hypergraph");
	}
	std::vector<int> stamp(idx(p.n_parts), -1);
	std::int64_t total = 0;
	for (int e = 0; e < h.n_hyperedges(); ++e) {
		int touched = 0;
		for (int v : h.pins(e)) {
			const int q = p.part_of[idx(v)];
			if (q < 0 || q >= p.n_parts) throw InvalidArgument("assignment references unknown part");
			if (stamp[idx(q)] != e) {
				stamp[idx(q)] = e;
				++touched;
			}
		}
		total += h.cost(e) * (touched - 1);
	}
	return total;
}

double load_imbalance(const Partition& p) {
	std::int64_t total = 0;
	std::int64_t heaviest = 0;
	for (auto w : p.part_weights) {
		total += w;
		heaviest = std::max(heaviest, w);
	}
	if (total == 0) return 1.0;
	return static_cast<double>(heaviest) * p.n_parts / static_cast<double>(total);
}

std::vector<std::int64_t> refine_fm(const Hypergraph& h, std::vector<int>& part_of, int n_parts,
                                    std::int64_t max_weight, int max_passes) {
	if (static_cast<int>(part_of.size()) != h.n_vertices()) {
		throw InvalidArgument("assignment size differs from vertex count");
	}
	KwayRefiner refiner(h, n_parts, max_weight);
	return refiner.run(part_of, max_passes);
}

Partition partition(const Hypergraph& h, int n_parts, double epsilon, std::uint64_t seed,
                    const PartitionOptions& options) {
	if (n_parts < 1) throw InvalidArgument("n_parts must be at least 1");
	if (n_parts > h.n_vertices()) throw InvalidArgument("more parts than vertices");
	if (!(epsilon >= 1.0)) throw InvalidArgument("epsilon must be >= 1");
	if (n_parts == 1) {
		return make_partition(h, std::vector<int>(idx(h.n_vertices()), 0), 1, epsilon);
	}
	const std::int64_t max_w = max_part_weight(h.total_weight(), n_parts, epsilon);
	Candidate best;
	for (int r = 0; r < std::max(1, options.restarts); ++r) {
		auto c = multilevel(h, n_parts, max_w, derive_seed(seed, stream::kPartition, r), options);
		if (r == 0 || c.better_than(best)) best = std::move(c);
	}
	place_weightless(h, best.part, n_parts);
	return make_partition(h, std::move(best.part), n_parts, epsilon);
}

}  // namespace cnas
