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

#include "cnas/io.hpp"

#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>

#include "cnas/error.hpp"

namespace cnas {

namespace {

std::size_t idx(int v) { return static_cast<std::size_t>(v); }

Json edge_list(const std::vector<Edge>& edges) {
	Json out = Json::array();
	for (const auto& [u, v] : edges) {
		out.push_back({u, v});
	}
	return out;
}

std::vector<Edge> parse_edges(const Json& j) {
	std::vector<Edge> edges;
	for (const auto& e : j) {
		if (!e.is_array() || e.size() != 2) {
			throw IoError("edge entries must be [u, v] pairs");
		}
		edges.emplace_back(e[0].get<int>(), e[1].get<int>());
	}
	return edges;
}

Json to_json(const StagingConfig& s) {
	return {{"mode", to_string(s.mode)},
	        {"prob", s.prob},
	        {"input", {s.input.spatial, s.input.channels}},
	        {"channel_limit", s.channel_limit}};
}

StagingConfig staging_from_json(const Json& j) {
	StagingConfig s;
	if (j.contains("mode")) s.mode = parse_staging_mode(j.at("mode").get<std::string>());
	if (j.contains("prob")) s.prob = j.at("prob").get<double>();
	if (j.contains("input")) s.input = Shape{j.at("input").at(0).get<int>(), j.at("input").at(1).get<int>()};
	if (j.contains("channel_limit")) s.channel_limit = j.at("channel_limit").get<int>();
	return s;
}

// Runs f, reporting every malformed-document failure as an I/O error. A
// well-formed document describing an invalid architecture keeps its
// InvariantViolation.
template <typename F>
auto as_io(F&& f) -> decltype(f()) {
	try {
		return f();
	} catch (const IoError&) {
		throw;
	} catch (const InvariantViolation&) {
		throw;
	} catch (const nlohmann::json::exception& e) {
		throw IoError(std::string("malformed document: ") + e.what());
	} catch (const std::exception& e) {
		throw IoError(std::string("malformed document: ") + e.what());
	}
}

}  // namespace

std::string format_double(double x) {
	char buf[64];
	const auto res = std::to_chars(buf, buf + sizeof buf, x);
	return std::string(buf, res.ptr);
}

Json to_json(const GeneratorConfig& cfg) {
	return {{"kind", to_string(cfg.kind)}, {"n", cfg.n},         {"p", cfg.p},
	        {"m", cfg.m},                  {"k", cfg.k},         {"alpha", cfg.alpha},
	        {"beta", cfg.beta},            {"stages", cfg.stages}, {"seed", cfg.seed}};
}

GeneratorConfig generator_config_from_json(const Json& j) {
	return as_io([&] {
		const auto kind = parse_generator_kind(j.at("kind").get<std::string>());
		auto cfg = GeneratorConfig::defaults(kind, j.value("n", 40));
		cfg.p = j.value("p", cfg.p);
		cfg.m = j.value("m", cfg.m);
		cfg.k = j.value("k", cfg.k);
		cfg.alpha = j.value("alpha", cfg.alpha);
		cfg.beta = j.value("beta", cfg.beta);
		cfg.stages = j.value("stages", cfg.stages);
		cfg.seed = j.value("seed", cfg.seed);
		return cfg;
	});
}

Json graph_to_json(const UndirectedGraph& g, const std::optional<GeneratorConfig>& cfg) {
	Json j;
	j["n"] = g.n_vertices;
	j["edges"] = edge_list(g.edges);
	j["generator"] = cfg ? to_json(*cfg) : Json::object();
	j["stage_markers"] = g.stage_markers;
	return j;
}

UndirectedGraph graph_from_json(const Json& j) {
	return as_io([&] {
		UndirectedGraph g;
		g.n_vertices = j.at("n").get<int>();
		g.edges = parse_edges(j.at("edges"));
		if (j.contains("stage_markers")) {
			g.stage_markers = j.at("stage_markers").get<std::vector<int>>();
		}
		for (const auto& [u, v] : g.edges) {
			if (u < 0 || v < 0 || u >= g.n_vertices || v >= g.n_vertices || u == v) {
				throw IoError("edge endpoint out of range or self-loop");
			}
		}
		g.normalize();
		return g;
	});
}

Json dag_to_json(const ArchDag& d) {
	Json j;
	j["n_vertices"] = d.n_vertices();
	j["directed_edges"] = edge_list(d.edges());
	j["input"] = d.input_vertex();
	j["output"] = d.output_vertex();
	Json kinds = Json::array();
	for (auto k : d.kinds()) {
		kinds.push_back(to_string(k));
	}
	j["kinds"] = std::move(kinds);
	return j;
}

ArchDag dag_from_json(const Json& j) {
	return as_io([&] {
		const int n = j.at("n_vertices").get<int>();
		const int input = j.at("input").get<int>();
		const int output = j.at("output").get<int>();
		std::vector<VertexKind> kinds;
		if (j.contains("kinds")) {
			for (const auto& k : j.at("kinds")) {
				kinds.push_back(parse_vertex_kind(k.get<std::string>()));
			}
		} else {
			kinds.assign(idx(std::max(n, 0)), VertexKind::Block);
			if (input >= 0 && input < n) kinds[idx(input)] = VertexKind::Input;
			if (output >= 0 && output < n) kinds[idx(output)] = VertexKind::Output;
		}
		if (static_cast<int>(kinds.size()) != n) {
			throw IoError("kinds length does not match n_vertices");
		}
		return ArchDag(n, parse_edges(j.at("directed_edges")), input, output, std::move(kinds));
	});
}

Json architecture_to_json(const ArchSpec& spec, const UndirectedGraph* g, const std::optional<GeneratorConfig>& cfg) {
	Json j;
	if (g != nullptr) {
		j = graph_to_json(*g, cfg);
	} else if (cfg) {
		j["generator"] = to_json(*cfg);
	}
	const Json dag = dag_to_json(spec.dag);
	for (const auto& [key, value] : dag.items()) {
		j[key] = value;
	}
	j["staging"] = to_json(spec.staging);
	j["seed"] = spec.seed;
	Json vertices = Json::array();
	for (int v = 0; v < spec.dag.n_vertices(); ++v) {
		const auto& b = spec.blocks[idx(v)];
		vertices.push_back({{"id", v},
		                    {"kind", to_string(spec.dag.kind(v))},
		                    {"spatial", b.out.spatial},
		                    {"channels", b.out.channels},
		                    {"flops", spec.flops[idx(v)]},
		                    {"params", spec.params[idx(v)]},
		                    {"scaled_inputs", b.scaled_inputs()},
		                    {"staged", b.staged}});
	}
	j["vertices"] = std::move(vertices);
	Json edges = Json::array();
	for (std::size_t e = 0; e < spec.dag.edges().size(); ++e) {
		const auto& [u, v] = spec.dag.edges()[e];
		edges.push_back({{"from", u}, {"to", v}, {"bytes", spec.edge_bytes[e]}});
	}
	j["edge_costs"] = std::move(edges);
	j["total_params"] = spec.total_params;
	j["total_flops"] = spec.total_flops;
	return j;
}

ArchSpec architecture_from_json(const Json& j, const std::optional<StagingConfig>& staging) {
	return as_io([&] {
		if (!j.is_object()) {
			throw IoError("architecture document must be a JSON object");
		}
		ArchDag dag = j.contains("directed_edges") ? dag_from_json(j) : orient(graph_from_json(j));
		StagingConfig st = staging ? *staging : (j.contains("staging") ? staging_from_json(j.at("staging")) : StagingConfig{});
		const std::uint64_t seed = j.value("seed", std::uint64_t{0});
		ArchSpec spec = elaborate(dag, st, seed);
		if (!staging && j.contains("vertices")) {
			const auto& vs = j.at("vertices");
			if (static_cast<int>(vs.size()) != dag.n_vertices()) {
				throw IoError("vertex table does not match the DAG");
			}
			for (int v = 0; v < dag.n_vertices(); ++v) {
				const auto& row = vs.at(idx(v));
				const auto& b = spec.blocks[idx(v)];
				if (row.at("spatial").get<int>() != b.out.spatial || row.at("channels").get<int>() != b.out.channels ||
				    row.at("flops").get<std::int64_t>() != spec.flops[idx(v)] ||
				    row.at("params").get<std::int64_t>() != spec.params[idx(v)]) {
					throw InvariantViolation("stored costs of vertex " + std::to_string(v) +
					                         " disagree with elaboration");
				}
			}
		}
		return spec;
	});
}

Json placement_to_json(const Placement& p, const GroupedDag& g) {
	Json j;
	j["n_units"] = p.n_units;
	j["merge_unit"] = p.merge_unit;
	j["groups"] = g.groups;
	j["group_weights"] = g.group_weights;
	j["unit_of_group"] = p.unit_of_group;
	j["unit_load"] = p.unit_load;
	return j;
}

void write_dot(std::ostream& os, const ArchDag& d) {
	os << "digraph arch {\n";
	for (int v = 0; v < d.n_vertices(); ++v) {
		const char* shape = "box";
		switch (d.kind(v)) {
			case VertexKind::Input: shape = "invhouse"; break;
			case VertexKind::Output: shape = "house"; break;
			case VertexKind::Merge: shape = "diamond"; break;
			case VertexKind::Block: break;
		}
		os << "  " << v << " [shape=" << shape << ", label=\"" << v << "\"];\n";
	}
	for (const auto& [u, v] : d.edges()) {
		os << "  " << u << " -> " << v << ";\n";
	}
	os << "}\n";
}

void write_vertex_csv(std::ostream& os, const ArchSpec& spec) {
	os << "id,kind,spatial,channels,flops,params,scaled_inputs,staged\n";
	for (int v = 0; v < spec.dag.n_vertices(); ++v) {
		const auto& b = spec.blocks[idx(v)];
		os << v << ',' << to_string(spec.dag.kind(v)) << ',' << b.out.spatial << ',' << b.out.channels << ','
		   << spec.flops[idx(v)] << ',' << spec.params[idx(v)] << ',' << b.scaled_inputs() << ','
		   << (b.staged ? 1 : 0) << '\n';
	}
}

void write_histogram_csv(std::ostream& os, const DepthWidthHistogram& h) {
	os << "depth,width\n";
	for (std::size_t d = 0; d < h.width.size(); ++d) {
		os << d << ',' << h.width[d] << '\n';
	}
}

void write_trace_csv(std::ostream& os, const SimResult& r) {
	os << "event_time,unit,event_kind,id\n";
	for (const auto& e : r.trace) {
		os << format_double(e.time) << ',' << e.unit << ',' << e.kind << ',' << e.id << '\n';
	}
}

void write_score_header(std::ostream& os) {
	os << "generator,seed,n_vertices,n_units,epsilon,delta_w,lambda_bytes,lambda_prime,eta,cs,row\n";
}

void write_score_rows(std::ostream& os, const ScoreRowInfo& info, const MetricsReport& report) {
	auto row = [&](const MetricsRecord& r, std::string_view tag) {
		os << info.generator << ',' << info.seed << ',' << info.n_vertices << ',' << report.n_units << ','
		   << format_double(r.epsilon) << ',' << format_double(r.delta_w) << ',' << r.lambda << ','
		   << format_double(r.lambda_prime) << ',' << format_double(r.eta) << ',' << format_double(r.cs) << ','
		   << tag << '\n';
	};
	for (const auto& r : report.records) {
		row(r, "grid");
	}
	row(report.best(), "best");
}

Json read_json_file(const std::filesystem::path& path) {
	std::ifstream in(path);
	if (!in) {
		throw IoError("cannot open " + path.string());
	}
	try {
		return Json::parse(in);
	} catch (const nlohmann::json::exception& e) {
		throw IoError("cannot parse " + path.string() + ": " + e.what());
	}
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
	if (path.has_parent_path()) {
		std::error_code ec;
		std::filesystem::create_directories(path.parent_path(), ec);
	}
	std::ofstream out(path, std::ios::binary);
	if (!out) {
		throw IoError("cannot write " + path.string());
	}
	out << text;
	if (!out.flush()) {
		throw IoError("write failed for " + path.string());
	}
}

}  // namespace cnas
