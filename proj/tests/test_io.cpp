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

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <limits>
#include <sstream>

#include "cnas/error.hpp"
#include "cnas/io.hpp"
#include "cnas/sweep.hpp"
#include "support.hpp"

using namespace cnas;

namespace {

void check_same(const ArchSpec& a, const ArchSpec& b) {
	CHECK(a.dag.edges() == b.dag.edges());
	CHECK(a.dag.kinds() == b.dag.kinds());
	CHECK(a.flops == b.flops);
	CHECK(a.params == b.params);
	CHECK(a.edge_bytes == b.edge_bytes);
	CHECK(a.total_params == b.total_params);
}

}  // namespace

TEST_CASE("format_double round-trips") {
	for (double x : {0.0, 1.0, 0.1, 1.0 / 3.0, 1e-300, 123456789.125, -2.5}) {
		CHECK(std::stod(format_double(x)) == x);
	}
	CHECK(format_double(1.5) == "1.5");
	CHECK(format_double(std::numeric_limits<double>::quiet_NaN()) == "nan");
}

TEST_CASE("graph json round-trip") {
	for (auto kind : {GeneratorKind::ER, GeneratorKind::BA, GeneratorKind::WS, GeneratorKind::DP, GeneratorKind::FB}) {
		auto cfg = GeneratorConfig::defaults(kind, 30);
		cfg.seed = 99;
		const auto g = generate(cfg);
		const auto j = graph_to_json(g, cfg);
		const auto back = graph_from_json(j);
		CHECK(back.n_vertices == g.n_vertices);
		CHECK(back.edges == g.edges);
		CHECK(back.stage_markers == g.stage_markers);
		const auto c2 = generator_config_from_json(j.at("generator"));
		CHECK(c2.kind == cfg.kind);
		CHECK(c2.p == cfg.p);
		CHECK(c2.seed == cfg.seed);
	}
}

TEST_CASE("architecture json round-trip") {
	auto cfg = GeneratorConfig::defaults(GeneratorKind::DP, 40);
	cfg.seed = 5;
	const auto g = generate(cfg);
	StagingConfig st;
	st.mode = StagingMode::Probabilistic;
	const auto spec = elaborate(orient(g), st, 77);
	const auto j = architecture_to_json(spec, &g, cfg);
	check_same(architecture_from_json(j), spec);
	check_same(architecture_from_json(Json::parse(j.dump())), spec);
	CHECK(architecture_to_json(architecture_from_json(j), &g, cfg).dump() == j.dump());

	const auto bare = dag_to_json(spec.dag);
	CHECK(architecture_from_json(bare, st).dag.edges() == spec.dag.edges());
	Json undirected = graph_to_json(g);
	CHECK(architecture_from_json(undirected).dag.edges() == orient(g).edges());
}

TEST_CASE("malformed documents raise IoError, invalid architectures InvariantViolation") {
	auto cfg = GeneratorConfig::defaults(GeneratorKind::WS, 20);
	const auto spec = elaborate(orient(generate(cfg)), StagingConfig{}, 1);
	auto j = architecture_to_json(spec);

	auto tampered = j;
	tampered["vertices"][3]["flops"] = 1;
	CHECK_THROWS_AS(architecture_from_json(tampered), InvariantViolation);

	auto cyclic = j;
	cyclic["directed_edges"].push_back({spec.dag.output_vertex(), 0});
	CHECK_THROWS_AS(architecture_from_json(cyclic), InvariantViolation);

	CHECK_THROWS_AS(architecture_from_json(Json::array()), IoError);
	CHECK_THROWS_AS(architecture_from_json(Json{{"n", 3}}), IoError);
	CHECK_THROWS_AS(graph_from_json(Json{{"n", 3}, {"edges", {{0, 0}}}}), IoError);
	CHECK_THROWS_AS(graph_from_json(Json{{"n", 3}, {"edges", {{0, 5}}}}), IoError);
	CHECK_THROWS_AS(graph_from_json(Json{{"n", 3}, {"edges", {{0}}}}), IoError);
	CHECK_THROWS_AS(generator_config_from_json(Json{{"kind", "xx"}}), IoError);
	CHECK_THROWS_AS(read_json_file("/nonexistent/cnas/file.json"), IoError);
}

TEST_CASE("file helpers") {
	const auto dir = std::filesystem::temp_directory_path() / "cnas_io_test";
	std::filesystem::remove_all(dir);
	const auto path = dir / "nested" / "a.json";
	write_text_file(path, "{\"x\": [1, 2]}");
	CHECK(read_json_file(path).at("x").size() == 2);
	write_text_file(dir / "bad.json", "{");
	CHECK_THROWS_AS(read_json_file(dir / "bad.json"), IoError);
	std::filesystem::remove_all(dir);
}

TEST_CASE("text outputs") {
	const auto spec = test::hand_spec(wrap_blocks(4, {{0, 1}, {0, 2}, {1, 3}, {2, 3}}), {10, 10, 10, 10, 0, 0},
	                                  {10, 10, 10, 10, 0, 0});
	std::ostringstream dot;
	write_dot(dot, spec.dag);
	CHECK(dot.str().find("4 [shape=invhouse") != std::string::npos);
	CHECK(dot.str().find("5 [shape=house") != std::string::npos);
	CHECK(dot.str().find("0 -> 1;") != std::string::npos);

	std::ostringstream hist;
	write_histogram_csv(hist, depth_width_histogram(spec.dag));
	CHECK(hist.str() == "depth,width\n0,1\n1,1\n2,2\n3,1\n4,1\n");

	Placement p;
	p.n_units = 2;
	p.unit_of_vertex = {0, 0, 1, 0, Placement::kCommon, 0};
	CostParams c;
	c.flops_per_time = 1.0;
	c.bytes_per_time = 1.0;
	std::ostringstream trace;
	write_trace_csv(trace, simulate(spec, p, c));
	const auto text = trace.str();
	CHECK(text.rfind("event_time,unit,event_kind,id\n0,0,compute_start,0\n", 0) == 0);
	CHECK(text.find("10,0,send_start,0\n") != std::string::npos);
	CHECK(text.find("20,1,recv_end,0\n") != std::string::npos);
}

TEST_CASE("score csv rows") {
	auto cfg = GeneratorConfig::defaults(GeneratorKind::ER, 20);
	const auto spec = elaborate(orient(generate(cfg)), StagingConfig{}, 0);
	const auto grid = default_epsilon_grid();
	const auto r = concurrency_score(spec, 4, grid, {}, 3);
	std::ostringstream os;
	write_score_header(os);
	write_score_rows(os, {"er", 0, spec.dag.n_vertices()}, r);
	std::istringstream in(os.str());
	std::string line;
	int lines = 0;
	while (std::getline(in, line)) ++lines;
	CHECK(lines == 1 + static_cast<int>(grid.size()) + 1);
	CHECK(os.str().find(",best\n") != std::string::npos);
}

TEST_CASE("sweep output is independent of the worker count") {
	auto cfg = SweepConfig::defaults(20);
	cfg.samples = 4;
	cfg.units = {2, 3};
	cfg.master_seed = 8;
	const auto a = run_sweep(cfg);
	cfg.jobs = 3;
	const auto b = run_sweep(cfg);
	std::ostringstream sa, sb;
	write_sweep_csv(sa, a);
	write_sweep_csv(sb, b);
	CHECK(sa.str() == sb.str());
	CHECK(a.rows.size() == 5u * 4u * 2u);
	CHECK(a.reference == GeneratorKind::FB);
	std::ostringstream sum;
	write_summary_csv(sum, summarize(a));
	CHECK(sum.str().rfind("generator,n_units,metric,mean,median,q25,q75\n", 0) == 0);
	for (const auto& row : a.rows) CHECK(std::isfinite(row.latency_norm));
}

TEST_CASE("quantile interpolation") {
	CHECK(quantile({1, 2, 3, 4}, 0.5) == 2.5);
	CHECK(quantile({4, 1, 3, 2}, 0.25) == 1.75);
	CHECK(quantile({5}, 0.75) == 5.0);
	CHECK(std::isnan(quantile({}, 0.5)));
}
