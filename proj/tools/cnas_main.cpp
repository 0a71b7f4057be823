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

// Command-line front end. Exit codes: 0 success, 1 usage, 2 I/O, 3 invariant.

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cnas/dagify.hpp"
#include "cnas/deploy.hpp"
#include "cnas/error.hpp"
#include "cnas/hypart.hpp"
#include "cnas/io.hpp"
#include "cnas/rng.hpp"
#include "cnas/score.hpp"
#include "cnas/sweep.hpp"

namespace fs = std::filesystem;
using namespace cnas;

namespace {

constexpr const char* kOutDirEnv = "CNAS_OUT_DIR";

const std::vector<std::string> kSubcommands = {"gen", "score", "partition", "simulate", "sweep", "histogram"};

std::vector<std::string> split_list(const std::string& text) {
	std::vector<std::string> out;
	std::stringstream ss(text);
	for (std::string item; std::getline(ss, item, ',');) {
		if (!item.empty()) out.push_back(item);
	}
	return out;
}

template <typename T>
std::vector<T> parse_list(const std::string& text, const char* what) {
	std::vector<T> out;
	for (const auto& item : split_list(text)) {
		std::size_t used = 0;
		try {
			if constexpr (std::is_same_v<T, int>) {
				out.push_back(std::stoi(item, &used));
			} else {
				out.push_back(std::stod(item, &used));
			}
		} catch (const std::exception&) {
			used = 0;
		}
		if (used != item.size()) {
			throw InvalidArgument(std::string("bad value '") + item + "' in " + what);
		}
	}
	if (out.empty()) {
		throw InvalidArgument(std::string(what) + " is empty");
	}
	return out;
}

struct Common {
	std::string out_dir;
	std::string config;
	std::uint64_t seed = 0;
};

struct SourceOpts {
	std::string arch;
	std::string kind = "dp";
	int n = 40;
	double p = 0.0;
	int m = 0;
	int k = 0;
	double alpha = 0.0;
	double beta = 0.0;
	int stages = 0;
	std::string staging = "probabilistic";
	double staging_prob = 0.5;
	int channel_limit = StagingConfig{}.channel_limit;
	CLI::Option* p_opt = nullptr;
	CLI::Option* m_opt = nullptr;
	CLI::Option* k_opt = nullptr;
	CLI::Option* alpha_opt = nullptr;
	CLI::Option* beta_opt = nullptr;
	CLI::Option* stages_opt = nullptr;
	CLI::Option* staging_opt = nullptr;
	CLI::Option* prob_opt = nullptr;
	CLI::Option* limit_opt = nullptr;
};

void add_common(CLI::App* app, Common& c) {
	app->add_option("--out", c.out_dir, "Output directory (default $CNAS_OUT_DIR or .)");
	app->add_option("--config", c.config, "Flat JSON file of option defaults");
	app->add_option("--seed", c.seed, "Master seed");
}

void add_generator_options(CLI::App* app, SourceOpts& s) {
	app->add_option("--kind", s.kind, "Generator: er, ba, ws, dp, fb");
	app->add_option("--n", s.n, "Vertex count N");
	s.p_opt = app->add_option("--p", s.p, "Probability P");
	s.m_opt = app->add_option("--m", s.m, "BA edges per new vertex M");
	s.k_opt = app->add_option("--k", s.k, "WS ring degree K (even)");
	s.alpha_opt = app->add_option("--alpha", s.alpha, "DP scale");
	s.beta_opt = app->add_option("--beta", s.beta, "DP distance exponent");
	s.stages_opt = app->add_option("--stages", s.stages, "FB stage count");
	s.staging_opt = app->add_option("--staging", s.staging, "Staging: uniform, greedy, probabilistic");
	s.prob_opt = app->add_option("--staging-prob", s.staging_prob, "Staging probability");
	s.limit_opt = app->add_option("--channel-limit", s.channel_limit, "Channel upper limit");
}

void add_source_options(CLI::App* app, SourceOpts& s) {
	app->add_option("--arch", s.arch, "Architecture or graph JSON (otherwise generate)");
	add_generator_options(app, s);
}

GeneratorConfig generator_config(const SourceOpts& s, std::uint64_t seed) {
	auto cfg = GeneratorConfig::defaults(parse_generator_kind(s.kind), s.n);
	if (s.p_opt->count()) cfg.p = s.p;
	if (s.m_opt->count()) cfg.m = s.m;
	if (s.k_opt->count()) cfg.k = s.k;
	if (s.alpha_opt->count()) cfg.alpha = s.alpha;
	if (s.beta_opt->count()) cfg.beta = s.beta;
	if (s.stages_opt->count()) cfg.stages = s.stages;
	cfg.seed = seed;
	cfg.validate();
	return cfg;
}

StagingConfig staging_config(const SourceOpts& s) {
	StagingConfig st;
	st.mode = parse_staging_mode(s.staging);
	st.prob = s.staging_prob;
	st.channel_limit = s.channel_limit;
	st.validate();
	return st;
}

bool staging_overridden(const SourceOpts& s) {
	return s.staging_opt->count() || s.prob_opt->count() || s.limit_opt->count();
}

struct Loaded {
	ArchSpec spec;
	UndirectedGraph graph;
	std::optional<GeneratorConfig> cfg;
	std::string label;
	std::uint64_t seed = 0;
};

Loaded load_source(const SourceOpts& s, std::uint64_t seed) {
	Loaded l;
	if (!s.arch.empty()) {
		const auto j = read_json_file(s.arch);
		l.spec = architecture_from_json(j, staging_overridden(s) ? std::optional(staging_config(s)) : std::nullopt);
		l.label = j.contains("generator") && j["generator"].contains("kind") ? j["generator"]["kind"].get<std::string>()
		                                                                      : fs::path(s.arch).stem().string();
		l.seed = l.spec.seed;
		return l;
	}
	l.cfg = generator_config(s, seed);
	l.graph = generate(*l.cfg);
	l.spec = elaborate(orient(l.graph), staging_config(s), seed);
	l.label = std::string(to_string(l.cfg->kind));
	l.seed = seed;
	return l;
}

fs::path out_dir(const Common& c) {
	if (!c.out_dir.empty()) return c.out_dir;
	if (const char* env = std::getenv(kOutDirEnv); env != nullptr && *env != '\0') return env;
	return ".";
}

void write_file(const fs::path& path, const std::string& text) {
	write_text_file(path, text);
	std::cout << "wrote: " << path.string() << '\n';
}

// Turns the flat JSON config file into option tokens placed before the real
// arguments; single-valued options keep the last occurrence, so flags given
// on the command line win.
std::vector<std::string> config_tokens(const fs::path& path) {
	const auto j = read_json_file(path);
	if (!j.is_object()) {
		throw IoError("config file must hold a flat JSON object");
	}
	std::vector<std::string> tokens;
	for (const auto& [key, value] : j.items()) {
		std::string name = key;
		std::replace(name.begin(), name.end(), '_', '-');
		if (name == "config") continue;
		if (value.is_boolean()) {
			if (value.get<bool>()) tokens.push_back("--" + name);
			continue;
		}
		std::string text;
		if (value.is_array()) {
			for (const auto& item : value) {
				if (!text.empty()) text += ',';
				text += item.is_string() ? item.get<std::string>() : item.dump();
			}
		} else if (value.is_string()) {
			text = value.get<std::string>();
		} else if (value.is_number_float()) {
			text = format_double(value.get<double>());
		} else if (value.is_number()) {
			text = value.dump();
		} else {
			throw IoError("config value for '" + key + "' must be a scalar or a list");
		}
		tokens.push_back("--" + name);
		tokens.push_back(text);
	}
	return tokens;
}

std::vector<std::string> expand_config(std::vector<std::string> args) {
	std::string path;
	for (std::size_t i = 0; i < args.size(); ++i) {
		if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
		if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
	}
	if (path.empty()) return args;
	auto sub = std::find_first_of(args.begin(), args.end(), kSubcommands.begin(), kSubcommands.end());
	if (sub == args.end()) return args;
	const auto tokens = config_tokens(path);
	args.insert(sub + 1, tokens.begin(), tokens.end());
	return args;
}

int run(int argc, char** argv) {
	CLI::App app{"Concurrent architecture generation, scoring and deployment simulation"};
	app.require_subcommand(1);
	app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

	Common common;
	SourceOpts gen_src, score_src, part_src, sim_src, hist_src;

	auto* gen = app.add_subcommand("gen", "Generate one architecture (JSON, DOT, per-vertex CSV)");
	add_common(gen, common);
	add_generator_options(gen, gen_src);
	std::string name;
	gen->add_option("--name", name, "File stem (default <kind>_<seed>)");

	auto* score = app.add_subcommand("score", "Concurrency score over an epsilon grid");
	add_common(score, common);
	add_source_options(score, score_src);
	std::string units_text = "4,6,8,10";
	std::string eps_text = "1.05,1.1,1.2,1.35,1.5";
	ScoreWeights weights;
	score->add_option("--units", units_text, "Unit counts, comma separated");
	score->add_option("--eps", eps_text, "Epsilon grid, comma separated");
	score->add_option("--a", weights.a, "Exponent of delta_W");
	score->add_option("--b", weights.b, "Exponent of Lambda'");
	score->add_option("--c", weights.c, "Exponent of eta");

	auto* part = app.add_subcommand("partition", "Partition the architecture hypergraph");
	add_common(part, common);
	add_source_options(part, part_src);
	int parts = 4;
	double epsilon = 1.05;
	part->add_option("--parts", parts, "Number of parts");
	part->add_option("--epsilon", epsilon, "Imbalance bound");

	auto* sim = app.add_subcommand("simulate", "Place on n units and simulate one inference");
	add_common(sim, common);
	add_source_options(sim, sim_src);
	int n_units = 8;
	bool dedicated = false;
	bool no_gather = false;
	CostParams cost = CostParams::defaults();
	sim->add_option("--units", n_units, "Unit count");
	sim->add_flag("--dedicated-merge", dedicated, "Run the output gather on an extra unit");
	sim->add_flag("--no-gather", no_gather, "End the makespan before the output gather");
	sim->add_option("--throughput", cost.flops_per_time, "FLOPs per time unit per unit");
	sim->add_option("--bandwidth", cost.bytes_per_time, "Bytes per time unit per link");
	sim->add_option("--latency", cost.latency, "Fixed per-message latency");

	auto* sweep = app.add_subcommand("sweep", "Monte-Carlo sweep over generators and unit counts");
	add_common(sweep, common);
	std::string gens_text = "er,ba,ws,dp,fb";
	int sweep_n = 40;
	int samples = 1000;
	int jobs = 1;
	std::string sweep_units = "4,6,8,10";
	std::string sweep_eps = "1.05,1.1,1.2,1.35,1.5";
	std::string sweep_staging = "probabilistic";
	int sweep_limit = StagingConfig{}.channel_limit;
	sweep->add_option("--generators", gens_text, "Generators, comma separated");
	sweep->add_option("--n", sweep_n, "Vertex count");
	sweep->add_option("--samples", samples, "Samples per generator");
	sweep->add_option("--units", sweep_units, "Unit counts, comma separated");
	sweep->add_option("--eps", sweep_eps, "Epsilon grid, comma separated");
	sweep->add_option("--staging", sweep_staging, "Staging mode");
	sweep->add_option("--channel-limit", sweep_limit, "Channel upper limit");
	sweep->add_option("--jobs", jobs, "Worker threads");

	auto* hist = app.add_subcommand("histogram", "Depth/width histogram CSV");
	add_common(hist, common);
	add_source_options(hist, hist_src);

	std::vector<std::string> args(argv + 1, argv + argc);
	args = expand_config(std::move(args));
	std::reverse(args.begin(), args.end());
	try {
		app.parse(args);
	} catch (const CLI::ParseError& e) {
		const int code = app.exit(e);
		return code == 0 ? 0 : 1;
	}

	const fs::path dir = out_dir(common);
	const std::uint64_t seed = common.seed;

	if (gen->parsed()) {
		const auto cfg = generator_config(gen_src, seed);
		const auto graph = generate(cfg);
		const auto spec = elaborate(orient(graph), staging_config(gen_src), seed);
		const std::string stem = name.empty() ? std::string(to_string(cfg.kind)) + "_" + std::to_string(seed) : name;
		write_file(dir / (stem + ".json"), architecture_to_json(spec, &graph, cfg).dump(1, '\t') + "\n");
		std::ostringstream dot;
		write_dot(dot, spec.dag);
		write_file(dir / (stem + ".dot"), dot.str());
		std::ostringstream csv;
		write_vertex_csv(csv, spec);
		write_file(dir / (stem + "_vertices.csv"), csv.str());
		std::cout << "generator: " << to_string(cfg.kind) << '\n'
		          << "seed: " << seed << '\n'
		          << "vertices: " << spec.dag.n_vertices() << '\n'
		          << "undirected_edges: " << graph.edges.size() << '\n'
		          << "directed_edges: " << spec.dag.n_edges() << '\n'
		          << "longest_path: " << longest_path_length(spec.dag) << '\n'
		          << "total_params: " << spec.total_params << '\n'
		          << "total_flops: " << spec.total_flops << '\n';
		return 0;
	}

	if (score->parsed()) {
		const auto units = parse_list<int>(units_text, "--units");
		const auto grid = parse_list<double>(eps_text, "--eps");
		const auto l = load_source(score_src, seed);
		std::ostringstream csv;
		write_score_header(csv);
		for (int n : units) {
			const auto report = concurrency_score(l.spec, n, grid, weights, derive_seed(seed, stream::kPartition, static_cast<std::uint64_t>(n)));
			write_score_rows(csv, {l.label, l.seed, l.spec.dag.n_vertices()}, report);
			const auto& b = report.best();
			std::cout << "n=" << n << " best_cs=" << format_double(b.cs) << " epsilon=" << format_double(b.epsilon)
			          << " delta_w=" << format_double(b.delta_w) << " lambda_prime=" << format_double(b.lambda_prime)
			          << " eta=" << format_double(b.eta) << (report.all_infeasible ? " (no balanced partition)" : "")
			          << '\n';
		}
		write_file(dir / "score.csv", csv.str());
		return 0;
	}

	if (part->parsed()) {
		const auto l = load_source(part_src, seed);
		const auto h = build_hypergraph(l.spec);
		const auto p = partition(h, parts, epsilon, derive_seed(seed, stream::kPartition, static_cast<std::uint64_t>(parts)));
		std::ostringstream csv;
		csv << "vertex,part\n";
		for (int v = 0; v < h.n_vertices(); ++v) {
			csv << v << ',' << p.part_of[static_cast<std::size_t>(v)] << '\n';
		}
		write_file(dir / "partition.csv", csv.str());
		std::ostringstream hgr;
		write_hmetis(hgr, h);
		write_file(dir / "hypergraph.hgr", hgr.str());
		std::cout << "parts: " << parts << '\n'
		          << "lambda_bytes: " << total_communication(h, p) << '\n'
		          << "delta_w: " << format_double(load_imbalance(p)) << '\n'
		          << "balanced: " << (p.balanced ? "yes" : "no") << '\n';
		return 0;
	}

	if (sim->parsed()) {
		const auto l = load_source(sim_src, seed);
		cost.include_gather = !no_gather;
		const auto grouped = group_chains(l.spec);
		const auto placement = place_greedy(grouped, n_units, dedicated);
		const auto result = simulate(l.spec, placement, cost);
		std::ostringstream trace;
		write_trace_csv(trace, result);
		write_file(dir / "trace.csv", trace.str());
		write_file(dir / "placement.json", placement_to_json(placement, grouped).dump(1, '\t') + "\n");
		std::cout << "groups: " << grouped.n_groups() << '\n'
		          << "makespan: " << format_double(result.makespan) << '\n'
		          << "single_unit: " << format_double(result.single_unit_makespan) << '\n'
		          << "speedup: " << format_double(result.speedup) << '\n';
		if (n_units >= 2) {
			std::cout << "entropy: " << format_double(balance_entropy(placement, grouped, n_units)) << '\n';
		}
		return 0;
	}

	if (sweep->parsed()) {
		SweepConfig cfg;
		for (const auto& g : split_list(gens_text)) {
			cfg.generators.push_back(GeneratorConfig::defaults(parse_generator_kind(g), sweep_n));
		}
		cfg.units = parse_list<int>(sweep_units, "--units");
		cfg.epsilon_grid = parse_list<double>(sweep_eps, "--eps");
		cfg.samples = samples;
		cfg.jobs = jobs;
		cfg.master_seed = seed;
		cfg.staging.mode = parse_staging_mode(sweep_staging);
		cfg.staging.channel_limit = sweep_limit;
		const auto result = run_sweep(cfg);
		std::ostringstream rows;
		write_sweep_csv(rows, result);
		write_file(dir / "sweep.csv", rows.str());
		const auto summary = summarize(result);
		std::ostringstream sum;
		write_summary_csv(sum, summary);
		write_file(dir / "summary.csv", sum.str());
		for (const auto& s : summary) {
			if (s.metric == "cs" || s.metric == "latency_norm") {
				std::cout << to_string(s.generator) << " n=" << s.n_units << ' ' << s.metric
				          << " mean=" << format_double(s.mean) << '\n';
			}
		}
		return 0;
	}

	if (hist->parsed()) {
		const auto l = load_source(hist_src, seed);
		const auto h = depth_width_histogram(l.spec.dag);
		std::ostringstream csv;
		write_histogram_csv(csv, h);
		write_file(dir / "histogram.csv", csv.str());
		std::cout << "depths: " << h.width.size() << '\n' << "vertices: " << h.total() << '\n';
		return 0;
	}
	return 1;
}

}  // namespace

int main(int argc, char** argv) {
	try {
		return run(argc, argv);
	} catch (const InvalidArgument& e) {
		std::cerr << "error: " << e.what() << '\n';
		return 1;
	} catch (const IoError& e) {
		std::cerr << "error: " << e.what() << '\n';
		return 2;
	} catch (const InvariantViolation& e) {
		std::cerr << "error: " << e.what() << '\n';
		return 3;
	} catch (const std::exception& e) {
		std::cerr << "error: " << e.what() << '\n';
		return 3;
	}
}
