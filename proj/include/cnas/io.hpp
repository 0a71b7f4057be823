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
 * Serialization: JSON for graphs and architectures, DOT, and the CSV tables
 * written by the command-line tool. Output is byte-stable for equal inputs.
 */

#ifndef CNAS_IO_HPP
#define CNAS_IO_HPP

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include <json.hpp>

#include "cnas/archmodel.hpp"
#include "cnas/deploy.hpp"
#include "cnas/randgraph.hpp"
#include "cnas/score.hpp"

namespace cnas {

using Json = nlohmann::ordered_json;

/** Shortest decimal text that parses back to exactly @p x. */
std::string format_double(double x);

Json to_json(const GeneratorConfig& cfg);
GeneratorConfig generator_config_from_json(const Json& j);

/** {"n", "edges", "generator", "stage_markers"} */
Json graph_to_json(const UndirectedGraph& g, const std::optional<GeneratorConfig>& cfg = std::nullopt);
UndirectedGraph graph_from_json(const Json& j);

/** Graph fields plus {"n_vertices", "directed_edges", "input", "output", "kinds"}. */
Json dag_to_json(const ArchDag& d);
ArchDag dag_from_json(const Json& j);

/**
 * DAG fields plus the staging configuration, per-vertex costs and per-edge
 * bytes. When @p g is given its undirected fields are embedded too.
 */
Json architecture_to_json(const ArchSpec& spec, const UndirectedGraph* g = nullptr,
                          const std::optional<GeneratorConfig>& cfg = std::nullopt);

/**
 * Rebuilds an architecture from JSON. Accepts a full architecture document,
 * a bare DAG ("directed_edges") or an undirected graph ("edges" only), which
 * is oriented first. Stored per-vertex costs must match re-elaboration.
 * Throws IoError on malformed documents and InvariantViolation when a
 * well-formed document describes an invalid architecture.
 */
ArchSpec architecture_from_json(const Json& j, const std::optional<StagingConfig>& staging = std::nullopt);

Json placement_to_json(const Placement& p, const GroupedDag& g);

void write_dot(std::ostream& os, const ArchDag& d);

void write_vertex_csv(std::ostream& os, const ArchSpec& spec);
void write_histogram_csv(std::ostream& os, const DepthWidthHistogram& h);
void write_trace_csv(std::ostream& os, const SimResult& r);

struct ScoreRowInfo {
	std::string generator;
	std::uint64_t seed = 0;
	int n_vertices = 0;
};

void write_score_header(std::ostream& os);
void write_score_rows(std::ostream& os, const ScoreRowInfo& info, const MetricsReport& report);

Json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace cnas

#endif  // CNAS_IO_HPP
