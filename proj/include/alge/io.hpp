#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "alge/imp.hpp"
#include "alge/metrics.hpp"
#include "alge/predictor.hpp"
#include "alge/rankers.hpp"
#include "alge/sampler.hpp"
#include "alge/sir.hpp"

namespace alge {

/// Shortest decimal representation that round-trips the exact double.
std::string format_double(double x);
double parse_double(const std::string& token, int line_no);

/// Comment header written at the top of every artifact file.
struct FileMeta {
    std::string command;      // producing command
    std::string config_hash;  // hash of the resolved run configuration
    bool empty() const { return command.empty() && config_hash.empty(); }
};

/// The comment lines a FileMeta contributes at the top of a file.
std::string meta_prefix(const FileMeta& meta);

/// Writes content to a temp file in the same directory, then renames it over
/// the destination, so readers never observe partial files.
void write_atomic(const std::filesystem::path& path, const std::string& content);

std::string read_file(const std::filesystem::path& path);

// --- influence tables: header `node_id,influence,beta,runs` ---
std::string influence_to_text(const InfluenceTable& t, const FileMeta& meta = {});
InfluenceTable influence_from_text(const std::string& text);

// --- rank tables: header `node_id,rank,score,method` ---
std::string rank_to_text(const RankTable& t, const FileMeta& meta = {});
RankTable rank_from_text(const std::string& text);

// --- representative sets: header `node_id,round` ---
std::string representatives_to_text(const RepresentativeSet& r, const FileMeta& meta = {});
RepresentativeSet representatives_from_text(const std::string& text);

// --- correlation matrices: dense comma-separated rows ---
std::string matrix_to_text(const CorrelationMatrix& m, const FileMeta& meta = {});
CorrelationMatrix matrix_from_text(const std::string& text);

// --- seed selections: `order,node_id,residual_influence,covered_size,covered_nodes` ---
std::string seeds_to_text(const SeedSelection& s, const FileMeta& meta = {});
SeedSelection seeds_from_text(const std::string& text);

// --- overlap reports ---
std::string overlap_to_text(const OverlapReport& r, const FileMeta& meta = {});

// --- infected-ratio curves: `step,ratio` ---
std::string curve_to_text(const std::vector<double>& curve, const FileMeta& meta = {});

// --- disputation tables ---
std::string disputation_to_text(const DisputationTable& d, const FileMeta& meta = {});

// --- predictor parameters: self-describing text, bit-exact round trip ---
std::string params_to_text(const PredictorParams& p, const FileMeta& meta = {});
PredictorParams params_from_text(const std::string& text);

// --- edge lists (graph-core text format) ---
std::string graph_to_text(const Graph& g, const FileMeta& meta = {});

}  // namespace alge
