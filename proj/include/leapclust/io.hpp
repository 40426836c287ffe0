#pragma once

#include "leapclust/datagen.hpp"
#include "leapclust/mds_embed.hpp"
#include "leapclust/son_solver.hpp"
#include "leapclust/types.hpp"

#include <filesystem>
#include <optional>
#include <string>

namespace leapclust {

/// Round-trip text form of a double (printf %.17g).
std::string format_double(double v);

// Distance matrices: CSV with one row per line, or "LFD1" binary (magic, u64 n, n*n
// little-endian binary64, row-major).
void write_distances_csv(const std::filesystem::path& path, const DistanceMatrix& d);
DistanceMatrix read_distances_csv(const std::filesystem::path& path);
void write_distances_binary(const std::filesystem::path& path, const DistanceMatrix& d);
DistanceMatrix read_distances_binary(const std::filesystem::path& path);
/// Picks the binary reader when the file starts with the magic.
DistanceMatrix read_distances(const std::filesystem::path& path);

// Embeddings: header "# L=<L> n=<n>", then one point per line.
void write_embedding_csv(const std::filesystem::path& path, const Embedding& e);
Embedding read_embedding_csv(const std::filesystem::path& path);

void write_labels_csv(const std::filesystem::path& path, const ClusterAssignment& labels);
/// Raw integer labels, renumbered by first occurrence.
ClusterAssignment read_labels_csv(const std::filesystem::path& path);

/// Coordinates x0..x{d-1} plus a label column, header row; `<stem>.json` next to it records
/// the generator and seed.
void write_dataset_csv(const std::filesystem::path& path, const LabeledDataset& ds);

struct IngestedData {
    PointSet points;
    std::optional<ClusterAssignment> truth;
};

/// Rectangular numeric CSV. A first line with any non-numeric cell is a header; a column
/// named `label` becomes the truth. Lines starting with '#' and blank lines are skipped.
/// Throws ParseError with the 1-based line number on ragged rows or bad cells.
IngestedData ingest_csv(const std::filesystem::path& path);
IngestedData ingest_csv_text(const std::string& text);

std::string son_solution_json(const SonSolution& sol, const ClusterAssignment& labels);

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

}  // namespace leapclust
