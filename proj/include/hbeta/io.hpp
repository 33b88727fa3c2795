#pragma once

// Data ingestion, CSV tables and the binary draws file.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "hbeta/gibbs_seq.hpp"
#include "hbeta/logistic.hpp"

namespace hbeta::io {

namespace fs = std::filesystem;

/// One number per line; a non-numeric first line is taken as a header.
/// Throws DataError naming the file and line.
std::vector<double> read_column_csv(const fs::path& path);

/// Nonnegative integer counts, one per line.
std::vector<std::uint64_t> read_counts_csv(const fs::path& path);

/// Comma-separated rows of equal length, optional header line.
logistic::DesignMatrix read_matrix_csv(const fs::path& path);

/// Binary design: "HBX1", uint32 flags, uint32 rows, uint32 cols, then
/// column-major little-endian doubles.
logistic::DesignMatrix read_matrix_bin(const fs::path& path);
void write_matrix_bin(const fs::path& path, const logistic::DesignMatrix& x);

/// Binary when the file starts with the design magic, CSV otherwise.
logistic::DesignMatrix read_design(const fs::path& path);

/// Named columns of equal length.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<double>> columns;

    void add(std::string name, std::vector<double> values);
    std::size_t rows() const { return columns.empty() ? 0 : columns.front().size(); }
};

/// Shortest round-trip decimal form; "NA" for NaN, "Inf" / "-Inf" for infinities.
std::string format_number(double v);

std::string to_csv(const Table& table);
void write_csv(const fs::path& path, const Table& table);

/// Writes to a sibling temporary file, then renames over the target.
void write_file_atomic(const fs::path& path, const std::string& content);
std::string read_file(const fs::path& path);

/// "HBD1" header (grid, chain configuration, draw counts, likelihood tag)
/// followed by little-endian doubles: endpoints, pi draws, theta draws.
void save_draws(const fs::path& path, const PosteriorDraws& draws);
PosteriorDraws load_draws(const fs::path& path);

std::string serialize_draws(const PosteriorDraws& draws);
PosteriorDraws deserialize_draws(const std::string& bytes, const std::string& origin = "<memory>");

}  // namespace hbeta::io
