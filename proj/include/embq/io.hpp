#pragma once

// File formats.
//
//   NPY     numpy .npy version 1.0; dtype '<f8' or '<f4', 2-D, C order.
//   CSV     comma-separated numeric rows, optional single header line.
//   RAWF64  16-byte header: "EMBQ", u32 n, u32 d, u32 reserved (0), all
//           little-endian, followed by n*d little-endian doubles row-major.
//   Graph   "n m" line, then m lines "u v" (0-based, u < v), each line
//           newline-terminated.
//
// Every parse error is a DataError that names the byte offset (binary
// formats) or line and column (text formats) where parsing stopped.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "embq/graph.hpp"
#include "embq/matrix.hpp"

namespace embq {

using Bytes = std::vector<std::uint8_t>;

enum class MatrixFormat { npy, csv, raw };

const char* to_string(MatrixFormat f);
std::optional<MatrixFormat> parse_matrix_format(std::string_view name);
/// From the extension: .npy, .csv, anything else is RAWF64.
MatrixFormat infer_matrix_format(const std::filesystem::path& path);

enum class NpyDtype { f8, f4 };

EmbeddingMatrix parse_npy(std::span<const std::uint8_t> bytes);
EmbeddingMatrix parse_csv(std::string_view text, bool has_header = false);
EmbeddingMatrix parse_rawf64(std::span<const std::uint8_t> bytes);

/// f4 output rounds each value to float.
Bytes encode_npy(const EmbeddingMatrix& m, NpyDtype dtype = NpyDtype::f8);
Bytes encode_rawf64(const EmbeddingMatrix& m);
/// 17 significant digits per value.
std::string encode_csv(const EmbeddingMatrix& m);

EmbeddingMatrix read_matrix(const std::filesystem::path& path, MatrixFormat format,
                            bool csv_header = false);
void write_matrix(const std::filesystem::path& path, const EmbeddingMatrix& m, MatrixFormat format);

Graph parse_graph(std::string_view text);
std::string format_graph(const Graph& g);
Graph read_graph(const std::filesystem::path& path);
void write_graph(const std::filesystem::path& path, const Graph& g);

/// Whitespace-separated finite numbers, e.g. one per line.
std::vector<double> parse_values(std::string_view text);
std::vector<double> read_values(const std::filesystem::path& path);

Bytes read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

}  // namespace embq
