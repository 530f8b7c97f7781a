#include "embq/io.hpp"

#include <bit>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>

#include "embq/error.hpp"

namespace embq {
namespace {

constexpr std::uint8_t kNpyMagic[6] = {0x93, 'N', 'U', 'M', 'P', 'Y'};
constexpr std::size_t kNpyPreamble = 10;  // magic + version + u16 header length
constexpr std::size_t kRawHeader = 16;

std::uint32_t load_u32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint64_t load_u64(const std::uint8_t* p) {
  return static_cast<std::uint64_t>(load_u32(p)) | (static_cast<std::uint64_t>(load_u32(p + 4)) << 32);
}

void store_u32(Bytes& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void store_u64(Bytes& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

// Little-endian IEEE values starting at data_offset; non-finite values are
// reported with their byte offset.
std::vector<double> decode_floats(std::span<const std::uint8_t> bytes, std::size_t data_offset,
                                  std::size_t n, std::size_t d, std::size_t item_size) {
  std::vector<double> values(n * d);
  for (std::size_t k = 0; k < values.size(); ++k) {
    const std::uint8_t* p = bytes.data() + data_offset + k * item_size;
    const double v = item_size == 8 ? std::bit_cast<double>(load_u64(p))
                                    : static_cast<double>(std::bit_cast<float>(load_u32(p)));
    if (!std::isfinite(v)) {
      throw DataError("non-finite value at (row " + std::to_string(k / d) + ", col " +
                      std::to_string(k % d) + "), byte offset " +
                      std::to_string(data_offset + k * item_size));
    }
    values[k] = v;
  }
  return values;
}

// Value text following `'key':` in an NPY header dict.
std::string_view npy_field(std::string_view header, std::string_view key) {
  const std::string quoted = "'" + std::string(key) + "'";
  const auto at = header.find(quoted);
  if (at == std::string_view::npos) {
    throw DataError("NPY header (byte 10) has no '" + std::string(key) + "' entry");
  }
  auto rest = header.substr(at + quoted.size());
  const auto colon = rest.find(':');
  if (colon == std::string_view::npos) throw DataError("NPY header: missing ':' after '" + std::string(key) + "'");
  rest = rest.substr(colon + 1);
  while (!rest.empty() && rest.front() == ' ') rest.remove_prefix(1);
  return rest;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::optional<double> parse_double(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

template <typename Int>
std::optional<Int> parse_int(std::string_view s) {
  s = trim(s);
  Int v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Splits text into lines, keeping 1-based line numbers.
std::vector<std::pair<std::size_t, std::string_view>> lines_of(std::string_view text) {
  std::vector<std::pair<std::size_t, std::string_view>> out;
  std::size_t number = 1;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    out.emplace_back(number++, line);
    if (nl == std::string_view::npos) break;
    text.remove_prefix(nl + 1);
  }
  return out;
}

}  // namespace

const char* to_string(MatrixFormat f) {
  switch (f) {
    case MatrixFormat::npy: return "npy";
    case MatrixFormat::csv: return "csv";
    case MatrixFormat::raw: return "raw";
  }
  return "raw";
}

std::optional<MatrixFormat> parse_matrix_format(std::string_view name) {
  if (name == "npy") return MatrixFormat::npy;
  if (name == "csv") return MatrixFormat::csv;
  if (name == "raw" || name == "rawf64") return MatrixFormat::raw;
  return std::nullopt;
}

MatrixFormat infer_matrix_format(const std::filesystem::path& path) {
  const auto ext = path.extension().string();
  if (ext == ".npy") return MatrixFormat::npy;
  if (ext == ".csv") return MatrixFormat::csv;
  return MatrixFormat::raw;
}

EmbeddingMatrix parse_npy(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kNpyPreamble) {
    throw DataError("truncated NPY preamble: expected " + std::to_string(kNpyPreamble) +
                    " bytes, found " + std::to_string(bytes.size()));
  }
  if (std::memcmp(bytes.data(), kNpyMagic, sizeof kNpyMagic) != 0) {
    throw DataError("NPY magic mismatch at byte 0: expected 93 4E 55 4D 50 59");
  }
  if (bytes[6] != 1 || bytes[7] != 0) {
    throw DataError("unsupported NPY version " + std::to_string(bytes[6]) + "." +
                    std::to_string(bytes[7]) + " at byte 6 (only 1.0 is accepted)");
  }
  const std::size_t header_len = static_cast<std::size_t>(bytes[8]) | (static_cast<std::size_t>(bytes[9]) << 8);
  if (bytes.size() < kNpyPreamble + header_len) {
    throw DataError("truncated NPY header: expected " + std::to_string(header_len) +
                    " header bytes at offset 10, found " + std::to_string(bytes.size() - kNpyPreamble));
  }
  const std::string_view header(reinterpret_cast<const char*>(bytes.data() + kNpyPreamble), header_len);

  const auto descr = npy_field(header, "descr");
  std::size_t item_size = 0;
  if (descr.starts_with("'<f8'")) {
    item_size = 8;
  } else if (descr.starts_with("'<f4'")) {
    item_size = 4;
  } else {
    const auto end = descr.find(',');
    throw DataError("unsupported NPY dtype " + std::string(descr.substr(0, end)) +
                    " (accepted: '<f8', '<f4')");
  }

  const auto fortran = npy_field(header, "fortran_order");
  if (fortran.starts_with("True")) {
    throw DataError("Fortran-order NPY arrays are not accepted; save with C order");
  }
  if (!fortran.starts_with("False")) throw DataError("NPY header: unreadable 'fortran_order' value");

  const auto shape_text = npy_field(header, "shape");
  const auto close = shape_text.find(')');
  if (shape_text.empty() || shape_text.front() != '(' || close == std::string_view::npos) {
    throw DataError("NPY header: unreadable 'shape' value");
  }
  std::vector<std::size_t> shape;
  std::string_view dims = shape_text.substr(1, close - 1);
  while (!trim(dims).empty()) {
    const auto comma = dims.find(',');
    const auto value = parse_int<std::size_t>(dims.substr(0, comma));
    if (!value) throw DataError("NPY header: unreadable 'shape' entry");
    shape.push_back(*value);
    if (comma == std::string_view::npos) break;
    dims.remove_prefix(comma + 1);
  }
  if (shape.size() != 2) {
    throw DataError("NPY array has " + std::to_string(shape.size()) + " dimensions, expected 2");
  }

  const std::size_t data_offset = kNpyPreamble + header_len;
  const std::size_t expected = shape[0] * shape[1] * item_size;
  if (bytes.size() - data_offset != expected) {
    throw DataError("NPY data at byte " + std::to_string(data_offset) + ": expected " +
                    std::to_string(expected) + " bytes for shape (" + std::to_string(shape[0]) +
                    ", " + std::to_string(shape[1]) + "), found " +
                    std::to_string(bytes.size() - data_offset));
  }
  return EmbeddingMatrix(shape[0], shape[1], decode_floats(bytes, data_offset, shape[0], shape[1], item_size));
}

Bytes encode_npy(const EmbeddingMatrix& m, NpyDtype dtype) {
  std::string header = std::string("{'descr': '") + (dtype == NpyDtype::f8 ? "<f8" : "<f4") +
                       "', 'fortran_order': False, 'shape': (" + std::to_string(m.n()) + ", " +
                       std::to_string(m.d()) + "), }";
  // Pad with spaces so the data starts on a 64-byte boundary; ends in '\n'.
  const std::size_t total = kNpyPreamble + header.size() + 1;
  header.append((64 - total % 64) % 64, ' ');
  header.push_back('\n');

  Bytes out(kNpyMagic, kNpyMagic + sizeof kNpyMagic);
  out.push_back(1);
  out.push_back(0);
  out.push_back(static_cast<std::uint8_t>(header.size() & 0xFF));
  out.push_back(static_cast<std::uint8_t>(header.size() >> 8));
  out.insert(out.end(), header.begin(), header.end());
  for (double v : m.values()) {
    if (dtype == NpyDtype::f8) {
      store_u64(out, std::bit_cast<std::uint64_t>(v));
    } else {
      store_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
    }
  }
  return out;
}

EmbeddingMatrix parse_rawf64(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kRawHeader) {
    throw DataError("truncated RAWF64 header: expected 16 bytes, found " + std::to_string(bytes.size()));
  }
  if (std::memcmp(bytes.data(), "EMBQ", 4) != 0) {
    throw DataError("RAWF64 magic mismatch at byte 0: expected \"EMBQ\"");
  }
  const std::size_t n = load_u32(bytes.data() + 4);
  const std::size_t d = load_u32(bytes.data() + 8);
  if (load_u32(bytes.data() + 12) != 0) {
    throw DataError("RAWF64 reserved field at byte 12 must be 0");
  }
  const std::size_t expected = n * d * 8;
  if (bytes.size() - kRawHeader != expected) {
    throw DataError("RAWF64 data at byte 16: expected " + std::to_string(expected) + " bytes for " +
                    std::to_string(n) + " x " + std::to_string(d) + ", found " +
                    std::to_string(bytes.size() - kRawHeader));
  }
  return EmbeddingMatrix(n, d, decode_floats(bytes, kRawHeader, n, d, 8));
}

Bytes encode_rawf64(const EmbeddingMatrix& m) {
  Bytes out{'E', 'M', 'B', 'Q'};
  store_u32(out, static_cast<std::uint32_t>(m.n()));
  store_u32(out, static_cast<std::uint32_t>(m.d()));
  store_u32(out, 0);
  out.reserve(kRawHeader + m.values().size() * 8);
  for (double v : m.values()) store_u64(out, std::bit_cast<std::uint64_t>(v));
  return out;
}

EmbeddingMatrix parse_csv(std::string_view text, bool has_header) {
  std::vector<double> values;
  std::size_t d = 0;
  std::size_t first_line = 0;
  std::size_t rows = 0;
  bool header_pending = has_header;
  for (const auto& [number, raw] : lines_of(text)) {
    const auto line = trim(raw);
    if (line.empty()) continue;
    if (header_pending) {
      header_pending = false;
      continue;
    }
    std::size_t fields = 0;
    std::string_view rest = line;
    while (true) {
      const auto comma = rest.find(',');
      const auto field = rest.substr(0, comma);
      ++fields;
      const auto v = parse_double(field);
      if (!v) {
        throw DataError("CSV line " + std::to_string(number) + ", column " + std::to_string(fields) +
                        ": cannot parse '" + std::string(trim(field)) + "' as a number");
      }
      if (!std::isfinite(*v)) {
        throw DataError("CSV line " + std::to_string(number) + ", column " + std::to_string(fields) +
                        ": non-finite value");
      }
      values.push_back(*v);
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (rows == 0) {
      d = fields;
      first_line = number;
    } else if (fields != d) {
      throw DataError("ragged CSV: line " + std::to_string(number) + " has " + std::to_string(fields) +
                      " fields, line " + std::to_string(first_line) + " has " + std::to_string(d));
    }
    ++rows;
  }
  if (rows == 0) throw DataError("CSV input has no data rows");
  return EmbeddingMatrix(rows, d, std::move(values));
}

std::string encode_csv(const EmbeddingMatrix& m) {
  std::string out;
  for (std::size_t i = 0; i < m.n(); ++i) {
    for (std::size_t j = 0; j < m.d(); ++j) {
      if (j > 0) out.push_back(',');
      out += format_double(m(i, j));
    }
    out.push_back('\n');
  }
  return out;
}

Bytes read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "' for reading");
  return Bytes(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot open '" + path.string() + "' for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw DataError("failed writing '" + path.string() + "'");
}

namespace {

std::string read_text(const std::filesystem::path& path) {
  const Bytes bytes = read_file(path);
  return std::string(bytes.begin(), bytes.end());
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  write_file(path, {reinterpret_cast<const std::uint8_t*>(text.data()), text.size()});
}

}  // namespace

EmbeddingMatrix read_matrix(const std::filesystem::path& path, MatrixFormat format, bool csv_header) {
  switch (format) {
    case MatrixFormat::npy: return parse_npy(read_file(path));
    case MatrixFormat::csv: return parse_csv(read_text(path), csv_header);
    case MatrixFormat::raw: return parse_rawf64(read_file(path));
  }
  throw DataError("unknown matrix format");
}

void write_matrix(const std::filesystem::path& path, const EmbeddingMatrix& m, MatrixFormat format) {
  switch (format) {
    case MatrixFormat::npy: write_file(path, encode_npy(m)); return;
    case MatrixFormat::csv: write_text(path, encode_csv(m)); return;
    case MatrixFormat::raw: write_file(path, encode_rawf64(m)); return;
  }
}

Graph parse_graph(std::string_view text) {
  const auto lines = lines_of(text);
  if (lines.empty() || trim(lines.front().second).empty()) {
    throw DataError("graph line 1: expected \"n m\"");
  }
  auto split_pair = [](std::size_t number, std::string_view line, const char* what) {
    line = trim(line);
    const auto space = line.find_first_of(" \t");
    if (space == std::string_view::npos) {
      throw DataError("graph line " + std::to_string(number) + ": expected " + what);
    }
    const auto a = parse_int<std::uint64_t>(line.substr(0, space));
    const auto b = parse_int<std::uint64_t>(line.substr(space + 1));
    if (!a || !b) throw DataError("graph line " + std::to_string(number) + ": expected " + what);
    return std::pair{*a, *b};
  };
  const auto [n, m] = split_pair(1, lines.front().second, "\"n m\"");
  std::vector<Edge> edges;
  edges.reserve(m);
  std::size_t i = 1;
  for (; i < lines.size() && edges.size() < m; ++i) {
    const auto [number, line] = lines[i];
    const auto [u, v] = split_pair(number, line, "\"u v\"");
    if (u >= n || v >= n) {
      throw DataError("graph line " + std::to_string(number) + ": node index out of range [0, " +
                      std::to_string(n) + ")");
    }
    edges.push_back({static_cast<std::uint32_t>(u), static_cast<std::uint32_t>(v)});
  }
  if (edges.size() != m) {
    throw DataError("graph declares " + std::to_string(m) + " edges but has " + std::to_string(edges.size()));
  }
  for (; i < lines.size(); ++i) {
    if (!trim(lines[i].second).empty()) {
      throw DataError("graph line " + std::to_string(lines[i].first) + ": unexpected content after " +
                      std::to_string(m) + " edges");
    }
  }
  return Graph(n, std::move(edges));
}

std::string format_graph(const Graph& g) {
  std::string out = std::to_string(g.node_count()) + " " + std::to_string(g.edge_count()) + "\n";
  for (const Edge& e : g.edges()) {
    out += std::to_string(e.u);
    out.push_back(' ');
    out += std::to_string(e.v);
    out.push_back('\n');
  }
  return out;
}

Graph read_graph(const std::filesystem::path& path) { return parse_graph(read_text(path)); }

void write_graph(const std::filesystem::path& path, const Graph& g) { write_text(path, format_graph(g)); }

std::vector<double> parse_values(std::string_view text) {
  std::vector<double> out;
  for (const auto& [number, raw] : lines_of(text)) {
    std::string_view rest = raw;
    std::size_t column = 0;
    while (true) {
      rest = trim(rest);
      if (rest.empty()) break;
      const auto end = rest.find_first_of(" \t,");
      const auto token = rest.substr(0, end);
      ++column;
      const auto v = parse_double(token);
      if (!v || !std::isfinite(*v)) {
        throw DataError("line " + std::to_string(number) + ", value " + std::to_string(column) +
                        ": cannot parse '" + std::string(token) + "' as a finite number");
      }
      out.push_back(*v);
      if (end == std::string_view::npos) break;
      rest.remove_prefix(end + 1);
    }
  }
  return out;
}

std::vector<double> read_values(const std::filesystem::path& path) { return parse_values(read_text(path)); }

}  // namespace embq
