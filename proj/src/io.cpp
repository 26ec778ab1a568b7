#include "eulerprof/io.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <istream>
#include <ostream>
#include <sstream>
#include <string_view>

namespace eulerprof::io {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line, char sep = ',') {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.push_back(trim(line.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

bool parse_double(std::string_view s, double& out) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && ptr == end && !s.empty();
}

bool parse_int(std::string_view s, std::int64_t& out) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && ptr == end && !s.empty();
}

bool numeric_row(const std::vector<std::string_view>& cells) {
  double dummy;
  for (auto c : cells) {
    if (!parse_double(c, dummy)) return false;
  }
  return true;
}

[[noreturn]] void format_error(const std::string& what, std::size_t line) {
  throw Error(ErrorKind::kFormat, "line " + std::to_string(line) + ": " + what);
}

}  // namespace

std::string format_real(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

namespace {

void write_header(std::ostream& out, std::size_t dim) {
  for (std::size_t k = 0; k < dim; ++k) out << 'f' << (k + 1) << ',';
  out << "delta\n";
}

template <typename Points>
void write_rows(std::ostream& out, std::size_t dim, std::size_t count, const Points& at,
                std::span<const std::int64_t> deltas) {
  write_header(out, dim);
  for (std::size_t i = 0; i < count; ++i) {
    const auto p = at(i);
    for (double x : p) out << format_real(x) << ',';
    out << deltas[i] << '\n';
  }
}

}  // namespace

void write_contributions(std::ostream& out, const ContributionList& list) {
  write_rows(out, list.dim(), list.size(), [&](std::size_t i) { return list.at(i); },
             list.deltas());
}

void write_contributions(std::ostream& out, const EulerCharacteristicCurve& curve) {
  write_rows(out, 1, curve.size(),
             [&](std::size_t i) { return curve.filtrations().subspan(i, 1); }, curve.deltas());
}

void write_contributions(std::ostream& out, const EulerCharacteristicProfile& profile) {
  write_rows(out, profile.dim(), profile.size(), [&](std::size_t i) { return profile.at(i); },
             profile.deltas());
}

ContributionList read_contributions(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::size_t columns = 0;
  std::optional<ContributionList> list;
  std::vector<double> point;
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto cells = split(body);
    if (columns == 0) {
      columns = cells.size();
      if (columns < 2) format_error("need at least one filtration column and a delta column", line_no);
      list.emplace(columns - 1);
      if (!numeric_row(cells)) continue;  // header
    }
    if (cells.size() != columns) {
      format_error("expected " + std::to_string(columns) + " columns, got " +
                       std::to_string(cells.size()),
                   line_no);
    }
    point.assign(columns - 1, 0.0);
    for (std::size_t k = 0; k + 1 < columns; ++k) {
      if (!parse_double(cells[k], point[k])) {
        format_error("bad filtration value '" + std::string(cells[k]) + "'", line_no);
      }
    }
    std::int64_t delta;
    if (!parse_int(cells.back(), delta)) {
      format_error("bad integer delta '" + std::string(cells.back()) + "'", line_no);
    }
    list->push(point, delta);
  }
  if (in.bad()) throw Error(ErrorKind::kFormat, "read error");
  return list ? std::move(*list) : ContributionList(1);
}

ContributionList read_contributions_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kFormat, "cannot open " + path.string());
  try {
    return read_contributions(in);
  } catch (const Error& e) {
    throw Error(e.kind(), path.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::kFormat, "cannot write " + path.string());
  out << content;
  if (!out) throw Error(ErrorKind::kFormat, "write failed for " + path.string());
}

vr::PointCloud read_point_cloud(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::size_t dim = 0;
  bool first = true;
  std::vector<double> coords;
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto cells = split(body);
    if (first) {
      first = false;
      dim = cells.size();
      if (!numeric_row(cells)) continue;
    }
    if (cells.size() != dim) {
      format_error("expected " + std::to_string(dim) + " coordinates, got " +
                       std::to_string(cells.size()),
                   line_no);
    }
    for (auto c : cells) {
      double v;
      if (!parse_double(c, v)) format_error("bad coordinate '" + std::string(c) + "'", line_no);
      coords.push_back(v);
    }
  }
  if (coords.empty()) return {};
  return vr::PointCloud(dim, std::move(coords));
}

vr::PointCloud read_point_cloud_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kFormat, "cannot open " + path.string());
  return read_point_cloud(in);
}

ImageFormat guess_image_format(const std::filesystem::path& path) {
  const auto ext = path.extension().string();
  if (ext == ".pgm" || ext == ".PGM") return ImageFormat::kPgm;
  if (ext == ".csv" || ext == ".CSV") return ImageFormat::kCsv;
  return ImageFormat::kBinary;
}

namespace {

std::size_t dtype_size(ImageDtype dtype) {
  switch (dtype) {
    case ImageDtype::kUint8: return 1;
    case ImageDtype::kUint16: return 2;
    case ImageDtype::kInt32: return 4;
    case ImageDtype::kFloat32: return 4;
    case ImageDtype::kFloat64: return 8;
  }
  throw Error(ErrorKind::kFormat, "unknown image dtype");
}

std::uint64_t load_le(const unsigned char* p, std::size_t bytes) {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < bytes; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
  return v;
}

void store_le(unsigned char* p, std::uint64_t v, std::size_t bytes) {
  for (std::size_t i = 0; i < bytes; ++i) p[i] = static_cast<unsigned char>(v >> (8 * i));
}

double decode(const unsigned char* p, ImageDtype dtype) {
  switch (dtype) {
    case ImageDtype::kUint8: return p[0];
    case ImageDtype::kUint16: return static_cast<double>(load_le(p, 2));
    case ImageDtype::kInt32: return static_cast<double>(static_cast<std::int32_t>(load_le(p, 4)));
    case ImageDtype::kFloat32:
      return std::bit_cast<float>(static_cast<std::uint32_t>(load_le(p, 4)));
    case ImageDtype::kFloat64: return std::bit_cast<double>(load_le(p, 8));
  }
  return 0.0;
}

void encode(unsigned char* p, double v, ImageDtype dtype) {
  switch (dtype) {
    case ImageDtype::kUint8: p[0] = static_cast<unsigned char>(v); break;
    case ImageDtype::kUint16: store_le(p, static_cast<std::uint16_t>(v), 2); break;
    case ImageDtype::kInt32:
      store_le(p, static_cast<std::uint32_t>(static_cast<std::int32_t>(v)), 4);
      break;
    case ImageDtype::kFloat32: store_le(p, std::bit_cast<std::uint32_t>(static_cast<float>(v)), 4); break;
    case ImageDtype::kFloat64: store_le(p, std::bit_cast<std::uint64_t>(v), 8); break;
  }
}

std::uint32_t read_u32(std::istream& in, const char* field) {
  unsigned char b[4];
  if (!in.read(reinterpret_cast<char*>(b), 4)) {
    throw Error(ErrorKind::kFormat, std::string("truncated image header (") + field + ")");
  }
  return static_cast<std::uint32_t>(load_le(b, 4));
}

void write_u32(std::ostream& out, std::uint32_t v) {
  unsigned char b[4];
  store_le(b, v, 4);
  out.write(reinterpret_cast<const char*>(b), 4);
}

}  // namespace

BinaryImageStream::BinaryImageStream(std::istream& in) : in_(in) {
  const std::uint32_t n = read_u32(in_, "n");
  if (n == 0 || n > 16) throw Error(ErrorKind::kFormat, "image rank must be in 1..16, got " + std::to_string(n));
  for (std::uint32_t k = 0; k < n; ++k) shape_.push_back(read_u32(in_, "shape"));
  channels_ = read_u32(in_, "channels");
  if (channels_ == 0) throw Error(ErrorKind::kFormat, "image has zero channels");
  const std::uint32_t code = read_u32(in_, "dtype");
  if (code > static_cast<std::uint32_t>(ImageDtype::kFloat64)) {
    throw Error(ErrorKind::kFormat, "unknown dtype code " + std::to_string(code));
  }
  dtype_ = static_cast<ImageDtype>(code);
}

bool BinaryImageStream::next_row(std::span<double> row) {
  if (shape_.empty() || rows_read_ >= shape_[0]) return false;
  const std::size_t width = dtype_size(dtype_);
  buffer_.resize(row.size() * width);
  if (!in_.read(reinterpret_cast<char*>(buffer_.data()), static_cast<std::streamsize>(buffer_.size()))) {
    throw Error(ErrorKind::kFormat, "image data ends in row " + std::to_string(rows_read_));
  }
  for (std::size_t i = 0; i < row.size(); ++i) {
    row[i] = decode(buffer_.data() + i * width, dtype_);
    if (!std::isfinite(row[i])) throw Error(ErrorKind::kFormat, "non-finite voxel value");
  }
  ++rows_read_;
  return true;
}

void write_binary_image(std::ostream& out, const cubical::Image& image, ImageDtype dtype) {
  write_u32(out, static_cast<std::uint32_t>(image.shape().size()));
  for (auto s : image.shape()) write_u32(out, static_cast<std::uint32_t>(s));
  write_u32(out, static_cast<std::uint32_t>(image.channels()));
  write_u32(out, static_cast<std::uint32_t>(dtype));
  const std::size_t width = dtype_size(dtype);
  std::vector<unsigned char> bytes(image.values().size() * width);
  for (std::size_t i = 0; i < image.values().size(); ++i) encode(bytes.data() + i * width, image.values()[i], dtype);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

cubical::Image read_binary_image(std::istream& in) {
  BinaryImageStream stream(in);
  std::vector<std::size_t> shape(stream.shape().begin(), stream.shape().end());
  std::size_t row_size = stream.channels();
  for (std::size_t k = 1; k < shape.size(); ++k) row_size *= shape[k];
  std::vector<double> values(row_size * shape[0]);
  for (std::size_t r = 0; r < shape[0]; ++r) {
    stream.next_row(std::span<double>(values.data() + r * row_size, row_size));
  }
  return cubical::Image(std::move(shape), stream.channels(), std::move(values));
}

cubical::Image read_pgm(std::istream& in) {
  // Tokens with '#' comments stripped.
  std::vector<std::string> tokens;
  std::string line;
  while (std::getline(in, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::string tok;
    while (ls >> tok) tokens.push_back(tok);
  }
  if (tokens.size() < 4 || tokens[0] != "P2") throw Error(ErrorKind::kFormat, "not an ASCII PGM (P2) file");
  auto number = [&](std::size_t i) {
    double v;
    if (!parse_double(tokens[i], v)) throw Error(ErrorKind::kFormat, "bad PGM token '" + tokens[i] + "'");
    return v;
  };
  const auto width = static_cast<std::size_t>(number(1));
  const auto height = static_cast<std::size_t>(number(2));
  const double maxval = number(3);
  if (tokens.size() != 4 + width * height) {
    throw Error(ErrorKind::kFormat, "PGM holds " + std::to_string(tokens.size() - 4) +
                                        " pixels, header says " + std::to_string(width * height));
  }
  std::vector<double> values(width * height);
  for (std::size_t i = 0; i < values.size(); ++i) {
    values[i] = number(4 + i);
    if (values[i] < 0 || values[i] > maxval) throw Error(ErrorKind::kFormat, "PGM pixel outside [0, maxval]");
  }
  return cubical::Image({height, width}, 1, std::move(values));
}

cubical::Image read_csv_matrix(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<double> values;
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto cells = split(body);
    if (height == 0) width = cells.size();
    if (cells.size() != width) format_error("ragged CSV matrix", line_no);
    for (auto c : cells) {
      double v;
      if (!parse_double(c, v)) format_error("bad matrix entry '" + std::string(c) + "'", line_no);
      values.push_back(v);
    }
    ++height;
  }
  if (height == 0) throw Error(ErrorKind::kFormat, "empty CSV matrix");
  return cubical::Image({height, width}, 1, std::move(values));
}

cubical::Image read_image_file(const std::filesystem::path& path, ImageFormat format) {
  std::ifstream in(path, format == ImageFormat::kBinary ? std::ios::binary : std::ios::in);
  if (!in) throw Error(ErrorKind::kFormat, "cannot open " + path.string());
  switch (format) {
    case ImageFormat::kBinary: return read_binary_image(in);
    case ImageFormat::kPgm: return read_pgm(in);
    case ImageFormat::kCsv: return read_csv_matrix(in);
  }
  throw Error(ErrorKind::kFormat, "unknown image format");
}

}  // namespace eulerprof::io
