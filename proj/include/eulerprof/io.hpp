#pragma once

// File formats.
//
// Contributions: CSV with header `f1,...,fn,delta`, n filtration columns and
// an integer delta per row. Reals are written with 17 significant digits so
// that reading back reproduces them bit for bit.
//
// Point clouds: CSV, one point per row, optional header row.
//
// Images:
//   * binary: little-endian uint32 header {n, shape[0..n), c, dtype} followed
//     by row-major voxels with interleaved channels. dtype codes are listed in
//     `ImageDtype`.
//   * ASCII PGM (P2), grayscale 2-D.
//   * CSV matrix, 2-D single channel.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "eulerprof/core.hpp"
#include "eulerprof/cubical.hpp"
#include "eulerprof/vr.hpp"

namespace eulerprof::io {

std::string format_real(double value);

void write_contributions(std::ostream& out, const ContributionList& list);
void write_contributions(std::ostream& out, const EulerCharacteristicCurve& curve);
void write_contributions(std::ostream& out, const EulerCharacteristicProfile& profile);
ContributionList read_contributions(std::istream& in);

ContributionList read_contributions_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& content);

vr::PointCloud read_point_cloud(std::istream& in);
vr::PointCloud read_point_cloud_file(const std::filesystem::path& path);

enum class ImageDtype : std::uint32_t {
  kUint8 = 0,
  kUint16 = 1,
  kInt32 = 2,
  kFloat32 = 3,
  kFloat64 = 4,
};

enum class ImageFormat { kBinary, kPgm, kCsv };

/// Format from the file extension: .pgm, .csv, anything else is binary.
ImageFormat guess_image_format(const std::filesystem::path& path);

void write_binary_image(std::ostream& out, const cubical::Image& image,
                        ImageDtype dtype = ImageDtype::kFloat64);
cubical::Image read_binary_image(std::istream& in);
cubical::Image read_pgm(std::istream& in);
cubical::Image read_csv_matrix(std::istream& in);
cubical::Image read_image_file(const std::filesystem::path& path, ImageFormat format);

/// Reads a binary image one row at a time; only the header is read up front.
class BinaryImageStream final : public cubical::RowSource {
 public:
  explicit BinaryImageStream(std::istream& in);
  std::span<const std::size_t> shape() const override { return shape_; }
  std::size_t channels() const override { return channels_; }
  ImageDtype dtype() const noexcept { return dtype_; }
  bool next_row(std::span<double> row) override;

 private:
  std::istream& in_;
  std::vector<std::size_t> shape_;
  std::size_t channels_ = 1;
  ImageDtype dtype_ = ImageDtype::kFloat64;
  std::size_t rows_read_ = 0;
  std::vector<unsigned char> buffer_;
};

}  // namespace eulerprof::io
