#pragma once

// Streaming contributions of cubical complexes under the T-construction.
//
// Voxels are the top-dimensional cells; every lower cell takes, channel by
// channel, the minimum value of the voxels it bounds. The image is read one
// row (hyperplane along axis 0) at a time. A voxel at index x accounts for
// the cells of its upper closure: the faces it shares only with voxels at
// indices x or x + 1 on every axis. With one layer of +inf padding voxels in
// front of each axis, the closures partition the whole complex.

#include <cstddef>
#include <istream>
#include <optional>
#include <span>
#include <vector>

#include "eulerprof/core.hpp"

namespace eulerprof::cubical {

class Image {
 public:
  Image() = default;
  /// Row-major voxels (axis 0 slowest), channels interleaved per voxel.
  Image(std::vector<std::size_t> shape, std::size_t channels, std::vector<double> values);

  std::span<const std::size_t> shape() const noexcept { return shape_; }
  std::size_t channels() const noexcept { return channels_; }
  std::size_t voxel_count() const noexcept;
  bool empty() const noexcept { return voxel_count() == 0; }
  std::span<const double> values() const noexcept { return values_; }
  double value(std::size_t voxel, std::size_t channel) const {
    return values_[voxel * channels_ + channel];
  }

 private:
  std::vector<std::size_t> shape_;
  std::size_t channels_ = 1;
  std::vector<double> values_;
};

/// Sequential source of image rows: each row is the hyperplane at one index of
/// axis 0, i.e. product(shape[1:]) * channels values.
class RowSource {
 public:
  virtual ~RowSource() = default;
  virtual std::span<const std::size_t> shape() const = 0;
  virtual std::size_t channels() const = 0;
  /// Fills `row` with the next row; returns false when the image is exhausted.
  virtual bool next_row(std::span<double> row) = 0;
};

class ImageRowSource final : public RowSource {
 public:
  explicit ImageRowSource(const Image& image) : image_(image) {}
  std::span<const std::size_t> shape() const override { return image_.shape(); }
  std::size_t channels() const override { return image_.channels(); }
  bool next_row(std::span<double> row) override;

 private:
  const Image& image_;
  std::size_t next_ = 0;
};

/// Two consecutive rows of the image; missing rows and out-of-range indices
/// read as +inf.
class ImageSlice {
 public:
  ImageSlice(std::vector<std::size_t> row_shape, std::size_t channels);

  std::span<const std::size_t> row_shape() const noexcept { return row_shape_; }
  std::size_t channels() const noexcept { return channels_; }
  std::size_t row_size() const noexcept { return row_size_; }

  /// Moves the window up one row: the upper row becomes the lower one and
  /// `next` (or padding when absent) becomes the upper one.
  void advance(std::optional<std::span<const double>> next);
  bool has_layer(int layer) const noexcept { return present_[layer]; }
  /// Value of `channel` at `layer` (0 lower, 1 upper) and the row position
  /// given by a flat index into row_shape().
  double value(int layer, std::size_t flat, std::size_t channel) const;

 private:
  std::vector<std::size_t> row_shape_;
  std::size_t channels_;
  std::size_t row_size_;
  std::vector<double> rows_[2];
  bool present_[2] = {false, false};
};

/// Minimum over the finite (non-padding) coface values; nullopt when every
/// coface is padding, i.e. the cell is not part of the complex.
std::optional<double> cell_filtration(std::span<const double> coface_values);

/// One raw contribution per cell; a `channels`-parameter list.
ContributionList compute_contributions_cubical(const Image& image);
ContributionList compute_contributions_cubical(RowSource& source);

/// Number of cells in the T-construction complex of an image of this shape.
std::size_t cell_count(std::span<const std::size_t> shape);

}  // namespace eulerprof::cubical
