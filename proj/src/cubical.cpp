#include "eulerprof/cubical.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <string>

namespace eulerprof::cubical {

namespace {

constexpr double kPadding = std::numeric_limits<double>::infinity();

std::size_t product(std::span<const std::size_t> extents) {
  return std::accumulate(extents.begin(), extents.end(), std::size_t{1}, std::multiplies<>());
}

}  // namespace

Image::Image(std::vector<std::size_t> shape, std::size_t channels, std::vector<double> values)
    : shape_(std::move(shape)), channels_(channels), values_(std::move(values)) {
  if (shape_.empty()) throw Error(ErrorKind::kParameter, "image needs at least one axis");
  if (channels_ == 0) throw Error(ErrorKind::kParameter, "image needs at least one channel");
  const std::size_t expected = product(shape_) * channels_;
  if (values_.size() != expected) {
    throw Error(ErrorKind::kDimensionMismatch,
                "image holds " + std::to_string(values_.size()) + " values, shape needs " +
                    std::to_string(expected));
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw Error(ErrorKind::kParameter, "non-finite voxel value");
  }
}

std::size_t Image::voxel_count() const noexcept {
  return shape_.empty() ? 0 : product(shape_);
}

bool ImageRowSource::next_row(std::span<double> row) {
  if (image_.empty() || next_ >= image_.shape()[0]) return false;
  const std::size_t n = row.size();
  std::copy_n(image_.values().begin() + static_cast<std::ptrdiff_t>(next_ * n), n, row.begin());
  ++next_;
  return true;
}

ImageSlice::ImageSlice(std::vector<std::size_t> row_shape, std::size_t channels)
    : row_shape_(std::move(row_shape)), channels_(channels), row_size_(product(row_shape_)) {
  rows_[0].assign(row_size_ * channels_, kPadding);
  rows_[1].assign(row_size_ * channels_, kPadding);
}

void ImageSlice::advance(std::optional<std::span<const double>> next) {
  std::swap(rows_[0], rows_[1]);
  present_[0] = present_[1];
  if (next) {
    if (next->size() != rows_[1].size()) {
      throw Error(ErrorKind::kDimensionMismatch, "row length does not match the slice");
    }
    std::copy(next->begin(), next->end(), rows_[1].begin());
    present_[1] = true;
  } else {
    present_[1] = false;
  }
}

double ImageSlice::value(int layer, std::size_t flat, std::size_t channel) const {
  if (!present_[layer]) return kPadding;
  return rows_[layer][flat * channels_ + channel];
}

std::optional<double> cell_filtration(std::span<const double> coface_values) {
  double best = kPadding;
  for (double v : coface_values) best = std::min(best, v);
  if (best == kPadding) return std::nullopt;
  return best;
}

std::size_t cell_count(std::span<const std::size_t> shape) {
  std::size_t total = 1;
  for (std::size_t s : shape) total *= 2 * s + 1;
  return shape.empty() ? 0 : total;
}

namespace {

// Emits the upper closures of all voxels of the lower row of `slice`
// (row index x0 of the image, -1 for the padding row).
class ClosureEmitter {
 public:
  ClosureEmitter(const ImageSlice& slice, std::size_t dims, ContributionList& out)
      : slice_(slice), dims_(dims), out_(out), values_(slice.channels()) {
    const auto rs = slice.row_shape();
    row_shape_.assign(rs.begin(), rs.end());
    strides_.assign(row_shape_.size(), 1);
    for (std::size_t k = row_shape_.size(); k-- > 1;) strides_[k - 1] = strides_[k] * row_shape_[k];
  }

  void emit_row(bool lower_is_voxel) {
    const std::size_t m = row_shape_.size();
    std::vector<long> x(m, -1);
    while (true) {
      for (unsigned mask = 0; mask < (1u << dims_); ++mask) emit_cell(x, mask, lower_is_voxel);
      // Odometer over [-1, extent - 1] per remaining axis.
      std::size_t k = m;
      while (k > 0) {
        --k;
        if (x[k] + 1 < static_cast<long>(row_shape_[k])) {
          ++x[k];
          break;
        }
        x[k] = -1;
        if (k == 0) return;
      }
      if (m == 0) return;
    }
  }

 private:
  // Bit k of `mask` set: the cell spans the interval of voxel x_k on axis k
  // (odd doubled coordinate); clear: it sits on the boundary between x_k and
  // x_k + 1 (even doubled coordinate).
  void emit_cell(const std::vector<long>& x, unsigned mask, bool lower_is_voxel) {
    if ((mask & 1u) != 0 && !lower_is_voxel) return;
    const std::size_t m = row_shape_.size();
    for (std::size_t k = 0; k < m; ++k) {
      if ((mask & (2u << k)) != 0 && x[k] < 0) return;
    }

    // Coface positions in the row, one axis at a time.
    positions_.assign(1, 0);
    for (std::size_t k = 0; k < m; ++k) {
      const long lo = x[k];
      const long hi = (mask & (2u << k)) != 0 ? x[k] : x[k] + 1;
      scratch_.clear();
      for (std::size_t p : positions_) {
        for (long y = lo; y <= hi; ++y) {
          if (y < 0 || y >= static_cast<long>(row_shape_[k])) continue;
          scratch_.push_back(p + static_cast<std::size_t>(y) * strides_[k]);
        }
      }
      positions_.swap(scratch_);
    }
    const int layers = (mask & 1u) != 0 ? 1 : 2;

    for (std::size_t ch = 0; ch < slice_.channels(); ++ch) {
      cofaces_.clear();
      for (int layer = 0; layer < layers; ++layer) {
        for (std::size_t p : positions_) cofaces_.push_back(slice_.value(layer, p, ch));
      }
      const auto f = cell_filtration(cofaces_);
      if (!f) return;
      values_[ch] = *f;
    }
    const int dim = std::popcount(mask);
    out_.push(values_, dim % 2 == 0 ? 1 : -1);
  }

  const ImageSlice& slice_;
  std::size_t dims_;
  ContributionList& out_;
  std::vector<std::size_t> row_shape_;
  std::vector<std::size_t> strides_;
  std::vector<double> values_;
  std::vector<std::size_t> positions_;
  std::vector<std::size_t> scratch_;
  std::vector<double> cofaces_;
};

}  // namespace

ContributionList compute_contributions_cubical(RowSource& source) {
  const auto shape = source.shape();
  const std::size_t channels = source.channels();
  ContributionList out(channels);
  if (shape.empty() || product(shape) == 0) return out;
  if (shape.size() > 16) throw Error(ErrorKind::kParameter, "images above 16 axes are not supported");

  std::vector<std::size_t> row_shape(shape.begin() + 1, shape.end());
  ImageSlice slice(row_shape, channels);
  std::vector<double> row(slice.row_size() * channels);
  const std::size_t rows = shape[0];

  auto read = [&](std::size_t index) {
    if (!source.next_row(row)) {
      throw Error(ErrorKind::kFormat, "image ended after " + std::to_string(index) + " of " +
                                          std::to_string(rows) + " rows");
    }
    slice.advance(std::span<const double>(row));
  };

  out.reserve(cell_count(shape));
  ClosureEmitter emitter(slice, shape.size(), out);
  read(0);  // lower: padding, upper: row 0
  for (std::size_t lower = 0; lower <= rows; ++lower) {
    // `lower` counts padded rows: 0 is the padding row in front of the image.
    emitter.emit_row(lower > 0);
    if (lower == rows) break;
    if (lower + 1 < rows) {
      read(lower + 1);
    } else {
      slice.advance(std::nullopt);
    }
  }
  return out;
}

ContributionList compute_contributions_cubical(const Image& image) {
  if (image.empty()) return ContributionList(image.channels());
  ImageRowSource source(image);
  return compute_contributions_cubical(source);
}

}  // namespace eulerprof::cubical
