#pragma once

// Frequency-domain sufficient statistics of a multi-attribute series:
// normalized DFT, the anchor-frequency grid and smoothed PSD matrices.

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "scig/errors.hpp"
#include "scig/linalg.hpp"

namespace scig {

/// n x (m p) real samples. Column (j m + u) holds attribute u of node j (0-based).
class MultiAttributeSeries {
 public:
  MultiAttributeSeries(Matrix data, int p, int m) : data_(std::move(data)), p_(p), m_(m) {
    require(p_ >= 1 && m_ >= 1, ErrorKind::invalid_input, "series needs p >= 1 and m >= 1");
    require(data_.rows() >= 2, ErrorKind::invalid_input, "series needs at least two samples");
    require(data_.cols() == static_cast<Eigen::Index>(p_) * m_, ErrorKind::invalid_input,
            "series has " + std::to_string(data_.cols()) + " columns, expected m*p = " +
                std::to_string(p_ * m_));
    require(data_.allFinite(), ErrorKind::invalid_input, "series contains non-finite values");
  }

  int samples() const { return static_cast<int>(data_.rows()); }
  int nodes() const { return p_; }
  int attributes() const { return m_; }
  int channels() const { return p_ * m_; }
  const Matrix& data() const { return data_; }

  static int channel(int node, int attribute, int m) { return node * m + attribute; }

 private:
  Matrix data_;
  int p_;
  int m_;
};

/// Anchor frequencies f_k = (k K + m_t + 1) / n (k 0-based) with smoothing span K = 2 m_t + 1.
struct FrequencyGrid {
  int n = 0;
  int half_window = 0;
  int count = 0;

  int span() const { return 2 * half_window + 1; }

  /// DFT index (1-based over f_1 .. f_{n/2-1}) of window offset `offset` around anchor `k`.
  int dft_index(int k, int offset) const { return k * span() + half_window + 1 + offset; }

  double anchor(int k) const { return static_cast<double>(dft_index(k, 0)) / n; }
  double frequency(int k, int offset) const { return static_cast<double>(dft_index(k, offset)) / n; }
  double spacing() const { return static_cast<double>(span()) / n; }
};

inline FrequencyGrid frequency_grid(int n, int half_window) {
  require(n >= 2 && n % 2 == 0, ErrorKind::invalid_input, "sample count must be even, got " + std::to_string(n));
  require(half_window >= 1, ErrorKind::invalid_input, "half window must be >= 1");
  FrequencyGrid grid{n, half_window, 0};
  const int usable = n / 2 - half_window - 1;
  grid.count = usable > 0 ? usable / grid.span() : 0;
  if (grid.count < 1) {
    fail(ErrorKind::window_too_large, "half window " + std::to_string(half_window) +
                                          " leaves no anchor frequency for n = " + std::to_string(n));
  }
  return grid;
}

/// Largest half window whose grid still has at least `frequencies` anchors.
inline int largest_half_window(int n, int frequencies) {
  require(frequencies >= 1, ErrorKind::invalid_input, "need at least one frequency");
  int best = 0;
  for (int mt = 1; mt < n / 2; ++mt) {
    const int usable = n / 2 - mt - 1;
    if (usable <= 0 || usable / (2 * mt + 1) < frequencies) break;
    best = mt;
  }
  require(best >= 1, ErrorKind::window_too_large,
          "n = " + std::to_string(n) + " cannot host " + std::to_string(frequencies) + " anchor frequencies");
  return best;
}

/// Normalized DFT columns d(f_l), l = 1 .. n/2 - 1. No mean removal, no taper.
inline CMatrix dft(const MultiAttributeSeries& series) {
  const int n = series.samples();
  require(n % 2 == 0, ErrorKind::invalid_input, "dft needs an even sample count, got " + std::to_string(n));
  const int channels = series.channels();
  const int columns = n / 2 - 1;
  CMatrix out(channels, columns);
  Eigen::FFT<double> fft;
  std::vector<Complex> in(static_cast<std::size_t>(n));
  std::vector<Complex> spectrum;
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (int c = 0; c < channels; ++c) {
    for (int t = 0; t < n; ++t) in[static_cast<std::size_t>(t)] = Complex(series.data()(t, c), 0.0);
    fft.fwd(spectrum, in);
    for (int l = 1; l <= columns; ++l) out(c, l - 1) = spectrum[static_cast<std::size_t>(l)] * scale;
  }
  return out;
}

struct SpectralStatistics {
  FrequencyGrid grid;
  MatrixList psd;

  int frequencies() const { return static_cast<int>(psd.size()); }
  int channels() const { return psd.empty() ? 0 : static_cast<int>(psd.front().rows()); }
};

/// S_k = (1/K) sum_{l=-m_t}^{m_t} d(f_{k,l}) d(f_{k,l})^H, symmetrized.
inline SpectralStatistics smoothed_psd(const CMatrix& d, const FrequencyGrid& grid) {
  require(d.cols() == grid.n / 2 - 1, ErrorKind::invalid_input,
          "DFT has " + std::to_string(d.cols()) + " columns, grid expects " + std::to_string(grid.n / 2 - 1));
  require(grid.count >= 1, ErrorKind::invalid_input, "empty frequency grid");
  SpectralStatistics stats{grid, {}};
  stats.psd.reserve(static_cast<std::size_t>(grid.count));
  const int k_span = grid.span();
  for (int k = 0; k < grid.count; ++k) {
    const int first = grid.dft_index(k, -grid.half_window) - 1;
    const auto window = d.middleCols(first, k_span);
    CMatrix s = window * window.adjoint() / static_cast<double>(k_span);
    stats.psd.push_back(hermitian_part(s));
  }
  return stats;
}

inline SpectralStatistics spectral_statistics(const MultiAttributeSeries& series, int half_window) {
  const FrequencyGrid grid = frequency_grid(series.samples(), half_window);
  return smoothed_psd(dft(series), grid);
}

}  // namespace scig
