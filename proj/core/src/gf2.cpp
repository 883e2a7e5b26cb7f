// Copyright 2026 The cssim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cssim/gf2.hpp"

#include <algorithm>
#include <bit>

#include "cssim/error.hpp"

namespace cssim {

BitMatrix BitMatrix::identity(std::size_t n) {
  BitMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.set(i, i, true);
  return m;
}

void BitMatrix::add_row(std::size_t src, std::size_t dst) {
  const std::uint64_t* s = data_.data() + src * wpr_;
  std::uint64_t* d = data_.data() + dst * wpr_;
  for (std::size_t w = 0; w < wpr_; ++w) d[w] ^= s[w];
}

void BitMatrix::swap_rows(std::size_t a, std::size_t b) {
  if (a == b) return;
  std::swap_ranges(data_.begin() + static_cast<std::ptrdiff_t>(a * wpr_),
                   data_.begin() + static_cast<std::ptrdiff_t>((a + 1) * wpr_),
                   data_.begin() + static_cast<std::ptrdiff_t>(b * wpr_));
}

bool BitMatrix::row_is_zero(std::size_t r) const {
  auto rw = row(r);
  return std::all_of(rw.begin(), rw.end(), [](auto w) { return w == 0; });
}

bool BitMatrix::column_is_zero(std::size_t c) const {
  for (std::size_t r = 0; r < rows_; ++r) {
    if (get(r, c)) return false;
  }
  return true;
}

BitMatrix BitMatrix::transposed() const {
  BitMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    auto rw = row(r);
    for (std::size_t w = 0; w < wpr_; ++w) {
      std::uint64_t bits = rw[w];
      while (bits) {
        const int b = std::countr_zero(bits);
        t.set(w * 64 + static_cast<std::size_t>(b), r, true);
        bits &= bits - 1;
      }
    }
  }
  return t;
}

BitMatrix BitMatrix::operator*(const BitMatrix& rhs) const {
  if (cols_ != rhs.rows_) throw DimensionError("BitMatrix product: inner dimensions differ");
  BitMatrix out(rows_, rhs.cols_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t k = 0; k < cols_; ++k) {
      if (!get(r, k)) continue;
      auto src = rhs.row(k);
      auto dst = out.row(r);
      for (std::size_t w = 0; w < dst.size(); ++w) dst[w] ^= src[w];
    }
  }
  return out;
}

std::size_t gf2_rank(BitMatrix m) {
  std::size_t rank = 0;
  for (std::size_t c = 0; c < m.cols() && rank < m.rows(); ++c) {
    std::size_t pivot = rank;
    while (pivot < m.rows() && !m.get(pivot, c)) ++pivot;
    if (pivot == m.rows()) continue;
    m.swap_rows(pivot, rank);
    for (std::size_t r = 0; r < m.rows(); ++r) {
      if (r != rank && m.get(r, c)) m.add_row(rank, r);
    }
    ++rank;
  }
  return rank;
}

}  // namespace cssim
