#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstdlib>
#include <string>
#include <vector>

#include "oblix/geometry.hpp"

namespace oblix {

/// Sorted subset J of {0, ..., ambient_dim - 1}; picks out the diagonal
/// projection Q_J and the coordinate subspace H_J.
class IndexSet {
 public:
  using Mask = std::uint64_t;

  IndexSet() = default;

  IndexSet(Index ambient_dim, std::vector<Index> indices)
      : ambient_dim_(ambient_dim), indices_(std::move(indices)) {
    std::sort(indices_.begin(), indices_.end());
    if (std::adjacent_find(indices_.begin(), indices_.end()) != indices_.end()) {
      throw Error(Errc::invalid_input, "index set has repeated entries");
    }
    if (!indices_.empty() && (indices_.front() < 0 || indices_.back() >= ambient_dim_)) {
      throw Error(Errc::invalid_input, "index out of range");
    }
  }

  static IndexSet from_mask(Index ambient_dim, Mask mask) {
    std::vector<Index> idx;
    for (Index i = 0; i < ambient_dim; ++i) {
      if (mask & (Mask{1} << i)) idx.push_back(i);
    }
    return IndexSet(ambient_dim, std::move(idx));
  }

  static IndexSet all(Index ambient_dim) {
    return from_mask(ambient_dim, ambient_dim >= 64 ? ~Mask{0} : (Mask{1} << ambient_dim) - 1);
  }

  Index ambient_dim() const noexcept { return ambient_dim_; }
  Index size() const noexcept { return static_cast<Index>(indices_.size()); }
  bool empty() const noexcept { return indices_.empty(); }
  const std::vector<Index>& indices() const noexcept { return indices_; }

  Mask mask() const {
    Mask m = 0;
    for (Index i : indices_) m |= Mask{1} << i;
    return m;
  }

  bool contains(Index i) const { return std::binary_search(indices_.begin(), indices_.end(), i); }

  IndexSet complement() const {
    std::vector<Index> rest;
    for (Index i = 0; i < ambient_dim_; ++i) {
      if (!contains(i)) rest.push_back(i);
    }
    return IndexSet(ambient_dim_, std::move(rest));
  }

  /// Diagonal 0/1 matrix Q_J.
  Matrix projection() const {
    Matrix q = Matrix::Zero(ambient_dim_, ambient_dim_);
    for (Index i : indices_) q(i, i) = 1.0;
    return q;
  }

  Subspace coordinate_subspace(Tolerance tol = {}) const {
    return oblix::coordinate_subspace(ambient_dim_, indices_, tol);
  }

  friend bool operator==(const IndexSet&, const IndexSet&) = default;

 private:
  Index ambient_dim_ = 0;
  std::vector<Index> indices_;
};

inline std::string to_string(const IndexSet& j) {
  std::string out = "{";
  for (std::size_t i = 0; i < j.indices().size(); ++i) {
    if (i) out += ",";
    out += std::to_string(j.indices()[i]);
  }
  return out + "}";
}

inline Matrix select_rows(const Matrix& m, const IndexSet& j) {
  Matrix out(j.size(), m.cols());
  for (Index r = 0; r < j.size(); ++r) out.row(r) = m.row(j.indices()[static_cast<std::size_t>(r)]);
  return out;
}

inline Matrix select_cols(const Matrix& m, const IndexSet& j) {
  Matrix out(m.rows(), j.size());
  for (Index c = 0; c < j.size(); ++c) out.col(c) = m.col(j.indices()[static_cast<std::size_t>(c)]);
  return out;
}

/// Largest number of subsets an exact enumeration may visit: 2^20, or a
/// smaller value from the OBLIX_ENUM_CAP environment variable. The variable
/// can only lower the cap.
inline std::uint64_t enumeration_cap() {
  constexpr std::uint64_t kDefault = std::uint64_t{1} << 20;
  if (const char* env = std::getenv("OBLIX_ENUM_CAP")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0 && v < kDefault) return v;
  }
  return kDefault;
}

/// Throws TooLarge when all 2^m subsets of an m-element ground set exceed the cap.
inline void require_enumerable(Index m) {
  if (m < 0 || m >= 63 || (std::uint64_t{1} << m) > enumeration_cap()) {
    throw Error(Errc::too_large, "2^" + std::to_string(m) + " subsets exceed the enumeration cap of " +
                                     std::to_string(enumeration_cap()));
  }
}

/// Masks of all k-element subsets of {0..m-1}, in increasing numeric order.
inline std::vector<IndexSet::Mask> k_subset_masks(Index m, Index k) {
  std::vector<IndexSet::Mask> out;
  if (k < 0 || k > m) return out;
  if (k == 0) return {0};
  IndexSet::Mask mask = (IndexSet::Mask{1} << k) - 1;
  const IndexSet::Mask limit = IndexSet::Mask{1} << m;
  while (mask < limit) {
    out.push_back(mask);
    // Gosper's hack: next integer with the same popcount.
    const IndexSet::Mask low = mask & (~mask + 1);
    const IndexSet::Mask ripple = mask + low;
    mask = (((ripple ^ mask) >> 2) / low) | ripple;
  }
  return out;
}

}  // namespace oblix
