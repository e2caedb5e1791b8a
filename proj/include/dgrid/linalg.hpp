#pragma once

#include <optional>
#include <utility>

#include <Eigen/Core>

namespace dgrid {

/// Gauss-Jordan inverse over any field scalar (Gf256, double, ...).
///
/// Pivots on the first nonzero entry, so for floating point scalars this is
/// exact-arithmetic only; it exists for finite fields. Returns nullopt when
/// the matrix is singular.
template <typename Derived>
std::optional<Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>>
field_inverse(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const Eigen::Index size = m.rows();
  if (m.cols() != size) return std::nullopt;

  Mat work = m;
  Mat inv = Mat::Identity(size, size);
  const Scalar zero(0);
  const Scalar one(1);

  for (Eigen::Index col = 0; col < size; ++col) {
    Eigen::Index pivot = col;
    while (pivot < size && work(pivot, col) == zero) ++pivot;
    if (pivot == size) return std::nullopt;
    if (pivot != col) {
      work.row(pivot).swap(work.row(col));
      inv.row(pivot).swap(inv.row(col));
    }
    const Scalar scale = one / work(col, col);
    work.row(col) *= scale;
    inv.row(col) *= scale;
    for (Eigen::Index r = 0; r < size; ++r) {
      if (r == col || work(r, col) == zero) continue;
      const Scalar f = work(r, col);
      work.row(r) -= f * work.row(col);
      inv.row(r) -= f * inv.row(col);
    }
  }
  return inv;
}

/// Rows of `m` picked in the order given by `rows`.
template <typename Derived, typename IndexRange>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> select_rows(
    const Eigen::MatrixBase<Derived>& m, const IndexRange& rows) {
  Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> out(
      static_cast<Eigen::Index>(std::size(rows)), m.cols());
  Eigen::Index r = 0;
  for (auto idx : rows) out.row(r++) = m.row(static_cast<Eigen::Index>(idx));
  return out;
}

}  // namespace dgrid
