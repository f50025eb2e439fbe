#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <type_traits>
#include <vector>

#include "fmenc/common.hpp"

namespace fmenc {

using Shape = std::vector<std::int64_t>;

std::string shape_str(const Shape& s);
std::int64_t shape_numel(const Shape& s);

// Dense row-major tensor. Plain value type; graph semantics live in GraphT.
template <class S>
struct TensorT {
  static_assert(std::is_floating_point_v<S>);

  Shape shape;
  std::vector<S> data;

  TensorT() = default;
  explicit TensorT(Shape sh);
  TensorT(Shape sh, std::vector<S> d);

  static TensorT zeros(Shape sh) { return TensorT(std::move(sh)); }
  static TensorT full(Shape sh, S v);
  static TensorT scalar(S v) { return TensorT({1}, {v}); }

  std::int64_t numel() const { return static_cast<std::int64_t>(data.size()); }
  int rank() const { return static_cast<int>(shape.size()); }
  std::int64_t extent(int axis) const;

  S& at(std::int64_t i) { return data[static_cast<std::size_t>(i)]; }
  S at(std::int64_t i) const { return data[static_cast<std::size_t>(i)]; }
  S& at(std::int64_t i, std::int64_t j);
  S at(std::int64_t i, std::int64_t j) const;
  S& at(std::int64_t i, std::int64_t j, std::int64_t k);
  S at(std::int64_t i, std::int64_t j, std::int64_t k) const;

  bool same_shape(const TensorT& o) const { return shape == o.shape; }
  TensorT reshaped(Shape sh) const;

  template <class U>
  TensorT<U> cast() const {
    TensorT<U> out;
    out.shape = shape;
    out.data.resize(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) out.data[i] = static_cast<U>(data[i]);
    return out;
  }

  // Index of the first NaN/Inf entry, or -1 when all finite.
  std::int64_t first_nonfinite() const;
};

using Tensor = TensorT<float>;
using TensorD = TensorT<double>;

template <class S>
void fill_randn(TensorT<S>& t, std::mt19937_64& rng, double stddev = 1.0);
template <class S>
void fill_uniform(TensorT<S>& t, std::mt19937_64& rng, double lo, double hi);
template <class S>
TensorT<S> randn(Shape sh, std::mt19937_64& rng, double stddev = 1.0);

// Batched matrix product with numpy-style broadcast over leading axes.
// ta/tb transpose the trailing two axes of the respective operand.
template <class S>
TensorT<S> matmul_values(const TensorT<S>& a, bool ta, const TensorT<S>& b, bool tb);

// Sum-reduce t down to `target` (align-right broadcast inverse).
template <class S>
TensorT<S> reduce_to_shape(const TensorT<S>& t, const Shape& target);

}  // namespace fmenc
