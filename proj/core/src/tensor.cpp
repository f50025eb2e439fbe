#include "fmenc/tensor.hpp"

#include <Eigen/Core>

#include <cmath>
#include <cstddef>

namespace fmenc {

std::string shape_str(const Shape& s) {
  std::string out = "[";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(s[i]);
  }
  out += "]";
  return out;
}

std::int64_t shape_numel(const Shape& s) {
  std::int64_t n = 1;
  for (auto e : s) {
    if (e < 0) throw DimError(cat("negative extent in shape ", shape_str(s)));
    n *= e;
  }
  return n;
}

template <class S>
TensorT<S>::TensorT(Shape sh)
    : shape(std::move(sh)), data(static_cast<std::size_t>(shape_numel(shape)), S(0)) {}

template <class S>
TensorT<S>::TensorT(Shape sh, std::vector<S> d) : shape(std::move(sh)), data(std::move(d)) {
  if (shape_numel(shape) != static_cast<std::int64_t>(data.size()))
    throw DimError(cat("data length ", data.size(), " does not match shape ", shape_str(shape)));
}

template <class S>
TensorT<S> TensorT<S>::full(Shape sh, S v) {
  TensorT t(std::move(sh));
  std::fill(t.data.begin(), t.data.end(), v);
  return t;
}

template <class S>
std::int64_t TensorT<S>::extent(int axis) const {
  if (axis < 0) axis += rank();
  if (axis < 0 || axis >= rank())
    throw DimError(cat("axis ", axis, " out of range for shape ", shape_str(shape)));
  return shape[static_cast<std::size_t>(axis)];
}

template <class S>
S& TensorT<S>::at(std::int64_t i, std::int64_t j) {
  return data[static_cast<std::size_t>(i * shape.back() + j)];
}
template <class S>
S TensorT<S>::at(std::int64_t i, std::int64_t j) const {
  return data[static_cast<std::size_t>(i * shape.back() + j)];
}
template <class S>
S& TensorT<S>::at(std::int64_t i, std::int64_t j, std::int64_t k) {
  const auto d2 = shape[shape.size() - 1];
  const auto d1 = shape[shape.size() - 2];
  return data[static_cast<std::size_t>((i * d1 + j) * d2 + k)];
}
template <class S>
S TensorT<S>::at(std::int64_t i, std::int64_t j, std::int64_t k) const {
  const auto d2 = shape[shape.size() - 1];
  const auto d1 = shape[shape.size() - 2];
  return data[static_cast<std::size_t>((i * d1 + j) * d2 + k)];
}

template <class S>
TensorT<S> TensorT<S>::reshaped(Shape sh) const {
  if (shape_numel(sh) != numel())
    throw DimError(cat("cannot reshape ", shape_str(shape), " to ", shape_str(sh)));
  TensorT out;
  out.shape = std::move(sh);
  out.data = data;
  return out;
}

template <class S>
std::int64_t TensorT<S>::first_nonfinite() const {
  for (std::size_t i = 0; i < data.size(); ++i)
    if (!std::isfinite(data[i])) return static_cast<std::int64_t>(i);
  return -1;
}

template <class S>
void fill_randn(TensorT<S>& t, std::mt19937_64& rng, double stddev) {
  std::normal_distribution<double> d(0.0, stddev);
  for (auto& v : t.data) v = static_cast<S>(d(rng));
}

template <class S>
void fill_uniform(TensorT<S>& t, std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> d(lo, hi);
  for (auto& v : t.data) v = static_cast<S>(d(rng));
}

template <class S>
TensorT<S> randn(Shape sh, std::mt19937_64& rng, double stddev) {
  TensorT<S> t(std::move(sh));
  fill_randn(t, rng, stddev);
  return t;
}

namespace {

struct BatchPlan {
  Shape batch;                       // broadcast batch extents
  std::vector<std::int64_t> mul_a;   // per batch axis: slice multiplier (0 = broadcast)
  std::vector<std::int64_t> mul_b;
  std::int64_t n_batches = 1;
};

BatchPlan plan_batches(const Shape& a, const Shape& b) {
  const int ra = static_cast<int>(a.size()) - 2;
  const int rb = static_cast<int>(b.size()) - 2;
  const int r = ra > rb ? ra : rb;
  BatchPlan p;
  p.batch.resize(static_cast<std::size_t>(r));
  p.mul_a.assign(static_cast<std::size_t>(r), 0);
  p.mul_b.assign(static_cast<std::size_t>(r), 0);
  for (int i = 0; i < r; ++i) {
    const std::int64_t ea = (i >= r - ra) ? a[static_cast<std::size_t>(i - (r - ra))] : 1;
    const std::int64_t eb = (i >= r - rb) ? b[static_cast<std::size_t>(i - (r - rb))] : 1;
    if (ea != eb && ea != 1 && eb != 1)
      throw DimError(cat("matmul batch extents not broadcastable: ", shape_str(a), " x ", shape_str(b)));
    p.batch[static_cast<std::size_t>(i)] = ea > eb ? ea : eb;
  }
  // Row-major multipliers within each operand's own batch space.
  std::int64_t sa = 1, sb = 1;
  for (int i = r - 1; i >= 0; --i) {
    const std::int64_t ea = (i >= r - ra) ? a[static_cast<std::size_t>(i - (r - ra))] : 1;
    const std::int64_t eb = (i >= r - rb) ? b[static_cast<std::size_t>(i - (r - rb))] : 1;
    if (ea != 1) {
      p.mul_a[static_cast<std::size_t>(i)] = sa;
      sa *= ea;
    }
    if (eb != 1) {
      p.mul_b[static_cast<std::size_t>(i)] = sb;
      sb *= eb;
    }
    p.n_batches *= p.batch[static_cast<std::size_t>(i)];
  }
  return p;
}

}  // namespace

template <class S>
TensorT<S> matmul_values(const TensorT<S>& a, bool ta, const TensorT<S>& b, bool tb) {
  if (a.rank() < 2 || b.rank() < 2)
    throw DimError(cat("matmul needs rank >= 2 operands, got ", shape_str(a.shape), " x ",
                       shape_str(b.shape)));
  const std::int64_t ar = a.shape[a.shape.size() - 2], ac = a.shape.back();
  const std::int64_t br = b.shape[b.shape.size() - 2], bc = b.shape.back();
  const std::int64_t m = ta ? ac : ar;
  const std::int64_t ka = ta ? ar : ac;
  const std::int64_t kb = tb ? bc : br;
  const std::int64_t n = tb ? br : bc;
  if (ka != kb)
    throw DimError(cat("matmul inner extents differ: ", shape_str(a.shape), (ta ? "^T" : ""),
                       " x ", shape_str(b.shape), (tb ? "^T" : "")));

  BatchPlan p = plan_batches(a.shape, b.shape);
  Shape out_shape = p.batch;
  out_shape.push_back(m);
  out_shape.push_back(n);
  TensorT<S> out(out_shape);

  using RowMat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  using CMap = Eigen::Map<const RowMat>;
  using MMap = Eigen::Map<RowMat>;

  const std::int64_t slice_a = ar * ac, slice_b = br * bc, slice_o = m * n;
  const int r = static_cast<int>(p.batch.size());
  std::vector<std::int64_t> idx(static_cast<std::size_t>(r), 0);
  for (std::int64_t bi = 0; bi < p.n_batches; ++bi) {
    std::int64_t oa = 0, ob = 0;
    for (int i = 0; i < r; ++i) {
      oa += idx[static_cast<std::size_t>(i)] * p.mul_a[static_cast<std::size_t>(i)];
      ob += idx[static_cast<std::size_t>(i)] * p.mul_b[static_cast<std::size_t>(i)];
    }
    CMap ma(a.data.data() + oa * slice_a, ar, ac);
    CMap mb(b.data.data() + ob * slice_b, br, bc);
    MMap mo(out.data.data() + bi * slice_o, m, n);
    if (!ta && !tb)
      mo.noalias() = ma * mb;
    else if (ta && !tb)
      mo.noalias() = ma.transpose() * mb;
    else if (!ta && tb)
      mo.noalias() = ma * mb.transpose();
    else
      mo.noalias() = ma.transpose() * mb.transpose();
    for (int i = r - 1; i >= 0; --i) {
      if (++idx[static_cast<std::size_t>(i)] < p.batch[static_cast<std::size_t>(i)]) break;
      idx[static_cast<std::size_t>(i)] = 0;
    }
  }
  return out;
}

template <class S>
TensorT<S> reduce_to_shape(const TensorT<S>& t, const Shape& target) {
  if (t.shape == target) return t;
  if (target.size() > t.shape.size())
    throw DimError(cat("cannot reduce ", shape_str(t.shape), " to higher-rank ", shape_str(target)));
  const int r = t.rank();
  const int off = r - static_cast<int>(target.size());
  for (int i = off; i < r; ++i) {
    const std::int64_t et = target[static_cast<std::size_t>(i - off)];
    if (et != t.shape[static_cast<std::size_t>(i)] && et != 1)
      throw DimError(cat("cannot reduce ", shape_str(t.shape), " to ", shape_str(target)));
  }
  TensorT<S> out(target);
  std::vector<std::int64_t> strides(static_cast<std::size_t>(r), 0);
  // Strides into the output for each source axis; broadcast axes get 0.
  std::int64_t s = 1;
  for (int i = r - 1; i >= 0; --i) {
    if (i >= off && target[static_cast<std::size_t>(i - off)] != 1) {
      strides[static_cast<std::size_t>(i)] = s;
      s *= target[static_cast<std::size_t>(i - off)];
    }
  }
  std::vector<std::int64_t> idx(static_cast<std::size_t>(r), 0);
  const std::int64_t n = t.numel();
  std::int64_t oi = 0;
  for (std::int64_t i = 0; i < n; ++i) {
    out.data[static_cast<std::size_t>(oi)] += t.data[static_cast<std::size_t>(i)];
    for (int d = r - 1; d >= 0; --d) {
      oi += strides[static_cast<std::size_t>(d)];
      if (++idx[static_cast<std::size_t>(d)] < t.shape[static_cast<std::size_t>(d)]) break;
      idx[static_cast<std::size_t>(d)] = 0;
      oi -= strides[static_cast<std::size_t>(d)] * t.shape[static_cast<std::size_t>(d)];
    }
  }
  return out;
}

template struct TensorT<float>;
template struct TensorT<double>;
template void fill_randn<float>(TensorT<float>&, std::mt19937_64&, double);
template void fill_randn<double>(TensorT<double>&, std::mt19937_64&, double);
template void fill_uniform<float>(TensorT<float>&, std::mt19937_64&, double, double);
template void fill_uniform<double>(TensorT<double>&, std::mt19937_64&, double, double);
template TensorT<float> randn<float>(Shape, std::mt19937_64&, double);
template TensorT<double> randn<double>(Shape, std::mt19937_64&, double);
template TensorT<float> matmul_values<float>(const TensorT<float>&, bool, const TensorT<float>&, bool);
template TensorT<double> matmul_values<double>(const TensorT<double>&, bool, const TensorT<double>&, bool);
template TensorT<float> reduce_to_shape<float>(const TensorT<float>&, const Shape&);
template TensorT<double> reduce_to_shape<double>(const TensorT<double>&, const Shape&);

}  // namespace fmenc
