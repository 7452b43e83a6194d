#pragma once

// Dense float64 tensors with a define-by-run reverse-mode differentiation tape.
//
// Operations record themselves on the thread's active Tape (see TapeScope) when
// at least one operand requires a gradient. Shapes must match exactly; nothing
// is ever broadcast.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <memory>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pthought/errors.hpp"

namespace pthought::numkit {

using Shape = std::vector<std::size_t>;

inline std::string shape_str(const Shape& shape) {
  std::string s = "[";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) s += "x";
    s += std::to_string(shape[i]);
  }
  return s + "]";
}

inline std::size_t numel(const Shape& shape) {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>());
}

struct TensorImpl {
  Shape shape;
  std::vector<double> data;
  std::vector<double> grad;  // empty until a backward sweep reaches this tensor
  bool requires_grad = false;
};

/// Handle to a shared tensor buffer. Copies alias; use clone() for a deep copy.
class Tensor {
 public:
  Tensor() = default;

  explicit Tensor(Shape shape, double fill = 0.0) {
    check_shape(shape);
    impl_ = std::make_shared<TensorImpl>();
    impl_->data.assign(numel(shape), fill);
    impl_->shape = std::move(shape);
  }

  Tensor(Shape shape, std::vector<double> data) {
    check_shape(shape);
    if (numel(shape) != data.size()) {
      throw ShapeError("tensor data length " + std::to_string(data.size()) +
                       " does not match shape " + shape_str(shape));
    }
    impl_ = std::make_shared<TensorImpl>();
    impl_->shape = std::move(shape);
    impl_->data = std::move(data);
  }

  static Tensor scalar(double value) { return Tensor({1}, std::vector<double>{value}); }

  static Tensor row(std::vector<double> values) {
    const std::size_t n = values.size();
    return Tensor({1, n}, std::move(values));
  }

  static Tensor from_rows(std::initializer_list<std::initializer_list<double>> rows) {
    const std::size_t r = rows.size();
    const std::size_t c = r ? rows.begin()->size() : 0;
    std::vector<double> data;
    for (const auto& row : rows) {
      if (row.size() != c) throw ShapeError("ragged rows in from_rows");
      data.insert(data.end(), row.begin(), row.end());
    }
    return Tensor({r, c}, std::move(data));
  }

  bool defined() const { return impl_ != nullptr; }
  const Shape& shape() const { return impl_->shape; }
  std::size_t rank() const { return impl_->shape.size(); }
  std::size_t size() const { return impl_->data.size(); }
  std::size_t rows() const { return impl_->shape.at(0); }
  std::size_t cols() const { return rank() > 1 ? impl_->shape[1] : 1; }

  std::span<double> data() { return impl_->data; }
  std::span<const double> data() const { return impl_->data; }
  double& operator[](std::size_t i) { return impl_->data[i]; }
  double operator[](std::size_t i) const { return impl_->data[i]; }
  double& operator()(std::size_t r, std::size_t c) { return impl_->data[r * cols() + c]; }
  double operator()(std::size_t r, std::size_t c) const { return impl_->data[r * cols() + c]; }

  double item() const {
    if (size() != 1) throw ShapeError("item() on non-scalar tensor " + shape_str(shape()));
    return impl_->data[0];
  }

  bool has_grad() const { return !impl_->grad.empty(); }
  std::span<const double> grad() const { return impl_->grad; }
  std::span<double> grad() { return impl_->grad; }
  void zero_grad() { impl_->grad.assign(impl_->data.size(), 0.0); }

  bool requires_grad() const { return impl_->requires_grad; }
  Tensor& set_requires_grad(bool on = true) {
    impl_->requires_grad = on;
    return *this;
  }

  /// Deep copy of shape and values; the copy is a fresh leaf with no gradient.
  Tensor clone() const { return Tensor(impl_->shape, impl_->data); }

  const std::shared_ptr<TensorImpl>& impl() const { return impl_; }

 private:
  static void check_shape(const Shape& shape) {
    if (shape.empty()) throw ShapeError("tensor shape must have at least one dimension");
    for (auto d : shape) {
      if (d == 0) throw ShapeError("tensor dimensions must be positive, got " + shape_str(shape));
    }
  }

  std::shared_ptr<TensorImpl> impl_;
};

/// Ordered record of operations; inputs of every node precede it.
class Tape {
 public:
  struct Node {
    std::vector<std::shared_ptr<TensorImpl>> inputs;
    std::shared_ptr<TensorImpl> output;
    std::function<void()> backward;
  };

  void record(std::vector<std::shared_ptr<TensorImpl>> inputs, std::shared_ptr<TensorImpl> output,
              std::function<void()> backward) {
    nodes_.push_back({std::move(inputs), std::move(output), std::move(backward)});
  }

  std::size_t size() const { return nodes_.size(); }
  std::span<const Node> nodes() const { return nodes_; }
  void clear() { nodes_.clear(); }

 private:
  std::vector<Node> nodes_;
};

namespace detail {
inline thread_local Tape* current_tape = nullptr;
}

inline Tape* active_tape() { return detail::current_tape; }

/// Makes `tape` the active tape for the current thread until destruction.
/// Passing nullptr suspends recording.
class TapeScope {
 public:
  explicit TapeScope(Tape* tape) : previous_(detail::current_tape) { detail::current_tape = tape; }
  explicit TapeScope(Tape& tape) : TapeScope(&tape) {}
  ~TapeScope() { detail::current_tape = previous_; }
  TapeScope(const TapeScope&) = delete;
  TapeScope& operator=(const TapeScope&) = delete;

 private:
  Tape* previous_;
};

namespace detail {

inline void require_same_shape(const Tensor& a, const Tensor& b, const char* op) {
  if (a.shape() != b.shape()) {
    throw ShapeError(std::string(op) + ": shape mismatch " + shape_str(a.shape()) + " vs " +
                     shape_str(b.shape()));
  }
}

inline void require_axis(const Tensor& x, std::size_t axis, const char* op) {
  if (axis >= x.rank()) {
    throw ShapeError(std::string(op) + ": axis " + std::to_string(axis) + " out of range for " +
                     shape_str(x.shape()));
  }
}

// Splits a shape around `axis` into (outer, extent, inner) for strided loops.
struct AxisView {
  std::size_t outer = 1, extent = 1, inner = 1;
};

inline AxisView axis_view(const Shape& shape, std::size_t axis) {
  AxisView v;
  for (std::size_t i = 0; i < axis; ++i) v.outer *= shape[i];
  v.extent = shape[axis];
  for (std::size_t i = axis + 1; i < shape.size(); ++i) v.inner *= shape[i];
  return v;
}

// Registers `out` on the active tape when any input needs a gradient.
// `make_backward` receives raw pointers to the impls and returns the local rule.
template <typename MakeBackward>
Tensor finish(Tensor out, std::initializer_list<const Tensor*> inputs, MakeBackward&& make_backward) {
  Tape* tape = numkit::active_tape();
  if (!tape) return out;
  bool needs = false;
  for (const Tensor* t : inputs) needs = needs || t->requires_grad();
  if (!needs) return out;
  out.set_requires_grad(true);
  std::vector<std::shared_ptr<TensorImpl>> impls;
  impls.reserve(inputs.size());
  for (const Tensor* t : inputs) impls.push_back(t->impl());
  tape->record(std::move(impls), out.impl(), make_backward(out.impl().get()));
  return out;
}

inline bool wants(const TensorImpl* t) { return t->requires_grad; }

// Elementwise unary op with derivative expressed through (input, output).
template <typename Fwd, typename Deriv>
Tensor unary(const Tensor& x, Fwd fwd, Deriv deriv) {
  Tensor out(x.shape());
  auto xs = x.data();
  auto ys = out.data();
  for (std::size_t i = 0; i < xs.size(); ++i) ys[i] = fwd(xs[i]);
  TensorImpl* xi = x.impl().get();
  return finish(out, {&x}, [xi, deriv](TensorImpl* o) {
    return [xi, o, deriv] {
      if (!wants(xi)) return;
      for (std::size_t i = 0; i < o->data.size(); ++i) {
        xi->grad[i] += o->grad[i] * deriv(xi->data[i], o->data[i]);
      }
    };
  });
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Forward operations

/// Matrix product of an m x k and a k x n tensor.
inline Tensor matmul(const Tensor& a, const Tensor& b) {
  if (a.rank() != 2 || b.rank() != 2 || a.shape()[1] != b.shape()[0]) {
    throw ShapeError("matmul: shape mismatch " + shape_str(a.shape()) + " vs " + shape_str(b.shape()));
  }
  const std::size_t m = a.shape()[0], k = a.shape()[1], n = b.shape()[1];
  Tensor out({m, n});
  auto A = a.data();
  auto B = b.data();
  auto C = out.data();
  for (std::size_t i = 0; i < m; ++i) {
    double* crow = C.data() + i * n;
    for (std::size_t p = 0; p < k; ++p) {
      const double av = A[i * k + p];
      if (av == 0.0) continue;
      const double* brow = B.data() + p * n;
      for (std::size_t j = 0; j < n; ++j) crow[j] += av * brow[j];
    }
  }
  TensorImpl* ai = a.impl().get();
  TensorImpl* bi = b.impl().get();
  return detail::finish(out, {&a, &b}, [=](TensorImpl* o) {
    return [=] {
      const double* G = o->grad.data();
      if (detail::wants(ai)) {
        for (std::size_t i = 0; i < m; ++i) {
          for (std::size_t p = 0; p < k; ++p) {
            const double* brow = bi->data.data() + p * n;
            const double* grow = G + i * n;
            double acc = 0.0;
            for (std::size_t j = 0; j < n; ++j) acc += grow[j] * brow[j];
            ai->grad[i * k + p] += acc;
          }
        }
      }
      if (detail::wants(bi)) {
        for (std::size_t i = 0; i < m; ++i) {
          const double* grow = G + i * n;
          for (std::size_t p = 0; p < k; ++p) {
            const double av = ai->data[i * k + p];
            if (av == 0.0) continue;
            double* dst = bi->grad.data() + p * n;
            for (std::size_t j = 0; j < n; ++j) dst[j] += av * grow[j];
          }
        }
      }
    };
  });
}

inline Tensor add(const Tensor& a, const Tensor& b) {
  detail::require_same_shape(a, b, "add");
  Tensor out(a.shape());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] + b[i];
  TensorImpl* ai = a.impl().get();
  TensorImpl* bi = b.impl().get();
  return detail::finish(out, {&a, &b}, [=](TensorImpl* o) {
    return [=] {
      for (std::size_t i = 0; i < o->grad.size(); ++i) {
        if (detail::wants(ai)) ai->grad[i] += o->grad[i];
        if (detail::wants(bi)) bi->grad[i] += o->grad[i];
      }
    };
  });
}

inline Tensor sub(const Tensor& a, const Tensor& b) {
  detail::require_same_shape(a, b, "sub");
  Tensor out(a.shape());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] - b[i];
  TensorImpl* ai = a.impl().get();
  TensorImpl* bi = b.impl().get();
  return detail::finish(out, {&a, &b}, [=](TensorImpl* o) {
    return [=] {
      for (std::size_t i = 0; i < o->grad.size(); ++i) {
        if (detail::wants(ai)) ai->grad[i] += o->grad[i];
        if (detail::wants(bi)) bi->grad[i] -= o->grad[i];
      }
    };
  });
}

/// Elementwise (Hadamard) product.
inline Tensor mul(const Tensor& a, const Tensor& b) {
  detail::require_same_shape(a, b, "mul");
  Tensor out(a.shape());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] * b[i];
  TensorImpl* ai = a.impl().get();
  TensorImpl* bi = b.impl().get();
  return detail::finish(out, {&a, &b}, [=](TensorImpl* o) {
    return [=] {
      for (std::size_t i = 0; i < o->grad.size(); ++i) {
        if (detail::wants(ai)) ai->grad[i] += o->grad[i] * bi->data[i];
        if (detail::wants(bi)) bi->grad[i] += o->grad[i] * ai->data[i];
      }
    };
  });
}

inline Tensor scale(const Tensor& x, double c) {
  return detail::unary(x, [c](double v) { return c * v; }, [c](double, double) { return c; });
}

inline Tensor sigmoid(const Tensor& x) {
  return detail::unary(
      x,
      [](double v) {
        if (v >= 0) return 1.0 / (1.0 + std::exp(-v));
        const double e = std::exp(v);
        return e / (1.0 + e);
      },
      [](double, double y) { return y * (1.0 - y); });
}

inline Tensor tanh(const Tensor& x) {
  return detail::unary(
      x, [](double v) { return std::tanh(v); }, [](double, double y) { return 1.0 - y * y; });
}

inline Tensor abs(const Tensor& x) {
  return detail::unary(
      x, [](double v) { return std::fabs(v); },
      [](double v, double) { return v > 0 ? 1.0 : (v < 0 ? -1.0 : 0.0); });
}

inline Tensor log(const Tensor& x) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0)) {
      throw DomainError("log: non-positive input " + std::to_string(x[i]) + " at index " +
                        std::to_string(i));
    }
  }
  return detail::unary(
      x, [](double v) { return std::log(v); }, [](double v, double) { return 1.0 / v; });
}

/// Concatenate along `axis`; all other extents must agree.
inline Tensor concat(const std::vector<Tensor>& parts, std::size_t axis) {
  if (parts.empty()) throw ShapeError("concat: no operands");
  detail::require_axis(parts[0], axis, "concat");
  Shape shape = parts[0].shape();
  std::size_t total = 0;
  for (const auto& p : parts) {
    Shape a = p.shape(), b = shape;
    if (a.size() != b.size()) {
      throw ShapeError("concat: shape mismatch " + shape_str(shape) + " vs " + shape_str(p.shape()));
    }
    a[axis] = b[axis] = 0;
    if (a != b) {
      throw ShapeError("concat: shape mismatch " + shape_str(shape) + " vs " + shape_str(p.shape()));
    }
    total += p.shape()[axis];
  }
  shape[axis] = total;
  Tensor out(shape);
  const auto ov = detail::axis_view(shape, axis);
  std::vector<std::size_t> offsets;
  std::size_t offset = 0;
  for (const auto& p : parts) {
    offsets.push_back(offset);
    const std::size_t ext = p.shape()[axis];
    for (std::size_t o = 0; o < ov.outer; ++o) {
      std::copy_n(p.data().data() + o * ext * ov.inner, ext * ov.inner,
                  out.data().data() + (o * ov.extent + offset) * ov.inner);
    }
    offset += ext;
  }

  Tape* tape = numkit::active_tape();
  bool needs = false;
  for (const auto& p : parts) needs = needs || p.requires_grad();
  if (!tape || !needs) return out;
  out.set_requires_grad(true);
  std::vector<std::shared_ptr<TensorImpl>> impls;
  for (const auto& p : parts) impls.push_back(p.impl());
  TensorImpl* oi = out.impl().get();
  std::vector<TensorImpl*> raw;
  for (const auto& p : parts) raw.push_back(p.impl().get());
  tape->record(std::move(impls), out.impl(), [oi, raw, offsets, ov, axis] {
    for (std::size_t k = 0; k < raw.size(); ++k) {
      TensorImpl* pi = raw[k];
      if (!pi->requires_grad) continue;
      const std::size_t ext = pi->shape[axis];
      for (std::size_t o = 0; o < ov.outer; ++o) {
        const double* src = oi->grad.data() + (o * ov.extent + offsets[k]) * ov.inner;
        double* dst = pi->grad.data() + o * ext * ov.inner;
        for (std::size_t i = 0; i < ext * ov.inner; ++i) dst[i] += src[i];
      }
    }
  });
  return out;
}

/// Elements [begin, end) along `axis`.
inline Tensor slice(const Tensor& x, std::size_t axis, std::size_t begin, std::size_t end) {
  detail::require_axis(x, axis, "slice");
  if (begin >= end || end > x.shape()[axis]) {
    throw ShapeError("slice: range [" + std::to_string(begin) + ", " + std::to_string(end) +
                     ") invalid for " + shape_str(x.shape()) + " along axis " + std::to_string(axis));
  }
  Shape shape = x.shape();
  shape[axis] = end - begin;
  Tensor out(shape);
  const auto xv = detail::axis_view(x.shape(), axis);
  const std::size_t ext = end - begin;
  for (std::size_t o = 0; o < xv.outer; ++o) {
    std::copy_n(x.data().data() + (o * xv.extent + begin) * xv.inner, ext * xv.inner,
                out.data().data() + o * ext * xv.inner);
  }
  TensorImpl* xi = x.impl().get();
  return detail::finish(out, {&x}, [=](TensorImpl* o) {
    return [=] {
      if (!detail::wants(xi)) return;
      for (std::size_t q = 0; q < xv.outer; ++q) {
        const double* src = o->grad.data() + q * ext * xv.inner;
        double* dst = xi->grad.data() + (q * xv.extent + begin) * xv.inner;
        for (std::size_t i = 0; i < ext * xv.inner; ++i) dst[i] += src[i];
      }
    };
  });
}

inline Tensor softmax(const Tensor& x, std::size_t axis) {
  detail::require_axis(x, axis, "softmax");
  const auto v = detail::axis_view(x.shape(), axis);
  Tensor out(x.shape());
  for (std::size_t o = 0; o < v.outer; ++o) {
    for (std::size_t in = 0; in < v.inner; ++in) {
      const std::size_t base = o * v.extent * v.inner + in;
      double mx = x[base];
      for (std::size_t e = 1; e < v.extent; ++e) mx = std::max(mx, x[base + e * v.inner]);
      double z = 0.0;
      for (std::size_t e = 0; e < v.extent; ++e) {
        const double ev = std::exp(x[base + e * v.inner] - mx);
        out[base + e * v.inner] = ev;
        z += ev;
      }
      for (std::size_t e = 0; e < v.extent; ++e) out[base + e * v.inner] /= z;
    }
  }
  TensorImpl* xi = x.impl().get();
  return detail::finish(out, {&x}, [=](TensorImpl* o) {
    return [=] {
      if (!detail::wants(xi)) return;
      for (std::size_t q = 0; q < v.outer; ++q) {
        for (std::size_t in = 0; in < v.inner; ++in) {
          const std::size_t base = q * v.extent * v.inner + in;
          double dot = 0.0;
          for (std::size_t e = 0; e < v.extent; ++e) {
            dot += o->grad[base + e * v.inner] * o->data[base + e * v.inner];
          }
          for (std::size_t e = 0; e < v.extent; ++e) {
            const std::size_t i = base + e * v.inner;
            xi->grad[i] += o->data[i] * (o->grad[i] - dot);
          }
        }
      }
    };
  });
}

/// log(softmax(x)) computed stably; never hits the log domain error on underflow.
inline Tensor log_softmax(const Tensor& x, std::size_t axis) {
  detail::require_axis(x, axis, "log_softmax");
  const auto v = detail::axis_view(x.shape(), axis);
  Tensor out(x.shape());
  for (std::size_t o = 0; o < v.outer; ++o) {
    for (std::size_t in = 0; in < v.inner; ++in) {
      const std::size_t base = o * v.extent * v.inner + in;
      double mx = x[base];
      for (std::size_t e = 1; e < v.extent; ++e) mx = std::max(mx, x[base + e * v.inner]);
      double z = 0.0;
      for (std::size_t e = 0; e < v.extent; ++e) z += std::exp(x[base + e * v.inner] - mx);
      const double lz = mx + std::log(z);
      for (std::size_t e = 0; e < v.extent; ++e) out[base + e * v.inner] = x[base + e * v.inner] - lz;
    }
  }
  TensorImpl* xi = x.impl().get();
  return detail::finish(out, {&x}, [=](TensorImpl* o) {
    return [=] {
      if (!detail::wants(xi)) return;
      for (std::size_t q = 0; q < v.outer; ++q) {
        for (std::size_t in = 0; in < v.inner; ++in) {
          const std::size_t base = q * v.extent * v.inner + in;
          double gsum = 0.0;
          for (std::size_t e = 0; e < v.extent; ++e) gsum += o->grad[base + e * v.inner];
          for (std::size_t e = 0; e < v.extent; ++e) {
            const std::size_t i = base + e * v.inner;
            xi->grad[i] += o->grad[i] - std::exp(o->data[i]) * gsum;
          }
        }
      }
    };
  });
}

/// Sum of all elements, as a shape-[1] tensor.
inline Tensor sum(const Tensor& x) {
  double s = 0.0;
  for (double v : x.data()) s += v;
  Tensor out = Tensor::scalar(s);
  TensorImpl* xi = x.impl().get();
  return detail::finish(out, {&x}, [=](TensorImpl* o) {
    return [=] {
      if (!detail::wants(xi)) return;
      for (double& g : xi->grad) g += o->grad[0];
    };
  });
}

/// Sum along `axis`, keeping it as an extent-1 dimension.
inline Tensor sum(const Tensor& x, std::size_t axis) {
  detail::require_axis(x, axis, "sum");
  const auto v = detail::axis_view(x.shape(), axis);
  Shape shape = x.shape();
  shape[axis] = 1;
  Tensor out(shape);
  for (std::size_t o = 0; o < v.outer; ++o) {
    for (std::size_t e = 0; e < v.extent; ++e) {
      for (std::size_t in = 0; in < v.inner; ++in) {
        out[o * v.inner + in] += x[(o * v.extent + e) * v.inner + in];
      }
    }
  }
  TensorImpl* xi = x.impl().get();
  return detail::finish(out, {&x}, [=](TensorImpl* o) {
    return [=] {
      if (!detail::wants(xi)) return;
      for (std::size_t q = 0; q < v.outer; ++q) {
        for (std::size_t e = 0; e < v.extent; ++e) {
          for (std::size_t in = 0; in < v.inner; ++in) {
            xi->grad[(q * v.extent + e) * v.inner + in] += o->grad[q * v.inner + in];
          }
        }
      }
    };
  });
}

inline Tensor mean(const Tensor& x) { return scale(sum(x), 1.0 / static_cast<double>(x.size())); }

/// Rows of a 2-D `table` selected by `ids`, stacked in order (embedding lookup).
inline Tensor gather_rows(const Tensor& table, std::span<const std::size_t> ids) {
  if (table.rank() != 2) throw ShapeError("gather_rows: table must be 2-D, got " + shape_str(table.shape()));
  if (ids.empty()) throw ShapeError("gather_rows: no ids");
  const std::size_t width = table.shape()[1];
  Tensor out({ids.size(), width});
  for (std::size_t r = 0; r < ids.size(); ++r) {
    if (ids[r] >= table.shape()[0]) {
      throw ShapeError("gather_rows: id " + std::to_string(ids[r]) + " out of range for " +
                       shape_str(table.shape()));
    }
    std::copy_n(table.data().data() + ids[r] * width, width, out.data().data() + r * width);
  }
  TensorImpl* ti = table.impl().get();
  std::vector<std::size_t> rows(ids.begin(), ids.end());
  return detail::finish(out, {&table}, [=](TensorImpl* o) {
    return [=] {
      if (!detail::wants(ti)) return;
      for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t c = 0; c < width; ++c) ti->grad[rows[r] * width + c] += o->grad[r * width + c];
      }
    };
  });
}

// ---------------------------------------------------------------------------
// Reverse sweep

/// Populates gradients of every tensor recorded on `tape` with d(loss)/d(tensor).
/// Tensors on the tape that do not influence `loss` end with zero gradient.
inline void backward(const Tape& tape, const Tensor& loss) {
  if (!loss.defined() || loss.size() != 1) {
    throw ShapeError("backward: loss must be scalar, got " +
                     (loss.defined() ? shape_str(loss.shape()) : std::string("undefined")));
  }
  for (const auto& node : tape.nodes()) {
    for (const auto& in : node.inputs) {
      if (in->requires_grad) in->grad.assign(in->data.size(), 0.0);
    }
    node.output->grad.assign(node.output->data.size(), 0.0);
  }
  if (!loss.requires_grad()) return;
  loss.impl()->grad.assign(1, 1.0);
  const auto nodes = tape.nodes();
  for (auto it = nodes.rbegin(); it != nodes.rend(); ++it) it->backward();
}

inline bool all_finite(const Tensor& t) {
  return std::all_of(t.data().begin(), t.data().end(), [](double v) { return std::isfinite(v); });
}

}  // namespace pthought::numkit
