#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "pthought/numkit.hpp"

namespace pthought::numkit {

struct GradCheckResult {
  double max_relative_error = 0.0;
  std::size_t worst_tensor = 0;  // index into the params list
  std::size_t worst_index = 0;   // flat element index within that tensor
  double analytic = 0.0;
  double numeric = 0.0;
};

/// Compares reverse-mode gradients of a scalar function against central
/// differences, element by element over every tensor in `params`.
///
/// `fn` must rebuild its result from the current parameter values each call.
/// Relative error is |a - n| / max(|a|, |n|, 1e-8).
inline GradCheckResult finite_diff_check_detailed(const std::function<Tensor()>& fn,
                                                  std::vector<Tensor> params, double step) {
  if (!(step > 0.0)) throw ConfigError("finite_diff_check: step must be positive");

  auto evaluate = [&fn]() {
    TapeScope off(nullptr);
    const double v = fn().item();
    if (!std::isfinite(v)) throw NumericError("finite_diff_check: non-finite function value");
    return v;
  };

  std::vector<bool> previous_flags;
  for (auto& p : params) {
    previous_flags.push_back(p.requires_grad());
    p.set_requires_grad(true);
    p.zero_grad();
  }

  Tape tape;
  {
    TapeScope scope(tape);
    Tensor loss = fn();
    if (!std::isfinite(loss.item())) throw NumericError("finite_diff_check: non-finite function value");
    backward(tape, loss);
  }

  GradCheckResult result;
  for (std::size_t t = 0; t < params.size(); ++t) {
    Tensor& p = params[t];
    const std::vector<double> analytic(p.grad().begin(), p.grad().end());
    for (std::size_t i = 0; i < p.size(); ++i) {
      const double saved = p[i];
      p[i] = saved + step;
      const double plus = evaluate();
      p[i] = saved - step;
      const double minus = evaluate();
      p[i] = saved;
      const double numeric = (plus - minus) / (2.0 * step);
      const double a = analytic[i];
      const double err = std::fabs(a - numeric) / std::max({std::fabs(a), std::fabs(numeric), 1e-8});
      if (err > result.max_relative_error) {
        result = {err, t, i, a, numeric};
      }
    }
  }
  for (std::size_t t = 0; t < params.size(); ++t) params[t].set_requires_grad(previous_flags[t]);
  return result;
}

inline double finite_diff_check(const std::function<Tensor()>& fn, std::vector<Tensor> params,
                                double step = 1e-5) {
  return finite_diff_check_detailed(fn, std::move(params), step).max_relative_error;
}

}  // namespace pthought::numkit
