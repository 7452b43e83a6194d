#pragma once

#include <vector>

namespace pthought {

/// Fixed-width encoder output for one sentence.
struct SentenceVector {
  std::vector<double> values;

  std::size_t width() const { return values.size(); }
  bool operator==(const SentenceVector&) const = default;
};

}  // namespace pthought
