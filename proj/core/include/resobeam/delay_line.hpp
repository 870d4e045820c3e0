#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace resobeam {

/// Fixed integer delay: the value returned by push() is the value pushed
/// exactly `length` calls earlier (zero before that).
class DelayLine {
 public:
  explicit DelayLine(std::size_t length) : buffer_(length, 0.0) {
    if (length == 0) throw std::invalid_argument("DelayLine: length must be >= 1");
  }

  double push(double in) {
    const double out = buffer_[head_];
    buffer_[head_] = in;
    if (++head_ == buffer_.size()) head_ = 0;
    return out;
  }

  /// Value that will leave on the next push().
  double front() const { return buffer_[head_]; }

  std::size_t length() const { return buffer_.size(); }

  /// Sum of everything in flight.
  double stored() const {
    double total = 0.0;
    for (double v : buffer_) total += v;
    return total;
  }

 private:
  std::vector<double> buffer_;
  std::size_t head_ = 0;
};

}  // namespace resobeam
