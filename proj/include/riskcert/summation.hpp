#pragma once

#include <cmath>

namespace riskcert {

/// Neumaier compensated summation. Certificates average up to millions of
/// loss values; the compensation keeps the empirical mean reproducible to
/// the last bit under a fixed summation order.
class NeumaierSum {
public:
    void add(double x) noexcept {
        const double t = sum_ + x;
        if (std::fabs(sum_) >= std::fabs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }

    [[nodiscard]] double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

} // namespace riskcert
