#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <string>

#include "riskcert/errors.hpp"

namespace riskcert {

/// A real number constrained to [0,1]. Losses, Bernoulli means, tail
/// probabilities and certified bounds are all carried as Probability.
/// Out-of-range construction is a hard error, never a clamp: a loss of
/// 1.0000001 coming out of a user model signals a broken oracle and must
/// not be silently repaired into a valid-looking certificate.
class Probability {
public:
    constexpr Probability() = default;

    explicit Probability(double v) : v_(v) {
        if (!(v >= 0.0 && v <= 1.0)) {  // NaN fails both comparisons
            throw ValidationError("probability out of [0,1]: " + std::to_string(v));
        }
    }

    [[nodiscard]] constexpr double value() const noexcept { return v_; }

    friend constexpr bool operator==(Probability, Probability) = default;
    friend constexpr auto operator<=>(Probability, Probability) = default;

private:
    double v_ = 0.0;
};

/// The confidence slack c = log(1/delta)/T, in nats. Nonnegative and finite.
class SlackBudget {
public:
    constexpr SlackBudget() = default;

    explicit SlackBudget(double nats) : c_(nats) {
        if (!(nats >= 0.0) || !std::isfinite(nats)) {
            throw ValidationError("slack budget must be finite and >= 0, got " +
                                  std::to_string(nats));
        }
    }

    /// log(1/delta)/T for T independent summands at confidence level delta.
    static SlackBudget from_confidence(double delta, std::uint64_t summands) {
        if (!(delta > 0.0 && delta < 1.0)) {
            throw ValidationError("delta must lie in (0,1), got " + std::to_string(delta));
        }
        if (summands == 0) {
            throw ValidationError("summand count must be positive");
        }
        return SlackBudget(std::log(1.0 / delta) / static_cast<double>(summands));
    }

    [[nodiscard]] constexpr double nats() const noexcept { return c_; }

    friend constexpr bool operator==(SlackBudget, SlackBudget) = default;
    friend constexpr auto operator<=>(SlackBudget, SlackBudget) = default;

private:
    double c_ = 0.0;
};

} // namespace riskcert
