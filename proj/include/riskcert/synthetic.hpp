#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "riskcert/estimators.hpp"

namespace riskcert {

enum class SyntheticKind { bernoulli_per_example, point_mass, beta_loss };

/// Expand a value-grid string into one value per position:
///   "v1,v2,..."            explicit list
///   "<v>x<count>"          constant
///   "linear:<a>,<b>x<count>"  evenly spaced from a to b inclusive
std::vector<double> parse_value_grid(std::string_view text);

/// Simulation stand-in for a posterior and loss function with a known Gibbs
/// risk, used by the coverage lab and the CLI.
///
/// Spec strings:
///   bernoulli=<p1>,<p2>,...          per-example Bernoulli loss means
///   bernoulli=<p>x<m>                constant mean, m examples
///   bernoulli=linear:<a>,<b>x<m>     means evenly spaced from a to b
///   point-mass=<v1>,...  / <v>x<m>   single hypothesis, deterministic losses
///   beta=<alpha>,<beta>x<m>          loss ~ Beta(alpha,beta) per evaluation
struct SyntheticPosteriorSpec {
    SyntheticKind kind = SyntheticKind::point_mass;
    std::vector<double> params;  // per-example values, or {alpha, beta} for beta_loss
    std::uint64_t m = 1;

    static SyntheticPosteriorSpec parse(std::string_view text);
    void validate() const;

    /// Normalized spec string; also the basis of the data digest.
    [[nodiscard]] std::string canonical() const;

    /// The exact Gibbs risk this spec realizes (mean loss under the
    /// posterior and, for bernoulli/point-mass, the per-example means).
    [[nodiscard]] double gibbs_risk() const;
};

/// One object serving all three estimator-facing roles for a synthetic
/// spec. Hypothesis draw t carries the stream key derived from
/// (master seed, t); each loss evaluation keys its randomness on
/// (hypothesis stream, example index), so losses for distinct draws are
/// independent and every value is reproducible in isolation.
class SyntheticPosterior final : public PosteriorSampler,
                                 public LossOracle,
                                 public DatasetHandle {
public:
    SyntheticPosterior(SyntheticPosteriorSpec spec, std::uint64_t master_seed);

    [[nodiscard]] Hypothesis draw(std::uint64_t index) const override;
    [[nodiscard]] std::uint64_t master_seed() const noexcept override { return seed_; }

    [[nodiscard]] Probability loss(const Hypothesis& h, ExampleToken z) const override;

    [[nodiscard]] std::uint64_t size() const noexcept override { return spec_.m; }
    [[nodiscard]] ExampleToken example(std::uint64_t j) const override;
    [[nodiscard]] std::uint64_t digest() const noexcept override { return digest_; }

    [[nodiscard]] const SyntheticPosteriorSpec& spec() const noexcept { return spec_; }

private:
    SyntheticPosteriorSpec spec_;
    std::uint64_t seed_;
    std::uint64_t digest_;
};

} // namespace riskcert
