#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "riskcert/estimators.hpp"

namespace riskcert {

/// Pre-evaluated losses loaded from disk: row t holds the losses of
/// posterior draw t on all m examples, in draw-index order. Serves as both
/// the loss oracle (cell lookup) and the dataset handle. Every cell is
/// validated into [0,1] eagerly at load time.
///
/// File format: first line `m=<int>`, then one comma-separated row of
/// decimals per hypothesis draw.
class LossMatrix final : public LossOracle, public DatasetHandle {
public:
    static LossMatrix load(const std::filesystem::path& path);

    [[nodiscard]] std::uint64_t rows() const noexcept { return rows_; }

    [[nodiscard]] Probability loss(const Hypothesis& h, ExampleToken z) const override;

    [[nodiscard]] std::uint64_t size() const noexcept override { return m_; }
    [[nodiscard]] ExampleToken example(std::uint64_t j) const override;
    [[nodiscard]] std::uint64_t digest() const noexcept override { return digest_; }

private:
    LossMatrix() = default;

    std::uint64_t m_ = 0;
    std::uint64_t rows_ = 0;
    std::uint64_t digest_ = 0;
    std::vector<double> cells_;  // row-major, rows_ x m_
};

/// Sampler over pre-evaluated draws: draw t is row t of the matrix. Rows
/// are consumed one-per-draw and never reused; the matrix must hold exactly
/// as many rows as the estimator will request (n for classic, n*m for
/// fresh/testset, T for subsampled).
class RowSampler final : public PosteriorSampler {
public:
    RowSampler(std::uint64_t seed_label, std::uint64_t rows)
        : seed_(seed_label), rows_(rows) {}

    [[nodiscard]] Hypothesis draw(std::uint64_t index) const override;
    [[nodiscard]] std::uint64_t master_seed() const noexcept override { return seed_; }

private:
    std::uint64_t seed_;
    std::uint64_t rows_;
};

/// Load a matrix and check its row count against what the chosen method
/// will consume. Throws ValidationError on any mismatch.
LossMatrix ingest_loss_matrix(const std::filesystem::path& path, Method method, std::uint64_t n,
                              std::uint64_t expected_m);

} // namespace riskcert
