#include "riskcert/loss_matrix.hpp"

#include <charconv>
#include <fstream>
#include <string>

#include "riskcert/digest.hpp"
#include "riskcert/rng.hpp"

namespace riskcert {

LossMatrix LossMatrix::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open loss matrix file: " + path.string());
    }

    std::string line;
    if (!std::getline(in, line)) {
        throw ValidationError("loss matrix file is empty: " + path.string());
    }
    if (line.rfind("m=", 0) != 0) {
        throw ValidationError("loss matrix header must be m=<int>, got '" + line + "'");
    }
    LossMatrix matrix;
    {
        const std::string count = line.substr(2);
        const auto [ptr, ec] =
            std::from_chars(count.data(), count.data() + count.size(), matrix.m_);
        if (ec != std::errc{} || ptr != count.data() + count.size() || matrix.m_ == 0) {
            throw ValidationError("loss matrix header has invalid m: '" + line + "'");
        }
    }

    std::uint64_t digest = kFnvOffset;
    digest = fnv1a64("m=" + std::to_string(matrix.m_), digest);

    std::uint64_t row = 0;
    while (std::getline(in, line)) {
        if (line.empty() && in.eof()) {
            break;  // trailing newline
        }
        ++row;
        std::uint64_t col = 0;
        const char* cursor = line.data();
        const char* end = line.data() + line.size();
        while (true) {
            ++col;
            double v = 0.0;
            const auto [ptr, ec] = std::from_chars(cursor, end, v);
            if (ec != std::errc{}) {
                throw ValidationError("loss matrix row " + std::to_string(row) + ", column " +
                                      std::to_string(col) + ": not a number");
            }
            if (!(v >= 0.0 && v <= 1.0)) {
                throw ValidationError("loss matrix row " + std::to_string(row) + ", column " +
                                      std::to_string(col) + ": value " + std::to_string(v) +
                                      " outside [0,1]");
            }
            matrix.cells_.push_back(v);
            digest = fnv1a64(std::string_view(cursor, static_cast<std::size_t>(ptr - cursor)),
                             digest);
            cursor = ptr;
            if (cursor == end) {
                break;
            }
            if (*cursor != ',') {
                throw ValidationError("loss matrix row " + std::to_string(row) + ", column " +
                                      std::to_string(col) + ": expected ',' separator");
            }
            ++cursor;
        }
        if (col != matrix.m_) {
            throw ValidationError("loss matrix row " + std::to_string(row) + " has " +
                                  std::to_string(col) + " columns, expected " +
                                  std::to_string(matrix.m_));
        }
    }
    if (row == 0) {
        throw ValidationError("loss matrix has no data rows: " + path.string());
    }
    matrix.rows_ = row;
    matrix.digest_ = digest;
    return matrix;
}

Probability LossMatrix::loss(const Hypothesis& h, ExampleToken z) const {
    if (h.index >= rows_) {
        throw ValidationError("hypothesis draw " + std::to_string(h.index) +
                              " beyond matrix rows (" + std::to_string(rows_) +
                              "): rows are never reused");
    }
    if (z >= m_) {
        throw ValidationError("example index " + std::to_string(z) + " outside matrix width " +
                              std::to_string(m_));
    }
    return Probability(cells_[h.index * m_ + z]);
}

ExampleToken LossMatrix::example(std::uint64_t j) const {
    if (j >= m_) {
        throw ValidationError("example index " + std::to_string(j) + " outside matrix width " +
                              std::to_string(m_));
    }
    return j;
}

Hypothesis RowSampler::draw(std::uint64_t index) const {
    if (index >= rows_) {
        throw ValidationError("requested draw " + std::to_string(index) +
                              " exceeds available rows (" + std::to_string(rows_) + ")");
    }
    return Hypothesis{index, derive_stream(seed_, index)};
}

LossMatrix ingest_loss_matrix(const std::filesystem::path& path, Method method, std::uint64_t n,
                              std::uint64_t expected_m) {
    LossMatrix matrix = LossMatrix::load(path);
    if (expected_m != 0 && expected_m != matrix.size()) {
        throw ValidationError("requested m=" + std::to_string(expected_m) +
                              " but matrix declares m=" + std::to_string(matrix.size()));
    }
    std::uint64_t needed = n;
    if (method == Method::fresh || method == Method::testset) {
        needed = n * matrix.size();
    }
    if (matrix.rows() != needed) {
        throw ValidationError("matrix has " + std::to_string(matrix.rows()) + " rows but " +
                              std::string(method_name(method)) + " needs exactly " +
                              std::to_string(needed) +
                              " (one hypothesis per draw, rows never reused)");
    }
    return matrix;
}

} // namespace riskcert
