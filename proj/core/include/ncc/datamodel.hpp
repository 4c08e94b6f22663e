#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace ncc {

/// Row-per-observation feature matrix.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed dataset input. `row()` is the 1-based line number (header = 1).
class ParseError : public Error {
public:
    ParseError(std::size_t row, const std::string& what);
    std::size_t row() const noexcept { return row_; }

private:
    std::size_t row_;
};

enum class ClassId : std::uint8_t { Omega1 = 0, Omega2 = 1 };

constexpr ClassId other(ClassId c) noexcept {
    return c == ClassId::Omega1 ? ClassId::Omega2 : ClassId::Omega1;
}

/// On-disk encoding: 1 for Omega1, 2 for Omega2.
constexpr int label_code(ClassId c) noexcept { return c == ClassId::Omega1 ? 1 : 2; }
ClassId class_from_code(int code);
const char* class_name(ClassId c) noexcept;

struct Observation {
    std::vector<double> features;
    ClassId label = ClassId::Omega1;
};

/// Immutable labeled sample. All rows share one dimension and are finite.
class Dataset {
public:
    Dataset() = default;
    /// Takes ownership of `features` (n x dim). Throws Error on label count
    /// mismatch, dim < 1 or any non-finite entry.
    Dataset(Matrix features, std::vector<ClassId> labels);
    /// Empty dataset of the given dimension.
    explicit Dataset(std::size_t dim);

    static Dataset from_observations(std::span<const Observation> obs, std::size_t dim);
    /// Stacks class-1 rows then class-2 rows.
    static Dataset from_classes(const Matrix& omega1, const Matrix& omega2);

    std::size_t dim() const noexcept { return dim_; }
    std::size_t size() const noexcept { return labels_.size(); }
    bool empty() const noexcept { return labels_.empty(); }
    std::size_t count(ClassId c) const noexcept {
        return counts_[static_cast<std::size_t>(c)];
    }

    const Matrix& features() const noexcept { return features_; }
    const std::vector<ClassId>& labels() const noexcept { return labels_; }
    ClassId label(std::size_t i) const { return labels_.at(i); }
    std::span<const double> row(std::size_t i) const {
        return {features_.data() + i * dim_, dim_};
    }
    Observation observation(std::size_t i) const;

    /// Rows whose index is listed, in the given order.
    Dataset subset(std::span<const std::size_t> rows) const;

private:
    std::size_t dim_ = 0;
    Matrix features_;
    std::vector<ClassId> labels_;
    std::size_t counts_[2] = {0, 0};
};

/// CSV with header `f1,...,fp,label` and labels in {1,2}.
Dataset parse_dataset(std::istream& in);
Dataset load_dataset(const std::filesystem::path& path);
/// Feature matrix from a CSV whose header is `f1,...,fp` with or without a
/// trailing `label` column; labels, when present, are validated and dropped.
Matrix parse_features(std::istream& in);
Matrix load_features(const std::filesystem::path& path);
/// Features are written with 17 significant digits so load(save(d)) is exact.
void write_dataset(std::ostream& out, const Dataset& d);
void save_dataset(const std::filesystem::path& path, const Dataset& d);

/// Row partition preserving within-class order.
std::pair<Matrix, Matrix> split_by_class(const Dataset& d);

// ---------------------------------------------------------------------------
// Seeded random streams

/// Identifies one independent random stream within a simulation run.
struct SeedSpec {
    std::uint64_t base_seed = 0;
    std::string experiment;
    std::uint64_t p = 0;
    std::uint64_t n = 0;
    std::uint64_t trial = 0;
    std::string purpose;

    /// Hash of all fields; equal specs give equal keys.
    std::uint64_t key() const noexcept;
};

/// Single-owner random stream. Not thread-safe; give each worker its own.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t key) : engine_(key) {}

    double normal() { return normal_(engine_); }
    /// Uniform on [0, 1).
    double uniform() { return uniform_(engine_); }
    std::uint64_t bits() { return engine_(); }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

RandomStream derive_stream(const SeedSpec& seed);

}  // namespace ncc
