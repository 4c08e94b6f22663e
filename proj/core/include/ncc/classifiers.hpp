#pragma once

#include <array>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <variant>

#include "ncc/datamodel.hpp"
#include "ncc/geometry.hpp"

namespace ncc {

/// Diagonal loading schedule for covariance factorizations: try
/// lambda = initial_scale * trace / p, then multiply by `factor`, at most
/// `max_steps` attempts in total.
struct RegularizationLadder {
    double initial_scale = 1e-6;
    double factor = 10.0;
    int max_steps = 6;
};

/// Settings shared by the cavity-based rules.
struct NccConfig {
    SurfaceMode mode = SurfaceMode::AdjacentPairHull;
    ClassId outer_owner = ClassId::Omega1;
    int max_depth = 8;
};

/// Raised when the regularization ladder cannot produce a positive-definite
/// covariance, or when a class is too small to fit.
class FitError : public Error {
public:
    using Error::Error;
};

struct NccModel {
    CavityStack stack;
    bool flipped = false;

    /// The outer owner inside an odd shell, the other class elsewhere
    /// (including everywhere outside S1), inverted when `flipped`.
    ClassId predict(std::span<const double> x) const;
    std::size_t dim() const noexcept { return stack.dim(); }
};

struct LdaModel {
    Vector mean1;
    Vector mean2;
    Eigen::MatrixXd pooled_precision;
    double log_prior_ratio = 0.0;
    double lambda = 0.0;  ///< diagonal loading that was applied

    /// (x - (m1+m2)/2)' P (m1 - m2) + log(n1/n2); positive favours Omega1.
    double score(std::span<const double> x) const;
    ClassId predict(std::span<const double> x) const {
        return score(x) >= 0.0 ? ClassId::Omega1 : ClassId::Omega2;
    }
    std::size_t dim() const noexcept { return static_cast<std::size_t>(mean1.size()); }
};

struct QdaClass {
    Vector mean;
    Eigen::MatrixXd precision;
    double log_det = 0.0;  ///< log-determinant of the regularized covariance
    double log_prior = 0.0;
    double lambda = 0.0;
};

struct QdaModel {
    std::array<QdaClass, 2> classes;

    /// -1/2 log|S_k| - 1/2 (x-m_k)' S_k^-1 (x-m_k) + log pi_k
    double discriminant(ClassId c, std::span<const double> x) const;
    ClassId predict(std::span<const double> x) const {
        return discriminant(ClassId::Omega1, x) >= discriminant(ClassId::Omega2, x)
                   ? ClassId::Omega1
                   : ClassId::Omega2;
    }
    std::size_t dim() const noexcept { return static_cast<std::size_t>(classes[0].mean.size()); }
};

/// NCC inside the outer surface, LDA outside it.
struct NcdaModel {
    NccModel ncc;
    LdaModel lda;

    ClassId predict(std::span<const double> x) const {
        return ncc.stack.surfaces.front().contains(x) ? ncc.predict(x) : lda.predict(x);
    }
    std::size_t dim() const noexcept { return ncc.dim(); }
};

using Model = std::variant<NccModel, LdaModel, QdaModel, NcdaModel>;

enum class ClassifierKind { Ncc, Ncda, Lda, Qda };

/// "NCC", "NCDA", "LDA", "QDA".
const char* kind_name(ClassifierKind kind) noexcept;
ClassifierKind parse_kind(std::string_view name);
ClassifierKind kind_of(const Model& m) noexcept;

ClassId predict(const Model& m, std::span<const double> x);
std::size_t model_dim(const Model& m) noexcept;

NccModel fit_ncc(const Dataset& d, const NccConfig& cfg = {});
LdaModel fit_lda(const Dataset& d, const RegularizationLadder& ladder = {});
QdaModel fit_qda(const Dataset& d, const RegularizationLadder& ladder = {});
NcdaModel fit_ncda(const Dataset& d, const NccConfig& cfg = {},
                   const RegularizationLadder& ladder = {});

struct FitOptions {
    NccConfig ncc;
    RegularizationLadder ladder;
};

Model fit(ClassifierKind kind, const Dataset& d, const FitOptions& opts = {});

/// Fraction of rows of `d` that `m` misclassifies. Zero for an empty set.
double error_rate(const Model& m, const Dataset& d);

struct SignCalibration {
    bool flipped = false;
    double cv_error = 0.0;
};

/// Stratified k-fold estimate of the NCC error. Fold membership is assigned
/// round-robin within each class, in row order. `flipped` is set iff the
/// estimate exceeds 0.5.
SignCalibration calibrate_sign(const Dataset& d, int folds = 5, const NccConfig& cfg = {});

// ---------------------------------------------------------------------------
// Persistence: versioned JSON with a `kind` discriminator.

inline constexpr int kModelFormatVersion = 1;

std::string model_to_json(const Model& m);
/// Throws Error on malformed input or version mismatch.
Model model_from_json(std::string_view text);
void save_model(const Model& m, const std::filesystem::path& path);
Model load_model(const std::filesystem::path& path);

}  // namespace ncc
