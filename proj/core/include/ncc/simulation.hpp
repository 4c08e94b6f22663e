#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ncc/classifiers.hpp"
#include "ncc/datamodel.hpp"

namespace ncc {

struct GaussianComponent {
    Vector mean;
    Eigen::MatrixXd covariance;

    static GaussianComponent isotropic(Vector mean);
};

struct MixtureSpec {
    std::vector<GaussianComponent> components;
    std::vector<double> weights;

    std::size_t dim() const noexcept {
        return components.empty() ? 0 : static_cast<std::size_t>(components.front().mean.size());
    }
    /// Throws Error unless weights are nonnegative, sum to 1 and all
    /// components share one dimension.
    void validate() const;
};

/// mean + L z per row, L the Cholesky factor. Throws Error if the covariance
/// is not symmetric positive-definite.
Matrix sample_gaussian(const GaussianComponent& g, std::size_t count, RandomStream& rng);

/// Each row picks a component by weight, then draws from it. When only one
/// component has positive weight no selection draw is consumed, so the output
/// matches sample_gaussian on the same stream.
Matrix sample_mixture(const MixtureSpec& spec, std::size_t count, RandomStream& rng);

enum class ExperimentId { Exp1, Exp2, Exp3 };

const char* experiment_name(ExperimentId id) noexcept;
ExperimentId parse_experiment(std::string_view name);

/// Class-conditional distributions (F1, F2) for an experiment. `weights` are
/// the two component weights used by every mixture.
///   EXP1: F1 = N(0, I), F2 = N(c1, I)
///   EXP2: F1 = w0 N(0, I) + w1 N(2c1, I), F2 = N(c1, I)
///   EXP3: F1 = w0 N(0, I) + w1 N(2c1, I), F2 = w0 N(c1, I) + w1 N(3c1, I)
std::pair<MixtureSpec, MixtureSpec> class_distributions(ExperimentId id, std::size_t p, double c,
                                                        std::pair<double, double> weights = {0.5,
                                                                                             0.5});

struct ExperimentConfig {
    ExperimentId experiment = ExperimentId::Exp1;
    double separation = 1.0;
    std::vector<std::size_t> dims{2, 4, 8, 16};
    std::vector<std::size_t> train_sizes{10, 20, 40, 80, 160, 200};
    std::size_t trials = 1000;
    std::size_t test_per_class = 1000;
    std::vector<ClassifierKind> classifiers{ClassifierKind::Ncc, ClassifierKind::Ncda,
                                            ClassifierKind::Lda, ClassifierKind::Qda};
    NccConfig ncc;
    RegularizationLadder ladder;
    std::uint64_t base_seed = 20090101;
    /// Adds an "NCC_CV" series: NCC with its sign chosen per trial by
    /// stratified cross-validation.
    bool sign_calibration = false;
    int cv_folds = 5;
    /// Worker threads; 0 means hardware concurrency. Results do not depend on it.
    unsigned threads = 0;

    void validate() const;
};

/// Name of the sign-calibrated NCC series in summaries.
inline constexpr const char* kCalibratedNccName = "NCC_CV";

/// Fixed evaluation set for (experiment, p): `test_per_class` rows from each class.
Dataset make_test_set(const ExperimentConfig& cfg, std::size_t p);
/// Training set for one trial: n rows from each class.
Dataset make_training_set(const ExperimentConfig& cfg, std::size_t p, std::size_t n,
                          std::size_t trial);

struct ClassifierOutcome {
    std::string classifier;
    std::optional<double> error;  ///< empty when fitting failed
    std::string failure;
    std::optional<bool> flipped;  ///< only for the calibrated series
};

struct TrialResult {
    std::vector<ClassifierOutcome> outcomes;
};

TrialResult run_trial(const ExperimentConfig& cfg, std::size_t p, std::size_t n,
                      std::size_t trial);
/// Same, reusing a test set already produced by make_test_set.
TrialResult run_trial(const ExperimentConfig& cfg, std::size_t p, std::size_t n,
                      std::size_t trial, const Dataset& test);

struct SummaryRow {
    std::string experiment;
    std::string classifier;
    std::size_t p = 0;
    std::size_t n = 0;
    double mean_err = 0.0;
    double std_err = 0.0;
    std::size_t trials = 0;  ///< trials that produced an error value

    std::size_t failures = 0;
    bool std_defined = true;  ///< false when fewer than 2 trials contributed
    std::optional<double> flip_rate;
    std::vector<double> trial_errors;
};

struct ExperimentResult {
    std::vector<SummaryRow> rows;
    std::vector<std::string> diagnostics;
};

/// Rows are ordered by classifier (config order, then NCC_CV), p, n.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// Phi(-c sqrt(p) / 2): Bayes error of N(0, I) vs N(c1, I) with equal priors.
double bayes_error_exp1(std::size_t p, double c);

}  // namespace ncc
