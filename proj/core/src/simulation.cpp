#include "ncc/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <thread>

namespace ncc {

GaussianComponent GaussianComponent::isotropic(Vector mean) {
    const auto p = mean.size();
    return {std::move(mean), Eigen::MatrixXd::Identity(p, p)};
}

void MixtureSpec::validate() const {
    if (components.empty()) throw Error("mixture needs at least one component");
    if (weights.size() != components.size()) throw Error("mixture weight count mismatch");
    double sum = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0)) throw Error("mixture weights must be nonnegative");
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-12) throw Error("mixture weights must sum to 1");
    for (const auto& c : components) {
        if (static_cast<std::size_t>(c.mean.size()) != dim() ||
            static_cast<std::size_t>(c.covariance.rows()) != dim() ||
            static_cast<std::size_t>(c.covariance.cols()) != dim())
            throw Error("mixture components differ in dimension");
    }
}

namespace {

Eigen::MatrixXd cholesky_factor(const GaussianComponent& g) {
    const auto p = g.mean.size();
    if (p == 0 || g.covariance.rows() != p || g.covariance.cols() != p)
        throw Error("covariance shape does not match mean");
    if (!g.covariance.isApprox(g.covariance.transpose(), 1e-12))
        throw Error("covariance is not symmetric");
    Eigen::LLT<Eigen::MatrixXd> llt(g.covariance);
    if (llt.info() != Eigen::Success) throw Error("covariance is not positive-definite");
    return llt.matrixL();
}

void draw_row(const Vector& mean, const Eigen::MatrixXd& chol, RandomStream& rng, Vector& z,
              Eigen::Ref<Eigen::RowVectorXd> out) {
    for (Eigen::Index j = 0; j < z.size(); ++j) z(j) = rng.normal();
    out = (mean + chol.triangularView<Eigen::Lower>() * z).transpose();
}

}  // namespace

Matrix sample_gaussian(const GaussianComponent& g, std::size_t count, RandomStream& rng) {
    const Eigen::MatrixXd chol = cholesky_factor(g);
    const auto p = g.mean.size();
    Matrix out(static_cast<Eigen::Index>(count), p);
    Vector z(p);
    Eigen::RowVectorXd row(p);
    for (Eigen::Index i = 0; i < out.rows(); ++i) {
        draw_row(g.mean, chol, rng, z, row);
        out.row(i) = row;
    }
    return out;
}

Matrix sample_mixture(const MixtureSpec& spec, std::size_t count, RandomStream& rng) {
    spec.validate();
    std::vector<Eigen::MatrixXd> chols;
    for (const auto& c : spec.components) chols.push_back(cholesky_factor(c));

    const auto positive = std::count_if(spec.weights.begin(), spec.weights.end(),
                                        [](double w) { return w > 0.0; });
    const std::size_t only =
        static_cast<std::size_t>(std::find_if(spec.weights.begin(), spec.weights.end(),
                                              [](double w) { return w > 0.0; }) -
                                 spec.weights.begin());

    const auto p = static_cast<Eigen::Index>(spec.dim());
    Matrix out(static_cast<Eigen::Index>(count), p);
    Vector z(p);
    Eigen::RowVectorXd row(p);
    for (Eigen::Index i = 0; i < out.rows(); ++i) {
        std::size_t k = only;
        if (positive > 1) {
            const double u = rng.uniform();
            double acc = 0.0;
            k = spec.components.size() - 1;
            for (std::size_t c = 0; c < spec.weights.size(); ++c) {
                acc += spec.weights[c];
                if (u < acc && spec.weights[c] > 0.0) {
                    k = c;
                    break;
                }
            }
            while (spec.weights[k] == 0.0) --k;
        }
        draw_row(spec.components[k].mean, chols[k], rng, z, row);
        out.row(i) = row;
    }
    return out;
}

const char* experiment_name(ExperimentId id) noexcept {
    switch (id) {
    case ExperimentId::Exp1:
        return "EXP1";
    case ExperimentId::Exp2:
        return "EXP2";
    case ExperimentId::Exp3:
        return "EXP3";
    }
    return "?";
}

ExperimentId parse_experiment(std::string_view name) {
    for (auto id : {ExperimentId::Exp1, ExperimentId::Exp2, ExperimentId::Exp3})
        if (name == experiment_name(id)) return id;
    throw Error("unknown experiment '" + std::string(name) + "'");
}

std::pair<MixtureSpec, MixtureSpec> class_distributions(ExperimentId id, std::size_t p, double c,
                                                        std::pair<double, double> weights) {
    if (p == 0) throw Error("dimension must be >= 1");
    const auto ones = Vector::Ones(static_cast<Eigen::Index>(p));
    auto single = [](Vector mean) {
        return MixtureSpec{{GaussianComponent::isotropic(std::move(mean))}, {1.0}};
    };
    auto pair = [&](Vector a, Vector b) {
        return MixtureSpec{{GaussianComponent::isotropic(std::move(a)),
                            GaussianComponent::isotropic(std::move(b))},
                           {weights.first, weights.second}};
    };
    switch (id) {
    case ExperimentId::Exp1:
        return {single(0.0 * ones), single(c * ones)};
    case ExperimentId::Exp2:
        return {pair(0.0 * ones, 2.0 * c * ones), single(c * ones)};
    case ExperimentId::Exp3:
        return {pair(0.0 * ones, 2.0 * c * ones), pair(c * ones, 3.0 * c * ones)};
    }
    throw Error("unknown experiment");
}

void ExperimentConfig::validate() const {
    if (!(separation > 0.0)) throw Error("separation c must be positive");
    if (dims.empty()) throw Error("dims must be nonempty");
    for (auto p : dims)
        if (p == 0) throw Error("dims must be positive");
    if (train_sizes.empty()) throw Error("train_sizes must be nonempty");
    for (auto n : train_sizes)
        if (n == 0) throw Error("train_sizes must be positive");
    if (trials < 1) throw Error("trials must be >= 1");
    if (test_per_class < 1) throw Error("test_per_class must be >= 1");
    if (classifiers.empty() && !sign_calibration) throw Error("no classifiers requested");
    if (ncc.max_depth < 1) throw Error("max_depth must be >= 1");
    if (cv_folds < 2) throw Error("cv_folds must be >= 2");
}

Dataset make_test_set(const ExperimentConfig& cfg, std::size_t p) {
    auto [f1, f2] = class_distributions(cfg.experiment, p, cfg.separation);
    auto rng = derive_stream({cfg.base_seed, experiment_name(cfg.experiment), p, 0, 0, "test"});
    Matrix a = sample_mixture(f1, cfg.test_per_class, rng);
    Matrix b = sample_mixture(f2, cfg.test_per_class, rng);
    return Dataset::from_classes(a, b);
}

Dataset make_training_set(const ExperimentConfig& cfg, std::size_t p, std::size_t n,
                          std::size_t trial) {
    auto [f1, f2] = class_distributions(cfg.experiment, p, cfg.separation);
    auto rng =
        derive_stream({cfg.base_seed, experiment_name(cfg.experiment), p, n, trial, "train"});
    Matrix a = sample_mixture(f1, n, rng);
    Matrix b = sample_mixture(f2, n, rng);
    return Dataset::from_classes(a, b);
}

TrialResult run_trial(const ExperimentConfig& cfg, std::size_t p, std::size_t n,
                      std::size_t trial) {
    return run_trial(cfg, p, n, trial, make_test_set(cfg, p));
}

TrialResult run_trial(const ExperimentConfig& cfg, std::size_t p, std::size_t n,
                      std::size_t trial, const Dataset& test) {
    const Dataset train = make_training_set(cfg, p, n, trial);
    const FitOptions opts{cfg.ncc, cfg.ladder};

    TrialResult result;
    for (auto kind : cfg.classifiers) {
        ClassifierOutcome out{kind_name(kind), std::nullopt, {}, std::nullopt};
        try {
            out.error = error_rate(fit(kind, train, opts), test);
        } catch (const Error& e) {
            out.failure = e.what();
        }
        result.outcomes.push_back(std::move(out));
    }
    if (cfg.sign_calibration) {
        ClassifierOutcome out{kCalibratedNccName, std::nullopt, {}, std::nullopt};
        try {
            const auto cal = calibrate_sign(train, cfg.cv_folds, cfg.ncc);
            NccModel model = fit_ncc(train, cfg.ncc);
            model.flipped = cal.flipped;
            out.error = error_rate(model, test);
            out.flipped = cal.flipped;
        } catch (const Error& e) {
            out.failure = e.what();
        }
        result.outcomes.push_back(std::move(out));
    }
    return result;
}

namespace {

struct Cell {
    std::size_t p_index;
    std::size_t n_index;
    std::size_t trial;
};

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    std::vector<Dataset> tests;
    for (auto p : cfg.dims) tests.push_back(make_test_set(cfg, p));

    std::vector<Cell> cells;
    for (std::size_t pi = 0; pi < cfg.dims.size(); ++pi)
        for (std::size_t ni = 0; ni < cfg.train_sizes.size(); ++ni)
            for (std::size_t t = 0; t < cfg.trials; ++t) cells.push_back({pi, ni, t});

    std::vector<TrialResult> results(cells.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < cells.size(); i = next++) {
            const auto& c = cells[i];
            results[i] = run_trial(cfg, cfg.dims[c.p_index], cfg.train_sizes[c.n_index], c.trial,
                                   tests[c.p_index]);
        }
    };
    unsigned threads = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, cells.size()));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
    }

    ExperimentResult out;
    std::vector<std::string> names;
    for (auto k : cfg.classifiers) names.emplace_back(kind_name(k));
    if (cfg.sign_calibration) names.emplace_back(kCalibratedNccName);
    const std::string exp = experiment_name(cfg.experiment);

    // cells are laid out p-major, then n, then trial
    for (std::size_t ci = 0; ci < names.size(); ++ci) {
        for (std::size_t pi = 0; pi < cfg.dims.size(); ++pi) {
            for (std::size_t ni = 0; ni < cfg.train_sizes.size(); ++ni) {
                SummaryRow row;
                row.experiment = exp;
                row.classifier = names[ci];
                row.p = cfg.dims[pi];
                row.n = cfg.train_sizes[ni];
                std::size_t flips = 0;
                const std::size_t base = (pi * cfg.train_sizes.size() + ni) * cfg.trials;
                for (std::size_t t = 0; t < cfg.trials; ++t) {
                    const auto& o = results[base + t].outcomes[ci];
                    if (o.error) {
                        row.trial_errors.push_back(*o.error);
                        if (o.flipped.value_or(false)) ++flips;
                    } else {
                        ++row.failures;
                    }
                }
                row.trials = row.trial_errors.size();
                if (row.trials > 0) {
                    row.mean_err = std::accumulate(row.trial_errors.begin(),
                                                   row.trial_errors.end(), 0.0) /
                                   static_cast<double>(row.trials);
                }
                if (row.trials > 1) {
                    double ss = 0.0;
                    for (double e : row.trial_errors) ss += (e - row.mean_err) * (e - row.mean_err);
                    row.std_err = std::sqrt(ss / static_cast<double>(row.trials - 1));
                } else {
                    row.std_err = 0.0;
                    row.std_defined = false;
                }
                if (names[ci] == kCalibratedNccName && row.trials > 0)
                    row.flip_rate = static_cast<double>(flips) / static_cast<double>(row.trials);

                const std::string where = exp + " " + names[ci] + " p=" + std::to_string(row.p) +
                                          " n=" + std::to_string(row.n);
                if (row.failures > 0)
                    out.diagnostics.push_back(where + ": " + std::to_string(row.failures) +
                                              " trial(s) failed to fit");
                if (!row.std_defined)
                    out.diagnostics.push_back(where + ": std_err undefined with " +
                                              std::to_string(row.trials) +
                                              " trial(s), reported as 0");
                out.rows.push_back(std::move(row));
            }
        }
    }
    return out;
}

double bayes_error_exp1(std::size_t p, double c) {
    return 0.5 * std::erfc(c * std::sqrt(static_cast<double>(p)) / (2.0 * std::sqrt(2.0)));
}

}  // namespace ncc
