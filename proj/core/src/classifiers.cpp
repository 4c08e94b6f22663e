#include "ncc/classifiers.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace ncc {

namespace {

using ConstMap = Eigen::Map<const Vector>;

ConstMap as_vector(std::span<const double> x, std::size_t expected) {
    if (x.size() != expected)
        throw Error("dimension mismatch: model has p=" + std::to_string(expected) +
                    ", point has " + std::to_string(x.size()));
    return ConstMap(x.data(), static_cast<Eigen::Index>(x.size()));
}

struct Factorized {
    Eigen::MatrixXd precision;
    double log_det = 0.0;
    double lambda = 0.0;
};

// Adds lambda*I to `cov`, escalating lambda until Cholesky succeeds.
Factorized factor_regularized(const Eigen::MatrixXd& cov, const RegularizationLadder& ladder) {
    const auto p = cov.rows();
    double base = cov.trace() / static_cast<double>(p);
    // A zero-variance sample has no scale of its own; load on unit scale.
    if (!(base > 0.0) || !std::isfinite(base)) base = 1.0;
    double lambda = ladder.initial_scale * base;
    const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(p, p);
    for (int step = 0; step < ladder.max_steps; ++step, lambda *= ladder.factor) {
        Eigen::LLT<Eigen::MatrixXd> llt(cov + lambda * eye);
        if (llt.info() != Eigen::Success) continue;
        const Vector diag = llt.matrixLLT().diagonal();
        if (!diag.allFinite() || (diag.array() <= 0.0).any()) continue;
        Factorized f;
        f.precision = llt.solve(eye);
        f.precision = 0.5 * (f.precision + f.precision.transpose()).eval();
        f.log_det = 2.0 * diag.array().log().sum();
        f.lambda = lambda;
        return f;
    }
    throw FitError("covariance factorization failed after " + std::to_string(ladder.max_steps) +
                   " regularization steps");
}

Vector column_mean(const Matrix& x) { return x.colwise().mean().transpose(); }

Eigen::MatrixXd scatter(const Matrix& x, const Vector& mean) {
    const Eigen::MatrixXd centered = x.rowwise() - mean.transpose();
    return centered.transpose() * centered;
}

}  // namespace

ClassId NccModel::predict(std::span<const double> x) const {
    const bool in_owner_region = region_membership(stack, x);
    const ClassId raw = in_owner_region ? stack.outer_owner : other(stack.outer_owner);
    return flipped ? other(raw) : raw;
}

double LdaModel::score(std::span<const double> x) const {
    const auto v = as_vector(x, dim());
    const Vector mid = 0.5 * (mean1 + mean2);
    return (v - mid).dot(pooled_precision * (mean1 - mean2)) + log_prior_ratio;
}

double QdaModel::discriminant(ClassId c, std::span<const double> x) const {
    const auto& k = classes[static_cast<std::size_t>(c)];
    const auto v = as_vector(x, dim());
    const Vector diff = v - k.mean;
    return -0.5 * k.log_det - 0.5 * diff.dot(k.precision * diff) + k.log_prior;
}

const char* kind_name(ClassifierKind kind) noexcept {
    switch (kind) {
    case ClassifierKind::Ncc:
        return "NCC";
    case ClassifierKind::Ncda:
        return "NCDA";
    case ClassifierKind::Lda:
        return "LDA";
    case ClassifierKind::Qda:
        return "QDA";
    }
    return "?";
}

ClassifierKind parse_kind(std::string_view name) {
    for (auto k : {ClassifierKind::Ncc, ClassifierKind::Ncda, ClassifierKind::Lda,
                   ClassifierKind::Qda}) {
        if (name == kind_name(k)) return k;
    }
    throw Error("unknown classifier '" + std::string(name) + "'");
}

ClassifierKind kind_of(const Model& m) noexcept {
    struct Visitor {
        ClassifierKind operator()(const NccModel&) const { return ClassifierKind::Ncc; }
        ClassifierKind operator()(const NcdaModel&) const { return ClassifierKind::Ncda; }
        ClassifierKind operator()(const LdaModel&) const { return ClassifierKind::Lda; }
        ClassifierKind operator()(const QdaModel&) const { return ClassifierKind::Qda; }
    };
    return std::visit(Visitor{}, m);
}

ClassId predict(const Model& m, std::span<const double> x) {
    return std::visit([&](const auto& model) { return model.predict(x); }, m);
}

std::size_t model_dim(const Model& m) noexcept {
    return std::visit([](const auto& model) { return model.dim(); }, m);
}

NccModel fit_ncc(const Dataset& d, const NccConfig& cfg) {
    return NccModel{build_cavities(d, cfg.mode, cfg.outer_owner, cfg.max_depth), false};
}

LdaModel fit_lda(const Dataset& d, const RegularizationLadder& ladder) {
    const auto n1 = d.count(ClassId::Omega1), n2 = d.count(ClassId::Omega2);
    if (n1 == 0 || n2 == 0) throw FitError("LDA needs observations from both classes");
    if (n1 + n2 < 3) throw FitError("LDA needs at least 3 observations");
    auto [x1, x2] = split_by_class(d);

    LdaModel m;
    m.mean1 = column_mean(x1);
    m.mean2 = column_mean(x2);
    const Eigen::MatrixXd pooled =
        (scatter(x1, m.mean1) + scatter(x2, m.mean2)) / static_cast<double>(n1 + n2 - 2);
    auto f = factor_regularized(pooled, ladder);
    m.pooled_precision = std::move(f.precision);
    m.lambda = f.lambda;
    m.log_prior_ratio = std::log(static_cast<double>(n1) / static_cast<double>(n2));
    return m;
}

QdaModel fit_qda(const Dataset& d, const RegularizationLadder& ladder) {
    const auto n1 = d.count(ClassId::Omega1), n2 = d.count(ClassId::Omega2);
    if (n1 < 2 || n2 < 2) throw FitError("QDA needs at least 2 observations per class");
    auto [x1, x2] = split_by_class(d);
    const double n = static_cast<double>(n1 + n2);

    QdaModel m;
    auto fill = [&](QdaClass& k, const Matrix& x) {
        k.mean = column_mean(x);
        const auto nk = static_cast<double>(x.rows());
        auto f = factor_regularized(scatter(x, k.mean) / (nk - 1.0), ladder);
        k.precision = std::move(f.precision);
        k.log_det = f.log_det;
        k.lambda = f.lambda;
        k.log_prior = std::log(nk / n);
    };
    fill(m.classes[0], x1);
    fill(m.classes[1], x2);
    return m;
}

NcdaModel fit_ncda(const Dataset& d, const NccConfig& cfg, const RegularizationLadder& ladder) {
    return NcdaModel{fit_ncc(d, cfg), fit_lda(d, ladder)};
}

Model fit(ClassifierKind kind, const Dataset& d, const FitOptions& opts) {
    switch (kind) {
    case ClassifierKind::Ncc:
        return fit_ncc(d, opts.ncc);
    case ClassifierKind::Ncda:
        return fit_ncda(d, opts.ncc, opts.ladder);
    case ClassifierKind::Lda:
        return fit_lda(d, opts.ladder);
    case ClassifierKind::Qda:
        return fit_qda(d, opts.ladder);
    }
    throw Error("unknown classifier kind");
}

double error_rate(const Model& m, const Dataset& d) {
    if (d.empty()) return 0.0;
    std::size_t wrong = 0;
    for (std::size_t i = 0; i < d.size(); ++i)
        if (predict(m, d.row(i)) != d.label(i)) ++wrong;
    return static_cast<double>(wrong) / static_cast<double>(d.size());
}

SignCalibration calibrate_sign(const Dataset& d, int folds, const NccConfig& cfg) {
    if (folds < 2) throw Error("calibrate_sign needs at least 2 folds");
    const auto k = static_cast<std::size_t>(folds);
    for (auto c : {ClassId::Omega1, ClassId::Omega2}) {
        if (d.count(c) < k)
            throw Error(std::string("class ") + class_name(c) + " has fewer than " +
                        std::to_string(folds) + " observations for stratified folding");
    }

    std::vector<std::size_t> fold_of(d.size());
    std::size_t seen[2] = {0, 0};
    for (std::size_t i = 0; i < d.size(); ++i)
        fold_of[i] = seen[static_cast<std::size_t>(d.label(i))]++ % k;

    std::size_t wrong = 0;
    std::vector<std::size_t> train, test;
    for (std::size_t f = 0; f < k; ++f) {
        train.clear();
        test.clear();
        for (std::size_t i = 0; i < d.size(); ++i) (fold_of[i] == f ? test : train).push_back(i);
        const NccModel model = fit_ncc(d.subset(train), cfg);
        for (std::size_t i : test)
            if (model.predict(d.row(i)) != d.label(i)) ++wrong;
    }
    SignCalibration out;
    out.cv_error = static_cast<double>(wrong) / static_cast<double>(d.size());
    out.flipped = out.cv_error > 0.5;
    return out;
}

}  // namespace ncc
