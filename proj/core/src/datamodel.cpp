#include "ncc/datamodel.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <iterator>
#include <limits>
#include <ostream>
#include <sstream>
#include <string_view>

namespace ncc {

ParseError::ParseError(std::size_t row, const std::string& what)
    : Error("row " + std::to_string(row) + ": " + what), row_(row) {}

ClassId class_from_code(int code) {
    switch (code) {
    case 1:
        return ClassId::Omega1;
    case 2:
        return ClassId::Omega2;
    default:
        throw Error("unknown class label " + std::to_string(code));
    }
}

const char* class_name(ClassId c) noexcept {
    return c == ClassId::Omega1 ? "omega1" : "omega2";
}

Dataset::Dataset(std::size_t dim) : dim_(dim), features_(0, static_cast<Eigen::Index>(dim)) {
    if (dim == 0) throw Error("dataset dimension must be >= 1");
}

Dataset::Dataset(Matrix features, std::vector<ClassId> labels)
    : dim_(static_cast<std::size_t>(features.cols())),
      features_(std::move(features)),
      labels_(std::move(labels)) {
    if (dim_ == 0) throw Error("dataset dimension must be >= 1");
    if (static_cast<std::size_t>(features_.rows()) != labels_.size())
        throw Error("feature rows and labels differ in length");
    if (!features_.allFinite()) throw Error("dataset contains non-finite features");
    for (ClassId c : labels_) ++counts_[static_cast<std::size_t>(c)];
}

Dataset Dataset::from_observations(std::span<const Observation> obs, std::size_t dim) {
    Matrix x(static_cast<Eigen::Index>(obs.size()), static_cast<Eigen::Index>(dim));
    std::vector<ClassId> labels;
    labels.reserve(obs.size());
    for (std::size_t i = 0; i < obs.size(); ++i) {
        if (obs[i].features.size() != dim)
            throw Error("observation " + std::to_string(i) + " has dimension " +
                        std::to_string(obs[i].features.size()) + ", expected " +
                        std::to_string(dim));
        for (std::size_t j = 0; j < dim; ++j)
            x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = obs[i].features[j];
        labels.push_back(obs[i].label);
    }
    return Dataset(std::move(x), std::move(labels));
}

Dataset Dataset::from_classes(const Matrix& omega1, const Matrix& omega2) {
    if (omega1.cols() != omega2.cols()) throw Error("class matrices differ in dimension");
    Matrix x(omega1.rows() + omega2.rows(), omega1.cols());
    x.topRows(omega1.rows()) = omega1;
    x.bottomRows(omega2.rows()) = omega2;
    std::vector<ClassId> labels(static_cast<std::size_t>(omega1.rows()), ClassId::Omega1);
    labels.resize(static_cast<std::size_t>(x.rows()), ClassId::Omega2);
    return Dataset(std::move(x), std::move(labels));
}

Observation Dataset::observation(std::size_t i) const {
    auto r = row(i);
    return Observation{{r.begin(), r.end()}, labels_.at(i)};
}

Dataset Dataset::subset(std::span<const std::size_t> rows) const {
    Matrix x(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(dim_));
    std::vector<ClassId> labels;
    labels.reserve(rows.size());
    for (std::size_t k = 0; k < rows.size(); ++k) {
        x.row(static_cast<Eigen::Index>(k)) = features_.row(static_cast<Eigen::Index>(rows[k]));
        labels.push_back(labels_.at(rows[k]));
    }
    return Dataset(std::move(x), std::move(labels));
}

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        auto pos = line.find(',', start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

bool parse_double(std::string_view s, double& out) {
    s = trim(s);
    if (s.empty()) return false;
    if (s.front() == '+') s.remove_prefix(1);
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size();
}

}  // namespace

Dataset parse_dataset(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw ParseError(1, "missing header row");
    auto header = split_fields(trim(line));
    if (header.size() < 2 || trim(header.back()) != "label")
        throw ParseError(1, "header must be f1,...,fp,label");
    const std::size_t dim = header.size() - 1;
    for (std::size_t j = 0; j < dim; ++j) {
        if (trim(header[j]) != "f" + std::to_string(j + 1))
            throw ParseError(1, "header column " + std::to_string(j + 1) + " must be f" +
                                    std::to_string(j + 1));
    }

    std::vector<double> values;
    std::vector<ClassId> labels;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        auto body = trim(line);
        if (body.empty()) continue;
        auto fields = split_fields(body);
        if (fields.size() != dim + 1)
            throw ParseError(row, "expected " + std::to_string(dim + 1) + " fields, found " +
                                      std::to_string(fields.size()));
        for (std::size_t j = 0; j < dim; ++j) {
            double v = 0.0;
            if (!parse_double(fields[j], v))
                throw ParseError(row, "non-numeric feature in column f" + std::to_string(j + 1));
            if (!std::isfinite(v))
                throw ParseError(row, "non-finite feature in column f" + std::to_string(j + 1));
            values.push_back(v);
        }
        auto code = trim(fields[dim]);
        if (code == "1")
            labels.push_back(ClassId::Omega1);
        else if (code == "2")
            labels.push_back(ClassId::Omega2);
        else
            throw ParseError(row, "unknown label value '" + std::string(code) + "'");
    }

    Matrix x(static_cast<Eigen::Index>(labels.size()), static_cast<Eigen::Index>(dim));
    std::copy(values.begin(), values.end(), x.data());
    return Dataset(std::move(x), std::move(labels));
}

Dataset load_dataset(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open dataset " + path.string());
    return parse_dataset(in);
}

Matrix parse_features(std::istream& in) {
    std::string header;
    if (!std::getline(in, header)) throw ParseError(1, "missing header row");
    auto trimmed = std::string(trim(header));
    if (trimmed.size() >= 6 && trimmed.substr(trimmed.size() - 6) == ",label") {
        std::istringstream rest(trimmed + "\n" + std::string(std::istreambuf_iterator<char>(in), {}));
        return parse_dataset(rest).features();
    }
    // Unlabeled: append a dummy label so the dataset parser does the checking.
    std::ostringstream buf;
    buf << trimmed << ",label\n";
    std::string line;
    while (std::getline(in, line)) {
        auto body = trim(line);
        buf << body;
        if (!body.empty()) buf << ",1";
        buf << '\n';
    }
    std::istringstream rest(buf.str());
    return parse_dataset(rest).features();
}

Matrix load_features(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open data file " + path.string());
    return parse_features(in);
}

void write_dataset(std::ostream& out, const Dataset& d) {
    for (std::size_t j = 0; j < d.dim(); ++j) out << 'f' << (j + 1) << ',';
    out << "label\n";
    std::ostringstream cell;
    cell << std::setprecision(std::numeric_limits<double>::max_digits10);
    for (std::size_t i = 0; i < d.size(); ++i) {
        for (double v : d.row(i)) {
            cell.str({});
            cell << v;
            out << cell.str() << ',';
        }
        out << label_code(d.label(i)) << '\n';
    }
}

void save_dataset(const std::filesystem::path& path, const Dataset& d) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write dataset " + path.string());
    write_dataset(out, d);
    if (!out) throw Error("write failed for " + path.string());
}

std::pair<Matrix, Matrix> split_by_class(const Dataset& d) {
    const auto dim = static_cast<Eigen::Index>(d.dim());
    Matrix a(static_cast<Eigen::Index>(d.count(ClassId::Omega1)), dim);
    Matrix b(static_cast<Eigen::Index>(d.count(ClassId::Omega2)), dim);
    Eigen::Index ia = 0, ib = 0;
    for (std::size_t i = 0; i < d.size(); ++i) {
        auto src = d.features().row(static_cast<Eigen::Index>(i));
        if (d.label(i) == ClassId::Omega1)
            a.row(ia++) = src;
        else
            b.row(ib++) = src;
    }
    return {std::move(a), std::move(b)};
}

namespace {

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view s) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace

std::uint64_t SeedSpec::key() const noexcept {
    std::uint64_t h = splitmix64(base_seed);
    for (std::uint64_t part : {fnv1a(experiment), p, n, trial, fnv1a(purpose)})
        h = splitmix64(h ^ splitmix64(part));
    return h;
}

RandomStream derive_stream(const SeedSpec& seed) { return RandomStream(seed.key()); }

}  // namespace ncc
