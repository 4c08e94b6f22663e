#include <gtest/gtest.h>

#include <cstring>
#include <limits>
#include <random>
#include <sstream>

#include "ncc/datamodel.hpp"

namespace ncc {
namespace {

Dataset parse(const std::string& text) {
    std::istringstream in(text);
    return parse_dataset(in);
}

TEST(LoadDataset, ParsesThreeRows) {
    const Dataset d = parse("f1,f2,label\n0,0,1\n1,1,1\n2,2,2");
    EXPECT_EQ(d.dim(), 2u);
    EXPECT_EQ(d.size(), 3u);
    EXPECT_EQ(d.count(ClassId::Omega1), 2u);
    EXPECT_EQ(d.count(ClassId::Omega2), 1u);
    EXPECT_EQ(d.features()(2, 0), 2.0);
    EXPECT_EQ(d.label(2), ClassId::Omega2);
}

TEST(LoadDataset, HeaderOnlyIsEmpty) {
    const Dataset d = parse("f1,f2,label\n");
    EXPECT_EQ(d.dim(), 2u);
    EXPECT_EQ(d.size(), 0u);
}

TEST(LoadDataset, NonNumericFeatureReportsRow) {
    try {
        parse("f1,f2,label\n0,x,1\n");
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.row(), 2u);
        EXPECT_NE(std::string(e.what()).find("non-numeric"), std::string::npos);
    }
}

TEST(LoadDataset, RaggedRowReportsRow) {
    try {
        parse("f1,f2,label\n0,0,1\n1,1\n");
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.row(), 3u);
    }
}

TEST(LoadDataset, UnknownLabelReportsRow) {
    try {
        parse("f1,label\n0,1\n0,3\n");
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.row(), 3u);
    }
}

TEST(LoadDataset, RejectsNonFinite) {
    EXPECT_THROW(parse("f1,label\nnan,1\n"), ParseError);
    EXPECT_THROW(parse("f1,label\ninf,2\n"), ParseError);
}

TEST(LoadDataset, RejectsBadHeader) {
    EXPECT_THROW(parse("a,b,label\n"), ParseError);
    EXPECT_THROW(parse("f1,f2\n"), ParseError);
    EXPECT_THROW(parse(""), ParseError);
}

TEST(LoadDataset, MissingFileIsError) {
    EXPECT_THROW(load_dataset("/nonexistent/data.csv"), Error);
}

TEST(ParseFeatures, AcceptsLabelledAndUnlabelled) {
    std::istringstream a("f1,f2,label\n1,2,1\n3,4,2\n");
    std::istringstream b("f1,f2\n1,2\n3,4\n");
    const Matrix x = parse_features(a), y = parse_features(b);
    EXPECT_EQ(x, y);
    EXPECT_EQ(x.rows(), 2);
}

TEST(Dataset, ConstructorValidates) {
    Matrix x(2, 2);
    x << 0, 1, 2, std::numeric_limits<double>::infinity();
    EXPECT_THROW(Dataset(x, {ClassId::Omega1, ClassId::Omega2}), Error);
    Matrix y(2, 2);
    y.setZero();
    EXPECT_THROW(Dataset(y, {ClassId::Omega1}), Error);
}

TEST(SplitByClass, PartitionsPreservingOrder) {
    const Dataset d = parse("f1,f2,label\n0,0,1\n1,1,1\n2,2,2");
    auto [a, b] = split_by_class(d);
    Matrix ea(2, 2), eb(1, 2);
    ea << 0, 0, 1, 1;
    eb << 2, 2;
    EXPECT_EQ(a, ea);
    EXPECT_EQ(b, eb);
}

TEST(SplitByClass, DegenerateAndEmpty) {
    const Dataset one = parse("f1,f2,label\n0,0,1\n5,5,1\n");
    auto [a, b] = split_by_class(one);
    EXPECT_EQ(a.rows(), 2);
    EXPECT_EQ(b.rows(), 0);
    EXPECT_EQ(b.cols(), 2);

    const Dataset none = parse("f1,f2,label\n");
    auto [c, e] = split_by_class(none);
    EXPECT_EQ(c.rows() + e.rows(), 0);
}

TEST(SplitByClass, RowCountsSumToSize) {
    std::mt19937_64 rng(7);
    for (int rep = 0; rep < 50; ++rep) {
        const int n = static_cast<int>(rng() % 30);
        Matrix x = Matrix::Random(n, 3);
        std::vector<ClassId> labels;
        for (int i = 0; i < n; ++i) labels.push_back(rng() % 2 ? ClassId::Omega1 : ClassId::Omega2);
        const Dataset d(x, labels);
        auto [a, b] = split_by_class(d);
        EXPECT_EQ(static_cast<std::size_t>(a.rows()), d.count(ClassId::Omega1));
        EXPECT_EQ(static_cast<std::size_t>(a.rows() + b.rows()), d.size());
    }
}

TEST(SaveDataset, RoundTripIsBitExact) {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> g(0.0, 1e3);
    Matrix x(40, 3);
    std::vector<ClassId> labels;
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        for (Eigen::Index j = 0; j < x.cols(); ++j) x(i, j) = g(rng) * std::pow(10.0, (i % 7) - 3);
        labels.push_back(i % 3 ? ClassId::Omega1 : ClassId::Omega2);
    }
    x(0, 0) = std::numeric_limits<double>::denorm_min();
    x(1, 1) = -0.0;
    const Dataset d(x, labels);
    std::stringstream buf;
    write_dataset(buf, d);
    const Dataset back = parse_dataset(buf);
    ASSERT_EQ(back.size(), d.size());
    EXPECT_EQ(std::memcmp(back.features().data(), d.features().data(),
                          sizeof(double) * static_cast<std::size_t>(x.size())),
              0);
    EXPECT_EQ(back.labels(), d.labels());
}

TEST(DeriveStream, SameSpecSameDraws) {
    const SeedSpec s{42, "EXP1", 4, 20, 3, "train"};
    auto a = derive_stream(s), b = derive_stream(s);
    for (int i = 0; i < 100; ++i) ASSERT_EQ(a.bits(), b.bits());
    for (int i = 0; i < 100; ++i) ASSERT_EQ(a.normal(), b.normal());
}

TEST(DeriveStream, TrialIndexSeparatesStreams) {
    auto a = derive_stream({42, "EXP1", 4, 20, 0, "train"});
    auto b = derive_stream({42, "EXP1", 4, 20, 1, "train"});
    int same = 0;
    for (int i = 0; i < 100; ++i) same += a.bits() == b.bits();
    EXPECT_EQ(same, 0);
}

TEST(DeriveStream, PurposeSeparatesStreams) {
    auto a = derive_stream({42, "EXP1", 4, 20, 0, "train"});
    auto b = derive_stream({42, "EXP1", 4, 20, 0, "test"});
    int same = 0;
    for (int i = 0; i < 100; ++i) same += a.bits() == b.bits();
    EXPECT_EQ(same, 0);
}

TEST(DeriveStream, EveryFieldAffectsKey) {
    const SeedSpec base{1, "EXP2", 2, 10, 5, "train"};
    auto vary = [&](auto mutate) {
        SeedSpec s = base;
        mutate(s);
        return s.key();
    };
    EXPECT_NE(base.key(), vary([](SeedSpec& s) { s.base_seed = 2; }));
    EXPECT_NE(base.key(), vary([](SeedSpec& s) { s.experiment = "EXP3"; }));
    EXPECT_NE(base.key(), vary([](SeedSpec& s) { s.p = 4; }));
    EXPECT_NE(base.key(), vary([](SeedSpec& s) { s.n = 20; }));
    EXPECT_NE(base.key(), vary([](SeedSpec& s) { s.trial = 6; }));
}

TEST(DeriveStream, LongPrefixesAgree) {
    const SeedSpec s{9, "EXP3", 16, 200, 999, "test"};
    auto a = derive_stream(s), b = derive_stream(s);
    for (int i = 0; i < 100000; ++i) ASSERT_EQ(a.uniform(), b.uniform());
}

}  // namespace
}  // namespace ncc
