#include "contrastfs/error.hpp"
#include "contrastfs/ingestion.hpp"

#include "fixtures.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>
#include <zlib.h>

#include <cmath>
#include <fstream>
#include <functional>
#include <numeric>
#include <set>

using namespace contrastfs;

namespace {

std::filesystem::path write_file(const std::string& name, const std::string& content)
{
    const auto path = fixtures::temp_dir() / name;
    std::ofstream out(path, std::ios::binary);
    out << content;
    return path;
}

std::string be32(std::uint32_t v)
{
    return {static_cast<char>(v >> 24), static_cast<char>(v >> 16), static_cast<char>(v >> 8), static_cast<char>(v)};
}

std::string idx_images(std::uint32_t magic, std::uint32_t count, std::uint32_t rows, std::uint32_t cols,
                       const std::vector<unsigned char>& pixels)
{
    return be32(magic) + be32(count) + be32(rows) + be32(cols) + std::string(pixels.begin(), pixels.end());
}

std::string idx_labels(std::uint32_t count, const std::vector<unsigned char>& labels)
{
    return be32(0x00000801) + be32(count) + std::string(labels.begin(), labels.end());
}

std::filesystem::path write_gz(const std::string& name, const std::string& content)
{
    const auto path = fixtures::temp_dir() / name;
    gzFile f = gzopen(path.string().c_str(), "wb");
    gzwrite(f, content.data(), static_cast<unsigned>(content.size()));
    gzclose(f);
    return path;
}

ErrorKind kind_of(const std::function<void()>& fn)
{
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "no contrastfs::Error thrown";
    return ErrorKind::InvalidArgument;
}

Dataset balanced(std::size_t per_class, std::size_t classes)
{
    std::vector<std::vector<double>> rows;
    std::vector<Label> labels;
    for (std::size_t k = 0; k < classes; ++k) {
        for (std::size_t i = 0; i < per_class; ++i) {
            rows.push_back({static_cast<double>(k), static_cast<double>(i)});
            labels.push_back(static_cast<Label>(k));
        }
    }
    return fixtures::from_rows(rows, labels, classes);
}

}  // namespace

TEST(Csv, ThreeRowExample)
{
    CsvOptions o;
    o.label_column = std::string("y");
    const Dataset d = load_csv(write_file("three.csv", "f1,f2,y\n0,1,a\n2,3,a\n4,5,b"), o);
    EXPECT_EQ(d.samples(), 3u);
    EXPECT_EQ(d.features(), 2u);
    EXPECT_EQ(d.class_count(), 2u);
    EXPECT_EQ(std::vector<Label>(d.labels().begin(), d.labels().end()), (std::vector<Label>{0, 0, 1}));
    EXPECT_EQ(d.feature_names(), (std::vector<std::string>{"f1", "f2"}));
    EXPECT_EQ(d.class_names(), (std::vector<std::string>{"a", "b"}));
    EXPECT_EQ(d.value(2, 1), 5.0);
}

TEST(Csv, HeaderlessLabelColumnZero)
{
    CsvOptions o;
    o.has_header = false;
    o.label_column = std::size_t{0};
    const Dataset d = load_csv(write_file("nohdr.csv", "1,0.5,7\r\n0,1.5,8\r\n1,2.5,9\r\n"), o);
    EXPECT_EQ(d.features(), 2u);
    EXPECT_EQ(d.value(0, 0), 0.5);
    EXPECT_EQ(d.value(2, 1), 9.0);
    EXPECT_EQ(std::vector<Label>(d.labels().begin(), d.labels().end()), (std::vector<Label>{1, 0, 1}));
}

TEST(Csv, IntegerLabelsSortNumerically)
{
    CsvOptions o;
    o.label_column = std::size_t{1};
    const Dataset d = load_csv(write_file("num.csv", "x,y\n1,10\n2,9\n3,10\n"), o);
    EXPECT_EQ(d.class_names(), (std::vector<std::string>{"9", "10"}));
    EXPECT_EQ(d.labels()[0], 1u);
}

TEST(Csv, QuotedFieldsAndDelimiter)
{
    CsvOptions o;
    o.delimiter = ';';
    o.label_column = std::string("class");
    const Dataset d = load_csv(write_file("quoted.csv", "\"a;b\";class\n\"1.25\";\"x \"\"y\"\"\"\n2;z\n"), o);
    EXPECT_EQ(d.feature_names(), (std::vector<std::string>{"a;b"}));
    EXPECT_EQ(d.class_names(), (std::vector<std::string>{"x \"y\"", "z"}));
    EXPECT_EQ(d.value(0, 0), 1.25);
}

TEST(Csv, Errors)
{
    CsvOptions o;
    o.label_column = std::string("nope");
    EXPECT_EQ(kind_of([&] { load_csv(write_file("e1.csv", "a,b\n1,2\n"), o); }), ErrorKind::MissingLabelColumn);
    o.label_column = std::size_t{5};
    EXPECT_EQ(kind_of([&] { load_csv(write_file("e2.csv", "a,b\n1,2\n"), o); }), ErrorKind::MissingLabelColumn);
    o.label_column = std::size_t{1};
    EXPECT_EQ(kind_of([&] { load_csv(write_file("e3.csv", "a,b\nx,2\n"), o); }), ErrorKind::Parse);
    EXPECT_EQ(kind_of([&] { load_csv(write_file("e4.csv", "a,b\n1,2\n3\n"), o); }), ErrorKind::Parse);
    EXPECT_EQ(kind_of([&] { load_csv(write_file("e5.csv", "a,b\ninf,2\n"), o); }), ErrorKind::NonFiniteValue);
    EXPECT_EQ(kind_of([&] { load_csv(fixtures::temp_dir() / "missing.csv", o); }), ErrorKind::Io);
}

TEST(Idx, TwoByTwoImageFlattensRowMajor)
{
    const auto images = write_file("one.idx3", idx_images(0x00000803, 1, 2, 2, {0, 255, 128, 64}));
    const auto labels = write_file("one.idx1", idx_labels(1, {7}));
    const Dataset d = load_idx(images, labels);
    EXPECT_EQ(d.samples(), 1u);
    EXPECT_EQ(std::vector<double>(d.row(0).begin(), d.row(0).end()), (std::vector<double>{0, 255, 128, 64}));
    EXPECT_EQ(d.class_count(), 1u);
    EXPECT_EQ(d.class_names(), (std::vector<std::string>{"7"}));
}

TEST(Idx, GzipMatchesPlain)
{
    const std::string img = idx_images(0x00000803, 3, 1, 2, {1, 2, 3, 4, 5, 6});
    const std::string lab = idx_labels(3, {3, 1, 3});
    const Dataset plain = load_idx(write_file("p.idx3", img), write_file("p.idx1", lab));
    const Dataset gz = load_idx(write_gz("g.idx3.gz", img), write_gz("g.idx1.gz", lab));
    EXPECT_EQ(plain.matrix(), gz.matrix());
    EXPECT_EQ(std::vector<Label>(gz.labels().begin(), gz.labels().end()), (std::vector<Label>{1, 0, 1}));
}

TEST(Idx, Errors)
{
    const auto labels = write_file("l2.idx1", idx_labels(2, {0, 1}));
    EXPECT_EQ(kind_of([&] { load_idx(write_file("bad.idx3", idx_images(0x00000801, 2, 1, 1, {1, 2})), labels); }),
              ErrorKind::BadMagic);
    EXPECT_EQ(kind_of([&] { load_idx(write_file("cnt.idx3", idx_images(0x00000803, 3, 1, 1, {1, 2, 3})), labels); }),
              ErrorKind::CountMismatch);
    EXPECT_EQ(kind_of([&] { load_idx(write_file("short.idx3", idx_images(0x00000803, 2, 2, 2, {1, 2, 3})), labels); }),
              ErrorKind::Truncated);
}

TEST(Cache, RoundTripIsExact)
{
    const Dataset d = oracle::random_dataset(40, 6, 3, 1);
    const auto path = fixtures::temp_dir() / "d.cfs";
    save_cache(d, path);
    const Dataset back = load_cache(path);
    EXPECT_EQ(back.matrix(), d.matrix());
    EXPECT_EQ(std::vector<Label>(back.labels().begin(), back.labels().end()),
              std::vector<Label>(d.labels().begin(), d.labels().end()));
    EXPECT_EQ(back.class_count(), 3u);
    EXPECT_EQ(kind_of([&] { load_cache(write_file("junk.cfs", "NOTACACHE")); }), ErrorKind::BadMagic);
}

TEST(Split, SameSeedSamePartition)
{
    const Dataset d = oracle::random_dataset(200, 3, 4, 6);
    const Split a = split(d, SplitSpec{42, 0.7, true});
    const Split b = split(d, SplitSpec{42, 0.7, true});
    EXPECT_EQ(a.train_indices, b.train_indices);
    EXPECT_EQ(a.test_indices, b.test_indices);
    EXPECT_NE(split(d, SplitSpec{43, 0.7, true}).train_indices, a.train_indices);
}

TEST(Split, TenPerClassGivesSevenTrain)
{
    const Split s = split(balanced(10, 4), SplitSpec{3, 0.7, true});
    EXPECT_EQ(class_counts(s.train), (std::vector<std::size_t>{7, 7, 7, 7}));
    EXPECT_EQ(class_counts(s.test), (std::vector<std::size_t>{3, 3, 3, 3}));
}

TEST(Split, MiceSizedClassesGive756Train)
{
    const std::vector<std::size_t> sizes{150, 150, 135, 135, 135, 105, 135, 135};
    std::vector<std::vector<double>> rows;
    std::vector<Label> labels;
    for (std::size_t k = 0; k < sizes.size(); ++k) {
        for (std::size_t i = 0; i < sizes[k]; ++i) {
            rows.push_back({static_cast<double>(i)});
            labels.push_back(static_cast<Label>(k));
        }
    }
    const Dataset d = fixtures::from_rows(rows, labels, sizes.size());
    ASSERT_EQ(d.samples(), 1080u);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const Split s = split(d, SplitSpec{seed, 0.7, true});
        EXPECT_EQ(s.train.samples(), 756u);
        const auto counts = class_counts(s.train);
        for (std::size_t k = 0; k < sizes.size(); ++k) {
            EXPECT_LT(std::abs(static_cast<double>(counts[k]) - 0.7 * static_cast<double>(sizes[k])), 1.0);
        }
    }
}

TEST(Split, IsAPartition)
{
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const Dataset d = oracle::random_dataset(50 + seed * 13, 2, 2 + seed % 5, seed);
        for (bool stratified : {true, false}) {
            const Split s = split(d, SplitSpec{seed, 0.2 + 0.03 * static_cast<double>(seed), stratified});
            std::set<std::size_t> seen(s.train_indices.begin(), s.train_indices.end());
            for (auto i : s.test_indices) EXPECT_TRUE(seen.insert(i).second);
            EXPECT_EQ(seen.size(), d.samples());
            EXPECT_EQ(s.train.samples() + s.test.samples(), d.samples());
            for (std::size_t j = 0; j < s.train_indices.size(); ++j) {
                EXPECT_EQ(s.train.labels()[j], d.labels()[s.train_indices[j]]);
            }
        }
    }
}

TEST(Split, StratifiedCountsWithinOneOfProportion)
{
    const Dataset d = oracle::random_dataset(517, 1, 7, 99);
    const auto n = class_counts(d);
    for (double f : {0.2, 0.5, 0.7, 0.85}) {
        const auto got = class_counts(split(d, SplitSpec{1, f, true}).train);
        for (std::size_t k = 0; k < n.size(); ++k) {
            EXPECT_LT(std::abs(static_cast<double>(got[k]) - f * static_cast<double>(n[k])), 1.0);
        }
    }
}

TEST(Split, Errors)
{
    EXPECT_EQ(kind_of([] { split(fixtures::one_feature({{1, 2}, {3}}), SplitSpec{}); }), ErrorKind::ClassTooSmall);
    EXPECT_EQ(kind_of([] { split(fixtures::toy(), SplitSpec{0, 1.0, true}); }), ErrorKind::InvalidArgument);
}

TEST(Noise, ZeroSigmaIsIdentity)
{
    const Dataset d = oracle::random_dataset(30, 4, 2, 3);
    EXPECT_EQ(add_gaussian_noise(d, 0.0, 5).matrix(), d.matrix());
}

TEST(Noise, SeededAndShapePreserving)
{
    const Dataset d = oracle::random_dataset(30, 4, 2, 3);
    const Dataset a = add_gaussian_noise(d, 1.0, 5);
    EXPECT_EQ(a.matrix(), add_gaussian_noise(d, 1.0, 5).matrix());
    EXPECT_NE(a.matrix(), add_gaussian_noise(d, 1.0, 6).matrix());
    EXPECT_EQ(a.samples(), d.samples());
    EXPECT_EQ(a.features(), d.features());
    EXPECT_TRUE(std::equal(a.labels().begin(), a.labels().end(), d.labels().begin()));
}

TEST(Noise, SampleStdNearSigma)
{
    const Dataset zeros(Matrix(1000, 1, 0.0), std::vector<Label>(1000, 0), 1);
    const Dataset noisy = add_gaussian_noise(zeros, 10.0, 2024);
    double mean = 0.0;
    for (double v : noisy.matrix().data()) mean += v;
    mean /= 1000.0;
    double ss = 0.0;
    for (double v : noisy.matrix().data()) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / 999.0);
    EXPECT_GE(sd, 9.0);
    EXPECT_LE(sd, 11.0);
}
