#include "mianfis/data_io.hpp"
#include "mianfis/datagen.hpp"
#include "mianfis/error.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <random>

using namespace mianfis;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    auto dir = fs::temp_directory_path() / "mianfis_io_test";
    fs::create_directories(dir);
    return dir / name;
}

}  // namespace

TEST(ParseBags, OneBagThreeRows) {
    const auto ds = parse_bags("bag_id,label,f1,f2\na,1,0.5,2\na,1,1,1\na,1,-3,4e-2\n");
    ASSERT_EQ(ds.size(), 1u);
    EXPECT_EQ(ds.dim, 2u);
    EXPECT_EQ(ds.bags[0].size(), 3u);
    EXPECT_EQ(ds.bags[0].instances(2, 1), 0.04);
}

TEST(ParseBags, NonContiguousRowsKeepFirstAppearanceOrder) {
    const auto ds = parse_bags("# note\nbag_id,label,x\r\nb,0,1\r\na,1,2\r\nb,0,3\r\n");
    ASSERT_EQ(ds.size(), 2u);
    EXPECT_EQ(ds.bags[0].id, "b");
    EXPECT_EQ(ds.bags[0].size(), 2u);
    EXPECT_EQ(ds.bags[0].instances(1, 0), 3.0);
}

TEST(ParseBags, InconsistentLabelNamesBag) {
    try {
        parse_bags("bag_id,label,x\nzeta,1,0\nzeta,0,1\n");
        FAIL();
    } catch (const DataError& e) {
        EXPECT_NE(std::string(e.what()).find("zeta"), std::string::npos);
    }
}

TEST(ParseBags, FormatErrorsCarryPosition) {
    try {
        parse_bags("id,label,x\n");
        FAIL();
    } catch (const FormatError& e) {
        EXPECT_NE(std::string(e.what()).find("line 1"), std::string::npos);
    }
    try {
        parse_bags("bag_id,label,x,y\na,1,0,zz\n");
        FAIL();
    } catch (const FormatError& e) {
        EXPECT_NE(std::string(e.what()).find("line 2, column 4"), std::string::npos);
    }
    EXPECT_THROW(parse_bags(""), FormatError);
    EXPECT_THROW(parse_bags("bag_id,label,x\na,1\n"), FormatError);
}

TEST(BagFiles, RoundTrip) {
    SynthSpec spec;
    spec.seed = 3;
    const auto ds = generate(spec);
    const auto path = scratch("bags.csv");
    write_bags(ds, path, "seed 3");
    EXPECT_EQ(read_bags(path), ds);
}

TEST(BagFiles, RoundTripsAwkwardValues) {
    BagDataset ds;
    ds.dim = 2;
    ds.bags.push_back({"x", 0.25, InstanceMatrix::from_rows({{0.1, 1e-300}, {-1.0 / 3.0, 123456789.123456789}})});
    EXPECT_EQ(parse_bags(format_bags(ds)), ds);
}

TEST(ModelFiles, RoundTripBitwise) {
    std::mt19937_64 rng(4);
    const auto model = mianfis::testing::random_model(rng, 3, 2, 1.7);
    PcaMap pca{{0.1, 0.2, 0.3}, {{1.0 / 3, 0.5}, {0.25, 0.1}, {0.7, -0.2}}, {2.5, 0.5}};
    const auto path = scratch("model.json");
    save_model(model, pca, path, {{"eta", 0.1}});
    const auto loaded = load_model(path);
    EXPECT_EQ(loaded.model, model);
    ASSERT_TRUE(loaded.pca);
    EXPECT_EQ(*loaded.pca, pca);
    EXPECT_EQ(loaded.config["eta"], 0.1);
}

TEST(ModelFiles, RejectsUnknownVersion) {
    std::mt19937_64 rng(5);
    auto doc = model_to_json(mianfis::testing::random_model(rng, 1, 1, 1.0));
    doc["version"] = kModelFormatVersion + 1;
    EXPECT_THROW(model_from_json(doc), UnsupportedVersionError);
}

TEST(ModelFiles, RejectsShapeErrors) {
    std::mt19937_64 rng(6);
    auto doc = model_to_json(mianfis::testing::random_model(rng, 2, 2, 1.0));
    auto bad_sigma = doc;
    bad_sigma["rules"][0]["sigma"] = {1.0};
    EXPECT_THROW(model_from_json(bad_sigma), FormatError);
    auto bad_b = doc;
    bad_b["rules"][1]["b"] = {1.0, 2.0};
    EXPECT_THROW(model_from_json(bad_b), FormatError);
    auto neg_sigma = doc;
    neg_sigma["rules"][0]["sigma"][0] = -1.0;
    EXPECT_THROW(model_from_json(neg_sigma), FormatError);
}

TEST(ModelFiles, ZeroOrderWithSlopeIsFormatError) {
    std::mt19937_64 rng(7);
    auto doc = model_to_json(mianfis::testing::random_model(rng, 1, 3, 1.0, ConsequentOrder::zero));
    doc["rules"][0]["b"][3] = 0.5;
    EXPECT_THROW(model_from_json(doc), FormatError);
}

TEST(ModelFiles, TruncatedFileIsFormatError) {
    std::mt19937_64 rng(8);
    const auto path = scratch("trunc.json");
    save_model(mianfis::testing::random_model(rng, 2, 2, 1.0), std::nullopt, path);
    const auto text = read_text_file(path);
    write_text_file(path, text.substr(0, text.size() / 2));
    EXPECT_THROW(load_model(path), FormatError);
}

TEST(TextFiles, MissingFileIsDataError) {
    EXPECT_THROW(read_text_file(scratch("does_not_exist.csv")), DataError);
    EXPECT_THROW(load_model(scratch("does_not_exist.json")), DataError);
}

TEST(Reports, CsvShapes) {
    TrainReport r;
    r.rmse = {0.5, 0.25};
    r.epochs = 2;
    EXPECT_EQ(format_report_csv(r), "epoch,rmse\n1,0.5\n2,0.25\n");
    RocCurve c;
    c.points = {{0, 0}, {1, 1}};
    EXPECT_EQ(format_roc_csv(c, "x"), "# x\nfar,pd\n0,0\n1,1\n");
}

TEST(Reports, SvgIsWellFormed) {
    const auto svg = svg_line_plot({{"a", {1, 2, 3}, {0.5, 0.3, 0.2}}}, "RMSE & more", "epoch", "rmse");
    EXPECT_EQ(svg.rfind("<svg", 0), 0u);
    EXPECT_NE(svg.find("</svg>"), std::string::npos);
    EXPECT_NE(svg.find("&amp;"), std::string::npos);
}
