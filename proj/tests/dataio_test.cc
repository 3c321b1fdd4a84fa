#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "ncerec/dataio/matrix_io.h"
#include "ncerec/dataio/model_io.h"
#include "ncerec/dataio/ratings.h"
#include "ncerec/dataio/report.h"
#include "ncerec/errors.h"
#include "ncerec/models/trainers.h"
#include "oracle/oracle.h"

using namespace ncerec;
using dataio::FormatDescriptor;
using numkit::SparseMatrix;

namespace {

std::filesystem::path temp_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("ncerec_dataio_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

dataio::RatingsTable parse(const std::string& text, const FormatDescriptor& f) {
  std::istringstream in(text);
  return dataio::parse_ratings(in, f);
}

models::TrainedModel toy_model(models::ModelKind kind) {
  std::mt19937_64 rng(41);
  const SparseMatrix r = oracle::random_binary(20, 12, 0.3, rng);
  models::Hyperparameters h;
  h.rank = 3;
  h.alpha = kind == models::ModelKind::kNcePlrecWeighted ? 1.0 : 0.0;
  h.beta = 0.9;
  h.lambda = 0.25;
  h.seed = 17;
  auto m = models::train(kind, r, h);
  for (std::size_t j = 0; j < m.num_items; ++j) m.item_ids.push_back("item" + std::to_string(j));
  return m;
}

}  // namespace

TEST(LoadRatings, CommaLine) {
  const auto t = parse("1,10,4.0,964982703\n", FormatDescriptor{});
  ASSERT_EQ(t.rows.size(), 1u);
  EXPECT_EQ(t.rows[0].user, "1");
  EXPECT_EQ(t.rows[0].item, "10");
  EXPECT_EQ(t.rows[0].rating, 4.0);
  EXPECT_EQ(t.rows[0].timestamp, 964982703);
  EXPECT_TRUE(t.has_timestamps);
}

TEST(LoadRatings, HeaderSkippedAndCrlf) {
  const auto t = parse("userId,movieId,rating,timestamp\r\n1,2,3.5,4\r\n",
                       FormatDescriptor::movielens_csv());
  ASSERT_EQ(t.rows.size(), 1u);
  EXPECT_EQ(t.rows[0].timestamp, 4);
}

TEST(LoadRatings, TabFormatAndNoTimestamp) {
  const auto t = parse("196\t242\t3\t881250949\n", FormatDescriptor::movielens_100k());
  EXPECT_EQ(t.rows[0].item, "242");
  FormatDescriptor f;
  f.columns = 3;
  f.timestamp_column = -1;
  const auto u = parse("a,b,1\n", f);
  EXPECT_FALSE(u.has_timestamps);
  EXPECT_FALSE(u.rows[0].timestamp.has_value());
}

TEST(LoadRatings, ErrorsCarryLineNumbers) {
  try {
    parse("1,2,3,4\n1,2,3\n", FormatDescriptor{});
    FAIL();
  } catch (const FormatError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  try {
    parse("1,2,3,4\n\n1,2,abc,4\n", FormatDescriptor{});
    FAIL();
  } catch (const FormatError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  EXPECT_THROW(parse("1,2,nan,4\n", FormatDescriptor{}), FormatError);
  EXPECT_THROW(parse("1,2,3,x\n", FormatDescriptor{}), FormatError);
  EXPECT_THROW(dataio::load_ratings("/nonexistent/ratings", FormatDescriptor{}), IoError);
}

TEST(FormatDescriptor, ValidationAndDelimiters) {
  FormatDescriptor f;
  f.item_column = 0;
  EXPECT_THROW(f.validate(), std::invalid_argument);
  f = FormatDescriptor{};
  f.rating_column = 7;
  EXPECT_THROW(f.validate(), std::invalid_argument);
  EXPECT_EQ(dataio::unescape_delimiter("\\t"), "\t");
  EXPECT_EQ(dataio::unescape_delimiter("comma"), ",");
  EXPECT_EQ(dataio::unescape_delimiter("::"), "::");
}

TEST(BuildMatrix, HandConstruction) {
  const auto t = parse("u1,i1,5,1\nu2,i2,4,2\nu1,i2,4,3\n", FormatDescriptor{});
  const auto b = dataio::build_matrix(t, 3.0);
  EXPECT_EQ(b.matrix.rows(), 2u);
  EXPECT_EQ(b.matrix.cols(), 2u);
  EXPECT_EQ(b.matrix.nnz(), 3u);
  EXPECT_EQ(b.maps.user_ids(), (std::vector<std::string>{"u1", "u2"}));
  EXPECT_EQ(b.maps.item_ids(), (std::vector<std::string>{"i1", "i2"}));
}

TEST(BuildMatrix, DuplicatesThresholdAndEmpty) {
  const auto t = parse("u,i,5,1\nu,i,5,2\nu,j,2,3\n", FormatDescriptor{});
  const auto b = dataio::build_matrix(t, 3.0);
  EXPECT_EQ(b.matrix.nnz(), 1u);
  EXPECT_EQ(b.dropped_below_threshold, 1u);
  EXPECT_EQ(b.interactions.size(), 2u);
  EXPECT_THROW(dataio::build_matrix(t, 5.0), std::invalid_argument);
}

TEST(BuildMatrix, ReusedMapsDropUnseen) {
  const auto train = dataio::build_matrix(parse("a,x,5,1\nb,y,5,1\n", FormatDescriptor{}), 3.0);
  const auto test = dataio::build_matrix(
      parse("a,y,5,2\na,z,5,2\nc,x,5,2\n", FormatDescriptor{}), 3.0, &train.maps);
  EXPECT_EQ(test.matrix.rows(), 2u);
  EXPECT_EQ(test.matrix.cols(), 2u);
  EXPECT_EQ(test.matrix.nnz(), 1u);
  EXPECT_EQ(test.dropped_unseen_items, 1u);
  EXPECT_EQ(test.dropped_unseen_users, 1u);
  EXPECT_EQ(test.maps, train.maps);
}

TEST(IndexMaps, StableAcrossRuns) {
  const std::string text = "9,3,5,1\n2,3,5,1\n9,1,5,1\n";
  EXPECT_EQ(dataio::build_matrix(parse(text, FormatDescriptor{}), 0.0).maps,
            dataio::build_matrix(parse(text, FormatDescriptor{}), 0.0).maps);
  EXPECT_THROW(dataio::IndexMaps::from_ids({"a", "a"}, {}), std::invalid_argument);
}

TEST(MatrixMarket, RoundTrip) {
  std::mt19937_64 rng(42);
  const SparseMatrix binary = oracle::random_binary(17, 9, 0.3, rng);
  std::stringstream a;
  dataio::write_matrix_market(a, binary);
  EXPECT_NE(a.str().find("pattern"), std::string::npos);
  EXPECT_EQ(dataio::read_matrix_market(a), binary);

  const SparseMatrix real = SparseMatrix::from_triplets(
      2, 3, std::vector<numkit::Triplet>{{0, 1, 0.1}, {1, 2, 1.0 / 3.0}});
  std::stringstream b;
  dataio::write_matrix_market(b, real);
  EXPECT_EQ(dataio::read_matrix_market(b), real);

  std::stringstream bad("%%MatrixMarket matrix coordinate pattern general\n2 2 2\n1 1\n");
  EXPECT_THROW(dataio::read_matrix_market(bad), FormatError);
}

TEST(SplitBundle, RoundTrip) {
  const auto dir = temp_dir("split");
  const auto built = dataio::build_matrix(
      parse("a,x,5,1\na,y,5,2\na,z,5,3\nb,x,5,1\nb,z,5,9\n", FormatDescriptor{}), 3.0);
  dataio::SplitBundle bundle;
  bundle.split = eval::chronological_split(built.interactions, 2, 3);
  bundle.maps = built.maps;
  bundle.threshold = 3.0;
  dataio::save_split(bundle, dir.string());
  const auto loaded = dataio::load_split(dir.string());
  EXPECT_EQ(loaded.split.train, bundle.split.train);
  EXPECT_EQ(loaded.split.valid, bundle.split.valid);
  EXPECT_EQ(loaded.split.test, bundle.split.test);
  EXPECT_EQ(loaded.maps, bundle.maps);
  EXPECT_EQ(loaded.split.mode, eval::SplitMode::kChronological);
  EXPECT_EQ(loaded.threshold, 3.0);
}

TEST(ModelFile, RoundTripIsBitwiseForEveryKind) {
  const auto dir = temp_dir("model");
  for (auto kind : {models::ModelKind::kNcePlrec, models::ModelKind::kNcePlrecWeighted,
                    models::ModelKind::kPlrec, models::ModelKind::kPureSvd,
                    models::ModelKind::kNceSvd, models::ModelKind::kPop}) {
    const auto m = toy_model(kind);
    const auto path = (dir / "m.bin").string();
    dataio::save_model(m, path);
    EXPECT_EQ(dataio::load_model(path), m) << models::to_string(kind);
  }
}

TEST(ModelFile, BadMagicVersionAndTruncation) {
  std::stringstream good;
  dataio::write_model(good, toy_model(models::ModelKind::kNcePlrec));
  const std::string bytes = good.str();
  EXPECT_EQ(bytes.substr(0, 8), "NCEPLREC");

  std::string magic = bytes;
  magic[0] = 'X';
  std::istringstream a(magic);
  EXPECT_THROW(dataio::read_model(a), IncompatibleModelError);

  std::string version = bytes;
  version[8] = 9;
  std::istringstream b(version);
  EXPECT_THROW(dataio::read_model(b), IncompatibleModelError);

  for (std::size_t cut : {std::size_t{4}, std::size_t{20}, bytes.size() / 2, bytes.size() - 1}) {
    std::istringstream c(bytes.substr(0, cut));
    EXPECT_ANY_THROW(dataio::read_model(c)) << "cut at " << cut;
  }
  std::istringstream d(bytes.substr(0, bytes.size() / 2));
  EXPECT_THROW(dataio::read_model(d), FormatError);
}

TEST(Report, MetricsDocument) {
  eval::MetricsReport r;
  r.model = "NCE-PLRec";
  r.split = "test";
  r.users = {0, 1};
  r.metrics.push_back(eval::aggregate("NDCG", {0.49, 0.51}));
  const auto doc = dataio::to_json(r);
  ASSERT_EQ(doc.at("metrics").size(), 1u);
  const auto& entry = doc.at("metrics")[0];
  EXPECT_EQ(entry.at("name"), "NDCG");
  EXPECT_EQ(entry.at("mean").get<double>(), r.metrics[0].mean);
  EXPECT_EQ(entry.at("ciHalfWidth").get<double>(), r.metrics[0].ci_half_width);
  EXPECT_EQ(entry.at("userCount"), 2);
  EXPECT_EQ(dataio::serialize(doc), dataio::serialize(dataio::to_json(r)));
  // Sorted keys.
  const std::string text = dataio::serialize(doc);
  EXPECT_LT(text.find("\"metrics\""), text.find("\"model\""));
}

TEST(Report, FullPrecisionAndFileRoundTrip) {
  eval::MetricsReport r;
  r.metrics.push_back(eval::aggregate("NDCG", {0.5}));
  r.metrics[0].ci_half_width = 0.0123456789012345;
  const auto dir = temp_dir("report");
  const auto path = (dir / "r.json").string();
  dataio::write_report(dataio::to_json(r), path);
  const auto back = dataio::read_report(path);
  EXPECT_EQ(back.at("metrics")[0].at("ciHalfWidth").get<double>(), 0.0123456789012345);
  EXPECT_THROW(dataio::write_report(dataio::to_json(r), "/nonexistent/dir/r.json"), IoError);
}

TEST(Report, HyperparametersRoundTrip) {
  models::Hyperparameters h;
  h.rank = 7;
  h.beta = 1.3;
  h.alpha = -0.2;
  h.lambda = 0.001;
  h.seed = 99;
  EXPECT_EQ(dataio::hyperparameters_from_json(dataio::to_json(h)), h);
  EXPECT_EQ(dataio::hyperparameters_from_json(dataio::Json::object(), h), h);
}
