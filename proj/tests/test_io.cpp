#include <doctest.h>

#include <sstream>

#include "oracles.hpp"
#include "temp_dir.hpp"

using namespace graphimpute;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an Error");
  return ErrorKind::InvalidParameter;
}

}  // namespace

TEST_CASE("parse_interactions") {
  std::istringstream simple("u1\ta\nu1\tb\n");
  const auto r = parse_interactions(simple);
  CHECK(r.n_users() == 1);
  CHECK(r.n_items() == 2);

  std::istringstream commented("# comment\n\nu1\ta\r\n");
  CHECK(parse_interactions(commented).n_entries() == 1);

  std::istringstream spaced("u1 a\n");
  try {
    parse_interactions(spaced);
    FAIL("expected ParseError");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ParseError);
    CHECK(e.line() == 1);
  }

  std::istringstream later("u1\ta\n\nu2\t\n");
  try {
    parse_interactions(later);
  } catch (const Error& e) {
    CHECK(e.line() == 3);
  }

  std::istringstream empty("# nothing\n");
  CHECK(kind_of([&] { parse_interactions(empty); }) == ErrorKind::EmptyDataset);
}

TEST_CASE("interactions round-trip through a file keeps indexing") {
  TempDir dir;
  oracle::Rng rng(3);
  const auto r = oracle::random_interactions(rng, 20, 20);
  write_interactions(dir / "r.tsv", r);
  CHECK(read_interactions(dir / "r.tsv") == r);
}

TEST_CASE("feature matrix file format") {
  TempDir dir;
  SUBCASE("round trip is bit-exact for float-representable data") {
    oracle::Rng rng(1);
    std::normal_distribution<float> normal;
    FeatureMatrix m(7, 5);
    for (double& v : m.data()) v = static_cast<double>(normal(rng));
    write_feature_matrix(dir / "m.fmat", m);
    const auto back = read_feature_matrix(dir / "m.fmat");
    CHECK(oracle::same_bits(back.data(), m.data()));
    CHECK(back.rows() == 7);
    CHECK(back.cols() == 5);
  }
  SUBCASE("header layout is little-endian") {
    write_feature_matrix(dir / "h.fmat", FeatureMatrix(2, 3, {1, 0, 0, 0, 0, -2}));
    const auto bytes = slurp(dir / "h.fmat");
    REQUIRE(bytes.size() == 24 + 2 * 3 * 4);
    CHECK(bytes.substr(0, 8) == std::string("FMATv1\0\0", 8));
    CHECK(bytes[8] == 2);
    CHECK(bytes[16] == 3);
    // 1.0f = 0x3f800000
    CHECK(static_cast<unsigned char>(bytes[27]) == 0x3f);
    CHECK(static_cast<unsigned char>(bytes[26]) == 0x80);
  }
  SUBCASE("empty matrix") {
    write_feature_matrix(dir / "e.fmat", FeatureMatrix(0, 16));
    const auto back = read_feature_matrix(dir / "e.fmat");
    CHECK(back.rows() == 0);
    CHECK(back.cols() == 16);
  }
  SUBCASE("truncated and corrupt files") {
    write_feature_matrix(dir / "t.fmat", FeatureMatrix(3, 3));
    const auto bytes = slurp(dir / "t.fmat");
    dir.write("short.fmat", bytes.substr(0, bytes.size() - 1));
    CHECK(kind_of([&] { read_feature_matrix(dir / "short.fmat"); }) == ErrorKind::FormatError);
    dir.write("head.fmat", bytes.substr(0, 10));
    CHECK(kind_of([&] { read_feature_matrix(dir / "head.fmat"); }) == ErrorKind::FormatError);
    std::string bad = bytes;
    bad[0] = 'X';
    dir.write("magic.fmat", bad);
    CHECK(kind_of([&] { read_feature_matrix(dir / "magic.fmat"); }) == ErrorKind::FormatError);
  }
  SUBCASE("non-finite values are rejected on write") {
    FeatureMatrix m(1, 1, {std::numeric_limits<double>::infinity()});
    CHECK(kind_of([&] { write_feature_matrix(dir / "inf.fmat", m); }) == ErrorKind::FormatError);
  }
}

TEST_CASE("parse_mask") {
  std::istringstream interactions("u1\ta\nu1\tb\n");
  const auto r = parse_interactions(interactions);

  std::istringstream one("a\ttext\n");
  const auto sets = parse_mask(one, r);
  CHECK(sets.at("text") == std::vector<Index>{0});

  std::istringstream dup("b\ttext\na\ttext\nb\ttext\n");
  CHECK(parse_mask(dup, r).at("text") == std::vector<Index>{0, 1});

  std::istringstream unknown("a\ttext\nzzz\ttext\n");
  try {
    parse_mask(unknown, r);
    FAIL("expected UnknownItem");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::UnknownItem);
    CHECK(e.line() == 2);
  }
}

TEST_CASE("load_dataset applies the mask and checks shapes") {
  TempDir dir;
  dir.write("r.tsv", "u1\ta\nu1\tb\nu2\tc\n");
  write_feature_matrix(dir / "v.fmat", FeatureMatrix(3, 2, {1, 2, 3, 4, 5, 6}));
  write_feature_matrix(dir / "t.fmat", FeatureMatrix(3, 1, {7, 8, 9}));
  dir.write("mask.tsv", "b\ttext\n");
  const auto ds = load_dataset(dir / "r.tsv", {{"visual", dir / "v.fmat"}, {"text", dir / "t.fmat"}},
                               dir / "mask.tsv");
  CHECK(ds.features.modalities.size() == 2);
  CHECK(ds.features.find("text")->missing_count() == 1);
  CHECK(ds.features.find("text")->values.at(1, 0) == 0.0);
  CHECK(ds.features.find("visual")->missing_count() == 0);

  write_feature_matrix(dir / "bad.fmat", FeatureMatrix(2, 1));
  CHECK(kind_of([&] { load_dataset(dir / "r.tsv", {{"visual", dir / "bad.fmat"}}, {}); }) ==
        ErrorKind::FormatError);
  dir.write("mask2.tsv", "a\taudio\n");
  CHECK(kind_of([&] { load_dataset(dir / "r.tsv", {{"visual", dir / "v.fmat"}}, dir / "mask2.tsv"); }) ==
        ErrorKind::ParseError);
}
