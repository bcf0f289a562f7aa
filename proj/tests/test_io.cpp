#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include <jpeglib.h>

#include "seedlab/io.hpp"
#include "support/synth.hpp"

using namespace seedlab;
namespace fs = std::filesystem;

namespace {

void expect_kind(ErrorKind kind, auto&& fn) {
  try {
    fn();
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == kind);
  }
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

void spill(const fs::path& p, const std::string& bytes) {
  std::ofstream out(p, std::ios::binary);
  out << bytes;
}

std::string arff_text(const LabeledDataset& ds) {
  std::ostringstream out;
  io::write_arff(ds, out);
  return out.str();
}

LabeledDataset arff_parse(const std::string& text) {
  std::istringstream in(text);
  return io::read_arff(in);
}

// Two class folders, `per_class` scans each, three seeds per scan.
fs::path make_tree(const std::string& name, int per_class) {
  const auto root = synth::temp_dir(name);
  const std::pair<const char*, Rgb> classes[] = {{"lentil", {190, 120, 60}}, {"pea", {120, 170, 60}}};
  std::uint64_t seed = 1;
  for (const auto& [cls, colour] : classes) {
    fs::create_directories(root / cls);
    for (int i = 0; i < per_class; ++i) {
      synth::SeedLook look;
      look.colour = colour;
      io::save_png(synth::seed_scan(3, look, seed++), root / cls / ("scan" + std::to_string(i) + ".png"));
    }
  }
  return root;
}

void write_jpeg(const RgbRaster& img, const fs::path& path) {
  jpeg_compress_struct c{};
  jpeg_error_mgr err{};
  c.err = jpeg_std_error(&err);
  jpeg_create_compress(&c);
  FILE* f = std::fopen(path.c_str(), "wb");
  REQUIRE(f != nullptr);
  jpeg_stdio_dest(&c, f);
  c.image_width = static_cast<JDIMENSION>(img.width());
  c.image_height = static_cast<JDIMENSION>(img.height());
  c.input_components = 3;
  c.in_color_space = JCS_RGB;
  jpeg_set_defaults(&c);
  jpeg_set_quality(&c, 95, TRUE);
  jpeg_start_compress(&c, TRUE);
  std::vector<unsigned char> row(static_cast<std::size_t>(img.width()) * 3);
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      const Rgb p = img.at(x, y);
      row[static_cast<std::size_t>(x) * 3] = p.r;
      row[static_cast<std::size_t>(x) * 3 + 1] = p.g;
      row[static_cast<std::size_t>(x) * 3 + 2] = p.b;
    }
    JSAMPROW rp = row.data();
    jpeg_write_scanlines(&c, &rp, 1);
  }
  jpeg_finish_compress(&c);
  jpeg_destroy_compress(&c);
  std::fclose(f);
}

}  // namespace

TEST_CASE("JPEG decodes close to its source") {
  const auto dir = synth::temp_dir("jpeg");
  const RgbRaster img(24, 16, Rgb{180, 120, 60});
  write_jpeg(img, dir / "flat.JPG");
  const auto back = io::load_image(dir / "flat.JPG");
  REQUIRE(back.same_shape(img));
  int worst = 0;
  for (std::size_t i = 0; i < img.size(); ++i) {
    const Rgb a = img.pixels()[i], b = back.pixels()[i];
    worst = std::max({worst, std::abs(a.r - b.r), std::abs(a.g - b.g), std::abs(a.b - b.b)});
  }
  CHECK(worst <= 3);
  fs::remove_all(dir);
}

TEST_CASE("PNG round trip keeps exact pixels") {
  const auto dir = synth::temp_dir("png");
  RgbRaster img(2, 2);
  img.at(0, 0) = {255, 0, 0};
  img.at(1, 0) = {0, 255, 0};
  img.at(0, 1) = {0, 0, 255};
  img.at(1, 1) = {12, 34, 56};
  io::save_png(img, dir / "a.png");
  CHECK(io::load_image(dir / "a.png") == img);

  std::mt19937_64 rng(41);
  for (int it = 0; it < 20; ++it) {
    RgbRaster r(1 + static_cast<int>(rng() % 40), 1 + static_cast<int>(rng() % 40));
    for (auto& p : r.pixels()) {
      p = {static_cast<std::uint8_t>(rng()), static_cast<std::uint8_t>(rng()), static_cast<std::uint8_t>(rng())};
    }
    io::save_png(r, dir / "r.png");
    CHECK(io::load_image(dir / "r.png") == r);
  }
  fs::remove_all(dir);
}

TEST_CASE("grayscale PNG is replicated to three channels") {
  const auto dir = synth::temp_dir("gray");
  GrayRaster g(3, 2);
  std::uint8_t v = 0;
  for (auto& p : g.pixels()) p = v += 40;
  io::save_png(g, dir / "g.png");
  const auto img = io::load_image(dir / "g.png");
  for (int y = 0; y < 2; ++y) {
    for (int x = 0; x < 3; ++x) CHECK(img.at(x, y) == Rgb{g.at(x, y), g.at(x, y), g.at(x, y)});
  }
  fs::remove_all(dir);
}

TEST_CASE("broken image files") {
  const auto dir = synth::temp_dir("broken");
  io::save_png(RgbRaster(64, 64, Rgb{1, 2, 3}), dir / "full.png");
  const auto bytes = slurp(dir / "full.png");
  spill(dir / "cut.png", bytes.substr(0, bytes.size() / 2));
  expect_kind(ErrorKind::CorruptFile, [&] { (void)io::load_image(dir / "cut.png"); });

  spill(dir / "cut.jpg", std::string("\xFF\xD8\xFF\xE0\x00\x10JFIF\x00", 11));
  expect_kind(ErrorKind::CorruptFile, [&] { (void)io::load_image(dir / "cut.jpg"); });

  spill(dir / "note.png", "not an image at all");
  expect_kind(ErrorKind::UnsupportedFormat, [&] { (void)io::load_image(dir / "note.png"); });

  expect_kind(ErrorKind::Io, [&] { (void)io::load_image(dir / "missing.png"); });

  CHECK(io::is_image_file("a/B.JPEG"));
  CHECK(io::is_image_file("x.png"));
  CHECK_FALSE(io::is_image_file("x.tif"));
  fs::remove_all(dir);
}

TEST_CASE("ARFF round trip is exact") {
  std::mt19937_64 rng(42);
  for (int it = 0; it < 100; ++it) {
    const auto ds = synth::random_dataset(rng);
    const auto back = arff_parse(arff_text(ds));
    CHECK(back == ds);
  }
}

TEST_CASE("ARFF layout") {
  LabeledDataset ds;
  ds.relation = "seeds";
  ds.feature_names = {"Area", "MeanRed"};
  ds.class_names = {"a", "b"};
  ds.X = Matrix(0, 2);
  const double r0[] = {1.5, 0.1};
  const double r1[] = {-2, 3};
  ds.X.push_row(r0);
  ds.X.push_row(r1);
  ds.y = {1, 0};
  CHECK(arff_text(ds) ==
        "@RELATION seeds\n\n"
        "@ATTRIBUTE Area NUMERIC\n"
        "@ATTRIBUTE MeanRed NUMERIC\n"
        "@ATTRIBUTE class {a,b}\n\n"
        "@DATA\n"
        "1.5,0.10000000000000001,b\n"
        "-2,3,a\n");
}

TEST_CASE("ARFF reader tolerance") {
  std::mt19937_64 rng(43);
  const auto ds = synth::random_dataset(rng);
  const auto lf = arff_text(ds);
  std::string crlf;
  crlf += "% leading comment\r\n\r\n";
  std::istringstream lines(lf);
  for (std::string line; std::getline(lines, line);) crlf += line + "\r\n% between\r\n";
  CHECK(arff_parse(crlf) == ds);

  const std::string lower =
      "@relation r\n@attribute x numeric\n@Attribute y REAL\n@attribute class {'p q',r}\n@data\n"
      "1,2,'p q'\n3,4,r % trailing\n";
  const auto parsed = arff_parse(lower);
  CHECK(parsed.class_names == std::vector<std::string>{"p q", "r"});
  CHECK(parsed.y == std::vector<int>{0, 1});
}

TEST_CASE("ARFF errors") {
  const std::string head = "@relation r\n@attribute x numeric\n@attribute class {a,b}\n@data\n";
  try {
    (void)arff_parse(head + "1,a\n2,3,b\n");
    FAIL("expected MalformedArff");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::MalformedArff);
    CHECK(std::string(e.what()).find("line 6") != std::string::npos);
  }
  expect_kind(ErrorKind::MalformedArff, [&] { (void)arff_parse(head + "1,c\n"); });
  expect_kind(ErrorKind::MalformedArff, [&] { (void)arff_parse(head + "?,a\n"); });
  expect_kind(ErrorKind::MalformedArff, [&] { (void)arff_parse(head + "{0 1}\n"); });
  expect_kind(ErrorKind::MalformedArff,
              [&] { (void)arff_parse("@relation r\n@attribute s string\n@attribute class {a}\n@data\n"); });
  expect_kind(ErrorKind::MissingClassAttribute,
              [&] { (void)arff_parse("@relation r\n@attribute x numeric\n@data\n1\n"); });
}

TEST_CASE("CSV") {
  CHECK(io::csv_escape("plain") == "plain");
  CHECK(io::csv_escape("a,b") == "\"a,b\"");
  CHECK(io::csv_escape("say \"hi\"") == "\"say \"\"hi\"\"\"");
  std::mt19937_64 rng(44);
  for (int it = 0; it < 50; ++it) {
    const auto ds = synth::random_dataset(rng);
    std::stringstream s;
    io::write_csv(ds, s);
    const auto back = io::read_csv(s, ds.class_names);
    CHECK(back.X == ds.X);
    CHECK(back.y == ds.y);
    CHECK(back.feature_names == ds.feature_names);
  }
}

TEST_CASE("model archives") {
  const auto ds = synth::gaussian_blobs(3, 20, 6, 2.0, 45);
  std::mt19937_64 rng(46);
  std::normal_distribution<double> n(0.0, 3.0);
  for (const auto kind : ml::kAllClassifiers) {
    INFO(ml::to_string(kind));
    ml::Hyperparameters hp;
    hp.rf_trees = 20;
    hp.knn_k = 3;
    const auto m = ml::train(kind, ds, hp, 7);
    std::stringstream buf;
    io::save_model(m, buf);
    const std::string bytes = buf.str();
    CHECK(bytes.substr(0, 8) == "SEEDLABM");

    std::istringstream in(bytes);
    const auto back = io::load_model(in);
    CHECK(back.kind() == kind);
    CHECK(back.hyperparameters() == hp);
    CHECK(back.standardizer() == m.standardizer());
    CHECK(back.class_names() == m.class_names());
    CHECK(back.feature_names() == m.feature_names());
    for (int it = 0; it < 100; ++it) {
      std::vector<double> x(6);
      for (auto& v : x) v = n(rng);
      CHECK(back.predict(x) == m.predict(x));
      CHECK(back.predict_scores(x) == m.predict_scores(x));
    }
    std::stringstream again;
    io::save_model(back, again);
    CHECK(again.str() == bytes);

    std::string flipped = bytes;
    flipped[bytes.size() / 2] = static_cast<char>(flipped[bytes.size() / 2] ^ 0x10);
    expect_kind(ErrorKind::DigestMismatch, [&] {
      std::istringstream f(flipped);
      (void)io::load_model(f);
    });

    std::string future = bytes;
    future[8] = 2;
    expect_kind(ErrorKind::VersionUnsupported, [&] {
      std::istringstream f(future);
      (void)io::load_model(f);
    });

    std::string junk = bytes;
    junk[0] = 'X';
    expect_kind(ErrorKind::CorruptFile, [&] {
      std::istringstream f(junk);
      (void)io::load_model(f);
    });
    CHECK_THROWS_AS(
        [&] {
          std::istringstream f(bytes.substr(0, bytes.size() - 5));
          (void)io::load_model(f);
        }(),
        Error);
  }
}

TEST_CASE("feature schema check") {
  auto ds = synth::gaussian_blobs(2, 10, 64, 3.0, 47);
  const auto m = ml::train(ml::ClassifierKind::NaiveBayes, ds, {}, 1);
  io::check_feature_schema(m, ds);
  std::vector<std::size_t> cols(63);
  std::iota(cols.begin(), cols.end(), 0);
  const auto narrower = ds.select_columns(cols);
  expect_kind(ErrorKind::FeatureSchemaMismatch, [&] { io::check_feature_schema(m, narrower); });
  auto renamed = ds;
  std::swap(renamed.feature_names[3], renamed.feature_names[4]);
  expect_kind(ErrorKind::FeatureSchemaMismatch, [&] { io::check_feature_schema(m, renamed); });
}

TEST_CASE("directory ingestion") {
  const auto root = make_tree("ingest", 2);
  const auto r = io::ingest_directory(root, {});
  CHECK(r.errors.empty());
  CHECK(r.files_read == 4);
  CHECK(r.dataset.size() == 12);
  CHECK(r.dataset.dims() == 64);
  CHECK(r.dataset.class_names == std::vector<std::string>{"lentil", "pea"});
  CHECK(r.dataset.y == std::vector<int>{0, 0, 0, 0, 0, 0, 1, 1, 1, 1, 1, 1});

  io::IngestOptions colour;
  colour.categories = FeatureCategory::Color;
  colour.jobs = 3;
  const auto c = io::ingest_directory(root, colour);
  CHECK(c.dataset.dims() == 16);
  for (std::size_t i = 0; i < 12; ++i) {
    CHECK(std::equal(c.dataset.X.row(i).begin(), c.dataset.X.row(i).end(), r.dataset.X.row(i).end() - 16));
  }

  std::stringstream a, b;
  io::write_csv(r.dataset, a);
  io::IngestOptions many;
  many.jobs = 4;
  io::write_csv(io::ingest_directory(root, many).dataset, b);
  CHECK(a.str() == b.str());
  fs::remove_all(root);
}

TEST_CASE("ingestion survives an unreadable file") {
  const auto root = make_tree("partial", 5);
  spill(root / "pea" / "scan2.png", "garbage bytes");
  const auto r = io::ingest_directory(root, {});
  CHECK(r.files_read == 9);
  REQUIRE(r.errors.size() == 1);
  CHECK(r.errors[0].file.filename() == "scan2.png");
  CHECK(r.dataset.size() == 27);
  fs::remove_all(root);
}

TEST_CASE("ingestion from a label sidecar") {
  const auto root = synth::temp_dir("sidecar");
  synth::SeedLook look;
  io::save_png(synth::seed_scan(2, look, 5), root / "b.png");
  io::save_png(synth::seed_scan(4, look, 6), root / "a.png");
  spill(root / "labels.csv", "file,label\n# comment\nb.png,wheat\na.png,barley\n");
  const auto r = io::ingest_directory(root, {});
  CHECK(r.dataset.class_names == std::vector<std::string>{"barley", "wheat"});
  CHECK(r.dataset.y == std::vector<int>{0, 0, 0, 0, 1, 1});
  fs::remove_all(root);

  expect_kind(ErrorKind::Io, [&] { (void)io::ingest_directory(root / "nope", {}); });
}
