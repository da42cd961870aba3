#include <doctest.h>

#include <cstdint>
#include <filesystem>
#include <fstream>

#include "alice/checkpoint.hpp"
#include "alice/config.hpp"
#include "alice/dataset_io.hpp"

using alice::DatasetFormat;
using alice::Error;
using alice::ErrorCode;
using alice::Rng;
using alice::RunConfig;
using alice::Sample;

namespace {

namespace fs = std::filesystem;

struct TempDir {
  fs::path path;
  TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_SUITE("io") {

TEST_CASE("csv loading and validation") {
  TempDir dir("alice_io_csv");
  alice::write_text_file(dir.file("ok.csv"), "0,1.5,2.5\n1,0.25,-1\n0,3,4\n");
  const auto samples = alice::load_samples(dir.file("ok.csv"), DatasetFormat::Csv);
  REQUIRE(samples.size() == 3);
  CHECK(samples[0].label == 0);
  CHECK(samples[1].payload.values == alice::Vec{0.25, -1.0});
  CHECK(samples[2].id == 2);

  alice::write_text_file(dir.file("gap.csv"), "0,1\n2,1\n");
  CHECK_THROWS_AS(alice::load_samples(dir.file("gap.csv"), DatasetFormat::Csv), Error);
  try {
    alice::load_samples(dir.file("gap.csv"), DatasetFormat::Csv);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonContiguousLabels);
  }

  alice::write_text_file(dir.file("empty.csv"), "");
  CHECK_THROWS_AS(alice::load_samples(dir.file("empty.csv"), DatasetFormat::Csv), Error);
  try {
    alice::load_samples(dir.file("empty.csv"), DatasetFormat::Csv);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EmptyDataset);
  }

  alice::write_text_file(dir.file("bad.csv"), "0,1.5\n0,oops\n");
  try {
    alice::load_samples(dir.file("bad.csv"), DatasetFormat::Csv);
    FAIL("expected ParseError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ParseError);
    CHECK(e.detail().find(":2") != std::string::npos);  // line number surfaced
  }
}

TEST_CASE("image manifest loading") {
  TempDir dir("alice_io_img");

  auto write_tensor = [&](const std::string& name, std::uint32_t w, std::uint32_t h,
                          std::uint32_t c, bool truncate) {
    std::ofstream out(dir.file(name), std::ios::binary);
    out.write(reinterpret_cast<const char*>(&w), 4);
    out.write(reinterpret_cast<const char*>(&h), 4);
    out.write(reinterpret_cast<const char*>(&c), 4);
    const std::size_t n = static_cast<std::size_t>(w) * h * c;
    std::vector<unsigned char> bytes(truncate ? n / 2 : n);
    for (std::size_t i = 0; i < bytes.size(); ++i) bytes[i] = static_cast<unsigned char>(i * 7);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
  };

  write_tensor("a.tns", 4, 3, 2, false);
  write_tensor("b.tns", 4, 3, 2, false);
  alice::write_text_file(dir.file("manifest.csv"), "0,0,a.tns\n1,1,b.tns\n");
  const auto samples = alice::load_samples(dir.file("manifest.csv"), DatasetFormat::Image);
  REQUIRE(samples.size() == 2);
  CHECK(samples[0].payload.kind == alice::PayloadKind::Image);
  CHECK(samples[0].payload.width == 4);
  CHECK(samples[0].payload.height == 3);
  CHECK(samples[0].payload.channels == 2);
  CHECK(samples[0].payload.values.size() == 24);
  CHECK(samples[0].payload.values[1] == doctest::Approx(7.0 / 255.0));

  write_tensor("bad.tns", 4, 3, 2, true);
  alice::write_text_file(dir.file("manifest_bad.csv"), "0,0,bad.tns\n1,1,a.tns\n");
  try {
    alice::load_samples(dir.file("manifest_bad.csv"), DatasetFormat::Image);
    FAIL("expected ParseError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ParseError);
    CHECK(e.detail().find("bad.tns") != std::string::npos);  // names the file
  }
}

TEST_CASE("synth datasets are seeded and byte-stable") {
  TempDir dir("alice_io_synth");
  alice::SynthConfig cfg;
  cfg.classes = 10;
  cfg.dim = 16;
  cfg.per_class_train = 60;
  cfg.per_class_test = 5;
  cfg.seed = 3;

  alice::write_synth_dataset(cfg, dir.file("train1.csv"), dir.file("test1.csv"));
  alice::write_synth_dataset(cfg, dir.file("train2.csv"), dir.file("test2.csv"));
  CHECK(alice::read_text_file(dir.file("train1.csv")) ==
        alice::read_text_file(dir.file("train2.csv")));
  CHECK(alice::read_text_file(dir.file("test1.csv")) ==
        alice::read_text_file(dir.file("test2.csv")));

  const auto samples = alice::load_samples(dir.file("train1.csv"), DatasetFormat::Csv);
  CHECK(samples.size() == 600);
  CHECK(samples.front().payload.values.size() == 16);

  // spread 0: every sample equals its class center.
  alice::SynthConfig degenerate = cfg;
  degenerate.spread = 0.0;
  degenerate.per_class_train = 3;
  alice::write_synth_dataset(degenerate, dir.file("zero.csv"), dir.file("zero_test.csv"));
  const auto zero = alice::load_samples(dir.file("zero.csv"), DatasetFormat::Csv);
  CHECK(zero[0].payload.values == zero[1].payload.values);
  CHECK(zero[1].payload.values == zero[2].payload.values);
}

TEST_CASE("run config parse, render, round trip") {
  const std::string text =
      "# experiment\n"
      "[dataset]\n"
      "format = csv\n"
      "train = data/train.csv\n"
      "test = data/test.csv\n"
      "[protocol]\n"
      "base_classes = 10\n"
      "steps = 4\n"
      "way = 2\n"
      "shot = 5\n"
      "seed = 11\n"
      "[train]\n"
      "epochs = 3\n"
      "loss = ce\n"
      "class_aug = off\n"
      "extractor_hidden = 32,16\n"
      "seed = 11\n"
      "[eval]\n"
      "balance = off\n"
      "[output]\n"
      "dir = out/run1\n";

  const RunConfig cfg = alice::parse_run_config(text);
  CHECK(cfg.protocol.base_classes == 10);
  CHECK(cfg.protocol.shot == 5);
  CHECK(cfg.train.epochs == 3);
  CHECK(cfg.train.loss_kind == alice::LossKind::CrossEntropy);
  CHECK_FALSE(cfg.train.class_aug);
  CHECK(cfg.train.shape.extractor_hidden == std::vector<int>{32, 16});
  CHECK_FALSE(cfg.eval.balanced);
  CHECK(cfg.out_dir == "out/run1");

  // Render -> parse -> render is a fixed point.
  const std::string rendered = alice::render_run_config(cfg);
  const RunConfig reparsed = alice::parse_run_config(rendered);
  CHECK(alice::render_run_config(reparsed) == rendered);

  CHECK_THROWS_AS(alice::parse_run_config("[train]\nbogus_key = 1\n"), Error);
  CHECK_THROWS_AS(alice::parse_run_config("[nonsense]\n"), Error);
  CHECK_THROWS_AS(alice::parse_run_config("loose = 1\n"), Error);
  try {
    alice::parse_run_config("[train]\nepochs = soon\n");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidConfig);
    CHECK(e.detail().find("line 2") != std::string::npos);
  }
}

TEST_CASE("checkpoint round trip is bit exact") {
  TempDir dir("alice_io_ckpt");
  alice::ModelShape shape;
  shape.extractor_hidden = {6};
  shape.embedding_dim = 4;
  shape.projection_hidden = 5;
  Rng rng(91);
  const alice::ModelParams params = alice::init_params(shape, 7, 9, true, rng);

  const std::string bytes = alice::serialize_model(params);
  const alice::ModelParams back = alice::deserialize_model(bytes);
  CHECK(alice::serialize_model(back) == bytes);

  alice::save_checkpoint(params, dir.file("m.ckpt"));
  const alice::ModelParams loaded = alice::load_checkpoint(dir.file("m.ckpt"));
  CHECK(alice::serialize_model(loaded) == bytes);
  CHECK(loaded.extractor.input_dim() == 7);
  CHECK(loaded.classifier.size() == 9);

  CHECK_THROWS_AS(alice::deserialize_model("not a checkpoint"), Error);
  CHECK_THROWS_AS(alice::deserialize_model(bytes.substr(0, bytes.size() / 2)), Error);
}

}  // TEST_SUITE
