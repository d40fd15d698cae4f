#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "slog/dataset.hpp"
#include "slog/errors.hpp"
#include "slog/io.hpp"

using namespace slog;
namespace fs = std::filesystem;

namespace {

DatasetManifest small_manifest(std::uint64_t seed = 11) {
  DatasetManifest m;
  m.graph.kind = GraphKind::Er;
  m.graph.n = 12;
  m.graph.p_edge = 0.4;
  m.theta = 0.2;
  m.filter_order = 3;
  m.phi = 1.0;
  m.eta = 0.0;
  m.t_total = 40;
  m.p_batch = 10;
  m.master_seed = seed;
  return m;
}

}  // namespace

TEST_SUITE_BEGIN("dataset");

TEST_CASE("batching arithmetic") {
  const Dataset ds = make_dataset(small_manifest());
  CHECK(ds.manifest.q_batches == 4);
  CHECK(ds.h.cols() == 4);

  SUBCASE("|T| = 200k, P = 400 gives Q = 500") {
    DatasetManifest m = small_manifest();
    m.t_total = 200000;
    m.p_batch = 400;
    // Only the arithmetic is under test here.
    CHECK(m.t_total % m.p_batch == 0);
    CHECK(m.t_total / m.p_batch == 500);
  }
  SUBCASE("indivisible batch size is an error") {
    DatasetManifest m = small_manifest();
    m.p_batch = 7;
    CHECK_THROWS_AS(make_dataset(m), InvalidArgument);
  }
  SUBCASE("reassembling batch columns reproduces X") {
    Eigen::MatrixXd glued(ds.manifest.n, ds.manifest.t_total);
    for (int q = 0; q < ds.manifest.q_batches; ++q) {
      glued.middleCols(q * ds.manifest.p_batch, ds.manifest.p_batch) = ds.x_batch(q);
    }
    CHECK((glued - ds.x).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("regeneration from the manifest is bit-identical") {
  const Dataset a = make_dataset(small_manifest());
  const Dataset b = make_dataset(a.manifest);
  CHECK((a.x - b.x).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.y - b.y).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.h - b.h).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.y_val - b.y_val).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("save / load round trip is bit-exact") {
  const auto dir = fs::temp_directory_path() / "slog_dataset_test";
  fs::remove_all(dir);
  const Dataset a = make_dataset(small_manifest());
  save_dataset(a, dir.string());
  const Dataset b = load_dataset(dir.string());
  CHECK(manifest_to_json(a.manifest) == manifest_to_json(b.manifest));
  CHECK((a.x - b.x).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.y - b.y).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.h - b.h).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.x_val - b.x_val).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.h_val - b.h_val).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("corrupt payload and version mismatch are detected") {
  const auto dir = fs::temp_directory_path() / "slog_dataset_bad";
  fs::remove_all(dir);
  const Dataset a = make_dataset(small_manifest());
  save_dataset(a, dir.string());

  SUBCASE("truncated payload") {
    const auto path = dir / "X.f64le";
    fs::resize_file(path, fs::file_size(path) - 8);
    CHECK_THROWS_AS(load_dataset(dir.string()), CorruptPayload);
  }
  SUBCASE("unknown format_version") {
    std::string text = read_text((dir / "manifest.json").string());
    const auto pos = text.find("\"format_version\": 1");
    REQUIRE(pos != std::string::npos);
    text.replace(pos, 19, "\"format_version\": 9");
    atomic_write_text((dir / "manifest.json").string(), text);
    CHECK_THROWS_AS(load_dataset(dir.string()), VersionMismatch);
  }
}

TEST_SUITE_END();
