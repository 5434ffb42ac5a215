// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <random>

#include "oracle_helpers.hpp"
#include "risopt/impedance_set.hpp"

using namespace risopt;

namespace {

std::filesystem::path temp_file(const char* tag) {
  return std::filesystem::temp_directory_path() /
         (std::string("risopt_io_test_") + tag + ".json");
}

}  // namespace

TEST_CASE("impedance files round-trip bit-exactly") {
  std::mt19937 rng(7);
  const ImpedanceSet iset = oracle::random_instance(5, rng).iset;
  const auto path = temp_file("roundtrip");
  save_impedances(iset, path.string());
  const ImpedanceSet back = load_impedances(path.string());
  CHECK(back.z_tt == iset.z_tt);
  CHECK(back.z_rr == iset.z_rr);
  CHECK(back.z_tr == iset.z_tr);
  CHECK(back.z_ts == iset.z_ts);
  CHECK(back.z_rs == iset.z_rs);
  CHECK(back.z_ss == iset.z_ss);
  std::filesystem::remove(path);
}

TEST_CASE("reciprocity violations are rejected on load") {
  std::mt19937 rng(8);
  ImpedanceSet iset = oracle::random_instance(3, rng).iset;
  iset.z_ss(0, 1) += std::complex<double>(1e-3, 0.0);
  const auto path = temp_file("reciprocity");
  // save path does not re-validate; the loader must
  save_impedances(iset, path.string());
  CHECK_THROWS_AS(load_impedances(path.string()), FileFormatError);
  std::filesystem::remove(path);
}

TEST_CASE("dimension mismatches are rejected on load") {
  std::mt19937 rng(9);
  const ImpedanceSet iset = oracle::random_instance(3, rng).iset;
  nlohmann::json j = impedances_to_json(iset);

  SECTION("declared n_ris disagrees with the matrix") {
    j["n_ris"] = 4;
    const auto path = temp_file("dim_n");
    std::ofstream(path) << j.dump();
    CHECK_THROWS_AS(load_impedances(path.string()), FileFormatError);
    std::filesystem::remove(path);
  }
  SECTION("short matrix row") {
    j["z_ss"][1].erase(2);
    const auto path = temp_file("dim_row");
    std::ofstream(path) << j.dump();
    CHECK_THROWS_AS(load_impedances(path.string()), FileFormatError);
    std::filesystem::remove(path);
  }
  SECTION("missing row vector entry") {
    j["z_ts"].erase(0);
    const auto path = temp_file("dim_ts");
    std::ofstream(path) << j.dump();
    CHECK_THROWS_AS(load_impedances(path.string()), FileFormatError);
    std::filesystem::remove(path);
  }
}

TEST_CASE("malformed json is reported as a file error") {
  const auto path = temp_file("garbage");
  std::ofstream(path) << "{ not json";
  CHECK_THROWS_AS(load_impedances(path.string()), FileFormatError);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(load_impedances("/nonexistent/impedances.json"), FileFormatError);
}
