#include <gtest/gtest.h>

#include <cmath>
#include <string>

#include "netcov/netcov.h"

namespace {

const char* kGhz = R"({"outcomes": [2, 2, 2], "table": [
  {"x": [0, 0, 0], "p": 0.5}, {"x": [1, 1, 1], "p": 0.5}]})";

const char* kProduct = R"({"outcomes": [2, 2, 2], "table": [
  {"x": [0, 0, 0], "p": 0.125}, {"x": [0, 0, 1], "p": 0.125}, {"x": [0, 1, 0], "p": 0.125},
  {"x": [0, 1, 1], "p": 0.125}, {"x": [1, 0, 0], "p": 0.125}, {"x": [1, 0, 1], "p": 0.125},
  {"x": [1, 1, 0], "p": 0.125}, {"x": [1, 1, 1], "p": 0.125}]})";

std::string take(char* s) {
  std::string out = s ? s : "";
  netcov_string_free(s);
  return out;
}

}  // namespace

TEST(CApi, GhzIsIncompatible) {
  netcov_distribution* d = nullptr;
  netcov_topology* t = nullptr;
  ASSERT_EQ(netcov_distribution_parse(kGhz, &d), NETCOV_OK);
  ASSERT_EQ(netcov_topology_builtin("triangle", &t), NETCOV_OK);
  netcov_verdict* v = nullptr;
  ASSERT_EQ(netcov_test(d, t, 0.0, &v), NETCOV_OK);
  EXPECT_EQ(netcov_verdict_get_kind(v), NETCOV_INCOMPATIBLE);
  EXPECT_NEAR(netcov_verdict_get_value(v), 0.5, 1e-6);
  char* json = nullptr;
  ASSERT_EQ(netcov_verdict_to_json(v, 0, &json), NETCOV_OK);
  EXPECT_NE(take(json).find("\"incompatible\""), std::string::npos);
  netcov_verdict_free(v);
  netcov_topology_free(t);
  netcov_distribution_free(d);
}

TEST(CApi, ProductIsCompatibleWithCertificate) {
  netcov_distribution* d = nullptr;
  netcov_topology* t = nullptr;
  ASSERT_EQ(netcov_distribution_parse(kProduct, &d), NETCOV_OK);
  ASSERT_EQ(netcov_topology_builtin("triangle", &t), NETCOV_OK);
  netcov_verdict* v = nullptr;
  ASSERT_EQ(netcov_test(d, t, 0.0, &v), NETCOV_OK);
  EXPECT_EQ(netcov_verdict_get_kind(v), NETCOV_COMPATIBLE);
  char* json = nullptr;
  ASSERT_EQ(netcov_verdict_to_json(v, 1, &json), NETCOV_OK);
  EXPECT_NE(take(json).find("\"certificate\""), std::string::npos);
  netcov_verdict_free(v);
  netcov_topology_free(t);
  netcov_distribution_free(d);
}

TEST(CApi, Errors) {
  netcov_distribution* d = nullptr;
  EXPECT_EQ(netcov_distribution_parse("{\"outcomes\": [2,", &d), NETCOV_ERR_PARSE);
  EXPECT_EQ(d, nullptr);
  EXPECT_NE(std::string(netcov_last_error()).find("<distribution>:1:"), std::string::npos);
  EXPECT_EQ(netcov_distribution_load("/nonexistent/file.json", &d), NETCOV_ERR_IO);
  netcov_topology* t = nullptr;
  EXPECT_EQ(netcov_topology_builtin("pentagon", &t), NETCOV_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(netcov_topology_parse(R"({"children": ["A"], "parents": [{"name": "s", "children": ["B"]}]})", &t),
            NETCOV_ERR_INVALID_INPUT);
  EXPECT_EQ(netcov_test(nullptr, nullptr, 0.0, nullptr), NETCOV_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(netcov_verdict_get_kind(nullptr), NETCOV_INCONCLUSIVE);
  // A successful call clears the message.
  ASSERT_EQ(netcov_topology_builtin("triangle", &t), NETCOV_OK);
  EXPECT_STREQ(netcov_last_error(), "");
  netcov_topology_free(t);
}

TEST(CApi, Witnesses) {
  char* w = nullptr;
  ASSERT_EQ(netcov_witness_emit("ghz", 0, &w), NETCOV_OK);
  const std::string ghz = take(w);
  int valid = 0;
  double violation = 1.0;
  ASSERT_EQ(netcov_witness_validate(ghz.c_str(), 1e-10, &valid, &violation), NETCOV_OK);
  EXPECT_EQ(valid, 1);
  netcov_distribution* d = nullptr;
  ASSERT_EQ(netcov_distribution_parse(kGhz, &d), NETCOV_OK);
  double value = 0.0;
  ASSERT_EQ(netcov_witness_evaluate(ghz.c_str(), d, &value), NETCOV_OK);
  EXPECT_NEAR(value, 0.5, 1e-12);

  // The reflected w2n(3) sees the same GHZ data through the reflection.
  ASSERT_EQ(netcov_witness_emit("w2n", 3, &w), NETCOV_OK);
  const std::string w3 = take(w);
  ASSERT_EQ(netcov_witness_evaluate(w3.c_str(), d, &value), NETCOV_OK);
  EXPECT_NEAR(value, 4 * 3 * (0.25 * 1 - 0.0), 1e-12);
  EXPECT_EQ(netcov_witness_emit("w2n", 2, &w), NETCOV_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(netcov_witness_emit("zeta", 3, &w), NETCOV_ERR_INVALID_ARGUMENT);
  netcov_distribution_free(d);
}

TEST(CApi, SimulateRoundTrip) {
  netcov_distribution* d = nullptr;
  ASSERT_EQ(netcov_simulate(R"({"scenario": "pr-mixture", "visibility": 1.0})", &d), NETCOV_OK);
  char* text = nullptr;
  ASSERT_EQ(netcov_distribution_to_json(d, &text), NETCOV_OK);
  netcov_distribution* back = nullptr;
  ASSERT_EQ(netcov_distribution_parse(take(text).c_str(), &back), NETCOV_OK);
  netcov_topology* t = nullptr;
  ASSERT_EQ(netcov_topology_builtin("star-2", &t), NETCOV_OK);
  netcov_verdict *a = nullptr, *b = nullptr;
  ASSERT_EQ(netcov_test(d, t, 0.0, &a), NETCOV_OK);
  ASSERT_EQ(netcov_test(back, t, 0.0, &b), NETCOV_OK);
  EXPECT_EQ(netcov_verdict_get_kind(a), NETCOV_INCOMPATIBLE);
  EXPECT_EQ(netcov_verdict_get_kind(a), netcov_verdict_get_kind(b));
  EXPECT_EQ(netcov_verdict_get_value(a), netcov_verdict_get_value(b));
  netcov_verdict_free(a);
  netcov_verdict_free(b);
  netcov_topology_free(t);
  netcov_distribution_free(back);
  netcov_distribution_free(d);
}

TEST(CApi, Baselines) {
  netcov_distribution* d = nullptr;
  ASSERT_EQ(netcov_distribution_parse(kGhz, &d), NETCOV_OK);
  for (const char* name : {"finner", "finner-opt", "entropic", "inflation"}) {
    char* report = nullptr;
    int rejected = 0;
    ASSERT_EQ(netcov_baseline(name, d, 0, &report, &rejected), NETCOV_OK) << name;
    EXPECT_EQ(rejected, 1) << name;
    netcov_string_free(report);
  }
  char* report = nullptr;
  EXPECT_EQ(netcov_baseline("npa", d, 0, &report, nullptr), NETCOV_ERR_INVALID_ARGUMENT);
  netcov_distribution_free(d);
}

TEST(CApi, Scan) {
  char* csv = nullptr;
  ASSERT_EQ(netcov_scan(R"({"family": "pq-3", "topology": "triangle", "mode": "bisection", "p_values": [0.2]})", &csv),
            NETCOV_OK);
  const std::string text = take(csv);
  EXPECT_EQ(text.rfind("p,q_threshold,test\n0.2,", 0), 0u) << text;
  EXPECT_EQ(netcov_scan(R"({"step": -1})", &csv), NETCOV_ERR_INVALID_ARGUMENT);
}
