#include <gtest/gtest.h>

#include <algorithm>
#include <string>

#include "ordrecon/ordrecon.h"

namespace {

std::string take(char* s) {
  std::string out = s ? s : "";
  ordrecon_string_free(s);
  return out;
}

}  // namespace

TEST(CApi, PosetAndDeck) {
  ordrecon_poset* p = nullptr;
  ASSERT_EQ(ordrecon_poset_parse("3\n0<1\n0<2\n", &p), ORDRECON_OK);
  int n = 0;
  EXPECT_EQ(ordrecon_poset_size(p, &n), ORDRECON_OK);
  EXPECT_EQ(n, 3);
  char* cert = nullptr;
  ASSERT_EQ(ordrecon_poset_cert(p, &cert), ORDRECON_OK);
  const std::string c = take(cert);

  ordrecon_deck* d = nullptr;
  ASSERT_EQ(ordrecon_deck_of(p, &d), ORDRECON_OK);
  char* text = nullptr;
  ASSERT_EQ(ordrecon_deck_format(d, &text), ORDRECON_OK);
  const std::string deck_text = take(text);
  EXPECT_EQ(deck_text.rfind("deck n=3\n", 0), 0U);

  char* inv = nullptr;
  ASSERT_EQ(ordrecon_deck_invert(d, &inv), ORDRECON_OK);
  const std::string certs = take(inv);
  EXPECT_NE(certs.find(c), std::string::npos);
  EXPECT_EQ(std::count(certs.begin(), certs.end(), '\n'), 2);

  ordrecon_deck* again = nullptr;
  ASSERT_EQ(ordrecon_deck_parse(deck_text.c_str(), &again), ORDRECON_OK);
  char* text2 = nullptr;
  ASSERT_EQ(ordrecon_deck_format(again, &text2), ORDRECON_OK);
  EXPECT_EQ(take(text2), deck_text);

  ordrecon_deck_free(again);
  ordrecon_deck_free(d);
  ordrecon_poset_free(p);
}

TEST(CApi, Errors) {
  ordrecon_poset* p = nullptr;
  EXPECT_EQ(ordrecon_poset_parse("2\n0<1\n1<0\n", &p), ORDRECON_E_CYCLE);
  EXPECT_EQ(p, nullptr);
  EXPECT_STRNE(ordrecon_last_error(), "");
  EXPECT_EQ(ordrecon_poset_from_cert("zz", &p), ORDRECON_E_PARSE);
  EXPECT_EQ(ordrecon_poset_parse(nullptr, &p), ORDRECON_E_ARGUMENT);
  ordrecon_findings* f = nullptr;
  EXPECT_EQ(ordrecon_check("no-such", 5, 1, nullptr, &f), ORDRECON_E_UNKNOWN_PROPERTY);
  EXPECT_STREQ(ordrecon_status_name(ORDRECON_E_UNKNOWN_PROPERTY), "unknown-property");

  ordrecon_deck* d = nullptr;
  ASSERT_EQ(ordrecon_deck_parse("deck n=4\n2 3:e0\n2 3:00\n", &d), ORDRECON_OK);
  char* out = nullptr;
  EXPECT_EQ(ordrecon_deck_invert(d, &out), ORDRECON_E_INCONSISTENT_DECK);
  ordrecon_deck_free(d);
  size_t count = 0;
  EXPECT_EQ(ordrecon_enumerate(11, "all", nullptr, 1, &out, &count), ORDRECON_E_CAP_EXCEEDED);
}

TEST(CApi, EnumerateAndRegistry) {
  char* out = nullptr;
  size_t count = 0;
  ASSERT_EQ(ordrecon_enumerate(4, "all", nullptr, 1, &out, &count), ORDRECON_OK);
  EXPECT_EQ(count, 16U);
  const std::string certs = take(out);
  EXPECT_EQ(std::count(certs.begin(), certs.end(), '\n'), 16);
  ASSERT_GT(ordrecon_property_count(), 20U);
  const char* id = nullptr;
  int lo = 0, hi = 0;
  ASSERT_EQ(ordrecon_property_info(0, &id, nullptr, nullptr, &lo, &hi), ORDRECON_OK);
  EXPECT_STREQ(id, "recon-conjecture");
  EXPECT_EQ(ordrecon_property_info(1000, &id, nullptr, nullptr, nullptr, nullptr), ORDRECON_E_ARGUMENT);
}

TEST(CApi, CheckAndReplay) {
  ordrecon_findings* f = nullptr;
  ASSERT_EQ(ordrecon_check("recon-conjecture", 4, 2, nullptr, &f), ORDRECON_OK);
  ASSERT_EQ(ordrecon_findings_count(f), 1U);
  char* line = nullptr;
  ASSERT_EQ(ordrecon_findings_line(f, 0, &line), ORDRECON_OK);
  EXPECT_EQ(take(line).rfind("FAIL recon-conjecture witnesses=3:", 0), 0U);
  char* json = nullptr;
  ASSERT_EQ(ordrecon_findings_json(f, &json), ORDRECON_OK);
  const std::string text = take(json);
  ordrecon_findings_free(f);

  ordrecon_findings* again = nullptr;
  ASSERT_EQ(ordrecon_replay(text.c_str(), &again), ORDRECON_OK);
  EXPECT_EQ(ordrecon_findings_count(again), 1U);
  EXPECT_EQ(ordrecon_findings_line(again, 5, &line), ORDRECON_E_ARGUMENT);
  ordrecon_findings_free(again);
}

TEST(CApi, ReconstructAndClassify) {
  ordrecon_poset* p = nullptr;
  ASSERT_EQ(ordrecon_poset_from_cert("6:3d9c", &p), ORDRECON_OK);
  ordrecon_deck* d = nullptr;
  ASSERT_EQ(ordrecon_deck_of(p, &d), ORDRECON_OK);
  char* report = nullptr;
  ASSERT_EQ(ordrecon_reconstruct(d, &report), ORDRECON_OK);
  EXPECT_NE(take(report).find("reconstructed 6:3d9c"), std::string::npos);
  ASSERT_EQ(ordrecon_classify(d, &report), ORDRECON_OK);
  const std::string text = take(report);
  EXPECT_NE(text.find("because="), std::string::npos);
  EXPECT_NE(text.find("dismantlable "), std::string::npos);
  ordrecon_deck_free(d);
  ordrecon_poset_free(p);

  char* ps = nullptr;
  ASSERT_EQ(ordrecon_find_pseudosimilar(6, 1, &ps), ORDRECON_OK);
  const std::string list = take(ps);
  EXPECT_NE(list.find("6:09e0"), std::string::npos);
  EXPECT_NE(list.find("nonrigid-card"), std::string::npos);
}
