#include <gtest/gtest.h>

#include "smcsweep/blackbox/wire.hpp"

using namespace smcsweep::blackbox;

TEST(Wire, EncodeReset) {
  EXPECT_EQ(wire::encode_reset(42), "reset 42\n");
  EXPECT_EQ(wire::encode_reset(18446744073709551615ULL), "reset 18446744073709551615\n");
}

TEST(Wire, EncodeNext) { EXPECT_EQ(wire::encode_next(), "next\n"); }

TEST(Wire, EncodeObserve) {
  EXPECT_EQ(wire::encode_observe("GDP_GROWTH"), "GDP_GROWTH\n");
  EXPECT_EQ(wire::encode_observe("MARKET_SHARE1"), "MARKET_SHARE1\n");
}

TEST(Wire, ObserveNamesThatBreakTheProtocol) {
  EXPECT_THROW(wire::encode_observe(""), ProtocolMisuse);
  EXPECT_THROW(wire::encode_observe("A B"), ProtocolMisuse);
  EXPECT_THROW(wire::encode_observe("A\n"), ProtocolMisuse);
  EXPECT_THROW(wire::encode_observe("next"), ProtocolMisuse);
  EXPECT_THROW(wire::encode_observe("reset"), ProtocolMisuse);
  EXPECT_THROW(wire::encode_observe("resetX"), ProtocolMisuse);
}

TEST(Wire, ParseAcceptedForms) {
  EXPECT_EQ(wire::parse_response("OUTPUTMV:0.03"), 0.03);
  EXPECT_EQ(wire::parse_response("OUTPUTMV:-1"), -1.0);
  EXPECT_EQ(wire::parse_response("OUTPUTMV:0.0"), 0.0);
  EXPECT_EQ(wire::parse_response("OUTPUTMV:3.2e-05"), 3.2e-05);
  EXPECT_EQ(wire::parse_response("OUTPUTMV:1E+3"), 1000.0);
  EXPECT_EQ(wire::parse_response("OUTPUTMV:7\r"), 7.0);
}

TEST(Wire, ParseRejectedForms) {
  EXPECT_FALSE(wire::parse_response("0.03"));
  EXPECT_FALSE(wire::parse_response("OUTPUT:0.03"));
  EXPECT_FALSE(wire::parse_response("outputmv:0.03"));
  EXPECT_FALSE(wire::parse_response("OUTPUTMV:"));
  EXPECT_FALSE(wire::parse_response("OUTPUTMV:abc"));
  EXPECT_FALSE(wire::parse_response("OUTPUTMV:1.5x"));
  EXPECT_FALSE(wire::parse_response("OUTPUTMV:0,5"));
  EXPECT_FALSE(wire::parse_response("OUTPUTMV:nan"));
  EXPECT_FALSE(wire::parse_response("OUTPUTMV:inf"));
  EXPECT_FALSE(wire::parse_response(" OUTPUTMV:1"));
}

TEST(Wire, RoundTripsShortestDoubles) {
  for (double v : {0.1, -2.5e-300, 123456789.125, 1.0 / 3.0}) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "OUTPUTMV:%.17g", v);
    EXPECT_EQ(wire::parse_response(buf), v);
  }
}
