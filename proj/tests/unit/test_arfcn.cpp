// SPDX-License-Identifier: MIT

#include <doctest.h>

#include "gcw/arfcn.hpp"

using namespace gcw;
using namespace gcw::monitor;

TEST_CASE("downlink frequency for standard and extended channels") {
  CHECK(arfcn_to_downlink_hz(0) == 935'000'000);
  CHECK(arfcn_to_downlink_hz(1) == 935'200'000);
  CHECK(arfcn_to_downlink_hz(124) == 959'800'000);
  CHECK(arfcn_to_downlink_hz(975) == 925'200'000);
  CHECK(arfcn_to_downlink_hz(1023) == 934'800'000);
}

TEST_CASE("uplink is 45 MHz below downlink") {
  CHECK(arfcn_to_uplink_hz(1) == 890'200'000);
  CHECK(arfcn_to_uplink_hz(975) == 880'200'000);
}

TEST_CASE("invalid ARFCNs are rejected") {
  for (std::uint32_t arfcn : {125u, 500u, 974u, 1024u, 4000u}) {
    CHECK_FALSE(arfcn_valid_egsm(arfcn));
    try {
      arfcn_to_downlink_hz(arfcn);
      FAIL("expected InvalidArfcn");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::invalid_arfcn);
    }
  }
}

TEST_CASE("every valid channel lands inside the E-GSM downlink band") {
  for (std::uint32_t arfcn = 0; arfcn <= 1023; ++arfcn) {
    if (!arfcn_valid_egsm(arfcn)) continue;
    auto hz = arfcn_to_downlink_hz(arfcn);
    CHECK(hz >= 925'200'000);
    CHECK(hz <= 959'800'000);
    CHECK(arfcn_from_downlink_hz(hz) == arfcn);
  }
}

TEST_CASE("frequency-to-ARFCN rejects off-grid and out-of-band values") {
  CHECK(arfcn_from_downlink_hz(935'200'000) == 1);
  CHECK(arfcn_from_downlink_hz(925'200'000) == 975);
  CHECK_THROWS_AS(arfcn_from_downlink_hz(935'200'001), Error);
  CHECK_THROWS_AS(arfcn_from_downlink_hz(960'000'000), Error);
  CHECK_THROWS_AS(arfcn_from_downlink_hz(925'000'000), Error);
}
