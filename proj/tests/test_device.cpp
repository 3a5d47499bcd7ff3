// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "scrplab/device.hpp"

using namespace scrplab;

namespace {

const char* kTripletJson = R"({
  "transmons": [
    {"frequency_ghz": 5.05517, "anharmonicity_mhz": -340, "t1_us": 134.8, "t2_us": 111.4},
    {"frequency_ghz": 5.20360, "anharmonicity_mhz": -340, "t1_us": 122.7, "t2_us": 73.4},
    {"frequency_ghz": 5.16698, "anharmonicity_mhz": -340, "t1_us": 159.7, "t2_us": 170.3}
  ],
  "couplings": [
    {"pair": [1, 0], "strength_mhz": 2.0},
    {"pair": [2, 0], "strength_mhz": 2.0}
  ]
})";

}  // namespace

TEST_CASE("config parsing converts units to rad/s and seconds") {
  const DeviceConfig dev = load_device_config(kTripletJson);
  CHECK(dev.num_transmons() == 3);
  CHECK(dev.transmon(0).frequency == doctest::Approx(kTwoPi * 5.05517e9).epsilon(1e-13));
  CHECK(dev.transmon(0).anharmonicity == doctest::Approx(-kTwoPi * 340e6).epsilon(1e-13));
  CHECK(dev.transmon(1).t1 == doctest::Approx(122.7e-6).epsilon(1e-13));
  CHECK(dev.transmon(2).levels == 3);
  CHECK(dev.coupling(0, 1) == doctest::Approx(kTwoPi * 2e6));
  CHECK(dev.coupling(1, 0) == doctest::Approx(kTwoPi * 2e6));
  CHECK(dev.coupling(1, 2) == 0.0);
}

TEST_CASE("t2 above 2*t1 is rejected with a field path") {
  const char* bad = R"({"transmons": [
    {"frequency_ghz": 5.0, "anharmonicity_mhz": -340, "t1_us": 100, "t2_us": 300}
  ]})";
  CHECK_THROWS_WITH_AS(load_device_config(bad), doctest::Contains("transmons[0].t2"),
                       ValidationError);
}

TEST_CASE("malformed JSON raises a parse error") {
  CHECK_THROWS_AS(load_device_config("{ not json"), ValidationError);
}

TEST_CASE("empty couplings list is a valid isolated-transmon device") {
  const char* isolated = R"({"transmons": [
    {"frequency_ghz": 5.0, "anharmonicity_mhz": -340, "t1_us": 100, "t2_us": 100}
  ], "couplings": []})";
  const DeviceConfig dev = load_device_config(isolated);
  CHECK(dev.couplings().empty());
}

TEST_CASE("duplicate couplings over one unordered pair are rejected") {
  const char* dup = R"({"transmons": [
    {"frequency_ghz": 5.0, "anharmonicity_mhz": -340, "t1_us": 100, "t2_us": 100},
    {"frequency_ghz": 5.1, "anharmonicity_mhz": -340, "t1_us": 100, "t2_us": 100}
  ], "couplings": [
    {"pair": [0, 1], "strength_mhz": 2.0},
    {"pair": [1, 0], "strength_mhz": 3.0}
  ]})";
  CHECK_THROWS_AS(load_device_config(dup), ValidationError);
}

TEST_CASE("serialization round-trips to an equal config") {
  const DeviceConfig dev = paper_device();
  const DeviceConfig back = load_device_config(dev.to_json_text());
  REQUIRE(back.num_transmons() == dev.num_transmons());
  for (int q = 0; q < dev.num_transmons(); ++q) {
    CHECK(back.transmon(q).frequency == doctest::Approx(dev.transmon(q).frequency).epsilon(1e-12));
    CHECK(back.transmon(q).anharmonicity ==
          doctest::Approx(dev.transmon(q).anharmonicity).epsilon(1e-12));
    CHECK(back.transmon(q).t1 == doctest::Approx(dev.transmon(q).t1).epsilon(1e-12));
    CHECK(back.transmon(q).t2 == doctest::Approx(dev.transmon(q).t2).epsilon(1e-12));
    CHECK(back.transmon(q).levels == dev.transmon(q).levels);
  }
  REQUIRE(back.couplings().size() == dev.couplings().size());
  CHECK(back.roles() == dev.roles());
}

TEST_CASE("seven-transmon device: frequencies, coherences, topology") {
  const DeviceConfig dev = paper_device();
  REQUIRE(dev.num_transmons() == 7);
  CHECK(dev.transmon(dev.role("S")).frequency == doctest::Approx(kTwoPi * 5.05517e9));
  CHECK(dev.transmon(dev.role("c1")).t1 == doctest::Approx(122.7e-6));
  CHECK(dev.transmon(dev.role("c2")).t2 == doctest::Approx(170.3e-6));
  CHECK(dev.couplings().size() == 6);
  // Gate triplet star: both controls couple to the target, controls not coupled.
  CHECK(dev.coupled(dev.role("c1"), dev.role("t")));
  CHECK(dev.coupled(dev.role("c2"), dev.role("t")));
  CHECK_FALSE(dev.coupled(dev.role("c1"), dev.role("c2")));
  // Data qubits attach to flags/syndrome per the tree layout.
  CHECK(dev.coupled(dev.role("D1"), dev.role("F1")));
  CHECK(dev.coupled(dev.role("D2"), dev.role("F1")));
  CHECK(dev.coupled(dev.role("D3"), dev.role("F2")));
  CHECK(dev.coupled(dev.role("D4"), dev.role("F2")));
}

TEST_CASE("triplet devices expose the c1/t/c2 star") {
  for (const DeviceConfig& dev : {paper_triplet(), qubit_limit_triplet()}) {
    REQUIRE(dev.num_transmons() == 3);
    CHECK(dev.role("c1") == 0);
    CHECK(dev.role("t") == 1);
    CHECK(dev.role("c2") == 2);
    CHECK(dev.coupled(0, 1));
    CHECK(dev.coupled(1, 2));
    CHECK_FALSE(dev.coupled(0, 2));
  }
  CHECK(paper_triplet().transmon(0).levels == 3);
  CHECK(qubit_limit_triplet().transmon(0).levels == 2);
  CHECK(paper_triplet().fock_dimension() == 27);
  CHECK(qubit_limit_triplet().fock_dimension() == 8);
}

TEST_CASE("a declared triplet with coupled controls is rejected") {
  const char* bad = R"({"transmons": [
    {"frequency_ghz": 5.2, "anharmonicity_mhz": -340, "t1_us": 100, "t2_us": 100},
    {"frequency_ghz": 5.0, "anharmonicity_mhz": -340, "t1_us": 100, "t2_us": 100},
    {"frequency_ghz": 5.1, "anharmonicity_mhz": -340, "t1_us": 100, "t2_us": 100}
  ], "couplings": [
    {"pair": [0, 1], "strength_mhz": 2.0},
    {"pair": [1, 2], "strength_mhz": 2.0},
    {"pair": [0, 2], "strength_mhz": 2.0}
  ], "roles": {"c1": 0, "t": 1, "c2": 2}})";
  CHECK_THROWS_AS(load_device_config(bad), ValidationError);
}
