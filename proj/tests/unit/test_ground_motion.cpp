#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "dsab/ground_motion.hpp"

using namespace dsab;

TEST_SUITE("ground_motion") {

TEST_CASE("csv parse: minimal two-sample record") {
  std::istringstream in("0.0,0.0\n0.02,1.0\n");
  const auto record = parse_record(in, RecordFormat::TwoColumnCsv);
  CHECK(record.dt == doctest::Approx(0.02));
  REQUIRE(record.accel.size() == 2);
  CHECK(record.accel[0] == 0.0);
  CHECK(record.accel[1] == 1.0);
}

TEST_CASE("csv parse: comments and blank lines ignored") {
  std::istringstream in("# a comment\n\n0.0,1.5\n0.1,2.5\n0.2,3.5\n");
  const auto record = parse_record(in, RecordFormat::TwoColumnCsv);
  CHECK(record.dt == doctest::Approx(0.1));
  CHECK(record.accel.size() == 3);
}

TEST_CASE("csv parse: non-numeric sample names the line") {
  std::istringstream in("0.0,0.0\n0.02,oops\n");
  CHECK_THROWS_WITH_AS(parse_record(in, RecordFormat::TwoColumnCsv),
                       doctest::Contains("line 2"), std::runtime_error);
}

TEST_CASE("csv parse: non-uniform time column rejected") {
  std::istringstream in("0.0,0.0\n0.02,1.0\n0.05,2.0\n");
  CHECK_THROWS_WITH_AS(parse_record(in, RecordFormat::TwoColumnCsv),
                       doctest::Contains("non-uniform"), std::runtime_error);
}

TEST_CASE("csv parse: non-monotone time column rejected") {
  std::istringstream in("0.0,0.0\n-0.02,1.0\n");
  CHECK_THROWS_AS(parse_record(in, RecordFormat::TwoColumnCsv),
                  std::runtime_error);
}

TEST_CASE("at2 parse: values in g are converted") {
  std::istringstream in(
      "PEER NGA STRONG MOTION DATABASE RECORD\n"
      "SOME EVENT, STATION, COMP\n"
      "ACCELERATION TIME SERIES IN UNITS OF G\n"
      "NPTS=   5, DT=   .0200 SEC,\n"
      "  .1000000E+00  -.2000000E-01   .0000000E+00\n"
      "  .5000000E-01   .1000000E-01\n");
  const auto record = parse_record(in, RecordFormat::PeerAt2);
  CHECK(record.dt == doctest::Approx(0.02));
  REQUIRE(record.accel.size() == 5);
  CHECK(record.accel[0] == doctest::Approx(0.981));  // 0.1 g
  CHECK(record.accel[1] == doctest::Approx(-0.1962));
}

TEST_CASE("at2 parse: missing NPTS/DT is a malformed header") {
  std::istringstream in("a\nb\nc\nno fields here\n0.1 0.2\n");
  CHECK_THROWS_WITH_AS(parse_record(in, RecordFormat::PeerAt2),
                       doctest::Contains("malformed header"),
                       std::runtime_error);
}

TEST_CASE("at2 parse: sample count must match NPTS") {
  std::istringstream in("h\nh\nh\nNPTS= 4, DT= 0.01 SEC,\n0.1 0.2 0.3\n");
  CHECK_THROWS_AS(parse_record(in, RecordFormat::PeerAt2), std::runtime_error);
}

TEST_CASE("resample: linear midpoint") {
  const GroundMotionRecord record{"r", 1.0, {0.0, 1.0}};
  const auto fine = resample(record, 0.5);
  REQUIRE(fine.accel.size() == 3);
  CHECK(fine.accel[0] == doctest::Approx(0.0));
  CHECK(fine.accel[1] == doctest::Approx(0.5));
  CHECK(fine.accel[2] == doctest::Approx(1.0));
}

TEST_CASE("resample: same dt is the identity") {
  const GroundMotionRecord record{"r", 0.02, {0.5, -0.25, 1.0, 0.0}};
  const auto same = resample(record, 0.02);
  CHECK(same.dt == record.dt);
  CHECK(same.accel == record.accel);
}

TEST_CASE("resample: rejects nonpositive step") {
  const GroundMotionRecord record{"r", 0.02, {0.0, 1.0}};
  CHECK_THROWS_AS(resample(record, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(resample(record, -1.0), std::invalid_argument);
}

TEST_CASE("resample: sinusoid error bounded by (w*dt)^2/8") {
  // Sample a 1 Hz unit sinusoid at dt = 0.02 and resample 10x finer; linear
  // interpolation error must stay below (2*pi*f*dt)^2 / 8.
  const double f = 1.0;
  const double dt = 0.02;
  const std::size_t n = 101;
  GroundMotionRecord record{"sine", dt, {}};
  record.accel.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    record.accel[i] = std::sin(2.0 * M_PI * f * dt * static_cast<double>(i));

  const double fine_dt = dt / 10.0;
  const auto fine = resample(record, fine_dt);
  const double bound = std::pow(2.0 * M_PI * f * dt, 2) / 8.0;
  double worst = 0.0;
  for (std::size_t i = 0; i < fine.accel.size(); ++i) {
    const double t = static_cast<double>(i) * fine_dt;
    worst = std::max(worst,
                     std::abs(fine.accel[i] - std::sin(2.0 * M_PI * f * t)));
  }
  CHECK(worst > 0.0);
  CHECK(worst < bound);
}

TEST_CASE("round trip: parse(serialize(parse(x))) is a fixed point") {
  GroundMotionRecord record = synthetic_record(4.0, 0.01, 2.5, 7);
  std::ostringstream first;
  write_csv(record, first);
  std::istringstream back(first.str());
  const auto reparsed = parse_record(back, RecordFormat::TwoColumnCsv, record.name);
  CHECK(std::abs(reparsed.dt - record.dt) <= 1e-12 * record.dt);
  REQUIRE(reparsed.accel.size() == record.accel.size());
  for (std::size_t i = 0; i < record.accel.size(); ++i) {
    const double scale = std::max(1e-300, std::abs(record.accel[i]));
    CHECK(std::abs(reparsed.accel[i] - record.accel[i]) <= 1e-12 * scale);
  }

  std::ostringstream second;
  write_csv(reparsed, second);
  CHECK(second.str() == first.str());
}

TEST_CASE("validate: rejects bad records") {
  CHECK_THROWS_AS(validate(GroundMotionRecord{"r", 0.0, {0.0, 1.0}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(validate(GroundMotionRecord{"r", 0.02, {0.0}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      validate(GroundMotionRecord{"r", 0.02, {0.0, std::nan("")}}),
      std::invalid_argument);
}

TEST_CASE("el centro record when available") {
  // The measured record is not bundled; point DSAB_ELCENTRO at a local copy
  // (CSV or AT2) to run this check.
  const char* path = std::getenv("DSAB_ELCENTRO");
  if (path == nullptr) return;
  const auto record = load_record(path);
  CHECK(record.dt == doctest::Approx(0.02));
  CHECK(record.accel.size() > 1400);
  CHECK(record.accel.size() < 1700);
  double peak = 0.0;
  for (const double a : record.accel) peak = std::max(peak, std::abs(a));
  CHECK(peak == doctest::Approx(3.1).epsilon(0.15));
}

}  // TEST_SUITE
