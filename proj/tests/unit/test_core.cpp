#include <doctest.h>

#include <cmath>
#include <sstream>

#include "predatw/error.hpp"
#include "predatw/numfmt.hpp"
#include "predatw/pose.hpp"
#include "predatw/trace.hpp"

using namespace predatw;

TEST_CASE("pose_from_euler") {
  CHECK(pose_from_euler(0, 0, 0, 0).matrix().isApprox(Eigen::Matrix4d::Identity(), 1e-15));

  // Yaw about +y by 90 degrees, composed by hand.
  Eigen::Matrix3d yaw;
  yaw << 0, 0, 1, 0, 1, 0, -1, 0, 0;
  CHECK((pose_from_euler(90, 0, 0, 0).rotation() - yaw).cwiseAbs().maxCoeff() < 1e-15);

  const Pose p = pose_from_euler(33, -12, 71, 5);
  CHECK(((p * p.inverse()).matrix() - Eigen::Matrix4d::Identity()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(p.timestamp_ms() == 5);
  CHECK_THROWS_AS(pose_from_euler(NAN, 0, 0, 0), std::invalid_argument);
}

TEST_CASE("pose rejects non-rigid matrices") {
  Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
  m(0, 0) = 2;
  CHECK_THROWS_AS(Pose(m, 0), std::invalid_argument);
  m = Eigen::Matrix4d::Identity();
  m(0, 0) = -1;  // reflection
  CHECK_THROWS_AS(Pose(m, 0), std::invalid_argument);
  CHECK_THROWS_AS(Pose(Eigen::Matrix4d::Identity(), -1), std::invalid_argument);
}

TEST_CASE("rotation_delta") {
  const Pose p = pose_from_euler(20, 5, -3, 0);
  CHECK(rotation_angle_deg(rotation_delta(p, p)) < 1e-6);
  CHECK(rotation_delta(Pose(), p).rotation().isApprox(p.rotation(), 1e-12));

  const Pose d = rotation_delta(pose_from_euler(10, 0, 0, 0), pose_from_euler(25, 0, 0, 0));
  // Matrix log of a rotation about y: angle from atan2 of the off-diagonal entries.
  const Eigen::Matrix3d r = d.rotation();
  CHECK(std::atan2(r(0, 2), r(0, 0)) * 180.0 / M_PI == doctest::Approx(15.0).epsilon(1e-11));
  CHECK(rotation_angle_deg(d) == doctest::Approx(15.0).epsilon(1e-9));
}

namespace {

TraceDataset make_dataset(std::size_t n) {
  TraceDataset ds;
  double prev = kSeedPrevAtwLatMs;
  for (std::size_t i = 0; i < n; ++i) {
    TraceRecord r;
    r.frame_id = i * 2 + 1;
    r.features.gpu_time_ms = 1.0 + 0.013 * static_cast<double>(i);
    r.features.l2_acc = 1000 + i;
    r.features.prev_atw_lat_ms = prev;
    r.features.n_threads = 77 * i;
    r.features.brightness = std::fmod(0.1 + 3.7 * static_cast<double>(i), 255.0);
    r.features.n_pixels = 2073600;
    r.features.n_vertices = 12345 + i;
    r.features.n_draw_calls = 1 + i % 50;
    r.atw_lat_ms = 2.4 + 0.1 / (1.0 + static_cast<double>(i));
    prev = r.atw_lat_ms;
    ds.records.push_back(r);
  }
  return ds;
}

}  // namespace

TEST_CASE("trace round trip") {
  std::stringstream header_only(std::string(kTraceHeader) + "\n");
  CHECK(read_trace(header_only).empty());

  const auto ds = make_dataset(100);
  CHECK(ds.is_chained(kSeedPrevAtwLatMs));
  std::stringstream buf;
  write_trace(ds, buf);
  CHECK(read_trace(buf) == ds);
}

TEST_CASE("trace parse errors carry line numbers") {
  std::stringstream buf;
  write_trace(make_dataset(5), buf);
  std::string text = buf.str();

  // Swap rows 2 and 3 so frame ids go backwards at line 4.
  std::vector<std::string> lines;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) lines.push_back(l);
  std::swap(lines[2], lines[3]);
  std::string shuffled;
  for (const auto& l : lines) shuffled += l + "\n";
  std::istringstream s1(shuffled);
  try {
    read_trace(s1);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 4);
  }

  std::istringstream s2(std::string(kTraceHeader) + "\n0,1.0,x,2.55,1,1,1,1,1,2.5\n");
  CHECK_THROWS_AS(read_trace(s2), ParseError);
  std::istringstream s3("frame_id,gpu_time_ms\n");
  CHECK_THROWS_AS(read_trace(s3), ParseError);
  std::istringstream s4(std::string(kTraceHeader) + "\n0,1.0,1,2.55,1,300,1,1,1,2.5\n");
  CHECK_THROWS_AS(read_trace(s4), ParseError);
}

TEST_CASE("format_double round trips") {
  for (double v : {0.0, 1.0, 0.1, 2.55, 1e-300, 123456789.123456789, 11.11}) {
    double back = -1;
    REQUIRE(parse_double(format_double(v), back));
    CHECK(back == v);
  }
  double d;
  CHECK_FALSE(parse_double("1.5x", d));
  std::uint64_t u;
  CHECK_FALSE(parse_u64("-3", u));
}

TEST_CASE("feature vector") {
  FeatureVector f;
  f.gpu_time_ms = 1.5;
  f.n_draw_calls = 9;
  CHECK(f[0] == 1.5);
  CHECK(f[7] == 9.0);
  CHECK(feature_name(Feature::PrevAtwLat) == "PrevATWLat");
  f.brightness = 300;
  CHECK_THROWS(f.validate());
}
