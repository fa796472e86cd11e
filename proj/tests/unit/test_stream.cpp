#include <gtest/gtest.h>

#include <filesystem>
#include <string>

#include "ulp/error.hpp"
#include "ulp/stream.hpp"

namespace {

using ulp::FrameType;

ulp::ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const ulp::Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected ulp::Error";
  return ulp::ErrorKind::Io;
}

TEST(Trace, GopPatternAndDistances) {
  const auto t = ulp::generate_trace({12, 2}, 3, {}, 25.0, 1);
  ASSERT_EQ(t.frames.size(), 36u);
  const std::string expected = "IBBPBBPBBPBB";
  for (std::size_t i = 0; i < t.frames.size(); ++i) {
    EXPECT_EQ(ulp::to_char(t.frames[i].type), expected[i % 12]) << i;
    EXPECT_EQ(t.frames[i].dist_to_gop_end, 11 - i % 12);
    EXPECT_EQ(t.frames[i].index, i);
    EXPECT_GE(t.frames[i].size_packets, 1u);
  }
  EXPECT_NO_THROW(ulp::validate_trace(t));
}

TEST(Trace, NoBFrames) {
  const auto t = ulp::generate_trace({4, 0}, 1, {}, 25.0, 1);
  EXPECT_EQ(t.frames[0].type, FrameType::I);
  for (std::size_t i = 1; i < 4; ++i) EXPECT_EQ(t.frames[i].type, FrameType::P);
}

TEST(Trace, SingleFrameGop) {
  const auto t = ulp::generate_trace({1, 0}, 5, {}, 25.0, 1);
  for (const auto& f : t.frames) {
    EXPECT_EQ(f.type, FrameType::I);
    EXPECT_EQ(f.dist_to_gop_end, 0u);
  }
}

TEST(Trace, Deterministic) {
  EXPECT_EQ(ulp::generate_trace({12, 2}, 20, {}, 25.0, 5), ulp::generate_trace({12, 2}, 20, {}, 25.0, 5));
  EXPECT_NE(ulp::generate_trace({12, 2}, 20, {}, 25.0, 5), ulp::generate_trace({12, 2}, 20, {}, 25.0, 6));
}

TEST(Trace, ZeroGops) { EXPECT_TRUE(ulp::generate_trace({12, 2}, 0, {}, 25.0, 1).frames.empty()); }

TEST(Trace, BadGeneratorConfig) {
  EXPECT_EQ(kind_of([] { ulp::generate_trace({12, 12}, 1, {}, 25.0, 1); }), ulp::ErrorKind::Config);
  EXPECT_EQ(kind_of([] { ulp::generate_trace({0, 0}, 1, {}, 25.0, 1); }), ulp::ErrorKind::Config);
  ulp::SizeModel m;
  m.p.mean = 0.5;
  EXPECT_EQ(kind_of([&] { ulp::generate_trace({12, 2}, 1, m, 25.0, 1); }), ulp::ErrorKind::Config);
}

TEST(Trace, DefaultProfileBitrate) {
  const auto t = ulp::generate_trace({12, 2}, 250, {}, 25.0, 1);
  const double seconds = static_cast<double>(t.frames.size()) / 25.0;
  const double bps = static_cast<double>(t.total_packets()) * 1356.0 * 8.0 / seconds;
  EXPECT_NEAR(bps, 12e6, 1.2e6);
}

TEST(Trace, SizeMeansFollowModel) {
  ulp::SizeModel m;
  m.i = {60.0, 10.0};
  const auto t = ulp::generate_trace({1, 0}, 10000, m, 25.0, 3);
  const auto st = ulp::estimate_iframe_stats(t);
  EXPECT_NEAR(st.mu, 60.0, 0.5);
  EXPECT_NEAR(st.sigma, 10.0, 0.5);
}

TEST(Trace, LogNormalMean) {
  ulp::SizeModel m;
  m.i = {80.0, 20.0, ulp::SizeDistribution::LogNormal};
  const auto st = ulp::estimate_iframe_stats(ulp::generate_trace({1, 0}, 20000, m, 25.0, 4));
  EXPECT_NEAR(st.mu, 80.0, 1.0);
  EXPECT_NEAR(st.sigma, 20.0, 1.0);
}

TEST(Dfs, SegmentationAndKinds) {
  const auto t = ulp::generate_trace({12, 2}, 2, {}, 25.0, 1);
  const auto w = ulp::segment_dfs(t, 5);
  ASSERT_EQ(w.size(), 5u);  // 24 frames: 5,5,5,5,4
  EXPECT_EQ(w[4].frames.size(), 4u);
  EXPECT_EQ(w[0].kind, ulp::DfsKind::IDfs);
  EXPECT_EQ(w[1].kind, ulp::DfsKind::PBDfs);
  EXPECT_EQ(w[2].kind, ulp::DfsKind::IDfs);  // frames 10..14 include frame 12
  EXPECT_EQ(w[3].kind, ulp::DfsKind::PBDfs);
  EXPECT_EQ(w[4].kind, ulp::DfsKind::PBDfs);
  EXPECT_EQ(w[1].frames.front().index, 5u);
  EXPECT_TRUE(ulp::segment_dfs(ulp::FrameTrace{}, 5).empty());
  EXPECT_EQ(kind_of([&] { ulp::segment_dfs(t, 0); }), ulp::ErrorKind::Config);
}

TEST(IFrameStats, HandComputed) {
  ulp::FrameTrace t;
  t.gop_length = 2;
  t.frames = {{0, FrameType::I, 40, 1}, {1, FrameType::P, 5, 0}, {2, FrameType::I, 60, 1}, {3, FrameType::P, 5, 0}};
  const auto st = ulp::estimate_iframe_stats(t);
  EXPECT_DOUBLE_EQ(st.mu, 50.0);
  EXPECT_NEAR(st.sigma, 14.142135623730951, 1e-12);
}

TEST(IFrameStats, NeedsTwoIFrames) {
  const auto t = ulp::generate_trace({12, 2}, 1, {}, 25.0, 1);
  EXPECT_EQ(kind_of([&] { ulp::estimate_iframe_stats(t); }), ulp::ErrorKind::InsufficientData);
}

TEST(ValidateTrace, RejectsBrokenStructure) {
  auto t = ulp::generate_trace({12, 2}, 2, {}, 25.0, 1);
  auto bad = t;
  bad.frames[3].type = FrameType::I;
  EXPECT_EQ(kind_of([&] { ulp::validate_trace(bad); }), ulp::ErrorKind::Input);
  bad = t;
  bad.frames[5].dist_to_gop_end = 2;
  EXPECT_EQ(kind_of([&] { ulp::validate_trace(bad); }), ulp::ErrorKind::Input);
  bad = t;
  bad.frames[7].index = 9;
  EXPECT_EQ(kind_of([&] { ulp::validate_trace(bad); }), ulp::ErrorKind::Input);
}

TEST(TraceFile, RoundTrip) {
  const auto t = ulp::generate_trace({12, 2}, 4, {}, 29.97, 8);
  EXPECT_EQ(ulp::parse_trace(ulp::format_trace(t)), t);

  const auto path = std::filesystem::temp_directory_path() / "ulp_trace_roundtrip.csv";
  ulp::save_trace(t, path);
  EXPECT_EQ(ulp::load_trace(path), t);
  std::filesystem::remove(path);
}

TEST(TraceFile, Format) {
  ulp::FrameTrace t;
  t.gop_length = 3;
  t.frames = {{0, FrameType::I, 9, 2}, {1, FrameType::B, 2, 1}, {2, FrameType::P, 4, 0}};
  EXPECT_EQ(ulp::format_trace(t), "#framerate=25 gop_length=3\n0,I,9,2\n1,B,2,1\n2,P,4,0\n");
}

TEST(TraceFile, EmptyBodyIsEmptyTrace) {
  const auto t = ulp::parse_trace("#framerate=25 gop_length=12\n");
  EXPECT_TRUE(t.frames.empty());
  EXPECT_EQ(t.gop_length, 12u);
}

TEST(TraceFile, ParseErrorsCarryLineNumbers) {
  auto message = [](std::string_view text) {
    try {
      ulp::parse_trace(text);
    } catch (const ulp::Error& e) {
      EXPECT_EQ(e.kind(), ulp::ErrorKind::Parse);
      return std::string(e.what());
    }
    return std::string("no error");
  };
  EXPECT_NE(message("#framerate=25 gop_length=2\n0,I,3,1\n1,X,3,0\n").find("line 3"), std::string::npos);
  EXPECT_NE(message("#framerate=25 gop_length=2\n0,I,3,1\n2,P,3,0\n").find("line 3"), std::string::npos);
  EXPECT_NE(message("#framerate=25 gop_length=2\n0,I,0,1\n").find("line 2"), std::string::npos);
  EXPECT_NE(message("#framerate=25 gop_length=2\n0,I,3\n").find("line 2"), std::string::npos);
  EXPECT_NE(message("0,I,3,1\n").find("line 1"), std::string::npos);
  EXPECT_NE(message("").find("line 1"), std::string::npos);
}

TEST(TraceFile, MissingFileIsIoError) {
  EXPECT_EQ(kind_of([] { ulp::load_trace("/nonexistent/dir/trace.csv"); }), ulp::ErrorKind::Io);
}

}  // namespace
