#include <cmath>
#include <cstdint>
#include <vector>

#include <gtest/gtest.h>

#include "uavlink/metrics/aggregate.hpp"
#include "uavlink/metrics/beacon.hpp"
#include "uavlink/metrics/cc_stats.hpp"
#include "uavlink/metrics/video_stats.hpp"
#include "uavlink/sim/node_clock.hpp"
#include "uavlink/sim/rng.hpp"

namespace {

using namespace uavlink::metrics;
using uavlink::Usec;
using uavlink::cc::CcLogEntry;
using uavlink::sim::SeededRng;

Usec identity(Usec t) { return t; }

TEST(CcDelay, Subtraction) { EXPECT_EQ(cc_delay(Usec{1000}, Usec{21'000}), Usec{20'000}); }
TEST(CcDelay, EqualStampsGiveZero) { EXPECT_EQ(cc_delay(Usec{5}, Usec{5}), Usec{0}); }

TEST(CcDelay, SmallNegativeToleratedLargeNegativeFlagged) {
  EXPECT_EQ(cc_delay(Usec{10'000}, Usec{8'000}), Usec{-2'000});
  EXPECT_EQ(cc_delay(Usec{10'000}, Usec{7'999}), std::nullopt);
}

TEST(Reliability, Examples) {
  EXPECT_EQ(reliability(10'000, 10'000), 1.0);
  EXPECT_EQ(reliability(0, 10'000), 0.0);
  EXPECT_THROW(reliability(0, 0), uavlink::MetricError);
  EXPECT_THROW(reliability(11, 10), uavlink::MetricError);
}

TEST(Reliability, ExactRatio) {
  SeededRng rng(1);
  for (int i = 0; i < 10000; ++i) {
    const auto trans = static_cast<std::uint64_t>(rng.uniform_int(1, 1'000'000));
    const auto rece = static_cast<std::uint64_t>(rng.uniform_int(0, static_cast<std::int64_t>(trans)));
    ASSERT_EQ(std::llround(reliability(rece, trans) * static_cast<double>(trans)), static_cast<long long>(rece));
  }
}

TEST(Aggregate, Examples) {
  const auto s = aggregate(std::vector<int>{10, 20, 30});
  EXPECT_EQ(s.min, 10);
  EXPECT_EQ(s.avg, 20);
  EXPECT_EQ(s.max, 30);
  const auto one = aggregate(std::vector<int>{7});
  EXPECT_EQ(one.min, 7);
  EXPECT_EQ(one.avg, 7);
  EXPECT_EQ(one.max, 7);
  EXPECT_THROW(aggregate(std::vector<int>{}), uavlink::MetricError);
}

TEST(Aggregate, UniformMeanWithinOnePercent) {
  SeededRng rng(2);
  std::vector<double> v(10'000);
  for (auto& x : v) x = rng.uniform(0.0, 200.0);
  const auto s = aggregate(v);
  EXPECT_NEAR(s.avg, 100.0, 1.0);
  EXPECT_LE(s.min, s.avg);
  EXPECT_LE(s.avg, s.max);
}

TEST(CcStats, JoinOnFrameIdOverTenThousandFrames) {
  std::vector<CcLogEntry> tx, rx;
  for (std::uint32_t i = 0; i < 10'000; ++i) {
    tx.push_back({i, Usec{i * 100'000LL}});
    rx.push_back({i, Usec{i * 100'000LL + 20'000 + (i % 7)}});
  }
  const auto s = cc_stats(tx, rx);
  ASSERT_EQ(s.delays_us.size(), 10'000u);
  for (std::uint32_t i = 0; i < 10'000; ++i) ASSERT_EQ(s.delays_us[i], 20'000 + (i % 7));
  EXPECT_EQ(s.reliability, 1.0);
  EXPECT_EQ(s.delay->min, 20'000);
  EXPECT_EQ(s.delay->max, 20'006);
}

TEST(CcStats, UnmatchedAndAnomaliesExcluded) {
  const std::vector<CcLogEntry> tx{{0, Usec{0}}, {1, Usec{10'000}}, {2, Usec{20'000}}, {3, Usec{30'000}}};
  const std::vector<CcLogEntry> rx{{0, Usec{5'000}}, {2, Usec{10'000}}, {9, Usec{40'000}}};
  const auto s = cc_stats(tx, rx);
  EXPECT_EQ(s.n_trans, 4u);
  EXPECT_EQ(s.n_rece, 2u);
  EXPECT_EQ(s.unmatched_rx, 1u);
  EXPECT_EQ(s.anomalies, 1u);
  EXPECT_EQ(s.delays_us, (std::vector<std::int64_t>{5'000}));
  EXPECT_DOUBLE_EQ(s.reliability, 0.5);
}

// Two independently synced clocks bound the measured-vs-true error.
TEST(CcDelay, SyncResidualBoundsMeasurementError) {
  SeededRng rng(3);
  for (int i = 0; i < 10000; ++i) {
    const auto a = uavlink::sim::ntp_sync({}, Usec{0}, rng);
    const auto b = uavlink::sim::ntp_sync({}, Usec{0}, rng);
    const Usec t_send{rng.uniform_int(0, 9'000'000)};
    const Usec true_delay{rng.uniform_int(0, 1'000'000)};
    const auto measured = cc_delay(uavlink::sim::local_now(a, t_send), uavlink::sim::local_now(b, t_send + true_delay));
    ASSERT_TRUE(measured);
    ASSERT_LE(std::abs((*measured - true_delay).count()), 2'000);
  }
}

TEST(FrameThroughput, BitsOverDelay) { EXPECT_DOUBLE_EQ(frame_throughput(1'500'000, Usec{200'000}), 7.5e6); }

// Hand-built log: three frames over 2 s, one lost.
TEST(VideoStats, SyntheticLogMatchesHandComputation) {
  uavlink::video::VideoLog log;
  log.duration = Usec{2'000'000};
  log.frames = {
      {0, Usec{0}, Usec{100'000}, 800'000, 2, 0, 30.0, Usec{0}},
      {1, Usec{500'000}, std::nullopt, 400'000, 1, 1, 30.0, Usec{500'000}},
      {2, Usec{1'200'000}, Usec{1'600'000}, 1'200'000, 1, 0, 30.0, Usec{1'200'000}},
  };
  log.segments = {
      {Usec{0}, Usec{50'000}, 50'000},
      {Usec{0}, Usec{100'000}, 50'000},
      {Usec{500'000}, std::nullopt, 50'000},
      {Usec{1'200'000}, Usec{1'600'000}, 150'000},
  };
  const auto s = video_stats(log);
  EXPECT_EQ(s.delays_us, (std::vector<std::int64_t>{100'000, 400'000}));
  ASSERT_EQ(s.frame_throughput_bps.size(), 2u);
  EXPECT_DOUBLE_EQ(s.frame_throughput_bps[0], 8e6);
  EXPECT_DOUBLE_EQ(s.frame_throughput_bps[1], 3e6);
  EXPECT_DOUBLE_EQ(s.aggregate_throughput_bps, 1e6);
  EXPECT_EQ(s.delay->avg, 250'000);
  ASSERT_EQ(s.window_throughput_bps.size(), 2u);
  EXPECT_DOUBLE_EQ(s.window_throughput_bps[0], 800'000.0);
  EXPECT_DOUBLE_EQ(s.window_throughput_bps[1], 1'200'000.0);
  EXPECT_DOUBLE_EQ(s.window_segment_loss[0], 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(s.window_segment_loss[1], 0.0);
  EXPECT_EQ(s.frames_completed, 2u);
  EXPECT_DOUBLE_EQ(s.segment_loss_fraction(), 0.25);
}

TEST(VideoStats, AllLostGivesZeroSeries) {
  uavlink::video::VideoLog log;
  log.duration = Usec{3'000'000};
  for (std::uint32_t i = 0; i < 30; ++i) {
    log.frames.push_back({i, Usec{i * 100'000LL}, std::nullopt, 1000, 1, 1, 10.0, Usec{i * 100'000LL}});
    log.segments.push_back({Usec{i * 100'000LL}, std::nullopt, 125});
  }
  const auto s = video_stats(log);
  EXPECT_FALSE(s.delay);
  EXPECT_EQ(s.aggregate_throughput_bps, 0.0);
  ASSERT_EQ(s.window_throughput_bps.size(), 3u);
  for (double w : s.window_throughput_bps) EXPECT_EQ(w, 0.0);
  for (double l : s.window_segment_loss) EXPECT_EQ(l, 1.0);
}

TEST(Beacon, ConstantDelayWithinQuantizationOverAllPhases) {
  const Usec delay{100'000};
  SeededRng rng(4);
  for (std::int64_t phase = 0; phase < 16'667; phase += 7) {
    BeaconProbe probe;
    probe.sampler_phase = Usec{phase};
    const Usec capture{1'000'000 + rng.uniform_int(0, 1'000'000)};
    const auto est = beacon_estimate(probe, {{capture, delay}}, identity);
    ASSERT_EQ(est.size(), 1u);
    ASSERT_GE(est[0].estimate, Usec{100'000}) << phase;
    ASSERT_LE(est[0].estimate, Usec{133'400}) << phase;
  }
}

TEST(Beacon, AlignedPhaseAddsOneRefreshInterval) {
  const BeaconProbe probe;
  const PeriodicGrid refresh(60.0);
  for (std::int64_t k = 10; k < 200; ++k) {
    const auto est = beacon_estimate(probe, {{refresh.instant(k), Usec{100'000}}}, identity);
    ASSERT_EQ(est.size(), 1u);
    EXPECT_NEAR(static_cast<double>(est[0].estimate.count()), 100'000.0 + 1e6 / 60.0, 1.0) << k;
  }
}

TEST(Beacon, MegahertzRatesApproachTrueDelay) {
  BeaconProbe probe;
  probe.display_refresh_hz = 1e6;
  probe.sampler_rate_hz = 1e6;
  SeededRng rng(5);
  for (int i = 0; i < 1000; ++i) {
    const Usec capture{rng.uniform_int(1'000, 10'000'000)};
    const Usec delay{rng.uniform_int(0, 2'000'000)};
    const auto est = beacon_estimate(probe, {{capture, delay}}, identity);
    ASSERT_LE(std::abs(est[0].error().count()), 2);
  }
}

TEST(Beacon, ReplacedFrameYieldsNoEstimate) {
  const BeaconProbe probe;
  // Second frame is shown 1 us after the first, before any screenshot.
  const std::vector<BeaconFrame> trace{{Usec{1'000'000}, Usec{100'001}}, {Usec{1'000'001}, Usec{100'001}}};
  const auto est = beacon_estimate(probe, trace, identity);
  ASSERT_EQ(est.size(), 1u);
  EXPECT_EQ(est[0].capture_true, Usec{1'000'001});
}

TEST(Beacon, BeaconCarriesRefreshCounterAndLocalTime) {
  const BeaconProbe probe;
  const auto est = beacon_estimate(probe, {{Usec{1'000'000}, Usec{50'000}}}, [](Usec t) { return t + Usec{300}; });
  ASSERT_EQ(est.size(), 1u);
  EXPECT_EQ(est[0].beacon.refresh_seq, 59u);
  EXPECT_EQ(est[0].beacon.beacon_ts, static_cast<std::uint64_t>(PeriodicGrid(60.0).instant(59).count() + 300));
}

}  // namespace
