#include <cmath>
#include <cstdint>
#include <vector>

#include <gtest/gtest.h>

#include "uavlink/netem/flight_path.hpp"
#include "uavlink/netem/geometry.hpp"
#include "uavlink/netem/link_config.hpp"
#include "uavlink/netem/path.hpp"
#include "uavlink/netem/shaper.hpp"
#include "uavlink/sim/rng.hpp"

namespace {

using namespace uavlink::netem;
using uavlink::Usec;
using uavlink::sim::SeededRng;

Geometry geom_at(double dx, double dz) {
  Geometry g;
  g.uav = {dx, 0.0, dz};
  return g;
}

LinkConfig quiet_link() {
  LinkConfig c;
  c.jitter.kind = JitterKind::kNone;
  return c;
}

TEST(Elevation, HorizontalRayIsZero) { EXPECT_DOUBLE_EQ(elevation_angle(geom_at(10.0, 0.0)), 0.0); }
TEST(Elevation, OverheadIsNinety) { EXPECT_DOUBLE_EQ(elevation_angle(geom_at(0.0, 3.0)), 90.0); }
TEST(Elevation, UnitOffsetsGiveFortyFive) { EXPECT_NEAR(elevation_angle(geom_at(1.0, 1.0)), 45.0, 1e-12); }

TEST(Elevation, BelowAntennaPlaneClampsToZero) {
  Geometry g = geom_at(4.0, 0.0);
  g.bs.z = 2.0;
  EXPECT_EQ(elevation_angle(g), 0.0);
}

TEST(Elevation, CoLocatedIsAnError) {
  EXPECT_THROW(elevation_angle(geom_at(0.0, 0.0)), uavlink::GeometryError);
}

TEST(EffectiveCapacity, LowAngleNearMax) {
  EXPECT_GE(effective_capacity(0.0, GainCapacityModel{}), 0.99 * 8.5e6);
}

TEST(EffectiveCapacity, OverheadNearMin) {
  EXPECT_LE(effective_capacity(90.0, GainCapacityModel{}), 1.05 * 2.0e6);
}

TEST(EffectiveCapacity, MidpointAtEdge) {
  const GainCapacityModel m;
  EXPECT_DOUBLE_EQ(effective_capacity(m.theta_edge_deg, m), (m.cap_min + m.cap_max) / 2.0);
}

// The rolloff width spans the 90% -> 10% transition.
TEST(EffectiveCapacity, RolloffWidthSpansNinetyToTenPercent) {
  const GainCapacityModel m;
  auto frac = [&](double a) { return (effective_capacity(a, m) - m.cap_min) / (m.cap_max - m.cap_min); };
  EXPECT_NEAR(frac(m.theta_edge_deg - m.rolloff_width_deg / 2), 0.9, 1e-9);
  EXPECT_NEAR(frac(m.theta_edge_deg + m.rolloff_width_deg / 2), 0.1, 1e-9);
}

TEST(EffectiveCapacity, NonincreasingOnDegreeGrid) {
  for (const GainCapacityModel m : {GainCapacityModel{}, GainCapacityModel{30.0, 2.0, 1e6, 9e6},
                                    GainCapacityModel{75.0, 20.0, 0.0, 5e6}}) {
    double prev = effective_capacity(0.0, m);
    for (int a = 1; a <= 90; ++a) {
      const double c = effective_capacity(a, m);
      ASSERT_LE(c, prev) << a;
      prev = c;
    }
  }
}

TEST(GainModelValidation, RejectsInvertedLevelsAndZeroWidth) {
  EXPECT_THROW(validate(GainCapacityModel{60, 8, 9e6, 8e6}), uavlink::ConfigError);
  EXPECT_THROW(validate(GainCapacityModel{60, 0, 2e6, 8e6}), uavlink::ConfigError);
  EXPECT_NO_THROW(validate(GainCapacityModel{}));
}

TEST(Shaper, ServiceTimeOfOneMillisecond) {
  Shaper s(8.78e6, 200'000);
  // 1097.5 bytes is 8780 bits; the closest whole packets bracket 1 ms.
  EXPECT_EQ(*s.admit(1097, Usec{0}), Usec{1000});
  Shaper s2(8.78e6, 200'000);
  EXPECT_EQ(*s2.admit(1098, Usec{0}), Usec{1001});
}

TEST(Shaper, BackToBackPacketsQueue) {
  Shaper s(8e6, 200'000);
  EXPECT_EQ(*s.admit(1000, Usec{0}), Usec{1000});
  EXPECT_EQ(*s.admit(1000, Usec{0}), Usec{2000});
  EXPECT_EQ(*s.admit(1000, Usec{5000}), Usec{6000});
}

TEST(Shaper, FullQueueTailDrops) {
  Shaper s(1e6, 3000);
  EXPECT_TRUE(s.admit(1000, Usec{0}));
  EXPECT_TRUE(s.admit(1000, Usec{0}));
  EXPECT_TRUE(s.admit(1000, Usec{0}));
  EXPECT_FALSE(s.admit(1000, Usec{0}));
  EXPECT_EQ(s.dropped(), 1u);
  EXPECT_EQ(s.queued_bytes(Usec{0}), 3000);
  // First packet departs at 8 ms, freeing room.
  EXPECT_TRUE(s.admit(1000, Usec{8000}));
}

TEST(Shaper, TokensNeverExceedDepthAndQueueNeverExceedsLimit) {
  Shaper s(2e6, 20'000, 12'000.0);
  SeededRng rng(17);
  Usec t{0};
  for (int i = 0; i < 20000; ++i) {
    t += Usec{rng.uniform_int(0, 3000)};
    (void)s.admit(rng.uniform_int(20, 1500), t);
    ASSERT_LE(s.tokens(), s.bucket_depth());
    ASSERT_LE(s.queued_bytes(t), s.queue_limit());
  }
}

// Independent oracle: count what a perfect rate-R serializer can push out.
TEST(Shaper, DoubleOfferedLoadDepartsAtRate) {
  const double rate = 8.78e6;
  Shaper s(rate, 200'000);
  const std::int64_t pkt = 1000;
  const double gap_us = pkt * 8.0 / (2.0 * rate) * 1e6;
  double bits_out = 0.0;
  const Usec horizon{10'000'000};
  for (std::int64_t k = 0;; ++k) {
    const Usec t{static_cast<std::int64_t>(std::llround(k * gap_us))};
    if (t > horizon) break;
    if (auto d = s.admit(pkt, t); d && *d <= horizon) bits_out += pkt * 8.0;
  }
  EXPECT_NEAR(bits_out / 10.0, rate, rate * 0.01);
  EXPECT_GT(s.dropped(), 0u);
}

TEST(Path, TwentyByteFrameArrival) {
  const LinkConfig link = quiet_link();
  Path p(Direction::kDownlink, link, SeededRng(1));
  const Usec t_send{123'456};
  const auto r = p.deliver(20, t_send, geom_at(5, 0));
  ASSERT_TRUE(r.delivered());
  const auto oracle = Usec{13'830} + Usec{static_cast<std::int64_t>(std::ceil(160.0 / 16.57e6 * 1e6))};
  EXPECT_EQ(*r.arrival - t_send, oracle);
}

TEST(Path, CertainLossDropsEverything) {
  LinkConfig link = quiet_link();
  link.random_loss_prob = 1.0;
  Path p(Direction::kUplink, link, SeededRng(1));
  for (int i = 0; i < 100; ++i) {
    const auto r = p.deliver(100, Usec{i * 1000}, geom_at(5, 0));
    ASSERT_FALSE(r.delivered());
    ASSERT_EQ(r.drop, DropReason::kRandom);
  }
}

TEST(Path, OneMicrosecondApartKeepsOrder) {
  LinkConfig link;
  link.jitter.sigma = Usec{5000};
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Path p(Direction::kDownlink, link, SeededRng(seed));
    const auto a = p.deliver(20, Usec{0}, geom_at(5, 0));
    const auto b = p.deliver(20, Usec{1}, geom_at(5, 0));
    ASSERT_LE(*a.arrival, *b.arrival);
  }
}

TEST(Path, FifoAndConservationUnderRandomTraffic) {
  LinkConfig link;
  link.random_loss_prob = 0.05;
  link.queue_limit_bytes = 30'000;
  Path p(Direction::kUplink, link, SeededRng(9));
  SeededRng traffic(10);
  Usec t{0};
  Usec last{0};
  // About 11.5 Mb/s offered against 8.78 Mb/s.
  for (int i = 0; i < 50000; ++i) {
    t += Usec{traffic.uniform_int(0, 1000)};
    const auto r = p.deliver(traffic.uniform_int(20, 1418), t, geom_at(5, 0));
    if (r.delivered()) {
      ASSERT_GE(*r.arrival, last);
      ASSERT_GE(*r.arrival, t);
      last = *r.arrival;
    }
  }
  const auto& c = p.counters();
  EXPECT_EQ(c.sent, c.delivered + c.dropped_random + c.dropped_queue);
  EXPECT_GT(c.dropped_random, 0u);
  EXPECT_GT(c.dropped_queue, 0u);
}

// Bits arriving in any 1 s window stay under the current capacity.
TEST(Path, ThroughputCeilingPerWindow) {
  LinkConfig link;
  const GainCapacityModel gain;
  FlightPath fp;
  fp.plan = FlyOver{};
  Path p(Direction::kUplink, link, SeededRng(4), gain);
  SeededRng traffic(5);
  const int n_windows = 80;
  std::vector<double> bits(n_windows + 1, 0.0);
  for (Usec t{0}; t < Usec{80'000'000}; t += Usec{traffic.uniform_int(200, 900)}) {
    const auto r = p.deliver(1418, t, fp.at(t));
    if (r.delivered()) {
      const auto w = static_cast<std::size_t>(r.arrival->count() / 1'000'000);
      if (w < bits.size()) bits[w] += 1418 * 8.0;
    }
  }
  for (int w = 1; w < n_windows; ++w) {
    // The rate is fixed at admission, so the backlog ahead of the window
    // counts too.
    double cap = 0.0;
    for (int ms = -300; ms <= 1000; ++ms) {
      const Usec at{w * 1'000'000 + ms * 1000};
      cap = std::max(cap, p.capacity_at(at, fp.at(at)));
    }
    EXPECT_LE(bits[w], cap * 1.02) << "window " << w;
  }
}

TEST(Path, GainModelOnlyAppliesToUplink) {
  const LinkConfig link;
  const GainCapacityModel gain;
  const Path up(Direction::kUplink, link, SeededRng(1), gain);
  const Path down(Direction::kDownlink, link, SeededRng(1), gain);
  const auto overhead = geom_at(0.1, 5.0);
  EXPECT_LT(up.capacity_at(Usec{0}, overhead), 2.2e6);
  EXPECT_DOUBLE_EQ(down.capacity_at(Usec{0}, overhead), link.downlink_capacity);
}

TEST(Path, CapacityStepsApplyFromTheirInstant) {
  LinkConfig link;
  link.uplink_steps = {{Usec{1'000'000}, 4e6}, {Usec{2'000'000}, 6e6}};
  EXPECT_DOUBLE_EQ(link.uplink_capacity_at(Usec{999'999}), 8.78e6);
  EXPECT_DOUBLE_EQ(link.uplink_capacity_at(Usec{1'000'000}), 4e6);
  EXPECT_DOUBLE_EQ(link.uplink_capacity_at(Usec{5'000'000}), 6e6);
}

TEST(HeightLoss, DisabledByDefaultAndInterpolatesWhenOn) {
  HeightLossTable t;
  EXPECT_EQ(t.at(1.0), 0.0);
  t.enabled = true;
  EXPECT_DOUBLE_EQ(t.at(1.0), 0.004);
  EXPECT_NEAR(t.at(1.5), 0.0025, 1e-12);
  EXPECT_DOUBLE_EQ(t.at(10.0), 0.001);
}

TEST(Jitter, TruncatedDrawsStayInBound) {
  JitterModel j;
  SeededRng rng(2);
  for (int i = 0; i < 10000; ++i) {
    ASSERT_LE(std::abs(j.draw(rng).count()), j.max_abs().count());
  }
}

TEST(FlyOver, ClosestApproachIsAtMidpoint) {
  FlightPath fp;
  fp.plan = FlyOver{};
  const auto mid = std::get<FlyOver>(fp.plan).closest_approach();
  EXPECT_EQ(mid, Usec{40'000'000});
  const double at_mid = elevation_angle(fp.at(mid));
  EXPECT_GT(at_mid, elevation_angle(fp.at(mid - Usec{2'000'000})));
  EXPECT_GT(at_mid, elevation_angle(fp.at(mid + Usec{2'000'000})));
  EXPECT_LT(elevation_angle(fp.at(Usec{0})), 10.0);
}

TEST(Waypoints, LinearInterpolationAndHold) {
  FlightPath fp;
  fp.plan = WaypointPath{{{Usec{0}, {0, 0, 0}}, {Usec{10'000'000}, {10, 0, 2}}}};
  EXPECT_DOUBLE_EQ(fp.at(Usec{5'000'000}).uav.x, 5.0);
  EXPECT_DOUBLE_EQ(fp.at(Usec{5'000'000}).uav.z, 1.0);
  EXPECT_DOUBLE_EQ(fp.at(Usec{20'000'000}).uav.x, 10.0);
}

TEST(FlightValidation, RejectsPathThroughAntenna) {
  FlightPath fp;
  fp.plan = FixedPosition{0.0, 0.0, 0.0};
  EXPECT_THROW(validate(fp), uavlink::Error);
}

TEST(LinkValidation, RejectsBadProbabilities) {
  LinkConfig c;
  c.random_loss_prob = 1.5;
  EXPECT_THROW(validate(c), uavlink::ConfigError);
}

}  // namespace
