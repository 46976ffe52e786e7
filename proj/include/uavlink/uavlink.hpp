#pragma once

// Everything except the harness (which needs yaml-cpp); see uavlink/harness.hpp.
#include "uavlink/cc/receiver.hpp"
#include "uavlink/cc/sender.hpp"
#include "uavlink/cc/session.hpp"
#include "uavlink/cc/stick_source.hpp"
#include "uavlink/core/error.hpp"
#include "uavlink/core/time.hpp"
#include "uavlink/metrics/aggregate.hpp"
#include "uavlink/metrics/beacon.hpp"
#include "uavlink/metrics/cc_stats.hpp"
#include "uavlink/metrics/video_stats.hpp"
#include "uavlink/netem/flight_path.hpp"
#include "uavlink/netem/geometry.hpp"
#include "uavlink/netem/link_config.hpp"
#include "uavlink/netem/path.hpp"
#include "uavlink/netem/shaper.hpp"
#include "uavlink/sim/event_queue.hpp"
#include "uavlink/sim/node_clock.hpp"
#include "uavlink/sim/rng.hpp"
#include "uavlink/video/encoder.hpp"
#include "uavlink/video/fps_controller.hpp"
#include "uavlink/video/reassembler.hpp"
#include "uavlink/video/segmenter.hpp"
#include "uavlink/video/session.hpp"
#include "uavlink/wire/beacon.hpp"
#include "uavlink/wire/byte_order.hpp"
#include "uavlink/wire/cc_frame.hpp"
#include "uavlink/wire/segment_header.hpp"
#include "uavlink/wire/stick.hpp"
#include "uavlink/world.hpp"
