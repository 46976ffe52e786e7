#pragma once

#include "uavlink/harness/config.hpp"
#include "uavlink/harness/csv.hpp"
#include "uavlink/harness/plotdata.hpp"
#include "uavlink/harness/scenario.hpp"
