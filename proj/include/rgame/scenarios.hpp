// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "rgame/scenarios/config.hpp"
#include "rgame/scenarios/demo.hpp"
#include "rgame/scenarios/run.hpp"
