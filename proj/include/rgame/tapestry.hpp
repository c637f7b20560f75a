// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "rgame/tapestry/graph.hpp"
#include "rgame/tapestry/informon.hpp"
#include "rgame/tapestry/json.hpp"
#include "rgame/tapestry/lattice.hpp"
#include "rgame/tapestry/validate.hpp"
#include "rgame/tapestry/wave.hpp"
