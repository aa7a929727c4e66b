#pragma once

#include "forager/bfs.hpp"
#include "forager/config.hpp"
#include "forager/config_io.hpp"
#include "forager/env.hpp"
#include "forager/geometry.hpp"
#include "forager/harness.hpp"
#include "forager/metrics.hpp"
#include "forager/observation.hpp"
#include "forager/policies.hpp"
#include "forager/presets.hpp"
#include "forager/render.hpp"
#include "forager/reward.hpp"
#include "forager/rng.hpp"
#include "forager/world.hpp"
