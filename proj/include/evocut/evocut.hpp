#pragma once

#include "evocut/batch.hpp"
#include "evocut/boundary_set.hpp"
#include "evocut/esp_reference.hpp"
#include "evocut/graph.hpp"
#include "evocut/graph_io.hpp"
#include "evocut/invariants.hpp"
#include "evocut/partition.hpp"
#include "evocut/random.hpp"
#include "evocut/rational.hpp"
#include "evocut/sampler.hpp"
