#pragma once

// Umbrella header.

#include "chainlat/affine.hpp"
#include "chainlat/chain.hpp"
#include "chainlat/chain_io.hpp"
#include "chainlat/containers.hpp"
#include "chainlat/dilworth.hpp"
#include "chainlat/errors.hpp"
#include "chainlat/grid.hpp"
#include "chainlat/matching.hpp"
#include "chainlat/numerics.hpp"
#include "chainlat/parallel.hpp"
#include "chainlat/pipeline.hpp"
#include "chainlat/rng.hpp"
#include "chainlat/sperner.hpp"
#include "chainlat/subset.hpp"
#include "chainlat/symmetric.hpp"
