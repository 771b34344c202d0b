#pragma once

// Umbrella header for the cross-layer NOMA/IDNC broadcast scheduling library.

#include "nomaidnc/bitset.hpp"
#include "nomaidnc/channel.hpp"
#include "nomaidnc/clique_search.hpp"
#include "nomaidnc/errors.hpp"
#include "nomaidnc/experiment.hpp"
#include "nomaidnc/graph.hpp"
#include "nomaidnc/idnc.hpp"
#include "nomaidnc/oracles.hpp"
#include "nomaidnc/power.hpp"
#include "nomaidnc/rng.hpp"
#include "nomaidnc/schemes.hpp"
#include "nomaidnc/textio.hpp"
