#pragma once

// Umbrella header for the percoflow library: directed Boolean covering on
// lattice and tree windows, the constant-decrement exchange chain coupled to
// it, and the analytic machinery (stationary measures, Kesten-type series,
// mean-matrix spectra, closed-form reference laws) that the Monte Carlo
// layers are tested against.

#include "percoflow/catalog.hpp"
#include "percoflow/dist.hpp"
#include "percoflow/exchange.hpp"
#include "percoflow/graphs.hpp"
#include "percoflow/numerics.hpp"
#include "percoflow/parallel.hpp"
#include "percoflow/percolation.hpp"
#include "percoflow/rng.hpp"
#include "percoflow/stats.hpp"
#include "percoflow/tree.hpp"
