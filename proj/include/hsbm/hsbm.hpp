#pragma once

#include "hsbm/config_io.hpp"
#include "hsbm/convex.hpp"
#include "hsbm/counting.hpp"
#include "hsbm/exhaustive.hpp"
#include "hsbm/graph.hpp"
#include "hsbm/graph_io.hpp"
#include "hsbm/model.hpp"
#include "hsbm/montecarlo.hpp"
#include "hsbm/outcome.hpp"
#include "hsbm/parallel.hpp"
#include "hsbm/presets.hpp"
#include "hsbm/projections.hpp"
#include "hsbm/regime.hpp"
#include "hsbm/rng.hpp"
#include "hsbm/spectral.hpp"
#include "hsbm/table1.hpp"
