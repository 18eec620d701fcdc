#pragma once

// Umbrella header for the wavegraph metric-wave-graph toolkit.

#include "wavegraph/graph.hpp"
#include "wavegraph/evolution.hpp"
#include "wavegraph/classical.hpp"
#include "wavegraph/spectral.hpp"
#include "wavegraph/open_graph.hpp"
#include "wavegraph/rmt.hpp"
#include "wavegraph/numeric.hpp"
#include "wavegraph/length_spectrum.hpp"
#include "wavegraph/localization.hpp"
#include "wavegraph/coupler.hpp"
#include "wavegraph/spectra_io.hpp"
#include "wavegraph/ensembles.hpp"
#include "wavegraph/csv.hpp"
