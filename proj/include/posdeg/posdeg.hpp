#pragma once

#include "posdeg/analytic.hpp"
#include "posdeg/canonical.hpp"
#include "posdeg/combinatorics.hpp"
#include "posdeg/errors.hpp"
#include "posdeg/extremal.hpp"
#include "posdeg/graph_io.hpp"
#include "posdeg/hypergraphon_io.hpp"
#include "posdeg/kgraph.hpp"
#include "posdeg/labelled.hpp"
#include "posdeg/limit.hpp"
#include "posdeg/parallel.hpp"
#include "posdeg/rational.hpp"
#include "posdeg/rng.hpp"
#include "posdeg/sampler.hpp"
#include "posdeg/shadow.hpp"
#include "posdeg/step_hypergraphon.hpp"
#include "posdeg/version.hpp"
