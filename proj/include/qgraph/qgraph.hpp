#pragma once

#include "qgraph/potential.hpp"
#include "qgraph/transfer.hpp"
#include "qgraph/graph.hpp"
#include "qgraph/graph_io.hpp"
#include "qgraph/characteristic.hpp"
#include "qgraph/forests.hpp"
#include "qgraph/spectrum.hpp"
