#pragma once

#include "steiner/combinatorics.hpp"
#include "steiner/hypergraph.hpp"
#include "steiner/clusters.hpp"
#include "steiner/process.hpp"
#include "steiner/exact.hpp"
#include "steiner/formulas.hpp"
#include "steiner/switching.hpp"
#include "steiner/stats.hpp"
#include "steiner/config.hpp"
#include "steiner/report.hpp"
#include "steiner/experiments.hpp"
