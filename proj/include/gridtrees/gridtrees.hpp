#pragma once

#include "gridtrees/bounds.hpp"
#include "gridtrees/constants.hpp"
#include "gridtrees/districting.hpp"
#include "gridtrees/exact.hpp"
#include "gridtrees/io.hpp"
#include "gridtrees/lattice.hpp"
#include "gridtrees/randwalk.hpp"
#include "gridtrees/real.hpp"
#include "gridtrees/rng.hpp"
#include "gridtrees/treecount.hpp"
