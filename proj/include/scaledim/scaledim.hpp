#pragma once

// Scale-local Renyi dimension analysis for 2-D point distributions:
// orbit generators, sparse multiscale counting, entropy scans, dimension
// profiles and estimators, transport diagnostics, brute-force oracles.

#include "scaledim/dimension.hpp"
#include "scaledim/entropy.hpp"
#include "scaledim/errors.hpp"
#include "scaledim/geometry.hpp"
#include "scaledim/grid.hpp"
#include "scaledim/io.hpp"
#include "scaledim/maps.hpp"
#include "scaledim/oracle.hpp"
#include "scaledim/transport.hpp"
#include "scaledim/version.hpp"
