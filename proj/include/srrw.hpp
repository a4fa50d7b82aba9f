#pragma once

#include "srrw/analytic.hpp"
#include "srrw/distance.hpp"
#include "srrw/distribution.hpp"
#include "srrw/error.hpp"
#include "srrw/estimators.hpp"
#include "srrw/evolving_set.hpp"
#include "srrw/forest.hpp"
#include "srrw/group.hpp"
#include "srrw/io.hpp"
#include "srrw/mixing.hpp"
#include "srrw/oracle.hpp"
#include "srrw/parallel.hpp"
#include "srrw/rng.hpp"
#include "srrw/spectral.hpp"
#include "srrw/walk.hpp"
