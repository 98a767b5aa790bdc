#pragma once

// Umbrella header: the whole library.

#include "mip/csv.hpp"
#include "mip/datagen.hpp"
#include "mip/discrete.hpp"
#include "mip/errors.hpp"
#include "mip/exhaustive.hpp"
#include "mip/gaussian.hpp"
#include "mip/kpartition.hpp"
#include "mip/merge.hpp"
#include "mip/oracle.hpp"
#include "mip/parallel.hpp"
#include "mip/properties.hpp"
#include "mip/queyranne.hpp"
#include "mip/report.hpp"
#include "mip/rng.hpp"
#include "mip/subset.hpp"
#include "mip/sweeps.hpp"
