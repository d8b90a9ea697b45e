#pragma once

#include "rbit/bitcore.hpp"
#include "rbit/bridge.hpp"
#include "rbit/csv.hpp"
#include "rbit/errors.hpp"
#include "rbit/fixtures.hpp"
#include "rbit/functionals.hpp"
#include "rbit/gausskl.hpp"
#include "rbit/mlmc.hpp"
#include "rbit/normal.hpp"
#include "rbit/path.hpp"
#include "rbit/quantile.hpp"
#include "rbit/ratefit.hpp"
#include "rbit/sde.hpp"
#include "rbit/summation.hpp"
#include "rbit/wasserstein.hpp"
