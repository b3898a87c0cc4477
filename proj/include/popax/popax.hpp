#pragma once

#include "popax/axiology.hpp"
#include "popax/cli.hpp"
#include "popax/inequality.hpp"
#include "popax/io.hpp"
#include "popax/limits.hpp"
#include "popax/population.hpp"
#include "popax/presets.hpp"
#include "popax/rank.hpp"
#include "popax/rational.hpp"
#include "popax/summation.hpp"
#include "popax/weighting.hpp"
#include "popax/xrisk.hpp"
