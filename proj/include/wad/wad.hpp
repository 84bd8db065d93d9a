#pragma once

#include "wad/baselines.hpp"
#include "wad/bounds.hpp"
#include "wad/clustering.hpp"
#include "wad/completion.hpp"
#include "wad/dataset_io.hpp"
#include "wad/distances.hpp"
#include "wad/metric.hpp"
#include "wad/oracle.hpp"
#include "wad/strings.hpp"
#include "wad/suffix_array.hpp"
#include "wad/suffix_engine.hpp"
