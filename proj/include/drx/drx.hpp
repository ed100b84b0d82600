#pragma once

#include "drx/aell.hpp"
#include "drx/bernoulli.hpp"
#include "drx/cache.hpp"
#include "drx/canonical.hpp"
#include "drx/chiodo.hpp"
#include "drx/decor.hpp"
#include "drx/enumerate.hpp"
#include "drx/graph.hpp"
#include "drx/graph_sum.hpp"
#include "drx/grr.hpp"
#include "drx/json_io.hpp"
#include "drx/naive.hpp"
#include "drx/parallel.hpp"
#include "drx/product.hpp"
#include "drx/pullback.hpp"
#include "drx/rational.hpp"
#include "drx/rpoly.hpp"
#include "drx/series.hpp"
#include "drx/strata.hpp"
#include "drx/target.hpp"
#include "drx/weighting.hpp"
