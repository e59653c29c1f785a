#pragma once

#include "ramsey_wb/arrow.hpp"
#include "ramsey_wb/bounds.hpp"
#include "ramsey_wb/coloring.hpp"
#include "ramsey_wb/errors.hpp"
#include "ramsey_wb/geometry.hpp"
#include "ramsey_wb/hales_jewett.hpp"
#include "ramsey_wb/hypercube.hpp"
#include "ramsey_wb/io.hpp"
#include "ramsey_wb/maxnorm.hpp"
#include "ramsey_wb/partition_search.hpp"
#include "ramsey_wb/product_space.hpp"
#include "ramsey_wb/rational.hpp"
#include "ramsey_wb/triangle.hpp"
#include "ramsey_wb/verify.hpp"
