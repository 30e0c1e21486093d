#ifndef NULLCOUNT_NULLCOUNT_HPP
#define NULLCOUNT_NULLCOUNT_HPP

#include "nullcount/approx.hpp"
#include "nullcount/combinatorics.hpp"
#include "nullcount/core.hpp"
#include "nullcount/errors.hpp"
#include "nullcount/exact.hpp"
#include "nullcount/graph.hpp"
#include "nullcount/io.hpp"
#include "nullcount/oracle.hpp"
#include "nullcount/query.hpp"
#include "nullcount/reductions.hpp"

#endif
