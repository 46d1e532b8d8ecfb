#pragma once

#include "chronofrac/error.hpp"
#include "chronofrac/rational.hpp"
#include "chronofrac/order.hpp"
#include "chronofrac/timescale.hpp"
#include "chronofrac/scale_dsl.hpp"
#include "chronofrac/expr.hpp"
#include "chronofrac/function.hpp"
#include "chronofrac/quadrature.hpp"
#include "chronofrac/fracderiv.hpp"
#include "chronofrac/integral.hpp"
#include "chronofrac/laws.hpp"
#include "chronofrac/signal.hpp"
#include "chronofrac/report_io.hpp"
