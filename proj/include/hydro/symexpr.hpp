#pragma once

#include "hydro/eval.hpp"
#include "hydro/expr.hpp"
#include "hydro/fraction.hpp"
#include "hydro/poly.hpp"
#include "hydro/real.hpp"
#include "hydro/symbol.hpp"
#include "hydro/workspace.hpp"
#include "hydro/zero.hpp"
