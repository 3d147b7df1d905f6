#pragma once

#include "alphari/core_math.hpp"
#include "alphari/ext_real.hpp"
#include "alphari/information.hpp"
#include "alphari/io.hpp"
#include "alphari/solver.hpp"
#include "alphari/statewise.hpp"
#include "alphari/types.hpp"
#include "alphari/verify.hpp"
