#pragma once

#include "coexist/market.hpp"
#include "coexist/follower.hpp"
#include "coexist/quadratic.hpp"
#include "coexist/derived.hpp"
#include "coexist/geometry.hpp"
#include "coexist/lemmas.hpp"
#include "coexist/oracle.hpp"
#include "coexist/regimes.hpp"
#include "coexist/verify.hpp"
#include "coexist/sweep.hpp"
#include "coexist/scenario.hpp"
#include "coexist/report.hpp"
