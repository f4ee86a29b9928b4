#pragma once

#include "lkpolar/angle.hpp"
#include "lkpolar/convex_piece.hpp"
#include "lkpolar/crofton.hpp"
#include "lkpolar/error.hpp"
#include "lkpolar/invariants.hpp"
#include "lkpolar/numkit.hpp"
#include "lkpolar/parallel.hpp"
#include "lkpolar/polycone.hpp"
