#pragma once

#include "gnr/curve.hpp"
#include "gnr/developable.hpp"
#include "gnr/errors.hpp"
#include "gnr/expr.hpp"
#include "gnr/jet.hpp"
#include "gnr/oracle.hpp"
#include "gnr/parallel.hpp"
#include "gnr/ruled_frame.hpp"
#include "gnr/surface.hpp"
#include "gnr/vec.hpp"
#include "gnr/verify.hpp"
