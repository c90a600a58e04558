#pragma once

#include "oblix/bounds.hpp"
#include "oblix/error.hpp"
#include "oblix/frames.hpp"
#include "oblix/geometry.hpp"
#include "oblix/index_set.hpp"
#include "oblix/linalg.hpp"
#include "oblix/oblique.hpp"
#include "oblix/random.hpp"
#include "oblix/subspace.hpp"
#include "oblix/types.hpp"
#include "oblix/weights.hpp"
