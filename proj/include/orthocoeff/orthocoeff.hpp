#pragma once

#include "orthocoeff/errors.hpp"
#include "orthocoeff/numeric.hpp"
#include "orthocoeff/matrix.hpp"
#include "orthocoeff/arith.hpp"
#include "orthocoeff/special_value.hpp"
#include "orthocoeff/lattice.hpp"
#include "orthocoeff/enumerate.hpp"
#include "orthocoeff/padic_count.hpp"
#include "orthocoeff/sums.hpp"
#include "orthocoeff/eisenstein.hpp"
#include "orthocoeff/maass.hpp"
