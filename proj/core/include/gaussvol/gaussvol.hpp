#pragma once

#include "gaussvol/errors.hpp"
#include "gaussvol/fisher_rao.hpp"
#include "gaussvol/integrate.hpp"
#include "gaussvol/linalg.hpp"
#include "gaussvol/regularizers.hpp"
#include "gaussvol/states.hpp"
#include "gaussvol/twomode.hpp"
