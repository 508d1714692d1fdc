// hamcoup — coupled Hamiltonian systems, symplecticity checks, and
// structure-preserving integrators.  Umbrella header.
#pragma once

#include "hamcoup/errors.hpp"
#include "hamcoup/layout.hpp"
#include "hamcoup/finite_diff.hpp"
#include "hamcoup/system.hpp"
#include "hamcoup/sampling.hpp"
#include "hamcoup/obstruction.hpp"
#include "hamcoup/integrators.hpp"
#include "hamcoup/models.hpp"
#include "hamcoup/registry.hpp"
#include "hamcoup/config.hpp"
#include "hamcoup/csv.hpp"
#include "hamcoup/order_study.hpp"
