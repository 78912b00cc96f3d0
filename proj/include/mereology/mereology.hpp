#pragma once

#include "mereology/construct.hpp"
#include "mereology/entanglement.hpp"
#include "mereology/errors.hpp"
#include "mereology/hamiltonian.hpp"
#include "mereology/linalg.hpp"
#include "mereology/obstruction.hpp"
#include "mereology/optimizer.hpp"
#include "mereology/tps.hpp"
#include "mereology/trajectory.hpp"
