#pragma once

// Umbrella header.
#include "qcsim/error.hpp"
#include "qcsim/grid.hpp"
#include "qcsim/potential.hpp"
#include "qcsim/fft.hpp"
#include "qcsim/kinetic.hpp"
#include "qcsim/fields.hpp"
#include "qcsim/hamiltonian.hpp"
#include "qcsim/observables.hpp"
#include "qcsim/wigner.hpp"
#include "qcsim/states.hpp"
#include "qcsim/generator.hpp"
#include "qcsim/generator_wigner.hpp"
#include "qcsim/dense.hpp"
#include "qcsim/propagators.hpp"
#include "qcsim/meanfield.hpp"
#include "qcsim/heisenberg.hpp"
