#pragma once

// Umbrella header for the physics library (no CLI or I/O dependencies).

#include "tdem/bogoliubov.hpp"
#include "tdem/cavity.hpp"
#include "tdem/classical.hpp"
#include "tdem/config.hpp"
#include "tdem/error.hpp"
#include "tdem/fock_oracle.hpp"
#include "tdem/gupta_bleuler.hpp"
#include "tdem/permittivity.hpp"
#include "tdem/rwa.hpp"
#include "tdem/simulation.hpp"
#include "tdem/validate.hpp"
