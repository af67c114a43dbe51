// usc_rabi.hpp: umbrella header.

#pragma once

#include "usc_rabi/hilbert.hpp"
#include "usc_rabi/rabi_core.hpp"
#include "usc_rabi/polaron.hpp"
#include "usc_rabi/resonance.hpp"
#include "usc_rabi/effective_models.hpp"
#include "usc_rabi/dynamics.hpp"
#include "usc_rabi/experiment.hpp"
