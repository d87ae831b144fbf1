#pragma once

// Coherent transport in one-dimensional finite periodic systems: transfer
// matrices and their Chebyshev closed-form powers, miniband dispersion,
// transmission resonances, tunneling times, and the Bloch-wave decomposition
// of the in-structure scattering state.

#include "fps/band.hpp"
#include "fps/bloch.hpp"
#include "fps/cell.hpp"
#include "fps/chebyshev.hpp"
#include "fps/constants.hpp"
#include "fps/errors.hpp"
#include "fps/quadrature.hpp"
#include "fps/resonance.hpp"
#include "fps/rootfind.hpp"
#include "fps/scattering.hpp"
#include "fps/sweep.hpp"
#include "fps/transfer.hpp"
#include "fps/verify.hpp"
#include "fps/wavevectors.hpp"
