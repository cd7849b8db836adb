#pragma once

/// Umbrella header for the residual polynomial toolkit: extremal polynomials
/// normalized at a point off a union of intervals, their band sets, the
/// associated potential theory, and orbit analytics of the norm sequence.

#include "respoly/bands.hpp"
#include "respoly/errors.hpp"
#include "respoly/io.hpp"
#include "respoly/linalg.hpp"
#include "respoly/oracle.hpp"
#include "respoly/orbit.hpp"
#include "respoly/poly.hpp"
#include "respoly/potential.hpp"
#include "respoly/quadrature.hpp"
#include "respoly/realset.hpp"
#include "respoly/solver.hpp"
#include "respoly/verify.hpp"
