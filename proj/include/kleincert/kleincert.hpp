#pragma once
// Everything: arithmetic, polynomials, groups, invariants, orbits, curves,
// the case analysis and the command-line front end.

#include "kleincert/cli.hpp"
#include "kleincert/exceptionality.hpp"
