#pragma once

#include "fracfk/coeffs.hpp"
#include "fracfk/corrections.hpp"
#include "fracfk/error.hpp"
#include "fracfk/experiments.hpp"
#include "fracfk/fft.hpp"
#include "fracfk/krylov.hpp"
#include "fracfk/manufactured.hpp"
#include "fracfk/multigrid.hpp"
#include "fracfk/onesided.hpp"
#include "fracfk/postprocess.hpp"
#include "fracfk/quadrature.hpp"
#include "fracfk/selfcheck.hpp"
#include "fracfk/solver.hpp"
#include "fracfk/space_operator.hpp"
#include "fracfk/substantial.hpp"
#include "fracfk/toeplitz.hpp"
