#ifndef SUBACT_HPP
#define SUBACT_HPP

#include "subact/error.hpp"
#include "subact/linalg.hpp"
#include "subact/rng.hpp"
#include "subact/special_functions.hpp"
#include "subact/quadrature.hpp"
#include "subact/subspace.hpp"
#include "subact/fusion_frame.hpp"
#include "subact/distribution.hpp"
#include "subact/bounds.hpp"
#include "subact/solver.hpp"
#include "subact/experiment.hpp"
#include "subact/checks.hpp"

#endif  // SUBACT_HPP
