#pragma once

#include "affrep/core.hpp"
#include "affrep/affine_dynamics.hpp"
#include "affrep/constraint_curve.hpp"
#include "affrep/param_bridge.hpp"
#include "affrep/representation.hpp"
#include "affrep/al_rep.hpp"
#include "affrep/classifier.hpp"
#include "affrep/io.hpp"
