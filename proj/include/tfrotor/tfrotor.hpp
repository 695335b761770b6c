#pragma once

#include "tfrotor/covariance.hpp"
#include "tfrotor/errors.hpp"
#include "tfrotor/grid.hpp"
#include "tfrotor/measure.hpp"
#include "tfrotor/metaplectic.hpp"
#include "tfrotor/norms.hpp"
#include "tfrotor/sampling.hpp"
#include "tfrotor/signal_io.hpp"
#include "tfrotor/signals.hpp"
#include "tfrotor/stft.hpp"
#include "tfrotor/symplectic.hpp"
#include "tfrotor/transforms.hpp"
