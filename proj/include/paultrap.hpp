#pragma once

#include "paultrap/error.hpp"
#include "paultrap/numerics.hpp"
#include "paultrap/signal.hpp"
#include "paultrap/hermite.hpp"
#include "paultrap/classical.hpp"
#include "paultrap/wavetrain.hpp"
#include "paultrap/fft.hpp"
#include "paultrap/pde.hpp"
#include "paultrap/run_config.hpp"
#include "paultrap/runs.hpp"
