// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "gencep/cepstral.hpp"
#include "gencep/consistency.hpp"
#include "gencep/dualopt.hpp"
#include "gencep/error.hpp"
#include "gencep/factorization.hpp"
#include "gencep/fft.hpp"
#include "gencep/grid.hpp"
#include "gencep/numerics.hpp"
#include "gencep/pipeline.hpp"
#include "gencep/poly.hpp"
#include "gencep/signal.hpp"
#include "gencep/spectra.hpp"
#include "gencep/trigpoly.hpp"
