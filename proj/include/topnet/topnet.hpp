// Umbrella header.
#pragma once

#include "topnet/bound.hpp"
#include "topnet/config.hpp"
#include "topnet/core.hpp"
#include "topnet/disorder.hpp"
#include "topnet/dynamics.hpp"
#include "topnet/ensemble.hpp"
#include "topnet/gates.hpp"
#include "topnet/lattice2d.hpp"
#include "topnet/network.hpp"
#include "topnet/pulse.hpp"
#include "topnet/report_io.hpp"
#include "topnet/scaling.hpp"
#include "topnet/schedule.hpp"
#include "topnet/spectral.hpp"
