#pragma once

#include "streamcut/adversary.hpp"
#include "streamcut/core.hpp"
#include "streamcut/coreset.hpp"
#include "streamcut/cut.hpp"
#include "streamcut/estimator.hpp"
#include "streamcut/metric.hpp"
#include "streamcut/random.hpp"
#include "streamcut/sampler.hpp"
#include "streamcut/stream_io.hpp"
#include "streamcut/window.hpp"
