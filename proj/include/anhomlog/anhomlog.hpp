#pragma once

#include "anhomlog/algebra.hpp"
#include "anhomlog/coevent.hpp"
#include "anhomlog/core.hpp"
#include "anhomlog/cournot.hpp"
#include "anhomlog/demos.hpp"
#include "anhomlog/experiment.hpp"
#include "anhomlog/measure.hpp"
#include "anhomlog/trials.hpp"
