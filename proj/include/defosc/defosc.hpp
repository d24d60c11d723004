#pragma once

#include "defosc/band_matrix.hpp"
#include "defosc/classifier.hpp"
#include "defosc/coherent.hpp"
#include "defosc/errors.hpp"
#include "defosc/fibonacci.hpp"
#include "defosc/io.hpp"
#include "defosc/oscillator.hpp"
#include "defosc/qseries.hpp"
#include "defosc/recurrence.hpp"
#include "defosc/registry.hpp"
