#pragma once

#include "squint/array_model.hpp"
#include "squint/beamformers.hpp"
#include "squint/config.hpp"
#include "squint/delay_filters.hpp"
#include "squint/errors.hpp"
#include "squint/optimizer.hpp"
#include "squint/parallel.hpp"
#include "squint/report.hpp"
#include "squint/squint_analysis.hpp"
