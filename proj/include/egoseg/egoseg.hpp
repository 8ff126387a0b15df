#pragma once

#include "egoseg/bench.hpp"
#include "egoseg/chroma.hpp"
#include "egoseg/color.hpp"
#include "egoseg/commands.hpp"
#include "egoseg/compositor.hpp"
#include "egoseg/config.hpp"
#include "egoseg/error.hpp"
#include "egoseg/image_io.hpp"
#include "egoseg/manifest.hpp"
#include "egoseg/metrics.hpp"
#include "egoseg/morphology.hpp"
#include "egoseg/qc.hpp"
#include "egoseg/raster.hpp"
#include "egoseg/report.hpp"
#include "egoseg/resize.hpp"
#include "egoseg/segmenters.hpp"
