#pragma once

// Umbrella header. png_export.hpp is left out because it needs libpng.

#include "repelcode/bench.hpp"
#include "repelcode/decoder.hpp"
#include "repelcode/encoders.hpp"
#include "repelcode/evaluator.hpp"
#include "repelcode/field.hpp"
#include "repelcode/geometry.hpp"
#include "repelcode/io.hpp"
#include "repelcode/metrics.hpp"
#include "repelcode/synth.hpp"
#include "repelcode/version.hpp"
