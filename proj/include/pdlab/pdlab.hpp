#pragma once

#include "ratio.hpp"
#include "pdc.hpp"
#include "pdc_text.hpp"
#include "lz78.hpp"
#include "zoo.hpp"
#include "sequences.hpp"
#include "pumping.hpp"
#include "hard_blocks.hpp"
#include "harness.hpp"
