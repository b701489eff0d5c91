#pragma once

// Umbrella header.

#include "gasp/codec.hpp"
#include "gasp/degree_table.hpp"
#include "gasp/error.hpp"
#include "gasp/gf.hpp"
#include "gasp/harness.hpp"
#include "gasp/schemes.hpp"
