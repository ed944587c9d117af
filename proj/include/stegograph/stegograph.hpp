#pragma once

// Umbrella header for the stegograph toolkit: multi-image LSB steganography
// with a per-cover JSON mapping-graph manifest, plus histogram steganalysis.

#include "stegograph/chunking.hpp"
#include "stegograph/errors.hpp"
#include "stegograph/image.hpp"
#include "stegograph/lsb.hpp"
#include "stegograph/manifest.hpp"
#include "stegograph/pipeline.hpp"
#include "stegograph/steganalysis.hpp"
#include "stegograph/transform.hpp"
