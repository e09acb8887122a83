#pragma once

// Umbrella header for the syltok library. The CLI front end lives in
// syltok/cli.hpp and is not pulled in here (it depends on vendored CLI11 /
// nlohmann-json headers).

#include "syltok/bpe.hpp"
#include "syltok/hyphenator.hpp"
#include "syltok/metrics.hpp"
#include "syltok/segio.hpp"
#include "syltok/syllabifier.hpp"
#include "syltok/text.hpp"
