#pragma once

#include <string>
#include <string_view>

namespace confkern {

/// Porter (1980) suffix-stripping algorithm, steps 1a-5b, matching the
/// reference implementation (including its two documented departures from
/// the paper text: step 2 BLI -> BLE and the LOGI -> LOG rule). Expects a
/// lowercase alphabetic token; words of length <= 2 are returned unchanged.
std::string porter_stem(std::string_view token);

}  // namespace confkern
