#pragma once

// Canonical include path for the vendored single-header nlohmann/json
// (which sits at the vendor root).
#include <json.hpp>
