#pragma once
// Maps the conventional nlohmann include path onto the vendored single header.
#include <json.hpp>
