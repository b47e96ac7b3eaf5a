#pragma once
// The vendored copy is the single full header; use it for declarations too.
#include <json.hpp>
