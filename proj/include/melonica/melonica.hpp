#pragma once

#include <melonica/canonical.hpp>
#include <melonica/degree.hpp>
#include <melonica/enumeration.hpp>
#include <melonica/error.hpp>
#include <melonica/exact.hpp>
#include <melonica/graph.hpp>
#include <melonica/io.hpp>
#include <melonica/melonic.hpp>
#include <melonica/permutation.hpp>
#include <melonica/series.hpp>
#include <melonica/tensor.hpp>
#include <melonica/topology.hpp>
#include <melonica/verify.hpp>

namespace melonica {
inline constexpr const char* kVersion = "0.1.0";
}
