#pragma once

#include "callwitness/java_instrumenter.hpp"

#include <vector>

namespace callwitness::java {

struct BodyRange {
    size_t open = 0;   // where the entry probe goes
    size_t close = 0;  // offset of the closing '}'
};

struct ParseResult {
    JavaMethodInventory inventory;
    std::vector<BodyRange> bodies;  // parallel to inventory.methods.functions
};

ParseResult parse(std::string_view source);

}  // namespace callwitness::java
