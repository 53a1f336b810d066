#pragma once

#include "selmer/families.hpp"

namespace selmer::test {

inline const Registry& registry() {
    static const Registry reg = Registry::load();
    return reg;
}

inline const Family& family(const std::string& id) { return registry().get(id); }

}  // namespace selmer::test
