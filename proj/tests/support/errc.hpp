#pragma once

#include <optional>

#include "abc/error.hpp"

namespace support {

// Code of the abc::Error fn throws, or nullopt when it returns normally.
inline std::optional<abc::Errc> code_of(auto&& fn)
{
    try {
        fn();
    } catch (const abc::Error& e) {
        return e.code();
    }
    return std::nullopt;
}

} // namespace support
